#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cga/io/model.hpp"
#include "cga/io/urdf.hpp"
#include "cga/optim/solver.hpp"

namespace py = pybind11;
using namespace cga;
using robot::Manipulator;
using robot::MatrixX;
using robot::MotorD;
using robot::VectorX;
using Mv = GeneralMultivector<double>;
using V3 = Eigen::Vector3d;
using P = Point<double>;

namespace {

class InvalidBladeName : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "InvalidBladeName"; }
};

// A general multivector that remembers the primitive or versor it came from.
template <typename X>
struct Typed : Mv {
  X value;
  explicit Typed(const X& x) : Mv(x), value(x) {}
};

using PyPoint = Typed<P>;
using PySphere = Typed<DualSphere<double>>;
using PyPlane = Typed<DualPlane<double>>;
using PyLine = Typed<Line<double>>;
using PyCircle = Typed<Circle<double>>;
using PyPointPair = Typed<PointPair<double>>;
using PyMotor = Typed<MotorD>;

int blade_of(const std::string& name) {
  const int b = parse_blade_name(name);
  if (b < 0) throw InvalidBladeName("invalid blade name '" + name + "'");
  return b;
}

Mv from_mapping(const std::map<std::string, double>& coefficients) {
  Mv m;
  for (const auto& [name, value] : coefficients) m[blade_of(name)] += value;
  return m;
}

std::map<std::string, double> to_mapping(const Mv& m) {
  std::map<std::string, double> out;
  for (unsigned b = 0; b < 32; ++b)
    if (m[b] != 0.0) out[blade_name(b)] = m[b];
  return out;
}

std::string repr(const Mv& m) {
  std::ostringstream os;
  os << "Multivector(" << m << ")";
  return os.str();
}

Eigen::Matrix4d homogeneous(const MotorD& m) {
  const V3 o = apply(m, P::origin()).euclidean();
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  for (int k = 0; k < 3; ++k) t.block<3, 1>(0, k) = apply(m, P(V3::Unit(k))).euclidean() - o;
  t.block<3, 1>(0, 3) = o;
  return t;
}

MatrixX columns(const std::vector<robot::GeneratorD>& cols) {
  MatrixX j(6, static_cast<int>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    j.block<3, 1>(0, i) = cols[i].angular();
    j.block<3, 1>(3, i) = cols[i].linear();
  }
  return j;
}

optim::Target to_target(const py::object& o) {
  if (py::isinstance<PyPoint>(o)) return o.cast<const PyPoint&>().value;
  if (py::isinstance<PyPointPair>(o)) return o.cast<const PyPointPair&>().value;
  if (py::isinstance<PyLine>(o)) return o.cast<const PyLine&>().value;
  if (py::isinstance<PyCircle>(o)) return o.cast<const PyCircle&>().value;
  if (py::isinstance<PyPlane>(o)) {
    const auto [n, d] = o.cast<const PyPlane&>().value.decode();
    const V3 u = n.unitOrthogonal(), x = n * d;
    return Plane<double>(P(x), P(x + u), P(x + n.cross(u)));
  }
  if (py::isinstance<PySphere>(o)) {
    const auto [c, r] = o.cast<const PySphere&>().value.decode();
    return Sphere<double>(P(c + r * V3::UnitX()), P(c + r * V3::UnitY()), P(c - r * V3::UnitX()), P(c + r * V3::UnitZ()));
  }
  throw std::invalid_argument("unsupported ik target type");
}

optim::Tool to_tool(const py::object& o) {
  if (o.is_none()) return P::origin();
  if (py::isinstance<PyPoint>(o)) return o.cast<const PyPoint&>().value;
  if (py::isinstance<PyLine>(o)) return o.cast<const PyLine&>().value;
  throw std::invalid_argument("ik tool must be a Point or a Line");
}

VectorX checked(const VectorX& v, int dof, const char* name) {
  if (v.size() != dof)
    throw DimensionMismatch(std::string(name) + " has length " + std::to_string(v.size()) + ", expected dof " + std::to_string(dof));
  return v;
}

template <typename X>
py::object apply_typed(const MotorD& m, const py::object& x) {
  return py::cast(Typed<X>(apply(m, x.cast<const Typed<X>&>().value)));
}

}  // namespace

PYBIND11_MODULE(pycga, m) {
  m.doc() = "Conformal geometric algebra for robot kinematics and dynamics";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
#define CGA_BIND_ERROR(Name) py::register_exception<Name>(m, #Name, error.ptr());
  CGA_BIND_ERROR(NotInvertible)
  CGA_BIND_ERROR(NotUnitVersor)
  CGA_BIND_ERROR(LogBranchSingularity)
  CGA_BIND_ERROR(DegeneratePoint)
  CGA_BIND_ERROR(DegenerateConfiguration)
  CGA_BIND_ERROR(DegeneratePrimitive)
  CGA_BIND_ERROR(ImaginaryRadius)
  CGA_BIND_ERROR(DuplicateName)
  CGA_BIND_ERROR(DanglingReference)
  CGA_BIND_ERROR(CycleDetected)
  CGA_BIND_ERROR(JointLimitViolation)
  CGA_BIND_ERROR(SingularInertia)
  CGA_BIND_ERROR(DimensionMismatch)
  CGA_BIND_ERROR(LinearSolveFailure)
  CGA_BIND_ERROR(SchemaError)
  CGA_BIND_ERROR(NoSuchJoint)
  CGA_BIND_ERROR(NonSerialChain)
  CGA_BIND_ERROR(UnsupportedJointType)
  CGA_BIND_ERROR(MalformedURDF)
  CGA_BIND_ERROR(IOError)
  CGA_BIND_ERROR(InvalidBladeName)
#undef CGA_BIND_ERROR

  py::class_<Mv>(m, "Multivector")
      .def(py::init<>())
      .def(py::init(&from_mapping), py::arg("coefficients"))
      .def_static("blade", [](const std::string& name, double c) { return from_mapping({{name, c}}); }, py::arg("name"),
                  py::arg("coefficient") = 1.0)
      .def("__getitem__", [](const Mv& x, const std::string& name) { return x[blade_of(name)]; })
      .def("coefficients", &to_mapping)
      .def("grade", [](const Mv& x, int k) { return x.grade_project(k); })
      .def("reverse", [](const Mv& x) { return x.reverse(); })
      .def("dual", [](const Mv& x) { return Mv(dual(x)); })
      .def("inverse", [](const Mv& x) { return Mv(inverse(x)); })
      .def("scalar", [](const Mv& x) { return x[0]; })
      .def("__float__", [](const Mv& x) { return x[0]; })
      .def("__add__", [](const Mv& a, const Mv& b) { return Mv(a + b); })
      .def("__sub__", [](const Mv& a, const Mv& b) { return Mv(a - b); })
      .def("__mul__", [](const Mv& a, const Mv& b) { return Mv(a * b); })
      .def("__mul__", [](const Mv& a, double s) { return Mv(a * s); })
      .def("__rmul__", [](const Mv& a, double s) { return Mv(a * s); })
      .def("__xor__", [](const Mv& a, const Mv& b) { return Mv(a ^ b); })
      .def("__or__", [](const Mv& a, const Mv& b) { return Mv(a | b); })
      .def("__neg__", [](const Mv& a) { return Mv(-a); })
      .def("__eq__", [](const Mv& a, const Mv& b) { return max_abs_difference(a, b) == 0.0; })
      .def("__repr__", &repr);

  py::class_<PyPoint, Mv>(m, "Point")
      .def(py::init([](double x, double y, double z) { return PyPoint(P(x, y, z)); }))
      .def("position", [](const PyPoint& p) { return p.value.euclidean(); });

  py::class_<PySphere, Mv>(m, "Sphere")
      .def(py::init([](const V3& c, double r) { return PySphere(DualSphere<double>(P(c), r)); }), py::arg("center"),
           py::arg("radius"))
      .def("decode", [](const PySphere& s) { return s.value.decode(); });

  py::class_<PyPlane, Mv>(m, "Plane")
      .def(py::init([](const V3& n, double d) { return PyPlane(DualPlane<double>(n, d)); }), py::arg("normal"),
           py::arg("distance"))
      .def("decode", [](const PyPlane& p) { return p.value.decode(); });

  py::class_<PyLine, Mv>(m, "Line")
      .def(py::init([](const PyPoint& a, const PyPoint& b) { return PyLine(Line<double>(a.value, b.value)); }))
      .def("decode", [](const PyLine& l) { return l.value.decode(); });

  py::class_<PyCircle, Mv>(m, "Circle")
      .def(py::init([](const PyPoint& a, const PyPoint& b, const PyPoint& c) {
        return PyCircle(Circle<double>(a.value, b.value, c.value));
      }))
      .def("decode", [](const PyCircle& c) {
        const auto d = c.value.decode();
        return py::make_tuple(d.center, d.normal, d.radius);
      });

  py::class_<PyPointPair, Mv>(m, "PointPair")
      .def(py::init([](const PyPoint& a, const PyPoint& b) { return PyPointPair(PointPair<double>(a.value, b.value)); }))
      .def("points", [](const PyPointPair& p) {
        const auto [a, b] = p.value.points();
        return py::make_tuple(PyPoint(a), PyPoint(b));
      });

  py::class_<PyMotor, Mv>(m, "Motor")
      .def(py::init([] { return PyMotor(MotorD()); }))
      .def_static("from_twist",
                  [](const V3& w, const V3& v) { return PyMotor(MotorD::exp(MotorGenerator<double>::from_twist(w, v))); },
                  py::arg("omega"), py::arg("v"))
      .def_static("rotation", [](const V3& axis, double angle) { return PyMotor(MotorD(Rotor<double>::from_axis_angle(axis, angle))); },
                  py::arg("axis"), py::arg("angle"))
      .def_static("translation", [](const V3& t) { return PyMotor(MotorD(Translator<double>(t))); }, py::arg("t"))
      .def("log",
           [](const PyMotor& x) {
             const auto g = x.value.log();
             return py::make_tuple(V3(g.angular()), V3(g.linear()));
           })
      .def("compose", [](const PyMotor& a, const PyMotor& b) { return PyMotor(compose(a.value, b.value)); })
      .def("homogeneous", [](const PyMotor& x) { return homogeneous(x.value); })
      .def("apply", [](const PyMotor& x, const py::object& target) -> py::object {
        if (py::isinstance<PyPoint>(target)) return apply_typed<P>(x.value, target);
        if (py::isinstance<PySphere>(target)) return apply_typed<DualSphere<double>>(x.value, target);
        if (py::isinstance<PyPlane>(target)) return apply_typed<DualPlane<double>>(x.value, target);
        if (py::isinstance<PyLine>(target)) return apply_typed<Line<double>>(x.value, target);
        if (py::isinstance<PyCircle>(target)) return apply_typed<Circle<double>>(x.value, target);
        if (py::isinstance<PyPointPair>(target)) return apply_typed<PointPair<double>>(x.value, target);
        if (py::isinstance<PyMotor>(target)) return apply_typed<MotorD>(x.value, target);
        throw std::invalid_argument("apply expects a primitive or a motor");
      });

  py::class_<Manipulator>(m, "Manipulator")
      .def_static(
          "load",
          [](const std::string& model, std::optional<std::string> ee) {
            return io::load_manipulator(io::read_model(io::resolve_model_path(model)), ee);
          },
          py::arg("model"), py::arg("end_effector_joint") = py::none())
      .def_static(
          "from_urdf", [](const std::string& text, std::optional<std::string> ee) { return io::load_manipulator(io::convert_urdf(text), ee); },
          py::arg("urdf"), py::arg("end_effector_joint") = py::none())
      .def_property_readonly("dof", &Manipulator::dof)
      .def_property_readonly("name", [](const Manipulator& a) { return a.system().name(); })
      .def_property_readonly("end_effector_joint", &Manipulator::end_effector_joint);

  m.def("fk", [](const Manipulator& a, const VectorX& q) { return PyMotor(a.forward_kinematics(q)); }, py::arg("arm"),
        py::arg("q"));
  m.def("jacobian", [](const Manipulator& a, const VectorX& q) { return columns(a.geometric_jacobian(q)); }, py::arg("arm"),
        py::arg("q"));
  m.def("frame_jacobian", [](const Manipulator& a, const VectorX& q) { return columns(a.frame_jacobian(q)); },
        py::arg("arm"), py::arg("q"));
  m.def("rnea",
        [](const Manipulator& a, const VectorX& q, const VectorX& qd, const VectorX& qdd, const V3& g) {
          return a.inverse_dynamics(q, qd, qdd, g);
        },
        py::arg("arm"), py::arg("q"), py::arg("qd"), py::arg("qdd"), py::arg("gravity") = robot::kDefaultGravity);
  m.def("aba",
        [](const Manipulator& a, const VectorX& q, const VectorX& qd, const VectorX& tau, const V3& g) {
          return a.forward_dynamics(q, qd, tau, g);
        },
        py::arg("arm"), py::arg("q"), py::arg("qd"), py::arg("tau"), py::arg("gravity") = robot::kDefaultGravity);
  m.def("mass_matrix", [](const Manipulator& a, const VectorX& q) { return a.mass_matrix(q); }, py::arg("arm"), py::arg("q"));

  m.def(
      "ik",
      [](const Manipulator& a, const py::object& target, std::optional<VectorX> q0, const py::object& tool, int max_iterations,
         double tolerance, double damping) {
        const VectorX start = q0 ? checked(*q0, a.dof(), "q0") : VectorX::Zero(a.dof());
        std::unique_ptr<optim::Cost> cost;
        if (py::isinstance<PyMotor>(target))
          cost = std::make_unique<optim::MotorCost>(a, target.cast<const PyMotor&>().value);
        else
          cost = std::make_unique<optim::PrimitiveTargetCost>(a, to_tool(tool), to_target(target));
        optim::SolverConfig config;
        config.max_iterations = max_iterations;
        config.damping = damping;
        config.cost_tolerance = 0.5 * tolerance * tolerance;
        const auto report = optim::gauss_newton_solve(*cost, start, config);
        const double residual = cost->residual(report.q).norm();
        py::dict out;
        out["converged"] = report.converged && residual <= tolerance;
        out["iterations"] = report.iterations;
        out["final_cost"] = report.final_cost;
        out["residual_norm"] = residual;
        out["q"] = report.q;
        out["residual_history"] = report.residual_history;
        return out;
      },
      py::arg("arm"), py::arg("target"), py::arg("q0") = py::none(), py::arg("tool") = py::none(),
      py::arg("max_iterations") = 100, py::arg("tolerance") = 1e-6, py::arg("damping") = 1e-6);
}
