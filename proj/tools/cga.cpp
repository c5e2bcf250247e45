#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#ifdef __linux__
#include <sched.h>
#endif

#include "bench.hpp"
#include "cga/io/model.hpp"
#include "cga/io/urdf.hpp"
#include "cga/optim/solver.hpp"
#include "targets.hpp"

namespace {

using namespace cga;
using json = nlohmann::ordered_json;
using robot::MatrixX;
using robot::VectorX;

constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct Options {
  std::string model;
  std::string ee;
  bool json = false;
  std::uint64_t seed = 42;
  std::string q, qd, qdd, tau, gravity = "0,0,-9.81";
  std::string target, tool = "point", q0;
  int max_iterations = 100;
  double tolerance = 1e-6;
  double damping = 1e-6;
  std::string suite = "all";
  int repetitions = 30;
  std::string out;
  std::string urdf;
};

std::string num(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string join(const VectorX& v) {
  std::string s;
  for (int k = 0; k < v.size(); ++k) s += (k ? " " : "") + num(v[k]);
  return s;
}

json to_json(const VectorX& v) {
  json a = json::array();
  for (int k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

json to_json(const MatrixX& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) rows.push_back(to_json(VectorX(m.row(r).transpose())));
  return rows;
}

template <typename X>
json blades_json(const X& x) {
  json names = json::array(), values = json::array();
  for (unsigned b = 0; b < 32; ++b) {
    if (!X::blades.contains(b)) continue;
    names.push_back(blade_name(b));
    values.push_back(x.coefficient(b));
  }
  return json{{"blades", names}, {"coefficients", values}};
}

template <typename X>
std::string blades_text(const X& x) {
  std::string s;
  for (unsigned b = 0; b < 32; ++b) {
    if (!X::blades.contains(b)) continue;
    if (!s.empty()) s += " ";
    s += blade_name(b) + "=" + num(x.coefficient(b));
  }
  return s;
}

Eigen::Matrix4d homogeneous(const robot::MotorD& m) {
  using P = Point<double>;
  const Eigen::Vector3d o = apply(m, P::origin()).euclidean();
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  for (int k = 0; k < 3; ++k) t.block<3, 1>(0, k) = apply(m, P(Eigen::Vector3d::Unit(k))).euclidean() - o;
  t.block<3, 1>(0, 3) = o;
  return t;
}

VectorX vector_arg(const std::string& text, int dof, const char* name) {
  if (text.empty()) return VectorX::Zero(dof);
  const auto v = tools::parse_numbers(text);
  VectorX out(static_cast<int>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k];
  if (out.size() != dof)
    throw DimensionMismatch(std::string(name) + " has length " + std::to_string(out.size()) + ", expected dof " +
                            std::to_string(dof));
  return out;
}

robot::Manipulator load_arm(const Options& o) {
  if (o.model.empty()) throw std::invalid_argument("--model is required");
  const auto doc = io::read_model(io::resolve_model_path(o.model));
  return io::load_manipulator(doc, o.ee.empty() ? std::nullopt : std::optional<std::string>(o.ee));
}

json header(const char* command, const robot::Manipulator& arm) {
  return json{{"command", command}, {"model", arm.system().name()}, {"end_effector_joint", arm.end_effector_joint()},
              {"dof", arm.dof()}};
}

void print_matrix(std::ostream& out, const MatrixX& m, const std::vector<std::string>& labels) {
  for (int r = 0; r < m.rows(); ++r) out << "  " << labels[r] << ": " << join(VectorX(m.row(r).transpose())) << "\n";
}

int cmd_fk(const Options& o) {
  const auto arm = load_arm(o);
  const VectorX q = vector_arg(o.q, arm.dof(), "q");
  const auto m = arm.forward_kinematics(q);
  const Eigen::Matrix4d t = homogeneous(m);
  if (o.json) {
    json j = header("fk", arm);
    j["q"] = to_json(q);
    j["motor"] = blades_json(m);
    j["homogeneous"] = to_json(MatrixX(t));
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "model: " << arm.system().name() << " (" << arm.dof() << " dof), end effector " << arm.end_effector_joint()
            << "\n";
  std::cout << "q: " << join(q) << "\n";
  std::cout << "motor: " << blades_text(m) << "\n";
  std::cout << "homogeneous:\n";
  print_matrix(std::cout, t, {"r0", "r1", "r2", "r3"});
  return 0;
}

MatrixX columns(const std::vector<robot::GeneratorD>& cols) {
  MatrixX j(6, static_cast<int>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    j.block<3, 1>(0, int(i)) = cols[i].angular();
    j.block<3, 1>(3, int(i)) = cols[i].linear();
  }
  return j;
}

int cmd_jacobian(const Options& o) {
  const auto arm = load_arm(o);
  const VectorX q = vector_arg(o.q, arm.dof(), "q");
  const MatrixX geometric = columns(arm.geometric_jacobian(q));
  const MatrixX body = columns(arm.frame_jacobian(q));
  if (o.json) {
    json j = header("jacobian", arm);
    j["q"] = to_json(q);
    j["rows"] = {"wx", "wy", "wz", "vx", "vy", "vz"};
    j["geometric"] = to_json(geometric);
    j["frame"] = to_json(body);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  const std::vector<std::string> labels = {"wx", "wy", "wz", "vx", "vy", "vz"};
  std::cout << "q: " << join(q) << "\n";
  std::cout << "geometric (world frame):\n";
  print_matrix(std::cout, geometric, labels);
  std::cout << "frame (end-effector frame):\n";
  print_matrix(std::cout, body, labels);
  return 0;
}

Eigen::Vector3d gravity_arg(const Options& o) {
  const auto g = tools::parse_numbers(o.gravity);
  if (g.size() != 3) throw std::invalid_argument("--gravity expects 3 numbers");
  return Eigen::Vector3d(g[0], g[1], g[2]);
}

int cmd_rnea(const Options& o) {
  const auto arm = load_arm(o);
  const VectorX q = vector_arg(o.q, arm.dof(), "q");
  const VectorX qd = vector_arg(o.qd, arm.dof(), "qd");
  const VectorX qdd = vector_arg(o.qdd, arm.dof(), "qdd");
  const VectorX tau = arm.inverse_dynamics(q, qd, qdd, gravity_arg(o));
  if (o.json) {
    json j = header("rnea", arm);
    j["q"] = to_json(q);
    j["qd"] = to_json(qd);
    j["qdd"] = to_json(qdd);
    j["tau"] = to_json(tau);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "tau: " << join(tau) << "\n";
  return 0;
}

int cmd_aba(const Options& o) {
  const auto arm = load_arm(o);
  const VectorX q = vector_arg(o.q, arm.dof(), "q");
  const VectorX qd = vector_arg(o.qd, arm.dof(), "qd");
  const VectorX tau = vector_arg(o.tau, arm.dof(), "tau");
  const VectorX qdd = arm.forward_dynamics(q, qd, tau, gravity_arg(o));
  if (o.json) {
    json j = header("aba", arm);
    j["q"] = to_json(q);
    j["qd"] = to_json(qd);
    j["tau"] = to_json(tau);
    j["qdd"] = to_json(qdd);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "qdd: " << join(qdd) << "\n";
  return 0;
}

int cmd_ik(const Options& o) {
  const auto arm = load_arm(o);
  if (o.target.empty()) throw std::invalid_argument("--target is required");
  const VectorX q0 = vector_arg(o.q0, arm.dof(), "q0");
  const auto spec = tools::parse_target(o.target);
  std::unique_ptr<optim::Cost> cost;
  if (const auto* m = std::get_if<robot::MotorD>(&spec))
    cost = std::make_unique<optim::MotorCost>(arm, *m);
  else
    cost = std::make_unique<optim::PrimitiveTargetCost>(arm, tools::parse_tool(o.tool), std::get<optim::Target>(spec));

  optim::SolverConfig config;
  config.max_iterations = o.max_iterations;
  config.damping = o.damping;
  config.cost_tolerance = 0.5 * o.tolerance * o.tolerance;
  const auto report = optim::gauss_newton_solve(*cost, q0, config);
  const double residual = cost->residual(report.q).norm();
  const bool ok = report.converged && residual <= o.tolerance;
  const Eigen::Vector3d position = apply(arm.forward_kinematics(report.q), Point<double>::origin()).euclidean();

  if (o.json) {
    json j = header("ik", arm);
    j["target"] = o.target;
    j["converged"] = ok;
    j["iterations"] = report.iterations;
    j["final_cost"] = report.final_cost;
    j["residual_norm"] = residual;
    j["q"] = to_json(report.q);
    j["end_effector_position"] = to_json(VectorX(position));
    j["residual_history"] = report.residual_history;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "target: " << o.target << "\n";
    std::cout << "converged: " << (ok ? "yes" : "no") << "\n";
    std::cout << "iterations: " << report.iterations << "\n";
    std::cout << "final_cost: " << num(report.final_cost) << "\n";
    std::cout << "residual_norm: " << num(residual) << "\n";
    std::cout << "q: " << join(report.q) << "\n";
    std::cout << "end_effector_position: " << join(position) << "\n";
  }
  return ok ? 0 : kExitNotConverged;
}

void pin_to_one_cpu() {
#ifdef __linux__
  cpu_set_t set;
  CPU_ZERO(&set);
  const int cpu = sched_getcpu();
  CPU_SET(cpu < 0 ? 0 : cpu, &set);
  sched_setaffinity(0, sizeof set, &set);
#endif
}

int cmd_bench(const Options& o) {
  if (o.suite != "algebra" && o.suite != "robot" && o.suite != "all")
    throw std::invalid_argument("unknown suite '" + o.suite + "' (expected algebra, robot or all)");
  if (o.repetitions < 1) throw std::invalid_argument("--repetitions must be positive");
  pin_to_one_cpu();
  std::vector<tools::BenchRow> rows;
  if (o.suite != "robot") rows = tools::bench_algebra(o.repetitions, o.seed);
  if (o.suite != "algebra") {
    Options with_model = o;
    if (with_model.model.empty()) with_model.model = "franka";
    const auto r = tools::bench_robot(load_arm(with_model), o.repetitions, o.seed);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (o.out.empty()) {
    tools::write_csv(std::cout, rows, o.seed);
    return 0;
  }
  std::ofstream file(o.out);
  if (!file) throw IOError("cannot write '" + o.out + "'");
  tools::write_csv(file, rows, o.seed);
  if (!file) throw IOError("failed writing '" + o.out + "'");
  return 0;
}

int cmd_convert(const Options& o) {
  std::ifstream in(o.urdf);
  if (!in) throw IOError("cannot open '" + o.urdf + "'");
  std::stringstream text;
  text << in.rdbuf();
  std::vector<std::string> warnings;
  const auto doc = io::convert_urdf(text.str(), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  if (o.out.empty())
    std::cout << io::emit_model(doc);
  else
    io::write_model(o.out, doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Conformal geometric algebra robotics toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--model", o.model, "Model file or name looked up in CGA_MODEL_PATH");
  app.add_option("--ee", o.ee, "End-effector joint (defaults to the model's)");
  app.add_flag("--json", o.json, "Machine-readable output");
  app.add_option("--seed", o.seed, "Seed for randomized inputs");

  auto* fk = app.add_subcommand("fk", "Forward kinematics");
  fk->add_option("--q", o.q, "Joint positions, comma separated");

  auto* jac = app.add_subcommand("jacobian", "Geometric and end-effector frame Jacobians");
  jac->add_option("--q", o.q, "Joint positions, comma separated");

  auto* rnea = app.add_subcommand("rnea", "Inverse dynamics");
  rnea->add_option("--q", o.q, "Joint positions");
  rnea->add_option("--qd", o.qd, "Joint velocities");
  rnea->add_option("--qdd", o.qdd, "Joint accelerations");
  rnea->add_option("--gravity", o.gravity, "Gravity in the world frame");

  auto* aba = app.add_subcommand("aba", "Forward dynamics");
  aba->add_option("--q", o.q, "Joint positions");
  aba->add_option("--qd", o.qd, "Joint velocities");
  aba->add_option("--tau", o.tau, "Joint torques");
  aba->add_option("--gravity", o.gravity, "Gravity in the world frame");

  auto* ik = app.add_subcommand("ik", "Inverse kinematics by Gauss-Newton");
  ik->add_option("--target", o.target, "point:|pointpair:|line:|circle:|plane:|sphere:|pose:|motor: followed by numbers")
      ->required();
  ik->add_option("--tool", o.tool, "point[:x,y,z] or line[:px,py,pz,dx,dy,dz] in the end-effector frame");
  ik->add_option("--q0", o.q0, "Initial joint positions (default zeros)");
  ik->add_option("--max-iterations", o.max_iterations);
  ik->add_option("--tolerance", o.tolerance, "Residual norm required for success");
  ik->add_option("--damping", o.damping);

  auto* bench = app.add_subcommand("bench", "Timing benchmarks as CSV");
  bench->add_option("--suite", o.suite, "algebra, robot or all");
  bench->add_option("--repetitions", o.repetitions, "Samples per operation");
  bench->add_option("--out", o.out, "CSV path (default stdout)");

  auto* convert = app.add_subcommand("convert-urdf", "Convert a URDF file to the YAML model format");
  convert->add_option("urdf", o.urdf, "Input URDF file")->required();
  convert->add_option("--out", o.out, "Output YAML path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*fk) return cmd_fk(o);
    if (*jac) return cmd_jacobian(o);
    if (*rnea) return cmd_rnea(o);
    if (*aba) return cmd_aba(o);
    if (*ik) return cmd_ik(o);
    if (*bench) return cmd_bench(o);
    if (*convert) return cmd_convert(o);
  } catch (const cga::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
