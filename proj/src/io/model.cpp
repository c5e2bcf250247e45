#include "cga/io/model.hpp"

#include <yaml-cpp/yaml.h>

#include <Eigen/Eigenvalues>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace cga::io {

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) schema_error(where, "expected a mapping");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) schema_error(where, "unknown field '" + key + "'");
  }
}

YAML::Node require(const YAML::Node& node, const char* key, const std::string& where) {
  YAML::Node v = node[key];
  if (!v) schema_error(where, std::string("missing field '") + key + "'");
  return v;
}

std::string as_string(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) schema_error(where, "expected a string");
  return node.as<std::string>();
}

double as_double(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) schema_error(where, "expected a number");
  try {
    return node.as<double>();
  } catch (const YAML::BadConversion&) {
    schema_error(where, "expected a number, got '" + node.Scalar() + "'");
  }
}

template <std::size_t N>
std::array<double, N> as_array(const YAML::Node& node, const std::string& where) {
  if (!node.IsSequence() || node.size() != N) schema_error(where, "expected a list of " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t k = 0; k < N; ++k) out[k] = as_double(node[k], where);
  return out;
}

LinkSpec parse_link(const YAML::Node& node, std::size_t index) {
  std::string where = "links[" + std::to_string(index) + "]";
  if (!node.IsMap()) schema_error(where, "expected a mapping");
  LinkSpec l;
  l.name = as_string(require(node, "name", where), where + ".name");
  where = "link '" + l.name + "'";
  check_keys(node, where, {"name", "mass", "com", "inertia"});
  if (node["mass"]) l.mass = as_double(node["mass"], where + ".mass");
  if (node["com"]) l.com = as_array<3>(node["com"], where + ".com");
  if (node["inertia"]) l.inertia = as_array<6>(node["inertia"], where + ".inertia");
  return l;
}

JointSpec parse_joint(const YAML::Node& node, std::size_t index) {
  std::string where = "joints[" + std::to_string(index) + "]";
  if (!node.IsMap()) schema_error(where, "expected a mapping");
  JointSpec j;
  j.name = as_string(require(node, "name", where), where + ".name");
  where = "joint '" + j.name + "'";
  check_keys(node, where, {"name", "kind", "parent", "child", "origin", "axis", "limits"});
  j.kind = as_string(require(node, "kind", where), where + ".kind");
  if (!robot::parse_joint_kind(j.kind)) schema_error(where, "unknown joint kind '" + j.kind + "'");
  j.parent = as_string(require(node, "parent", where), where + ".parent");
  j.child = as_string(require(node, "child", where), where + ".child");
  if (const auto o = node["origin"]) {
    check_keys(o, where + ".origin", {"xyz", "rpy"});
    if (o["xyz"]) j.origin.xyz = as_array<3>(o["xyz"], where + ".origin.xyz");
    if (o["rpy"]) j.origin.rpy = as_array<3>(o["rpy"], where + ".origin.rpy");
  }
  if (node["axis"]) j.axis = as_array<3>(node["axis"], where + ".axis");
  if (const auto l = node["limits"]) {
    check_keys(l, where + ".limits", {"lower", "upper", "velocity", "effort"});
    LimitSpec lim;
    lim.lower = as_double(require(l, "lower", where + ".limits"), where + ".limits.lower");
    lim.upper = as_double(require(l, "upper", where + ".limits"), where + ".limits.upper");
    if (l["velocity"]) lim.velocity = as_double(l["velocity"], where + ".limits.velocity");
    if (l["effort"]) lim.effort = as_double(l["effort"], where + ".limits.effort");
    j.limits = lim;
  }
  return j;
}

ChainSpec parse_chain(const YAML::Node& node, std::size_t index) {
  std::string where = "chains[" + std::to_string(index) + "]";
  if (!node.IsMap()) schema_error(where, "expected a mapping");
  ChainSpec c;
  c.name = as_string(require(node, "name", where), where + ".name");
  where = "chain '" + c.name + "'";
  check_keys(node, where, {"name", "joints"});
  const auto js = require(node, "joints", where);
  if (!js.IsSequence()) schema_error(where + ".joints", "expected a list of joint names");
  for (const auto& j : js) c.joints.push_back(as_string(j, where + ".joints"));
  return c;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  // Keep integral values recognisably floating point.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

template <std::size_t N>
void emit_array(YAML::Emitter& out, const std::array<double, N>& a) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double v : a) out << format_double(v);
  out << YAML::EndSeq;
}

robot::Mat3 inertia_matrix(const std::array<double, 6>& i) {
  robot::Mat3 m;
  m << i[0], i[3], i[4], i[3], i[1], i[5], i[4], i[5], i[2];
  return m;
}

}  // namespace

ModelDocument parse_model(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw SchemaError(std::string("invalid YAML: ") + e.what());
  }
  check_keys(root, "document", {"format", "name", "end_effector_joint", "links", "joints", "chains"});
  ModelDocument doc;
  const auto fmt = require(root, "format", "document");
  try {
    doc.format = fmt.as<int>();
  } catch (const YAML::BadConversion&) {
    schema_error("document.format", "expected an integer");
  }
  if (doc.format != 1) schema_error("document.format", "unsupported format " + std::to_string(doc.format));
  doc.name = as_string(require(root, "name", "document"), "document.name");
  if (root["end_effector_joint"]) doc.end_effector_joint = as_string(root["end_effector_joint"], "document.end_effector_joint");

  const auto links = require(root, "links", "document");
  if (!links.IsSequence()) schema_error("document.links", "expected a list");
  for (std::size_t k = 0; k < links.size(); ++k) doc.links.push_back(parse_link(links[k], k));
  if (const auto joints = root["joints"]) {
    if (!joints.IsSequence()) schema_error("document.joints", "expected a list");
    for (std::size_t k = 0; k < joints.size(); ++k) doc.joints.push_back(parse_joint(joints[k], k));
  }
  if (const auto chains = root["chains"]) {
    if (!chains.IsSequence()) schema_error("document.chains", "expected a list");
    for (std::size_t k = 0; k < chains.size(); ++k) doc.chains.push_back(parse_chain(chains[k], k));
  }
  return doc;
}

ModelDocument read_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open model file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string emit_model(const ModelDocument& doc) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "format" << YAML::Value << doc.format;
  out << YAML::Key << "name" << YAML::Value << doc.name;
  if (doc.end_effector_joint) out << YAML::Key << "end_effector_joint" << YAML::Value << *doc.end_effector_joint;

  out << YAML::Key << "links" << YAML::Value << YAML::BeginSeq;
  for (const auto& l : doc.links) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << l.name;
    out << YAML::Key << "mass" << YAML::Value << format_double(l.mass);
    out << YAML::Key << "com" << YAML::Value;
    emit_array(out, l.com);
    out << YAML::Key << "inertia" << YAML::Value;
    emit_array(out, l.inertia);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "joints" << YAML::Value << YAML::BeginSeq;
  for (const auto& j : doc.joints) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << j.name;
    out << YAML::Key << "kind" << YAML::Value << j.kind;
    out << YAML::Key << "parent" << YAML::Value << j.parent;
    out << YAML::Key << "child" << YAML::Value << j.child;
    out << YAML::Key << "origin" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "xyz" << YAML::Value;
    emit_array(out, j.origin.xyz);
    out << YAML::Key << "rpy" << YAML::Value;
    emit_array(out, j.origin.rpy);
    out << YAML::EndMap;
    out << YAML::Key << "axis" << YAML::Value;
    emit_array(out, j.axis);
    if (j.limits) {
      out << YAML::Key << "limits" << YAML::Value << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "lower" << YAML::Value << format_double(j.limits->lower);
      out << YAML::Key << "upper" << YAML::Value << format_double(j.limits->upper);
      out << YAML::Key << "velocity" << YAML::Value << format_double(j.limits->velocity);
      out << YAML::Key << "effort" << YAML::Value << format_double(j.limits->effort);
      out << YAML::EndMap;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "chains" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : doc.chains) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << c.name;
    out << YAML::Key << "joints" << YAML::Value << YAML::Flow << c.joints;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void write_model(const std::filesystem::path& path, const ModelDocument& doc) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot write model file '" + path.string() + "'");
  out << emit_model(doc);
  if (!out) throw IOError("failed writing model file '" + path.string() + "'");
}

robot::MotorD origin_motor(const Origin& origin) {
  using R = Rotor<double>;
  const R roll = R::from_axis_angle(robot::Vec3::UnitX(), origin.rpy[0]);
  const R pitch = R::from_axis_angle(robot::Vec3::UnitY(), origin.rpy[1]);
  const R yaw = R::from_axis_angle(robot::Vec3::UnitZ(), origin.rpy[2]);
  const R r(R::Base::project(yaw * pitch * roll));
  const Translator<double> t(robot::Vec3(origin.xyz[0], origin.xyz[1], origin.xyz[2]));
  return robot::MotorD(t, r);
}

robot::System load_system(const ModelDocument& doc) {
  robot::System sys;
  sys.set_name(doc.name);
  for (const auto& l : doc.links) {
    robot::Link link;
    link.name = l.name;
    link.mass = l.mass;
    link.center_of_mass = robot::Vec3(l.com[0], l.com[1], l.com[2]);
    link.inertia = inertia_matrix(l.inertia);
    if (l.mass < 0.0) schema_error("link '" + l.name + "'", "negative mass");
    const double min_eig = Eigen::SelfAdjointEigenSolver<robot::Mat3>(link.inertia, Eigen::EigenvaluesOnly).eigenvalues()[0];
    if (min_eig < -1e-12 * std::max(1.0, link.inertia.norm()))
      schema_error("link '" + l.name + "'", "inertia is not positive semi-definite");
    sys.add_link(std::move(link));
  }
  for (const auto& j : doc.joints) {
    robot::Joint joint;
    joint.name = j.name;
    const auto kind = robot::parse_joint_kind(j.kind);
    if (!kind) schema_error("joint '" + j.name + "'", "unknown joint kind '" + j.kind + "'");
    joint.kind = *kind;
    joint.parent_link = j.parent;
    joint.child_link = j.child;
    joint.frame = origin_motor(j.origin);
    joint.axis = robot::Vec3(j.axis[0], j.axis[1], j.axis[2]);
    if (joint.actuated() && joint.axis.norm() < 1e-12) schema_error("joint '" + j.name + "'", "zero axis");
    if (j.limits) {
      if (j.limits->lower > j.limits->upper) schema_error("joint '" + j.name + "'", "lower limit exceeds upper limit");
      joint.limits = robot::JointLimits{j.limits->lower, j.limits->upper, j.limits->velocity, j.limits->effort};
    }
    sys.add_joint(std::move(joint));
  }
  for (const auto& c : doc.chains) sys.add_kinematic_chain(c.name, c.joints);
  sys.finalize();
  return sys;
}

robot::Manipulator load_manipulator(const ModelDocument& doc, std::optional<std::string> ee_joint) {
  if (!ee_joint) ee_joint = doc.end_effector_joint;
  if (!ee_joint) schema_error("model '" + doc.name + "'", "no end-effector joint given or declared");
  return robot::Manipulator(load_system(doc), *ee_joint);
}

std::filesystem::path resolve_model_path(const std::string& name) {
  namespace fs = std::filesystem;
  auto try_path = [](const fs::path& p) -> std::optional<fs::path> {
    if (fs::is_regular_file(p)) return p;
    fs::path with_ext = p;
    with_ext += ".yaml";
    if (fs::is_regular_file(with_ext)) return with_ext;
    return std::nullopt;
  };
  if (auto p = try_path(name)) return *p;
  if (const char* env = std::getenv("CGA_MODEL_PATH")) {
    std::stringstream ss(env);
    std::string dir;
    while (std::getline(ss, dir, ':')) {
      if (dir.empty()) continue;
      if (auto p = try_path(fs::path(dir) / name)) return *p;
    }
  }
  throw SchemaError("model '" + name + "' not found (searched the working directory and CGA_MODEL_PATH)");
}

}  // namespace cga::io
