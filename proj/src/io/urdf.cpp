#include "cga/io/urdf.hpp"

#include <Eigen/Geometry>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <map>
#include <set>
#include <sstream>

namespace cga::io {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw MalformedURDF(where + ": " + what);
}

std::optional<std::string> attribute(const pt::ptree& node, const char* name) {
  if (auto a = node.get_child_optional(std::string("<xmlattr>.") + name)) return a->data();
  return std::nullopt;
}

std::string required_attribute(const pt::ptree& node, const char* name, const std::string& where) {
  auto a = attribute(node, name);
  if (!a) malformed(where, std::string("missing attribute '") + name + "'");
  return *a;
}

double parse_number(const std::string& s, const std::string& where) {
  std::istringstream in(s);
  double v;
  in >> v;
  if (in.fail()) malformed(where, "expected a number, got '" + s + "'");
  in >> std::ws;
  if (!in.eof()) malformed(where, "expected a number, got '" + s + "'");
  return v;
}

std::array<double, 3> parse_triple(const std::string& s, const std::string& where) {
  std::istringstream in(s);
  std::array<double, 3> out{};
  for (double& v : out) {
    if (!(in >> v)) malformed(where, "expected three numbers, got '" + s + "'");
  }
  in >> std::ws;
  if (!in.eof()) malformed(where, "expected three numbers, got '" + s + "'");
  return out;
}

Origin parse_origin(const pt::ptree& parent, const std::string& where) {
  Origin o;
  if (auto node = parent.get_child_optional("origin")) {
    if (auto xyz = attribute(*node, "xyz")) o.xyz = parse_triple(*xyz, where + " origin xyz");
    if (auto rpy = attribute(*node, "rpy")) o.rpy = parse_triple(*rpy, where + " origin rpy");
  }
  return o;
}

Eigen::Matrix3d rpy_rotation(const std::array<double, 3>& rpy) {
  return (Eigen::AngleAxisd(rpy[2], Eigen::Vector3d::UnitZ()) * Eigen::AngleAxisd(rpy[1], Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(rpy[0], Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

LinkSpec parse_link(const pt::ptree& node) {
  LinkSpec l;
  l.name = required_attribute(node, "name", "link");
  const std::string where = "link '" + l.name + "'";
  auto inertial = node.get_child_optional("inertial");
  if (!inertial) return l;
  const Origin o = parse_origin(*inertial, where + " inertial");
  l.com = o.xyz;
  if (auto mass = inertial->get_child_optional("mass"))
    l.mass = parse_number(required_attribute(*mass, "value", where + " mass"), where + " mass");
  if (auto in = inertial->get_child_optional("inertia")) {
    auto get = [&](const char* key) {
      return parse_number(attribute(*in, key).value_or("0"), where + " inertia " + key);
    };
    Eigen::Matrix3d i;
    i << get("ixx"), get("ixy"), get("ixz"), get("ixy"), get("iyy"), get("iyz"), get("ixz"), get("iyz"), get("izz");
    if (o.rpy != std::array<double, 3>{}) {
      const Eigen::Matrix3d r = rpy_rotation(o.rpy);
      i = r * i * r.transpose();
    }
    l.inertia = {i(0, 0), i(1, 1), i(2, 2), i(0, 1), i(0, 2), i(1, 2)};
  }
  return l;
}

JointSpec parse_joint(const pt::ptree& node) {
  JointSpec j;
  j.name = required_attribute(node, "name", "joint");
  const std::string where = "joint '" + j.name + "'";
  const std::string type = required_attribute(node, "type", where);
  if (type == "continuous") {
    j.kind = "revolute";
  } else if (type == "revolute" || type == "prismatic" || type == "fixed") {
    j.kind = type;
  } else {
    throw UnsupportedJointType(where + ": joint type '" + type + "' is not supported");
  }
  auto parent = node.get_child_optional("parent");
  auto child = node.get_child_optional("child");
  if (!parent) malformed(where, "missing <parent>");
  if (!child) malformed(where, "missing <child>");
  j.parent = required_attribute(*parent, "link", where + " parent");
  j.child = required_attribute(*child, "link", where + " child");
  j.origin = parse_origin(node, where);
  j.axis = {1.0, 0.0, 0.0};
  if (auto axis = node.get_child_optional("axis")) j.axis = parse_triple(required_attribute(*axis, "xyz", where + " axis"), where + " axis");
  if (type == "fixed") j.axis = {0.0, 0.0, 1.0};
  if (auto limit = node.get_child_optional("limit"); limit && type != "continuous" && type != "fixed") {
    auto get = [&](const char* key) {
      return parse_number(attribute(*limit, key).value_or("0"), where + " limit " + key);
    };
    j.limits = LimitSpec{get("lower"), get("upper"), get("velocity"), get("effort")};
  }
  return j;
}

}  // namespace

ModelDocument convert_urdf(std::string_view urdf_text, std::vector<std::string>* warnings) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(urdf_text)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw MalformedURDF(std::string("invalid XML: ") + e.what());
  }
  auto robot = tree.get_child_optional("robot");
  if (!robot) throw MalformedURDF("document has no <robot> element");

  ModelDocument doc;
  doc.name = required_attribute(*robot, "name", "robot");
  std::set<std::string> ignored;
  for (const auto& [tag, node] : *robot) {
    if (tag == "link") {
      doc.links.push_back(parse_link(node));
      for (const auto& [sub, unused] : node)
        if (sub == "visual" || sub == "collision") ignored.insert("link " + sub);
    } else if (tag == "joint") {
      doc.joints.push_back(parse_joint(node));
    } else if (tag != "<xmlattr>" && tag != "<xmlcomment>") {
      ignored.insert(tag);
    }
  }
  if (doc.links.empty()) throw MalformedURDF("robot '" + doc.name + "' has no links");
  if (warnings)
    for (const auto& tag : ignored) warnings->push_back("ignored URDF element <" + tag + ">");

  // A single unbranched path from the root becomes the default chain.
  std::map<std::string, std::vector<const JointSpec*>> by_parent;
  std::set<std::string> children;
  for (const auto& j : doc.joints) {
    by_parent[j.parent].push_back(&j);
    children.insert(j.child);
  }
  std::vector<std::string> roots;
  for (const auto& l : doc.links)
    if (!children.count(l.name)) roots.push_back(l.name);
  if (roots.size() == 1 && !doc.joints.empty()) {
    ChainSpec chain{doc.name, {}};
    std::string link = roots.front();
    while (by_parent.count(link) && by_parent[link].size() == 1 && chain.joints.size() <= doc.joints.size()) {
      const JointSpec* j = by_parent[link].front();
      chain.joints.push_back(j->name);
      link = j->child;
    }
    if (chain.joints.size() == doc.joints.size()) {
      doc.end_effector_joint = chain.joints.back();
      doc.chains.push_back(std::move(chain));
    }
  }
  return doc;
}

}  // namespace cga::io
