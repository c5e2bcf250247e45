#pragma once

#include <map>
#include <string>

#include "cga/io/model.hpp"
#include "support/classical_robot.hpp"
#include "support/random.hpp"

#ifndef CGA_SOURCE_DIR
#define CGA_SOURCE_DIR "."
#endif

namespace testing {

inline std::string model_file(const std::string& name) { return std::string(CGA_SOURCE_DIR) + "/models/" + name + ".yaml"; }

inline cga::io::JointSpec joint(std::string name, std::string kind, std::string parent, std::string child,
                                std::array<double, 3> xyz = {}, std::array<double, 3> rpy = {},
                                std::array<double, 3> axis = {0, 0, 1}) {
  cga::io::JointSpec j;
  j.name = std::move(name);
  j.kind = std::move(kind);
  j.parent = std::move(parent);
  j.child = std::move(child);
  j.origin = {xyz, rpy};
  j.axis = axis;
  return j;
}

inline cga::io::LinkSpec link(std::string name, double mass = 0.0, std::array<double, 3> com = {},
                              std::array<double, 6> inertia = {}) {
  return {std::move(name), mass, com, inertia};
}

/// Planar arm in the xy plane: unit links, revolute joints about z and a tool
/// frame at the tip of the second link.
inline cga::io::ModelDocument planar_2r(double mass = 1.0) {
  cga::io::ModelDocument d;
  d.name = "planar_2r";
  d.links = {link("base"), link("l1", mass, {0.5, 0, 0}, {0.01, 0.01, 0.01, 0, 0, 0}),
             link("l2", mass, {0.5, 0, 0}, {0.01, 0.01, 0.01, 0, 0, 0}), link("tool")};
  d.joints = {joint("j1", "revolute", "base", "l1"), joint("j2", "revolute", "l1", "l2", {1, 0, 0}),
              joint("tip", "fixed", "l2", "tool", {1, 0, 0})};
  d.end_effector_joint = "tip";
  return d;
}

/// Point mass m at distance l from a revolute joint; q = 0 is horizontal and
/// positive q lifts the mass against gravity along -z.
inline cga::io::ModelDocument pendulum(double m, double l) {
  cga::io::ModelDocument d;
  d.name = "pendulum";
  d.links = {link("base"), link("rod", m, {l, 0, 0})};
  d.joints = {joint("hinge", "revolute", "base", "rod", {}, {}, {0, -1, 0})};
  d.end_effector_joint = "hinge";
  return d;
}

/// Random serial chain with n actuated joints (a mix of revolute and
/// prismatic) and fixed joints sprinkled in, including one at the tip.
inline cga::io::ModelDocument random_chain(Random& rng, int n, bool prismatic = true) {
  cga::io::ModelDocument d;
  d.name = "random";
  auto rand3 = [&](double lo, double hi) { return std::array<double, 3>{rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)}; };
  auto inertia = [&]() {
    Eigen::Matrix3d a;
    for (int k = 0; k < 9; ++k) a(k / 3, k % 3) = rng.uniform(-0.2, 0.2);
    Eigen::Matrix3d i = a * a.transpose() + 0.01 * Eigen::Matrix3d::Identity();
    return std::array<double, 6>{i(0, 0), i(1, 1), i(2, 2), i(0, 1), i(0, 2), i(1, 2)};
  };
  d.links.push_back(link("link0", 1.0, {}, inertia()));
  int count = 0;
  int index = 0;
  std::string parent = "link0";
  while (count < n) {
    ++index;
    const std::string child = "link" + std::to_string(index);
    const bool fixed = index % 4 == 3;
    std::string kind = "fixed";
    if (!fixed) {
      kind = (prismatic && rng.uniform(0, 1) < 0.25) ? "prismatic" : "revolute";
      ++count;
    }
    auto axis = rand3(-1, 1);
    const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    for (auto& a : axis) a /= norm;
    d.joints.push_back(joint("joint" + std::to_string(index), kind, parent, child, rand3(-0.3, 0.3), rand3(-3, 3), axis));
    d.links.push_back(link(child, rng.uniform(0.5, 3.0), rand3(-0.2, 0.2), inertia()));
    parent = child;
  }
  ++index;
  d.joints.push_back(joint("tip", "fixed", parent, "tool", rand3(-0.2, 0.2), rand3(-3, 3)));
  d.links.push_back(link("tool", 0.3, rand3(-0.1, 0.1), inertia()));
  d.end_effector_joint = "tip";
  return d;
}

/// Oracle description of the chain from the base to the named joint.
inline oracle::Chain to_oracle(const cga::io::ModelDocument& d, const std::string& ee) {
  std::map<std::string, const cga::io::JointSpec*> by_child, by_name;
  std::map<std::string, const cga::io::LinkSpec*> links;
  for (const auto& j : d.joints) {
    by_child[j.child] = &j;
    by_name[j.name] = &j;
  }
  for (const auto& l : d.links) links[l.name] = &l;
  std::vector<const cga::io::JointSpec*> path;
  for (const cga::io::JointSpec* j = by_name.at(ee); j; j = by_child.count(j->parent) ? by_child.at(j->parent) : nullptr)
    path.insert(path.begin(), j);
  oracle::Chain chain;
  for (const auto* j : path) {
    oracle::ChainJoint c;
    c.kind = j->kind == "fixed" ? oracle::Kind::fixed : j->kind == "revolute" ? oracle::Kind::revolute : oracle::Kind::prismatic;
    c.xyz = Eigen::Vector3d(j->origin.xyz[0], j->origin.xyz[1], j->origin.xyz[2]);
    c.rpy = Eigen::Vector3d(j->origin.rpy[0], j->origin.rpy[1], j->origin.rpy[2]);
    c.axis = Eigen::Vector3d(j->axis[0], j->axis[1], j->axis[2]);
    const auto* l = links.at(j->child);
    c.mass = l->mass;
    c.com = Eigen::Vector3d(l->com[0], l->com[1], l->com[2]);
    const auto& i = l->inertia;
    c.inertia << i[0], i[3], i[4], i[3], i[1], i[5], i[4], i[5], i[2];
    chain.push_back(c);
  }
  return chain;
}

/// Homogeneous transform of a motor from its action on the origin and the
/// three unit points.
template <typename M>
Eigen::Matrix4d to_homogeneous(const M& m) {
  using P = cga::Point<double>;
  const Eigen::Vector3d o = cga::apply(m, P(0, 0, 0)).euclidean();
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  for (int k = 0; k < 3; ++k) t.block<3, 1>(0, k) = cga::apply(m, P(Eigen::Vector3d::Unit(k))).euclidean() - o;
  t.block<3, 1>(0, 3) = o;
  return t;
}

}  // namespace testing
