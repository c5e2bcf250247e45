#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cga/robot/manipulator.hpp"

// Robot description documents (YAML, `format: 1`).
//
//   format: 1
//   name: arm
//   end_effector_joint: j2        # optional
//   links:
//     - {name: base, mass: 1.0, com: [0, 0, 0], inertia: [ixx, iyy, izz, ixy, ixz, iyz]}
//   joints:
//     - name: j1
//       kind: revolute            # fixed | revolute | prismatic
//       parent: base
//       child: l1
//       origin: {xyz: [0, 0, 0.1], rpy: [0, 0, 0]}
//       axis: [0, 0, 1]
//       limits: {lower: -1, upper: 1, velocity: 2, effort: 10}   # optional
//   chains:
//     - {name: arm, joints: [j1, j2]}
namespace cga::io {

struct Origin {
  std::array<double, 3> xyz{};
  std::array<double, 3> rpy{};
  bool operator==(const Origin&) const = default;
};

struct LinkSpec {
  std::string name;
  double mass = 0.0;
  std::array<double, 3> com{};
  /// ixx, iyy, izz, ixy, ixz, iyz about the centre of mass.
  std::array<double, 6> inertia{};
  bool operator==(const LinkSpec&) const = default;
};

struct LimitSpec {
  double lower = 0.0;
  double upper = 0.0;
  double velocity = 0.0;
  double effort = 0.0;
  bool operator==(const LimitSpec&) const = default;
};

struct JointSpec {
  std::string name;
  std::string kind;
  std::string parent;
  std::string child;
  Origin origin;
  std::array<double, 3> axis{0.0, 0.0, 1.0};
  std::optional<LimitSpec> limits;
  bool operator==(const JointSpec&) const = default;
};

struct ChainSpec {
  std::string name;
  std::vector<std::string> joints;
  bool operator==(const ChainSpec&) const = default;
};

struct ModelDocument {
  int format = 1;
  std::string name;
  std::vector<LinkSpec> links;
  std::vector<JointSpec> joints;
  std::vector<ChainSpec> chains;
  std::optional<std::string> end_effector_joint;
  bool operator==(const ModelDocument&) const = default;
};

/// Throws SchemaError naming the offending entity.
ModelDocument parse_model(std::string_view yaml_text);
ModelDocument read_model(const std::filesystem::path& path);

/// Floats are written in shortest round-trip form.
std::string emit_model(const ModelDocument& doc);
void write_model(const std::filesystem::path& path, const ModelDocument& doc);

/// translator(xyz) * Rz(yaw) * Ry(pitch) * Rx(roll).
robot::MotorD origin_motor(const Origin& origin);

robot::System load_system(const ModelDocument& doc);

/// Uses doc.end_effector_joint when ee_joint is not given.
robot::Manipulator load_manipulator(const ModelDocument& doc, std::optional<std::string> ee_joint = std::nullopt);

/// Looks up a model file as given, then relative to each directory of the
/// colon-separated CGA_MODEL_PATH, trying a ".yaml" suffix as well.
std::filesystem::path resolve_model_path(const std::string& name);

}  // namespace cga::io
