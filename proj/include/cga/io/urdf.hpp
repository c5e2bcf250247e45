#pragma once

#include <string>
#include <string_view>

#include "cga/io/model.hpp"

namespace cga::io {

/// Converts the kinematic and inertial part of a URDF document. Continuous
/// joints become revolute joints without limits; visual, collision and other
/// elements are ignored and reported through `warnings` when given.
/// Throws UnsupportedJointType or MalformedURDF.
ModelDocument convert_urdf(std::string_view urdf_text, std::vector<std::string>* warnings = nullptr);

}  // namespace cga::io
