#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cga/optim/costs.hpp"

namespace cga::tools {

/// Parses "a,b,c" into numbers; throws std::invalid_argument.
std::vector<double> parse_numbers(const std::string& text);

/// IK target given on the command line.
///
///   point:x,y,z                pointpair:x1,y1,z1,x2,y2,z2
///   line:px,py,pz,dx,dy,dz     circle:cx,cy,cz,nx,ny,nz,r
///   plane:nx,ny,nz,d           sphere:cx,cy,cz,r
///   pose:x,y,z,roll,pitch,yaw  motor:s,e12,e13,e23,e1i,e2i,e3i,e123i
using TargetSpec = std::variant<robot::MotorD, optim::Target>;

TargetSpec parse_target(const std::string& text);

/// Tool in the end-effector frame: "point" (frame origin), "line" (frame z
/// axis), "point:x,y,z" or "line:px,py,pz,dx,dy,dz".
optim::Tool parse_tool(const std::string& text);

}  // namespace cga::tools
