#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "cga/robot/manipulator.hpp"

namespace cga::tools {

struct BenchRow {
  std::string suite;
  std::string operation;
  int n_samples = 0;
  double mean_ns = 0.0;
  double stddev_ns = 0.0;
  double min_ns = 0.0;
};

std::vector<BenchRow> bench_algebra(int samples, std::uint64_t seed);

/// forward_kinematics, geometric_jacobian, inverse_dynamics, forward_dynamics.
std::vector<BenchRow> bench_robot(const robot::Manipulator& arm, int samples, std::uint64_t seed);

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows, std::uint64_t seed);

}  // namespace cga::tools
