#pragma once

#include <vector>

#include "cga/optim/costs.hpp"

namespace cga::optim {

struct SolverConfig {
  int max_iterations = 100;
  double damping = 1e-6;
  double step_tolerance = 1e-10;
  double cost_tolerance = 1e-12;
  double shrink = 0.5;
  int max_halvings = 20;
};

struct SolveReport {
  VectorX q;
  bool converged = false;
  int iterations = 0;
  double final_cost = 0.0;
  /// Residual norm at q0 and after every accepted iterate.
  std::vector<double> residual_history;
};

/// Damped Gauss-Newton, dq = -(J^T J + lambda I)^-1 J^T r, with a
/// backtracking line search that halves the step until the cost decreases.
/// Converged when the cost drops below cost_tolerance or the step below
/// step_tolerance. Throws LinearSolveFailure or DimensionMismatch.
SolveReport gauss_newton_solve(const Cost& cost, const VectorX& q0, const SolverConfig& config = {});

}  // namespace cga::optim
