#include "cga/optim/solver.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace cga::optim {

SolveReport gauss_newton_solve(const Cost& cost, const VectorX& q0, const SolverConfig& config) {
  if (q0.size() != cost.dof())
    throw DimensionMismatch("q0 has length " + std::to_string(q0.size()) + ", expected dof " + std::to_string(cost.dof()));
  if (config.max_iterations < 0 || config.damping < 0.0 || config.step_tolerance <= 0.0 || config.cost_tolerance <= 0.0 ||
      !(config.shrink > 0.0 && config.shrink < 1.0) || config.max_halvings < 0)
    throw std::invalid_argument("invalid solver configuration");

  SolveReport report;
  report.q = q0;
  VectorX r = cost.residual(report.q);
  double f = 0.5 * r.squaredNorm();
  report.residual_history.push_back(r.norm());

  const int n = cost.dof();
  while (true) {
    if (f < config.cost_tolerance) {
      report.converged = true;
      break;
    }
    if (report.iterations >= config.max_iterations) break;

    const MatrixX j = cost.jacobian(report.q);
    const MatrixX normal = j.transpose() * j + config.damping * MatrixX::Identity(n, n);
    const Eigen::LDLT<MatrixX> ldlt(normal);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-14 * std::max(1.0, ldlt.vectorD().cwiseAbs().maxCoeff()))
      throw LinearSolveFailure("normal equations are singular at iteration " + std::to_string(report.iterations));
    const VectorX step = -ldlt.solve(j.transpose() * r);
    if (!step.allFinite()) throw LinearSolveFailure("normal equations produced a non-finite step");

    ++report.iterations;
    if (step.norm() < config.step_tolerance) {
      report.converged = true;
      break;
    }

    double alpha = 1.0;
    bool accepted = false;
    for (int h = 0; h <= config.max_halvings; ++h, alpha *= config.shrink) {
      const VectorX candidate = report.q + alpha * step;
      const VectorX rc = cost.residual(candidate);
      const double fc = 0.5 * rc.squaredNorm();
      if (fc < f) {
        report.q = candidate;
        r = rc;
        f = fc;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    report.residual_history.push_back(r.norm());
    if ((alpha * step).norm() < config.step_tolerance) {
      report.converged = true;
      break;
    }
  }
  report.final_cost = f;
  return report;
}

}  // namespace cga::optim
