#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <random>

#include "cga/versors.hpp"

namespace cga::tools {

namespace {

using Clock = std::chrono::steady_clock;
using V3 = Eigen::Vector3d;

volatile double sink = 0.0;

template <typename X>
void consume(const X& x) {
  sink = sink + x[0];
}

// Times `op` in batches long enough to dwarf the clock resolution and
// reports per-call statistics over `samples` batches.
BenchRow measure(const std::string& suite, const std::string& name, int samples, const std::function<void()>& op) {
  int batch = 1;
  for (;;) {
    const auto t0 = Clock::now();
    for (int k = 0; k < batch; ++k) op();
    const auto ns = std::chrono::duration<double, std::nano>(Clock::now() - t0).count();
    if (ns > 20000.0 || batch >= (1 << 20)) break;
    batch *= 2;
  }
  std::vector<double> per_call(samples);
  for (int s = 0; s < samples; ++s) {
    const auto t0 = Clock::now();
    for (int k = 0; k < batch; ++k) op();
    per_call[s] = std::chrono::duration<double, std::nano>(Clock::now() - t0).count() / batch;
  }
  BenchRow row{suite, name, samples, 0.0, 0.0, 0.0};
  if (samples == 0) return row;
  double sum = 0.0;
  for (double v : per_call) sum += v;
  row.mean_ns = sum / samples;
  double var = 0.0;
  for (double v : per_call) var += (v - row.mean_ns) * (v - row.mean_ns);
  row.stddev_ns = samples > 1 ? std::sqrt(var / (samples - 1)) : 0.0;
  row.min_ns = *std::min_element(per_call.begin(), per_call.end());
  return row;
}

V3 random_vec(std::mt19937_64& gen, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return V3(d(gen), d(gen), d(gen));
}

}  // namespace

std::vector<BenchRow> bench_algebra(int samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const Point<double> p(random_vec(gen, -1, 1)), q(random_vec(gen, -1, 1)), r(random_vec(gen, -1, 1));
  const DualSphere<double> s(Point<double>(random_vec(gen, -1, 1)), 0.7);
  const auto m1 = Motor<double>::exp(MotorGenerator<double>::from_twist(random_vec(gen, -1, 1), random_vec(gen, -1, 1)));
  const auto m2 = Motor<double>::exp(MotorGenerator<double>::from_twist(random_vec(gen, -1, 1), random_vec(gen, -1, 1)));
  const Circle<double> c(p, q, r);

  std::vector<BenchRow> rows;
  const std::string suite = "algebra";
  rows.push_back(measure(suite, "add", samples, [&] { consume(p + q); }));
  rows.push_back(measure(suite, "sub", samples, [&] { consume(p - q); }));
  rows.push_back(measure(suite, "geometric_product", samples, [&] { consume(m1 * m2); }));
  rows.push_back(measure(suite, "inner_product", samples, [&] { consume(p | s); }));
  rows.push_back(measure(suite, "outer_product", samples, [&] { consume(p ^ q ^ r); }));
  rows.push_back(measure(suite, "reverse", samples, [&] { consume(c.reverse()); }));
  rows.push_back(measure(suite, "dual", samples, [&] { consume(dual(c)); }));
  rows.push_back(measure(suite, "inverse", samples, [&] { consume(inverse(m1)); }));
  rows.push_back(measure(suite, "sandwich", samples, [&] { consume(sandwich(m1, c)); }));
  return rows;
}

std::vector<BenchRow> bench_robot(const robot::Manipulator& arm, int samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const int n = arm.dof();
  robot::VectorX q(n), qd(n), qdd(n);
  for (int k = 0; k < n; ++k) {
    q[k] = d(gen);
    qd[k] = d(gen);
    qdd[k] = d(gen);
  }
  const robot::VectorX tau = arm.inverse_dynamics(q, qd, qdd);

  std::vector<BenchRow> rows;
  const std::string suite = "robot";
  rows.push_back(measure(suite, "forward_kinematics", samples, [&] { consume(arm.forward_kinematics(q)); }));
  rows.push_back(measure(suite, "geometric_jacobian", samples, [&] { consume(arm.geometric_jacobian(q)[0]); }));
  rows.push_back(measure(suite, "inverse_dynamics", samples, [&] { consume(arm.inverse_dynamics(q, qd, qdd)); }));
  rows.push_back(measure(suite, "forward_dynamics", samples, [&] { consume(arm.forward_dynamics(q, qd, tau)); }));
  return rows;
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows, std::uint64_t seed) {
  out << "# seed=" << seed << "\n";
  out << "suite,operation,n_samples,mean_ns,stddev_ns,min_ns\n";
  out << std::fixed << std::setprecision(3);
  for (const auto& r : rows)
    out << r.suite << ',' << r.operation << ',' << r.n_samples << ',' << r.mean_ns << ',' << r.stddev_ns << ',' << r.min_ns
        << "\n";
}

}  // namespace cga::tools
