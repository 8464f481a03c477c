#include "ergolab/averages.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ergolab {

namespace {

// Shared incremental accumulator: acc += beta(kh) T_{kh} f, advanced one
// grid step at a time. Both ergodic_average and average_profile run through
// here so their outputs agree bitwise.
class RunningAverage {
public:
  RunningAverage(const Semigroup& t, const Weight& beta, const Field& f)
      : t_(t), beta_(beta), current_(f), acc_(f.size(), Complex{0.0, 0.0}) {}

  // Extend the running sum to cover k = 0 .. n-1.
  void extend_to(long n) {
    while (steps_ < n) {
      const double s = static_cast<double>(steps_) * t_.time_step();
      const Complex b = beta_(s);
      if (steps_ > 0) current_ = t_.step(current_);
      for (std::size_t i = 0; i < acc_.size(); ++i) acc_[i] += b * current_[i];
      ++steps_;
    }
  }

  Field average(const SpacePtr& space) const {
    std::vector<Complex> v(acc_);
    const double inv = 1.0 / static_cast<double>(steps_);
    for (Complex& c : v) c *= inv;
    return Field(space, std::move(v));
  }

private:
  const Semigroup& t_;
  const Weight& beta_;
  Field current_;
  std::vector<Complex> acc_;
  long steps_ = 0;
};

} // namespace

Field ergodic_average(const Semigroup& t, const Weight& beta, const Field& f, double horizon) {
  require_same_space(f.space(), t.space());
  const long n = t.steps_for(horizon);
  if (n < 1) throw std::invalid_argument("ergodic_average: horizon must be at least one step");
  RunningAverage run(t, beta, f);
  run.extend_to(n);
  return run.average(f.space_ptr());
}

AverageProfile average_profile(const Semigroup& t, const Weight& beta, const Field& f,
                               std::span<const double> t_grid, double p) {
  if (t_grid.empty()) throw std::invalid_argument("average_profile: empty grid");
  require_same_space(f.space(), t.space());

  AverageProfile prof;
  prof.beta_bound = beta.bound;
  prof.p = p;
  prof.t_grid.assign(t_grid.begin(), t_grid.end());

  std::vector<long> steps(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    steps[i] = t.steps_for(t_grid[i]);
    if (steps[i] < 1) throw std::invalid_argument("average_profile: horizons must be >= one step");
    if (i > 0 && steps[i] <= steps[i - 1])
      throw std::invalid_argument("average_profile: grid must be strictly increasing");
  }

  const double fnorm = lp_norm(f, p);
  RunningAverage run(t, beta, f);
  prof.fields.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    run.extend_to(steps[i]);
    Field m = run.average(f.space_ptr());
    if (fnorm > 0.0) {
      const double ratio = lp_norm(m, p) / (prof.beta_bound * fnorm);
      prof.max_contraction_ratio = std::max(prof.max_contraction_ratio, ratio);
    }
    prof.fields.push_back(std::move(m));
  }
  prof.contraction_ok = prof.max_contraction_ratio <= 1.0 + 1e-9;
  return prof;
}

Field discrete_average_oracle(const KernelMatrix& k, const Field& g, long n) {
  if (n < 1) throw std::invalid_argument("discrete_average_oracle: n must be >= 1");
  std::vector<Complex> acc(g.size(), Complex{0.0, 0.0});
  Field cur = g;
  for (long step = 0; step < n; ++step) {
    if (step > 0) cur = k.apply(cur);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += cur[i];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (Complex& c : acc) c *= inv;
  return Field(g.space_ptr(), std::move(acc));
}

RefinementBias quadrature_bias(const Semigroup& t, const Weight& beta, const Field& f,
                               double horizon, double p) {
  if (t.kind() != SemigroupKind::generator_exponential) return {true, 0.0};
  const Semigroup refined =
      Semigroup::generator_exponential(t.space_ptr(), t.time_step() / 2.0, *t.generator());
  Field coarse = ergodic_average(t, beta, f, horizon);
  Field fine = ergodic_average(refined, beta, f, horizon);
  return {false, lp_norm(combine(1.0, coarse, -1.0, fine), p)};
}

ReductionReport reduction_check(const Semigroup& t, const Weight& beta, const Field& f, long n,
                                long m, double tol) {
  if (n < 1 || m < 1) throw std::invalid_argument("reduction_check: n, m must be >= 1");
  const double h = t.time_step();
  const double block = 1.0 / static_cast<double>(m); // physical length of one reduction block
  const double ratio = block / h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || rounded < 1.0)
    throw std::invalid_argument("reduction_check: 1/m must be a positive multiple of h");
  const long r = static_cast<long>(rounded);

  // Left side: the weighted average over [0, n/m] at step h.
  Field lhs = ergodic_average(t, beta, f, static_cast<double>(n) * block);

  // g = m * integral_0^{1/m} |T_s f| ds  ->  (1/r) sum_{j<r} |T_{jh} f|.
  std::vector<Complex> gacc(f.size(), Complex{0.0, 0.0});
  Field cur = f;
  for (long j = 0; j < r; ++j) {
    if (j > 0) cur = t.step(cur);
    for (std::size_t i = 0; i < gacc.size(); ++i) gacc[i] += std::abs(cur[i]);
  }
  for (Complex& c : gacc) c *= 1.0 / static_cast<double>(r);
  Field g(f.space_ptr(), std::move(gacc));

  KernelMatrix block_modulus = linear_modulus(t.kernel_at(block));
  Field rhs = discrete_average_oracle(block_modulus, g, n);

  ReductionReport rep;
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double gap = 2.0 * beta.bound * rhs[i].real() - std::abs(lhs[i]);
    min_gap = std::min(min_gap, gap);
    rep.max_violation = std::max(rep.max_violation, -gap);
  }
  rep.slack = min_gap;
  rep.pass = rep.max_violation <= tol;
  return rep;
}

} // namespace ergolab
