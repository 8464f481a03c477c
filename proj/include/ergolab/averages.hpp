#ifndef ERGOLAB_AVERAGES_HPP
#define ERGOLAB_AVERAGES_HPP

#include <span>
#include <vector>

#include "ergolab/semigroup.hpp"
#include "ergolab/weights.hpp"

// Weighted ergodic averages
//
//   M_t(T, beta)(f) = (1/n) sum_{k=0}^{n-1} beta(kh) T_{kh} f,   t = n h,
//
// the left-endpoint Riemann discretization of (1/t) integral_0^t beta T_s f ds.
// The left-endpoint rule makes (1/C) M_t an exact convex combination of DS
// operators, so the contraction and majorization inequalities hold exactly
// rather than up to quadrature error.

namespace ergolab {

Field ergodic_average(const Semigroup& t, const Weight& beta, const Field& f, double horizon);

struct AverageProfile {
  std::vector<double> t_grid;
  std::vector<Field> fields;       // M_t(T,beta)(f) per grid entry
  double beta_bound = 1.0;         // C
  double p = 1.0;                  // exponent used for the contraction audit
  double max_contraction_ratio = 0.0; // max_t ||M_t f||_p / (C ||f||_p)
  bool contraction_ok = true;      // ratios <= 1 + 1e-9
};

// Batch of ergodic_average over an increasing grid. One running partial sum
// is extended rather than recomputed, so the cost is linear in max(t)/h and
// each entry is bit-identical to an independent ergodic_average call.
AverageProfile average_profile(const Semigroup& t, const Weight& beta, const Field& f,
                               std::span<const double> t_grid, double p = 1.0);

// (1/n) sum_{k<n} K^k g: the discrete-time average the continuous averages
// reduce to; used as an independent check path.
Field discrete_average_oracle(const KernelMatrix& k, const Field& g, long n);

struct ReductionReport {
  bool pass = false;
  double max_violation = 0.0; // max over cells of |M_{n/m}(T,beta)f| - 2C M_n(|K_{1/m}|)(g)
  double slack = 0.0;         // min over cells of the same difference, negated
};

struct RefinementBias {
  bool grid_floor = false; // shift/kernel kinds have no sub-step refinement
  double bias = 0.0;       // ||M_t at step h - M_t at step h/2||_p
};

// Left-endpoint quadrature carries an O(h) bias; for the generator kind the
// average is recomputed at step h/2 and the gap reported. Shift and kernel
// kinds exist only on their grid, so the report just states the floor.
RefinementBias quadrature_bias(const Semigroup& t, const Weight& beta, const Field& f,
                               double horizon, double p);

// Discrete shadow of the proof step that dominates the weighted average over
// [0, n/m] by 2C times the discrete average of the modulus kernel at time
// 1/m applied to g = (m) integral_0^{1/m} |T_s f| ds (left Riemann). The
// factor 2 is pure slack here; the check must pass with room to spare.
ReductionReport reduction_check(const Semigroup& t, const Weight& beta, const Field& f, long n,
                                long m, double tol = 1e-9);

} // namespace ergolab

#endif
