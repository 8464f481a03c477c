#ifndef ERGOLAB_CONVERGENCE_HPP
#define ERGOLAB_CONVERGENCE_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ergolab/averages.hpp"

// Almost-uniform (Egorov) convergence analysis: given a family {f_t} and a
// measure budget epsilon, find the best set to discard and track the sup-norm
// of the deviation on what is kept. "Convergence verified" always means
// "tail sups decrease below the threshold" -- an estimate consistent with
// a.u. convergence, never a proof of it.

namespace ergolab {

struct EgorovReport {
  double epsilon = 0.0;
  SubsetMask kept;               // the set G
  double removed_measure = 0.0;  // <= epsilon
  std::vector<std::pair<double, double>> tail_sup; // (t0, sup over tail of ||(f_t - ref) chi_G||_inf)
  double threshold = 1e-3;
  bool pass = false; // tail sups non-increasing and final value <= threshold
};

// Greedy Egorov set: D(x) = sup over the full tail of |f_t - limit|, cells
// discarded in decreasing-D order (ties by cell index) while the removed
// measure stays within epsilon, stopping at the first cell that does not
// fit. Stopping there is optimal: any admissible mask must keep a cell with
// at least that deviation. The tail at t0 is {t >= t0} for to_infinity and
// {t <= t0} for to_zero; t0_grid must be ordered so the tail shrinks.
EgorovReport egorov_search(std::span<const std::pair<double, Field>> family, const Field& limit,
                           double epsilon, std::span<const double> t0_grid,
                           double threshold = 1e-3,
                           LimitDirection direction = LimitDirection::to_infinity);

struct NormRow {
  double t = 0.0;
  double value = 0.0;
};

// (t, ||M_t(T,beta)f - ref||_p) along the grid.
std::vector<NormRow> mean_convergence_table(const Semigroup& t, const Weight& beta,
                                            const Field& f, double p,
                                            std::span<const double> t_grid, const Field& ref);

enum class ConvergenceMode { flow_infinity, local_zero, weighted_infinity, weighted_zero };

struct ConvergenceReport {
  ConvergenceMode mode = ConvergenceMode::flow_infinity;
  std::optional<Field> limit;
  std::optional<Complex> lambda_estimate;      // scalar limit factor (local weighted case)
  std::optional<Complex> approximant_at_zero;  // p_n(0) for the largest stored n
  double lambda_gap = 0.0;                     // |lambda_estimate - p_n(0)|
  double transfer_tolerance = 0.0;             // deviation-based bound on that gap
  std::vector<NormRow> mean_norm_table;
  std::optional<EgorovReport> egorov;
  bool pass = false;
};

// Local weighted limit: the averages converge to lambda(f) * f as t -> 0+,
// lambda estimated by the inner-product ratio <M_{t_min} f, f> / <f, f>.
// The grid must decrease toward the step h; beta must carry approximants.
ConvergenceReport identify_local_limit(const Semigroup& t, const Weight& beta, const Field& f,
                                       double p, std::span<const double> t_grid_to_zero,
                                       double epsilon = 0.1, double threshold = 1e-3);

// Flow (t -> infinity) report. With a known limit, verifies a.u. convergence
// toward it; otherwise verifies the a.u. Cauchy property via suffix diameters
// sup_{t', t'' >= t0} |M_{t'} f - M_{t''} f| on the kept set.
ConvergenceReport flow_convergence_report(const Semigroup& t, const Weight& beta, const Field& f,
                                          double p, std::span<const double> t_grid,
                                          double epsilon,
                                          const std::optional<Field>& known_limit = std::nullopt,
                                          double threshold = 1e-3);

// Sup-norm transfer bound between the weighted average and the
// trig-polynomial average sharing the grid:
//   ||M_t(T,beta)f - P_t(T)f||_inf <= mean_deviation(beta, p, t) ||f||_inf.
// Returns (lhs, rhs); lhs <= rhs holds exactly in the discrete model.
std::pair<double, double> transfer_bound(const Semigroup& t, const Weight& beta,
                                         const TrigPolynomial& poly, const Field& f,
                                         double horizon);

} // namespace ergolab

#endif
