#include "ergolab/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ergolab {

namespace {

// Discard cells in decreasing-deviation order within the measure budget.
// Ties break by cell index ascending; the scan stops at the first cell that
// does not fit.
SubsetMask greedy_mask(const SpacePtr& space, const std::vector<double>& dev, double epsilon,
                       double* removed_measure) {
  std::vector<std::size_t> order(dev.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dev[a] > dev[b]; });
  std::vector<bool> kept(dev.size(), true);
  double removed = 0.0;
  for (std::size_t idx : order) {
    const double w = space->weight(idx);
    if (removed + w > epsilon) break;
    removed += w;
    kept[idx] = false;
  }
  if (removed_measure) *removed_measure = removed;
  return SubsetMask(space, std::move(kept));
}

// Entries of `family` sorted so that position 0 starts the full tail and the
// tail shrinks as positions advance.
std::vector<std::size_t> approach_order(std::span<const std::pair<double, Field>> family,
                                        LimitDirection direction) {
  std::vector<std::size_t> order(family.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return direction == LimitDirection::to_infinity ? family[a].first < family[b].first
                                                    : family[a].first > family[b].first;
  });
  return order;
}

bool in_tail(double t, double t0, LimitDirection direction) {
  return direction == LimitDirection::to_infinity ? t >= t0 : t <= t0;
}

void finish_verdict(EgorovReport& rep) {
  rep.pass = !rep.tail_sup.empty();
  for (std::size_t i = 0; i + 1 < rep.tail_sup.size(); ++i)
    if (rep.tail_sup[i + 1].second > rep.tail_sup[i].second + 1e-15) rep.pass = false;
  if (!rep.tail_sup.empty() && rep.tail_sup.back().second > rep.threshold) rep.pass = false;
}

} // namespace

EgorovReport egorov_search(std::span<const std::pair<double, Field>> family, const Field& limit,
                           double epsilon, std::span<const double> t0_grid, double threshold,
                           LimitDirection direction) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("egorov_search: epsilon must be positive");
  if (family.empty()) throw std::invalid_argument("egorov_search: empty family");
  for (const auto& [t, field] : family) require_same_space(field.space(), limit.space());

  const std::size_t n = limit.size();
  const auto order = approach_order(family, direction);

  // Per-cell deviation sup over the full tail.
  std::vector<double> dev(n, 0.0);
  for (std::size_t pos : order) {
    const Field& ft = family[pos].second;
    for (std::size_t i = 0; i < n; ++i) dev[i] = std::max(dev[i], std::abs(ft[i] - limit[i]));
  }

  double removed = 0.0;
  SubsetMask kept = greedy_mask(limit.space_ptr(), dev, epsilon, &removed);

  // Suffix sups over kept cells: walk the approach order backward.
  std::vector<double> cell_max(n, 0.0);
  std::vector<double> suffix_kept_sup(order.size(), 0.0);
  for (std::size_t pos = order.size(); pos-- > 0;) {
    const Field& ft = family[order[pos]].second;
    double kept_sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cell_max[i] = std::max(cell_max[i], std::abs(ft[i] - limit[i]));
      if (kept.included(i)) kept_sup = std::max(kept_sup, cell_max[i]);
    }
    suffix_kept_sup[pos] = kept_sup;
  }

  EgorovReport rep{epsilon, std::move(kept), removed, {}, threshold, false};
  for (double t0 : t0_grid) {
    // first approach position whose t lies in the tail of t0
    std::size_t first = order.size();
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      if (in_tail(family[order[pos]].first, t0, direction)) {
        first = pos;
        break;
      }
    }
    rep.tail_sup.emplace_back(t0, first < order.size() ? suffix_kept_sup[first] : 0.0);
  }
  finish_verdict(rep);
  return rep;
}

std::vector<NormRow> mean_convergence_table(const Semigroup& t, const Weight& beta,
                                            const Field& f, double p,
                                            std::span<const double> t_grid, const Field& ref) {
  if (t_grid.empty()) throw std::invalid_argument("mean_convergence_table: empty grid");
  std::vector<double> ascending(t_grid.begin(), t_grid.end());
  std::sort(ascending.begin(), ascending.end());
  AverageProfile prof = average_profile(t, beta, f, ascending, p);

  std::vector<NormRow> rows;
  rows.reserve(t_grid.size());
  for (double horizon : t_grid) {
    const auto it = std::lower_bound(ascending.begin(), ascending.end(), horizon);
    const std::size_t idx = static_cast<std::size_t>(it - ascending.begin());
    rows.push_back({horizon, lp_norm(combine(1.0, prof.fields[idx], -1.0, ref), p)});
  }
  return rows;
}

ConvergenceReport identify_local_limit(const Semigroup& t, const Weight& beta, const Field& f,
                                       double p, std::span<const double> t_grid_to_zero,
                                       double epsilon, double threshold) {
  if (!beta.has_approximants())
    throw std::invalid_argument("identify_local_limit: weight carries no approximants");
  if (t_grid_to_zero.empty()) throw std::invalid_argument("identify_local_limit: empty grid");
  for (std::size_t i = 0; i + 1 < t_grid_to_zero.size(); ++i)
    if (t_grid_to_zero[i] <= t_grid_to_zero[i + 1])
      throw std::invalid_argument("identify_local_limit: grid must decrease toward the step");

  const Complex ff = inner_product(f, f);
  if (ff == Complex{0.0, 0.0}) throw std::invalid_argument("identify_local_limit: f must be nonzero");

  std::vector<double> ascending(t_grid_to_zero.begin(), t_grid_to_zero.end());
  std::reverse(ascending.begin(), ascending.end());
  AverageProfile prof = average_profile(t, beta, f, ascending, p);
  const double t_min = ascending.front();
  const Field& m_min = prof.fields.front();

  ConvergenceReport rep;
  rep.mode = ConvergenceMode::weighted_zero;
  rep.lambda_estimate = inner_product(m_min, f) / ff;

  const TrigPolynomial& poly = beta.approximants.back();
  rep.approximant_at_zero = trig_at_zero(poly);
  rep.lambda_gap = std::abs(*rep.lambda_estimate - *rep.approximant_at_zero);

  // |lambda - p_n(0)| <= ||M_t f - P_t f||_inf ||f||_1 / <f,f>
  //                    + |<P_t f - p_n(0) f, f>| / <f,f>, and the first
  // factor is bounded by the Cesaro deviation of beta from p_n.
  const double dev = mean_deviation(beta, poly, t_min, t.time_step());
  Field poly_avg = ergodic_average(t, weights::trig(poly), f, t_min);
  const Complex poly_gap_ip =
      inner_product(combine(1.0, poly_avg, -*rep.approximant_at_zero, f), f);
  rep.transfer_tolerance =
      dev * lp_norm(f, kInfExponent) * lp_norm(f, 1.0) / ff.real() + std::abs(poly_gap_ip) / ff.real();

  const Field scaled_limit = combine(*rep.lambda_estimate, f, 0.0, f);
  rep.limit = scaled_limit;
  std::vector<std::pair<double, Field>> family;
  family.reserve(prof.fields.size());
  for (std::size_t i = 0; i < prof.fields.size(); ++i)
    family.emplace_back(prof.t_grid[i], prof.fields[i]);
  rep.egorov = egorov_search(family, scaled_limit, epsilon, t_grid_to_zero, threshold,
                             LimitDirection::to_zero);
  rep.mean_norm_table = mean_convergence_table(t, beta, f, p, t_grid_to_zero, scaled_limit);

  rep.pass = prof.contraction_ok && rep.egorov->pass &&
             rep.lambda_gap <= rep.transfer_tolerance + 1e-9;
  return rep;
}

ConvergenceReport flow_convergence_report(const Semigroup& t, const Weight& beta, const Field& f,
                                          double p, std::span<const double> t_grid,
                                          double epsilon, const std::optional<Field>& known_limit,
                                          double threshold) {
  if (t_grid.empty()) throw std::invalid_argument("flow_convergence_report: empty grid");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (t_grid[i] >= t_grid[i + 1])
      throw std::invalid_argument("flow_convergence_report: grid must increase");

  AverageProfile prof = average_profile(t, beta, f, t_grid, p);

  ConvergenceReport rep;
  rep.mode = beta.name == "one" ? ConvergenceMode::flow_infinity : ConvergenceMode::weighted_infinity;

  if (known_limit) {
    require_same_space(known_limit->space(), f.space());
    rep.limit = known_limit;
    std::vector<std::pair<double, Field>> family;
    for (std::size_t i = 0; i < prof.fields.size(); ++i)
      family.emplace_back(prof.t_grid[i], prof.fields[i]);
    rep.egorov = egorov_search(family, *known_limit, epsilon, t_grid, threshold);
    rep.mean_norm_table = mean_convergence_table(t, beta, f, p, t_grid, *known_limit);
    rep.pass = prof.contraction_ok && rep.egorov->pass;
    return rep;
  }

  // No closed-form limit: verify the a.u. Cauchy property through suffix
  // diameters diam{M_t f(x) : t >= t0}.
  const std::size_t n = f.size();
  const std::size_t count = prof.fields.size();
  std::vector<std::vector<double>> suffix_diam(count, std::vector<double>(n, 0.0));
  std::vector<std::vector<Complex>> seen(n);
  for (std::size_t pos = count; pos-- > 0;) {
    const Field& ft = prof.fields[pos];
    for (std::size_t i = 0; i < n; ++i) {
      double d = pos + 1 < count ? suffix_diam[pos + 1][i] : 0.0;
      for (const Complex& v : seen[i]) d = std::max(d, std::abs(ft[i] - v));
      suffix_diam[pos][i] = d;
      seen[i].push_back(ft[i]);
    }
  }

  double removed = 0.0;
  SubsetMask kept = greedy_mask(f.space_ptr(), suffix_diam[0], epsilon, &removed);
  EgorovReport ego{epsilon, std::move(kept), removed, {}, threshold, false};
  for (std::size_t pos = 0; pos < count; ++pos) {
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (ego.kept.included(i)) sup = std::max(sup, suffix_diam[pos][i]);
    ego.tail_sup.emplace_back(prof.t_grid[pos], sup);
  }
  finish_verdict(ego);
  // The last row covers a single time and is identically zero; the threshold
  // has to be met by the last row with an actual pair in its tail.
  if (ego.tail_sup.size() >= 2)
    ego.pass = ego.pass && ego.tail_sup[ego.tail_sup.size() - 2].second <= threshold;
  rep.egorov = std::move(ego);

  // Norm table against the last profile entry, the best available surrogate.
  rep.mean_norm_table = mean_convergence_table(t, beta, f, p, t_grid, prof.fields.back());
  rep.pass = prof.contraction_ok && rep.egorov->pass;
  return rep;
}

std::pair<double, double> transfer_bound(const Semigroup& t, const Weight& beta,
                                         const TrigPolynomial& poly, const Field& f,
                                         double horizon) {
  Field weighted = ergodic_average(t, beta, f, horizon);
  Field polynomial = ergodic_average(t, weights::trig(poly), f, horizon);
  const double lhs = lp_norm(combine(1.0, weighted, -1.0, polynomial), kInfExponent);
  const double rhs = mean_deviation(beta, poly, horizon, t.time_step()) * lp_norm(f, kInfExponent);
  return {lhs, rhs};
}

} // namespace ergolab
