#include "ergolab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergolab {

Field maximal_function(const Semigroup& t, const Weight& beta, const Field& f,
                       std::span<const double> t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("maximal_function: empty grid");
  AverageProfile prof = average_profile(t, beta, f, t_grid);
  std::vector<Complex> sup(f.size(), Complex{0.0, 0.0});
  for (const Field& m : prof.fields)
    for (std::size_t i = 0; i < sup.size(); ++i)
      sup[i] = Complex{std::max(sup[i].real(), std::abs(m[i])), 0.0};
  return Field(f.space_ptr(), std::move(sup));
}

MaximalReport weak_type_check(const Semigroup& t, const Weight& beta, const Field& f, double p,
                              std::span<const double> t_grid,
                              std::span<const double> lambda_grid) {
  if (!(p >= 1.0) || p == kInfExponent)
    throw std::invalid_argument("weak_type_check: p must be finite and >= 1");

  MaximalReport rep{maximal_function(t, beta, f, t_grid), {}, {}, p, beta.bound, false};
  const double fnorm = lp_norm(f, p);

  bool beta_is_one = true;
  for (double s : t_grid) {
    const long n = t.steps_for(s);
    for (long k = 0; k < n && beta_is_one; ++k)
      beta_is_one = beta(static_cast<double>(k) * t.time_step()) == Complex{1.0, 0.0};
    if (!beta_is_one) break;
  }

  rep.pass = true;
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0)) throw std::invalid_argument("weak_type_check: thresholds must be positive");
    const double measure = distribution(rep.maximal_field, lambda);
    MaximalRow row;
    row.lambda = lambda;
    row.measure = measure;
    row.bound = std::pow(4.0 * beta.bound * fnorm / lambda, p);
    row.ratio = row.bound > 0.0 ? measure / row.bound : (measure > 0.0 ? kInfExponent : 0.0);
    row.pass = row.ratio <= 1.0;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);

    if (beta_is_one) {
      MaximalRow drow = row;
      drow.bound = std::pow(2.0 * fnorm / lambda, p);
      drow.ratio = drow.bound > 0.0 ? measure / drow.bound : (measure > 0.0 ? kInfExponent : 0.0);
      drow.pass = drow.ratio <= 1.0;
      rep.discrete_rows.push_back(drow);
    }
  }
  return rep;
}

std::vector<double> default_lambda_grid(const Field& f, double p, double bound_c,
                                        std::size_t count) {
  const double lo = std::max(lp_norm(f, p) * 1e-3, 1e-300);
  const double hi = std::max(bound_c * lp_norm(f, kInfExponent) * 1.1, lo * 2.0);
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    grid[i] = lo * std::pow(hi / lo, u);
  }
  return grid;
}

} // namespace ergolab
