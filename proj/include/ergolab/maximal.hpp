#ifndef ERGOLAB_MAXIMAL_HPP
#define ERGOLAB_MAXIMAL_HPP

#include <span>
#include <vector>

#include "ergolab/averages.hpp"

// Maximal functions sup_t |M_t(T,beta)(f)| over finite t grids, and the
// weak-type (p,p) bound mu{M* > lambda} <= (4 C ||f||_p / lambda)^p. The sup
// over a finite grid only lowers the left side, so a pass is sound while a
// violation is a genuine counterexample.

namespace ergolab {

// Pointwise sup over the grid of |M_t(T,beta)f|, as a real-valued field.
Field maximal_function(const Semigroup& t, const Weight& beta, const Field& f,
                       std::span<const double> t_grid);

struct MaximalRow {
  double lambda = 0.0;
  double measure = 0.0; // mu{M* > lambda}
  double bound = 0.0;   // (c ||f||_p / lambda)^p
  double ratio = 0.0;   // measure / bound
  bool pass = false;
};

struct MaximalReport {
  Field maximal_field;
  std::vector<MaximalRow> rows;          // against the weighted constant 4C
  std::vector<MaximalRow> discrete_rows; // against the constant 2, filled when beta == 1 on the grid
  double p = 1.0;
  double bound_c = 1.0;
  bool pass = false;
};

MaximalReport weak_type_check(const Semigroup& t, const Weight& beta, const Field& f, double p,
                              std::span<const double> t_grid, std::span<const double> lambda_grid);

// Log-spaced thresholds over [||f||_p * 1e-3, C ||f||_inf * 1.1].
std::vector<double> default_lambda_grid(const Field& f, double p, double bound_c,
                                        std::size_t count = 24);

} // namespace ergolab

#endif
