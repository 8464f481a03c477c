#ifndef ERGOLAB_WEIGHTS_HPP
#define ERGOLAB_WEIGHTS_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ergolab/measure.hpp"

// Modulating functions beta for weighted ergodic averages, together with
// their trigonometric-polynomial approximants. A weight is "Besicovitch at
// infinity" ("locally Besicovitch") when its Cesaro L1 deviation from the
// n-th stored approximant stays below 1/n as t grows (shrinks).

namespace ergolab {

struct TrigTerm {
  Complex coefficient; // w_j
  double frequency;    // theta_j; the unimodular base is e^{i theta_j}
};

struct TrigPolynomial {
  std::vector<TrigTerm> terms;
};

Complex trig_eval(const TrigPolynomial& p, double s);

// Value at s = 0, i.e. the plain coefficient sum.
Complex trig_at_zero(const TrigPolynomial& p);

enum class WeightMode { besicovitch_at_infinity, locally_besicovitch, plain_bounded };

struct Weight {
  std::function<Complex(double)> evaluator;
  double bound = 1.0; // C with |beta| <= C everywhere
  std::vector<TrigPolynomial> approximants; // index k approximates at epsilon = 1/(k+1)
  WeightMode mode = WeightMode::plain_bounded;
  std::string name;

  Complex operator()(double s) const { return evaluator(s); }
  bool has_approximants() const { return !approximants.empty(); }
};

// Left-endpoint Cesaro deviation (1/n) sum_{k<n} |beta(kh) - p(kh)| with
// n = t/h. Shares the step h with the averages so the sup-norm transfer bound
// between weighted and polynomial averages is an exact inequality.
double mean_deviation(const Weight& beta, const TrigPolynomial& p, double t, double h);

enum class LimitDirection { to_infinity, to_zero };

struct DeviationRow {
  double t = 0.0;
  double deviation = 0.0;
  double running_tail_sup = 0.0; // sup of deviations from this row onward
};

struct DeviationProfile {
  std::vector<DeviationRow> rows;
  double tail_estimate = 0.0; // max deviation over the last quarter of the grid
};

// Deviation table along a t grid running to infinity (increasing) or to zero
// (decreasing). The tail estimate stands in for the limsup; it is an
// estimate, never a proof.
DeviationProfile limsup_profile(const Weight& beta, const TrigPolynomial& p,
                                LimitDirection direction, std::span<const double> t_grid,
                                double h);

// Partial Fourier sums S_1..S_n_max of a periodic weight, frequencies
// 2*pi*k/period for |k| <= n. Coefficients by adaptive quadrature to 1e-10;
// terms below 1e-12 in modulus are dropped.
std::vector<TrigPolynomial> fourier_partial_sums(const std::function<Complex(double)>& beta,
                                                 double period, int n_max);

// Canonical weight library.
namespace weights {

// beta = 1; the unweighted case, recorded with C = 1 so the unweighted
// maximal bound carries the constant 4 exactly.
Weight one();

// beta(s) = e^{i theta s}; C = 1, approximants all equal to the single term.
Weight pure_phase(double theta);

// beta = p itself; C = sup over a probe grid (plus the coefficient-sum bound).
Weight trig(TrigPolynomial p);

// Square wave sign(sin s) with the value +1 on the zero set, C = 1.1.
// Mode besicovitch_at_infinity: Fourier partial-sum approximants, order grown
// until the measured one-period deviation drops below 0.85/n for each n.
// Mode locally_besicovitch: the constant-1 polynomial for every n (the wave
// is identically 1 near 0+).
Weight square_wave(WeightMode mode = WeightMode::besicovitch_at_infinity, int max_n = 4);

// beta(s) = e^{i theta s} + 1/(1+s): Besicovitch at infinity, approximant the
// pure phase; the perturbation has Cesaro mean log(1+t)/t.
Weight phase_with_decay(double theta, int max_n = 4);

} // namespace weights

// Complex adaptive Simpson quadrature used for Fourier coefficients.
Complex integrate_adaptive(const std::function<Complex(double)>& f, double a, double b,
                           double tol = 1e-10);

} // namespace ergolab

#endif
