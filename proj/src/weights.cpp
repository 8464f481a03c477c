#include "ergolab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ergolab {

Complex trig_eval(const TrigPolynomial& p, double s) {
  Complex v{0.0, 0.0};
  for (const TrigTerm& t : p.terms) v += t.coefficient * std::polar(1.0, t.frequency * s);
  return v;
}

Complex trig_at_zero(const TrigPolynomial& p) {
  Complex v{0.0, 0.0};
  for (const TrigTerm& t : p.terms) v += t.coefficient;
  return v;
}

namespace {

long aligned_steps(double t, double h) {
  if (!(t > 0.0)) throw std::invalid_argument("time horizon must be positive");
  const double ratio = t / h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("time horizon is not aligned to the grid step");
  if (rounded < 1.0) throw std::invalid_argument("time horizon is below one grid step");
  return static_cast<long>(rounded);
}

} // namespace

double mean_deviation(const Weight& beta, const TrigPolynomial& p, double t, double h) {
  const long n = aligned_steps(t, h);
  double sum = 0.0;
  for (long k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) * h;
    sum += std::abs(beta(s) - trig_eval(p, s));
  }
  return sum / static_cast<double>(n);
}

DeviationProfile limsup_profile(const Weight& beta, const TrigPolynomial& p,
                                LimitDirection direction, std::span<const double> t_grid,
                                double h) {
  if (t_grid.empty()) throw std::invalid_argument("limsup_profile: empty grid");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    const bool ok = direction == LimitDirection::to_infinity ? t_grid[i] < t_grid[i + 1]
                                                             : t_grid[i] > t_grid[i + 1];
    if (!ok)
      throw std::invalid_argument(
          "limsup_profile: grid must be increasing (to_infinity) or decreasing (to_zero)");
  }

  DeviationProfile out;
  out.rows.resize(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    out.rows[i].t = t_grid[i];
    out.rows[i].deviation = mean_deviation(beta, p, t_grid[i], h);
  }
  double sup = 0.0;
  for (std::size_t i = t_grid.size(); i-- > 0;) {
    sup = std::max(sup, out.rows[i].deviation);
    out.rows[i].running_tail_sup = sup;
  }
  const std::size_t quarter = std::max<std::size_t>(1, t_grid.size() / 4);
  for (std::size_t i = t_grid.size() - quarter; i < t_grid.size(); ++i)
    out.tail_estimate = std::max(out.tail_estimate, out.rows[i].deviation);
  return out;
}

namespace {

Complex simpson_step(const std::function<Complex(double)>& f, double a, Complex fa, double b,
                     Complex fb, Complex fm, Complex whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const Complex flm = f(0.5 * (a + m));
  const Complex frm = f(0.5 * (m + b));
  const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Complex sum = left + right;
  if (depth <= 0 || std::abs(sum - whole) <= 15.0 * tol) return sum + (sum - whole) / 15.0;
  return simpson_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

Complex integrate_adaptive(const std::function<Complex(double)>& f, double a, double b,
                           double tol) {
  const Complex fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, fm, whole, tol, 48);
}

std::vector<TrigPolynomial> fourier_partial_sums(const std::function<Complex(double)>& beta,
                                                 double period, int n_max) {
  if (!(period > 0.0)) throw std::invalid_argument("fourier_partial_sums: period must be positive");
  if (n_max < 1) throw std::invalid_argument("fourier_partial_sums: n_max must be >= 1");
  const double base = 2.0 * std::numbers::pi / period;

  // Pre-split the period into panels finer than the fastest oscillation;
  // without this the dyadic Simpson points can alias e^{-iks} to a constant.
  const int panels = std::max(16, 6 * n_max);
  std::vector<Complex> coef(static_cast<std::size_t>(2 * n_max + 1));
  for (int k = -n_max; k <= n_max; ++k) {
    auto integrand = [&](double s) { return beta(s) * std::polar(1.0, -base * k * s); };
    Complex total{0.0, 0.0};
    for (int j = 0; j < panels; ++j) {
      const double a = period * j / panels;
      const double b = period * (j + 1) / panels;
      total += integrate_adaptive(integrand, a, b, 1e-10 / panels);
    }
    coef[static_cast<std::size_t>(k + n_max)] = total / period;
  }

  std::vector<TrigPolynomial> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    TrigPolynomial p;
    for (int k = -n; k <= n; ++k) {
      const Complex c = coef[static_cast<std::size_t>(k + n_max)];
      if (std::abs(c) < 1e-12) continue;
      p.terms.push_back({c, base * k});
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace weights {

Weight one() {
  Weight w;
  w.evaluator = [](double) { return Complex{1.0, 0.0}; };
  w.bound = 1.0;
  w.mode = WeightMode::plain_bounded;
  w.name = "one";
  TrigPolynomial p;
  p.terms.push_back({Complex{1.0, 0.0}, 0.0});
  w.approximants.assign(4, p);
  return w;
}

Weight pure_phase(double theta) {
  Weight w;
  w.evaluator = [theta](double s) { return std::polar(1.0, theta * s); };
  w.bound = 1.0;
  w.mode = WeightMode::besicovitch_at_infinity;
  w.name = "pure_phase";
  TrigPolynomial p;
  p.terms.push_back({Complex{1.0, 0.0}, theta});
  w.approximants.assign(4, p);
  return w;
}

Weight trig(TrigPolynomial p) {
  Weight w;
  TrigPolynomial copy = p;
  w.evaluator = [copy](double s) { return trig_eval(copy, s); };
  double coef_sum = 0.0;
  for (const TrigTerm& t : p.terms) coef_sum += std::abs(t.coefficient);
  w.bound = coef_sum;
  w.mode = WeightMode::besicovitch_at_infinity;
  w.name = "trig";
  w.approximants.assign(4, std::move(p));
  return w;
}

namespace {

Complex square_wave_eval(double s) {
  return std::sin(s) >= 0.0 ? Complex{1.0, 0.0} : Complex{-1.0, 0.0};
}

double period_mean_deviation(const std::function<Complex(double)>& beta,
                             const TrigPolynomial& p, double period, int samples = 4000) {
  double sum = 0.0;
  const double h = period / samples;
  for (int k = 0; k < samples; ++k) {
    const double s = (k + 0.5) * h;
    sum += std::abs(beta(s) - trig_eval(p, s));
  }
  return sum / samples;
}

} // namespace

Weight square_wave(WeightMode mode, int max_n) {
  Weight w;
  w.evaluator = [](double s) { return square_wave_eval(s); };
  w.bound = 1.1;
  w.mode = mode;
  w.name = "square_wave";

  if (mode == WeightMode::locally_besicovitch) {
    TrigPolynomial p;
    p.terms.push_back({Complex{1.0, 0.0}, 0.0});
    w.approximants.assign(static_cast<std::size_t>(max_n), p);
    return w;
  }

  // sign(sin s) = (4/pi) sum_{odd k} sin(ks)/k; grow the truncation order per
  // approximant index until the measured one-period deviation is safely below
  // the target 1/n.
  const double pi = std::numbers::pi;
  auto partial_sum = [&](int order) {
    TrigPolynomial p;
    for (int k = 1; k <= order; k += 2) {
      const Complex c{0.0, -2.0 / (pi * k)}; // 2/(i pi k)
      p.terms.push_back({c, static_cast<double>(k)});
      p.terms.push_back({-c, static_cast<double>(-k)});
    }
    return p;
  };

  int order = 1;
  for (int n = 1; n <= max_n; ++n) {
    const double target = 0.85 / n;
    TrigPolynomial p = partial_sum(order);
    while (period_mean_deviation(w.evaluator, p, 2.0 * pi) >= target && order < 399) {
      order += 2;
      p = partial_sum(order);
    }
    w.approximants.push_back(std::move(p));
  }
  return w;
}

Weight phase_with_decay(double theta, int max_n) {
  Weight w;
  w.evaluator = [theta](double s) {
    return std::polar(1.0, theta * s) + Complex{1.0 / (1.0 + s), 0.0};
  };
  w.bound = 2.0;
  w.mode = WeightMode::besicovitch_at_infinity;
  w.name = "phase_with_decay";
  TrigPolynomial p;
  p.terms.push_back({Complex{1.0, 0.0}, theta});
  w.approximants.assign(static_cast<std::size_t>(max_n), p);
  return w;
}

} // namespace weights

} // namespace ergolab
