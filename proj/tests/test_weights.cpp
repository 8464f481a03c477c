#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ergolab/weights.hpp"
#include "testutil.hpp"

using namespace ergolab;

namespace {

constexpr double kPi = std::numbers::pi;

Weight wrap(std::function<Complex(double)> f, double bound) {
  Weight w;
  w.evaluator = std::move(f);
  w.bound = bound;
  return w;
}

} // namespace

TEST_CASE("trig_eval pointwise values") {
  TrigPolynomial p1{{{Complex{1, 0}, kPi}}};
  CHECK(trig_eval(p1, 1.0).real() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(trig_eval(p1, 1.0).imag()) < 1e-15);

  TrigPolynomial p2{{{Complex{0.5, 0.25}, 2.0}, {Complex{-1, 1}, 0.7}}};
  CHECK(trig_eval(p2, 0.0) == trig_at_zero(p2));

  TrigPolynomial p3{{{Complex{1, 0}, 0.0}, {Complex{2, 0}, kPi}}};
  CHECK(trig_eval(p3, 2.0).real() == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("mean deviation vanishes when the weight is its own approximant") {
  TrigPolynomial p{{{Complex{0.4, -0.2}, 1.1}, {Complex{0.3, 0.0}, -0.6}}};
  Weight beta = weights::trig(p);
  CHECK(mean_deviation(beta, p, 8.0, 0.5) == 0.0);

  TrigPolynomial constant{{{Complex{1, 0}, 0.0}}};
  CHECK(mean_deviation(weights::one(), constant, 5.0, 1.0) == 0.0);

  CHECK_THROWS_AS(mean_deviation(beta, p, -1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(mean_deviation(beta, p, 0.75, 0.5), std::invalid_argument);
}

TEST_CASE("square wave vs first Fourier term matches a refined quadrature") {
  Weight sq = weights::square_wave();
  TrigPolynomial s1{{{Complex{0.0, -2.0 / kPi}, 1.0}, {Complex{0.0, 2.0 / kPi}, -1.0}}};
  const double h = kPi / 100.0;
  const double t = h * 100 * 100; // 50 periods
  const double coarse = mean_deviation(sq, s1, t, h);
  CHECK(coarse > 0.0);
  CHECK(coarse < 0.45);
  const double fine = mean_deviation(sq, s1, t, h / 16.0);
  CHECK(coarse == doctest::Approx(fine).epsilon(1e-3));
}

TEST_CASE("limsup profile toward infinity tracks the closed-form Cesaro mean") {
  // beta = e^{is} + 1/(1+s); the perturbation has mean log(1+t)/t
  Weight beta = weights::phase_with_decay(1.0);
  TrigPolynomial phase{{{Complex{1, 0}, 1.0}}};
  const double h = 2.5e-4;
  std::vector<double> grid;
  for (double t : {400.0, 600.0, 800.0}) grid.push_back(std::round(t / h) * h);
  DeviationProfile prof = limsup_profile(beta, phase, LimitDirection::to_infinity, grid, h);
  for (const DeviationRow& row : prof.rows) {
    const double closed = std::log1p(row.t) / row.t;
    CHECK(std::abs(row.deviation - closed) < 1e-6);
  }
  CHECK(prof.tail_estimate < 0.02);
}

TEST_CASE("limsup profile toward zero with a linear perturbation") {
  // beta = e^{is} + s; the left sums of the identity have mean (t - h)/2
  Weight beta = wrap([](double s) { return std::polar(1.0, s) + Complex{s, 0.0}; }, 10.0);
  TrigPolynomial phase{{{Complex{1, 0}, 1.0}}};
  const double h = 0.25;
  const std::vector<double> grid = {8.0, 4.0, 2.0, 1.0, 0.5, 0.25};
  DeviationProfile prof = limsup_profile(beta, phase, LimitDirection::to_zero, grid, h);
  for (const DeviationRow& row : prof.rows)
    CHECK(row.deviation == doctest::Approx((row.t - h) / 2.0).epsilon(1e-12));
  CHECK(prof.tail_estimate == 0.0); // the t = h entry has only the k = 0 term

  CHECK_THROWS_AS(limsup_profile(beta, phase, LimitDirection::to_infinity, grid, h),
                  std::invalid_argument);
}

TEST_CASE("mean deviation never exceeds the sup of the gap on the grid") {
  Weight beta = weights::square_wave();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ergolab::Rng rng(seed);
    TrigPolynomial p;
    for (int j = 0; j < 3; ++j)
      p.terms.push_back({Complex{rng.uniform(), rng.uniform()}, rng.uniform(-2.0, 2.0)});
    const double h = 0.5;
    const double t = 16.0;
    double sup = 0.0;
    for (long k = 0; k < 32; ++k)
      sup = std::max(sup, std::abs(beta(k * h) - trig_eval(p, k * h)));
    CHECK(mean_deviation(beta, p, t, h) <= sup + 1e-15);
  }
}

TEST_CASE("fourier partial sums recover an eigenfunction and a constant") {
  auto phase = [](double s) { return std::polar(1.0, 2.0 * kPi * s); };
  auto sums = fourier_partial_sums(phase, 1.0, 1);
  REQUIRE(sums.size() == 1);
  REQUIRE(sums[0].terms.size() == 1);
  CHECK(sums[0].terms[0].frequency == doctest::Approx(2.0 * kPi).epsilon(1e-15));
  CHECK(std::abs(sums[0].terms[0].coefficient - Complex{1.0, 0.0}) < 1e-9);

  auto constant = [](double) { return Complex{0.75, -0.5}; };
  auto csum = fourier_partial_sums(constant, 2.0, 2);
  REQUIRE(csum.size() == 2);
  for (const auto& p : csum) {
    REQUIRE(p.terms.size() == 1);
    CHECK(p.terms[0].frequency == 0.0);
    CHECK(std::abs(p.terms[0].coefficient - Complex{0.75, -0.5}) < 1e-9);
  }

  CHECK_THROWS_AS(fourier_partial_sums(constant, 0.0, 1), std::invalid_argument);
}

TEST_CASE("square-wave Fourier deviations shrink with the order") {
  Weight sq = weights::square_wave();
  auto sums = fourier_partial_sums([&](double s) { return sq(s); }, 2.0 * kPi, 9);
  const double h = kPi / 512.0;
  const double period = h * 1024;
  const double dev1 = mean_deviation(sq, sums[0], period, h);
  const double dev9 = mean_deviation(sq, sums[8], period, h);
  CHECK(dev9 < dev1);
  // non-increasing along the whole order range
  double prev = dev1;
  for (std::size_t n = 1; n < sums.size(); ++n) {
    const double cur = mean_deviation(sq, sums[n], period, h);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("library weights satisfy the defining deviation property") {
  const double h = kPi / 64.0;
  std::vector<double> grid;
  for (int k = 1; k <= 8; ++k) grid.push_back(h * 128 * 25 * k); // multiples of 25 periods

  for (Weight beta : {weights::pure_phase(1.3), weights::square_wave(),
                      weights::phase_with_decay(0.7)}) {
    REQUIRE(beta.mode == WeightMode::besicovitch_at_infinity);
    REQUIRE(beta.has_approximants());
    for (std::size_t i = 0; i < beta.approximants.size(); ++i) {
      DeviationProfile prof =
          limsup_profile(beta, beta.approximants[i], LimitDirection::to_infinity, grid, h);
      CHECK(prof.tail_estimate < 1.0 / static_cast<double>(i + 1) + 1e-3);
    }
  }
}

TEST_CASE("locally Besicovitch square wave approximates the constant near zero") {
  Weight sq = weights::square_wave(WeightMode::locally_besicovitch);
  REQUIRE(sq.has_approximants());
  const double h = 1.0 / 128.0;
  const std::vector<double> grid = {1.0, 0.5, 0.25, 0.125, h};
  DeviationProfile prof =
      limsup_profile(sq, sq.approximants.back(), LimitDirection::to_zero, grid, h);
  CHECK(prof.tail_estimate == 0.0); // identically one on (0, pi)
  CHECK(sq(0.0) == Complex{1.0, 0.0});
}

TEST_CASE("weight bounds hold on sampled points") {
  for (const Weight& w : {weights::one(), weights::pure_phase(2.2), weights::square_wave(),
                          weights::phase_with_decay(1.0)}) {
    for (double s = 0.0; s < 50.0; s += 0.37) CHECK(std::abs(w(s)) <= w.bound + 1e-12);
  }
}
