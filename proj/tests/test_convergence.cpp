#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ergolab/convergence.hpp"
#include "testutil.hpp"

using namespace ergolab;

namespace {

std::vector<std::pair<double, Field>> delta_average_family(const SpacePtr& space, int t_max) {
  Semigroup t = Semigroup::shift_flow(space, 1.0);
  Field f = Field::delta(space, 0);
  std::vector<double> grid;
  for (int k = 1; k <= t_max; ++k) grid.push_back(k);
  AverageProfile prof = average_profile(t, weights::one(), f, grid);
  std::vector<std::pair<double, Field>> family;
  for (std::size_t i = 0; i < prof.fields.size(); ++i)
    family.emplace_back(prof.t_grid[i], prof.fields[i]);
  return family;
}

// Exhaustive optimum of the kept-set sup over all masks within the budget.
double brute_force_kept_sup(const std::vector<double>& dev, const MeasureSpace& space,
                            double epsilon) {
  const std::size_t n = dev.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    double removed = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i))
        removed += space.weight(i);
      else
        sup = std::max(sup, dev[i]);
    }
    if (removed <= epsilon) best = std::min(best, sup);
  }
  return best;
}

} // namespace

TEST_CASE("zero deviations keep every cell") {
  auto space = MeasureSpace::integer_range(5);
  Field zero = Field::zero(space);
  std::vector<std::pair<double, Field>> family = {{1.0, zero}, {2.0, zero}};
  EgorovReport rep = egorov_search(family, zero, 0.5, std::vector<double>{1.0, 2.0});
  CHECK(rep.removed_measure == 0.0);
  CHECK(rep.kept.excluded_count() == 0);
  for (const auto& [t0, sup] : rep.tail_sup) CHECK(sup == 0.0);
  CHECK(rep.pass);
  CHECK_THROWS_AS(egorov_search(family, zero, 0.0, std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("shifted delta Egorov set matches the closed form") {
  auto space = MeasureSpace::integer_range(32);
  auto family = delta_average_family(space, 32);
  // tail starts at t0 = 4: D(x) = 1 / max(4, x+1)
  std::vector<std::pair<double, Field>> tail(family.begin() + 3, family.end());
  std::vector<double> t0_grid;
  for (int k = 4; k <= 32; ++k) t0_grid.push_back(k);
  EgorovReport rep = egorov_search(tail, Field::zero(space), 2.0, t0_grid);

  CHECK(rep.removed_measure == 2.0);
  // greedy removes the first two of the four tied cells {0,1,2,3}
  CHECK_FALSE(rep.kept.included(0));
  CHECK_FALSE(rep.kept.included(1));
  CHECK(rep.kept.included(2));
  for (const auto& [t0, sup] : rep.tail_sup) CHECK(sup == 1.0 / t0);
  CHECK_FALSE(rep.pass); // 1/32 is still above the default 1e-3 threshold
}

TEST_CASE("a single heavy cell is removed first") {
  auto space = MeasureSpace::create({0, 1, 2}, {1.0, 5.0, 1.0});
  std::vector<Complex> v = {Complex{0.1, 0}, Complex{100.0, 0}, Complex{0.2, 0}};
  std::vector<std::pair<double, Field>> family = {{1.0, Field(space, v)}};
  EgorovReport rep = egorov_search(family, Field::zero(space), 5.0, std::vector<double>{1.0});
  CHECK_FALSE(rep.kept.included(1));
  CHECK(rep.kept.included(0));
  CHECK(rep.kept.included(2));
  CHECK(rep.tail_sup[0].second == 0.2);
}

TEST_CASE("greedy kept-set sup equals the exhaustive optimum") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto space = testutil::dyadic_weight_space(10, seed);
    ergolab::Rng rng(seed * 13);
    std::vector<double> dev(10);
    std::vector<Complex> values(10);
    for (std::size_t i = 0; i < 10; ++i) {
      dev[i] = (rng.uniform() + 1.0) * 0.5;
      values[i] = Complex{dev[i], 0.0};
    }
    const double epsilon = 0.25 + (rng.uniform() + 1.0) * 2.0;
    std::vector<std::pair<double, Field>> family = {{1.0, Field(space, values)}};
    EgorovReport rep = egorov_search(family, Field::zero(space), epsilon,
                                     std::vector<double>{1.0});
    CHECK(rep.removed_measure <= epsilon);
    CHECK(rep.tail_sup[0].second == brute_force_kept_sup(dev, *space, epsilon));
  }
}

TEST_CASE("mean convergence table") {
  auto space = MeasureSpace::integer_range(48);
  Semigroup t = Semigroup::shift_flow(space, 1.0);
  Field f = testutil::random_field(space, 6);

  SUBCASE("identity at one step") {
    auto rows = mean_convergence_table(t, weights::one(), f, 1.0, std::vector<double>{1.0}, f);
    CHECK(rows[0].value == 0.0);
  }

  SUBCASE("l1 mass of the delta averages does not decay in the flow") {
    Field d = Field::delta(space, 0);
    std::vector<double> grid = {4.0, 8.0, 16.0, 32.0};
    auto rows = mean_convergence_table(t, weights::one(), d, 1.0, grid, Field::zero(space));
    for (const NormRow& r : rows) CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    // while the sup norm decays like 1/t
    auto sup_rows = mean_convergence_table(t, weights::one(), d, 1.0, grid, Field::zero(space));
    Field m32 = ergodic_average(t, weights::one(), d, 32.0);
    CHECK(lp_norm(m32, kInfExponent) == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
  }
}

TEST_CASE("local limit identification") {
  auto space = MeasureSpace::integer_range(24);
  const std::vector<double> down = {16.0, 8.0, 4.0, 2.0, 1.0};

  SUBCASE("pure phase forces lambda = 1 at the floor") {
    Semigroup t = Semigroup::shift_flow(space, 1.0);
    Field f = testutil::random_field(space, 9);
    ConvergenceReport rep =
        identify_local_limit(t, weights::pure_phase(1.4), f, 2.0, down, 0.5);
    REQUIRE(rep.lambda_estimate.has_value());
    CHECK(std::abs(*rep.lambda_estimate - Complex{1.0, 0.0}) <= 1e-12);
    CHECK(rep.lambda_gap <= rep.transfer_tolerance + 1e-9);
    CHECK(rep.pass);
  }

  SUBCASE("trig polynomial weight returns its coefficient sum exactly") {
    Semigroup t = Semigroup::twisted_shift_flow(space, 1.0, 0.5);
    TrigPolynomial p{{{Complex{0.25, 0.5}, 1.0}, {Complex{0.5, -0.25}, -2.0}}};
    Field f = testutil::random_field(space, 10);
    ConvergenceReport rep = identify_local_limit(t, weights::trig(p), f, 2.0, down, 0.5);
    CHECK(std::abs(*rep.lambda_estimate - trig_at_zero(p)) <= 1e-12);
    CHECK(std::abs(*rep.approximant_at_zero - trig_at_zero(p)) == 0.0);
  }

  SUBCASE("square wave near zero approximates the constant one") {
    Semigroup t = Semigroup::shift_flow(space, 1.0);
    Field f = testutil::random_field(space, 11);
    ConvergenceReport rep = identify_local_limit(
        t, weights::square_wave(WeightMode::locally_besicovitch), f, 2.0, down, 0.5);
    CHECK(std::abs(*rep.lambda_estimate - Complex{1.0, 0.0}) <= 1e-12);
    CHECK(rep.pass);
  }

  SUBCASE("zero function is rejected") {
    Semigroup t = Semigroup::shift_flow(space, 1.0);
    CHECK_THROWS_AS(
        identify_local_limit(t, weights::pure_phase(1.0), Field::zero(space), 2.0, down, 0.5),
        std::invalid_argument);
  }
}

TEST_CASE("flow reports") {
  auto space = MeasureSpace::integer_range(64);
  std::vector<double> grid;
  for (int k = 4; k <= 48; k += 4) grid.push_back(k);

  SUBCASE("shift flow with the known zero limit") {
    Semigroup t = Semigroup::shift_flow(space, 1.0);
    ConvergenceReport rep = flow_convergence_report(t, weights::one(), Field::delta(space, 0),
                                                    1.0, grid, 2.0, Field::zero(space), 0.05);
    REQUIRE(rep.egorov.has_value());
    for (const auto& [t0, sup] : rep.egorov->tail_sup) CHECK(sup <= 1.0 / t0 + 1e-12);
    CHECK(rep.pass);
  }

  SUBCASE("invariant function has zero Cauchy gaps") {
    Semigroup t = Semigroup::from_kernel(space, 1.0, KernelMatrix::identity(64));
    // integer values: accumulation and division stay exact, so the gap is 0
    ergolab::Rng rng(4);
    std::vector<Complex> v(64);
    for (Complex& c : v)
      c = Complex{static_cast<double>(rng.next() % 17), static_cast<double>(rng.next() % 7)};
    Field f(space, std::move(v));
    ConvergenceReport rep = flow_convergence_report(t, weights::one(), f, 1.0, grid, 1.0);
    for (const auto& [t0, sup] : rep.egorov->tail_sup) CHECK(sup == 0.0);
    CHECK(rep.pass);
  }

  SUBCASE("a counter-twisted weight reduces to the unweighted flow") {
    const double alpha = 0.85;
    Semigroup twisted = Semigroup::twisted_shift_flow(space, 1.0, alpha);
    Semigroup plain = Semigroup::shift_flow(space, 1.0);
    Field f = testutil::random_field(space, 16);
    ConvergenceReport canceled = flow_convergence_report(
        twisted, weights::pure_phase(-alpha), f, 1.0, grid, 1.5, std::nullopt, 0.05);
    ConvergenceReport reference = flow_convergence_report(
        plain, weights::one(), f, 1.0, grid, 1.5, std::nullopt, 0.05);
    REQUIRE(canceled.egorov->tail_sup.size() == reference.egorov->tail_sup.size());
    for (std::size_t i = 0; i < canceled.egorov->tail_sup.size(); ++i)
      CHECK(canceled.egorov->tail_sup[i].second ==
            doctest::Approx(reference.egorov->tail_sup[i].second).epsilon(1e-12));
  }
}

TEST_CASE("sup-norm transfer bound is an exact inequality") {
  auto space = MeasureSpace::integer_range(20);
  const Semigroup kinds[] = {Semigroup::shift_flow(space, 0.5),
                             Semigroup::twisted_shift_flow(space, 0.5, 1.1)};
  Weight sq = weights::square_wave();
  for (const Semigroup& t : kinds) {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      Field f = testutil::random_field(space, seed);
      for (const TrigPolynomial& p : sq.approximants) {
        auto [lhs, rhs] = transfer_bound(t, sq, p, f, 8.0);
        CHECK(lhs <= rhs + 1e-12);
      }
    }
  }
}
