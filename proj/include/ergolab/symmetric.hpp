#ifndef ERGOLAB_SYMMETRIC_HPP
#define ERGOLAB_SYMMETRIC_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/averages.hpp"
#include "ergolab/measure.hpp"

// Non-increasing rearrangements f*, Hardy-Littlewood majorization, the space
// of functions with finite distribution at every level, and the
// rearrangement-invariant norm family (Lp, Lorentz, Marcinkiewicz, Orlicz).

namespace ergolab {

// Step form of f*: value levels[k] on (breakpoints[k-1], breakpoints[k]]
// (with breakpoints[-1] = 0), zero beyond the last breakpoint. Levels are
// strictly decreasing; cumulative[k] = integral of f* over (0, breakpoints[k]].
struct RearrangementProfile {
  std::vector<double> breakpoints;
  std::vector<double> levels;
  std::vector<double> cumulative;

  double value_at(double t) const;      // f*(t) for t > 0
  double cumulative_at(double s) const; // integral_0^s f*, piecewise linear
  double total_integral() const;        // = ||f||_1
  bool empty() const { return breakpoints.empty(); }
};

// Sort cells by modulus descending (ties by cell index), accumulate weights
// into breakpoints. Cells with zero value are dropped; f* vanishes past the
// support measure.
RearrangementProfile rearrange(const Field& f);

RearrangementProfile scale_profile(const RearrangementProfile& p, double c);

struct MajorizationResult {
  bool pass = false;
  double worst_margin = 0.0; // min over s of (integral g* - integral f*)
  double at_s = 0.0;
};

// Hardy-Littlewood pairwise comparison f << g: integral_0^s f* <= integral_0^s g*
// for every s. Both cumulatives are piecewise linear, so checking the union
// of breakpoints is exact.
MajorizationResult majorizes(const RearrangementProfile& g, const RearrangementProfile& f,
                             double tol = 1e-12);
MajorizationResult majorizes(const Field& g, const Field& f, double tol = 1e-12);

// Declared behavior of |f| beyond the truncated grid.
enum class TailClass {
  finite_support, // the truncation is the whole function
  harmonic_decay, // |f|(x) ~ a/(1+|x|): finite distribution at every level
  constant_tail   // |f| -> c > 0: infinite distribution below c
};

struct FavaReport {
  bool member = false;
  bool witness_infinite = false; // some probe level has infinite distribution
  double max_distribution = 0.0; // over the probe grid (truncated part)
  double failing_lambda = 0.0;
};

// Membership in the space {f : mu{|f| > lambda} < inf for all lambda > 0}.
// The truncation alone cannot see an infinite distribution, so the declared
// tail class decides; tail_level is the asymptotic level c for constant_tail.
FavaReport fava_membership(const Field& f, TailClass tail, std::span<const double> lambda_probes,
                           double tail_level = 0.0);

// Split f = g + h with g = f on {|f| > eps} and ||h||_inf <= eps; the
// reassembly is an exact identity. Throws when the declared tail makes the
// distribution at the cut level infinite, since g would then carry infinite
// mass.
std::pair<Field, Field> fava_decompose(const Field& f, double eps,
                                       TailClass tail = TailClass::finite_support,
                                       double tail_level = 0.0);

// Piecewise-linear scalar function from a breakpoint table; extrapolates the
// final slope beyond the last breakpoint.
struct BreakpointFn {
  std::vector<double> s;
  std::vector<double> v;
  double value_at(double x) const;
  double final_slope() const;
};

enum class NormKind { lp, lorentz, marcinkiewicz, orlicz };

// Rearrangement-invariant norm specification. The breakpoint tables define
// the norms on the truncation; behavior at infinity, which the truncation
// cannot see, enters only through the declared asymptotic flags used by
// contains_one. The Orlicz Young function may be given analytically (power p)
// so that Luxemburg values can be compared to closed forms.
struct SymmetricNormSpec {
  NormKind kind = NormKind::lp;
  double p = 1.0;                     // lp
  BreakpointFn phi;                   // lorentz / marcinkiewicz
  std::optional<double> orlicz_power; // Phi(u) = u^p
  BreakpointFn orlicz_table;          // Phi as a table when no power is set

  std::optional<bool> phi_total_variation_finite; // lorentz: integral d(phi) < inf
  std::optional<bool> s_over_phi_bounded;         // marcinkiewicz: s/phi(s) bounded at inf
  std::optional<bool> orlicz_vanishes_near_zero;  // orlicz: Phi == 0 on (0, u] for some u > 0

  std::string name;
};

namespace norms {
SymmetricNormSpec lp(double p);
SymmetricNormSpec lorentz_sqrt();      // phi(s) = sqrt(s) as a dyadic table; unbounded variation
SymmetricNormSpec lorentz_bounded();   // phi(s) = min(s, 1); finite total variation
SymmetricNormSpec marcinkiewicz_sqrt();
SymmetricNormSpec orlicz_power(double p);
// Resolve a preset by name ("lp1", "lp2", "lpinf", "lorentz_sqrt",
// "lorentz_bounded", "marcinkiewicz_sqrt", "orlicz_p2"); throws on unknown.
SymmetricNormSpec preset(const std::string& name);
} // namespace norms

// lp: the plain norm. lorentz: integral f* d(phi) as a Stieltjes sum over the
// profile breakpoints. marcinkiewicz: sup_s (1/phi(s)) integral_0^s f*.
// orlicz: Luxemburg functional inf{c > 0 : sum Phi(|f|/c) w <= 1} by bisection
// to 1e-10 relative width.
double symmetric_norm(const Field& f, const SymmetricNormSpec& e);

// Symbolic test for whether the constant-one function on the infinite-model
// space belongs to E, from the declared asymptotics. Throws when the needed
// declaration is missing.
bool contains_one(const SymmetricNormSpec& e);

struct LimitSpaceReport {
  bool pass = false;
  MajorizationResult majorization; // last average << C * f
  double limit_norm = 0.0;         // ||last average||_E
  double norm_cap = 0.0;           // C ||f||_E
};

// Fully-symmetric inclusion check for the limit candidate: the final profile
// entry must be majorized by C f and its E-norm bounded by C ||f||_E. Rejects
// specs containing the constant one (outside the theorem's hypotheses).
LimitSpaceReport limit_in_space_check(const AverageProfile& profile, const Field& f,
                                      const SymmetricNormSpec& e);

} // namespace ergolab

#endif
