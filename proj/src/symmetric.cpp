#include "ergolab/symmetric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ergolab {

double RearrangementProfile::value_at(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("rearrangement is defined for t > 0");
  // level_k on (breakpoints[k-1], breakpoints[k]]
  const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), t);
  if (it == breakpoints.end()) return 0.0;
  return levels[static_cast<std::size_t>(it - breakpoints.begin())];
}

double RearrangementProfile::cumulative_at(double s) const {
  if (s <= 0.0) return 0.0;
  double prev_bp = 0.0, prev_cum = 0.0;
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    if (s <= breakpoints[k]) return prev_cum + (s - prev_bp) * levels[k];
    prev_bp = breakpoints[k];
    prev_cum = cumulative[k];
  }
  return prev_cum;
}

double RearrangementProfile::total_integral() const {
  return cumulative.empty() ? 0.0 : cumulative.back();
}

RearrangementProfile rearrange(const Field& f) {
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(f[a]) > std::abs(f[b]); });

  RearrangementProfile prof;
  double cum = 0.0, width = 0.0;
  for (std::size_t idx : order) {
    const double level = std::abs(f[idx]);
    if (level == 0.0) break;
    const double w = f.space().weight(idx);
    if (!prof.levels.empty() && prof.levels.back() == level) {
      // merge equal levels into one step
      width += w;
      cum += level * w;
      prof.breakpoints.back() += w;
      prof.cumulative.back() = cum;
      continue;
    }
    width += w;
    cum += level * w;
    prof.breakpoints.push_back(width);
    prof.levels.push_back(level);
    prof.cumulative.push_back(cum);
  }
  return prof;
}

RearrangementProfile scale_profile(const RearrangementProfile& p, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("scale_profile: factor must be positive");
  RearrangementProfile out = p;
  for (double& l : out.levels) l *= c;
  for (double& q : out.cumulative) q *= c;
  return out;
}

MajorizationResult majorizes(const RearrangementProfile& g, const RearrangementProfile& f,
                             double tol) {
  std::vector<double> points;
  points.reserve(g.breakpoints.size() + f.breakpoints.size());
  points.insert(points.end(), g.breakpoints.begin(), g.breakpoints.end());
  points.insert(points.end(), f.breakpoints.begin(), f.breakpoints.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  MajorizationResult res;
  res.worst_margin = std::numeric_limits<double>::infinity();
  if (points.empty()) { // both identically zero
    res.worst_margin = 0.0;
    res.pass = true;
    return res;
  }
  for (double s : points) {
    const double margin = g.cumulative_at(s) - f.cumulative_at(s);
    if (margin < res.worst_margin) {
      res.worst_margin = margin;
      res.at_s = s;
    }
  }
  res.pass = res.worst_margin >= -tol;
  return res;
}

MajorizationResult majorizes(const Field& g, const Field& f, double tol) {
  return majorizes(rearrange(g), rearrange(f), tol);
}

FavaReport fava_membership(const Field& f, TailClass tail, std::span<const double> lambda_probes,
                           double tail_level) {
  FavaReport rep;
  rep.member = true;
  for (double lambda : lambda_probes) {
    if (!(lambda > 0.0)) throw std::invalid_argument("fava_membership: probes must be positive");
    const bool tail_infinite = tail == TailClass::constant_tail && lambda < tail_level;
    if (tail_infinite) {
      if (rep.member) rep.failing_lambda = lambda;
      rep.member = false;
      rep.witness_infinite = true;
      continue;
    }
    rep.max_distribution = std::max(rep.max_distribution, distribution(f, lambda));
  }
  return rep;
}

std::pair<Field, Field> fava_decompose(const Field& f, double eps, TailClass tail,
                                       double tail_level) {
  if (!(eps > 0.0)) throw std::invalid_argument("fava_decompose: eps must be positive");
  const double probes[] = {eps};
  if (!fava_membership(f, tail, probes, tail_level).member)
    throw std::invalid_argument("fava_decompose: f has infinite distribution at the cut level");
  std::vector<Complex> g(f.size()), h(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f[i]) > eps) {
      g[i] = f[i];
      h[i] = Complex{0.0, 0.0};
    } else {
      g[i] = Complex{0.0, 0.0};
      h[i] = f[i];
    }
  }
  return {Field(f.space_ptr(), std::move(g)), Field(f.space_ptr(), std::move(h))};
}

double BreakpointFn::value_at(double x) const {
  if (s.size() < 2 || s.size() != v.size())
    throw std::invalid_argument("BreakpointFn: need at least two breakpoints");
  if (x <= s.front()) return v.front();
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (x <= s[k]) {
      const double u = (x - s[k - 1]) / (s[k] - s[k - 1]);
      return v[k - 1] + u * (v[k] - v[k - 1]);
    }
  }
  return v.back() + (x - s.back()) * final_slope();
}

double BreakpointFn::final_slope() const {
  const std::size_t n = s.size();
  return (v[n - 1] - v[n - 2]) / (s[n - 1] - s[n - 2]);
}

namespace {

void validate_phi(const BreakpointFn& phi) {
  if (phi.s.size() < 2 || phi.s.size() != phi.v.size())
    throw std::invalid_argument("phi: need at least two breakpoints");
  if (phi.s.front() != 0.0 || phi.v.front() != 0.0)
    throw std::invalid_argument("phi: must start at phi(0) = 0");
  for (std::size_t k = 1; k < phi.s.size(); ++k) {
    if (phi.s[k] <= phi.s[k - 1]) throw std::invalid_argument("phi: breakpoints must increase");
    if (phi.v[k] < phi.v[k - 1]) throw std::invalid_argument("phi: must be non-decreasing");
  }
  if (phi.v[1] <= 0.0)
    throw std::invalid_argument("phi: must be positive away from zero (flat start gives an infinite norm)");
}

double orlicz_young(const SymmetricNormSpec& e, double u) {
  if (e.orlicz_power) return std::pow(u, *e.orlicz_power);
  return e.orlicz_table.value_at(u);
}

double luxemburg_norm(const Field& f, const SymmetricNormSpec& e) {
  if (!e.orlicz_power) {
    const BreakpointFn& t = e.orlicz_table;
    if (t.s.size() < 2 || t.s.front() != 0.0 || t.v.front() != 0.0)
      throw std::invalid_argument("orlicz: Young table must start at Phi(0) = 0");
    for (std::size_t k = 2; k < t.s.size(); ++k) {
      const double s0 = (t.v[k - 1] - t.v[k - 2]) / (t.s[k - 1] - t.s[k - 2]);
      const double s1 = (t.v[k] - t.v[k - 1]) / (t.s[k] - t.s[k - 1]);
      if (s1 < s0 - 1e-12) throw std::invalid_argument("orlicz: Young table must be convex");
    }
  } else if (!(*e.orlicz_power >= 1.0)) {
    throw std::invalid_argument("orlicz: power must be >= 1 for convexity");
  }

  const double sup = lp_norm(f, kInfExponent);
  if (sup == 0.0) return 0.0;
  auto modular = [&](double c) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      s += orlicz_young(e, std::abs(f[i]) / c) * f.space().weight(i);
    return s;
  };
  // modular(c) is non-increasing in c; bracket inf{c : modular(c) <= 1}
  double hi = sup;
  while (modular(hi) > 1.0) hi *= 2.0;
  double lo = 0.5 * hi;
  while (lo > 1e-300 && modular(lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (modular(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

} // namespace

double symmetric_norm(const Field& f, const SymmetricNormSpec& e) {
  switch (e.kind) {
    case NormKind::lp:
      return lp_norm(f, e.p);
    case NormKind::lorentz: {
      validate_phi(e.phi);
      const RearrangementProfile prof = rearrange(f);
      double sum = 0.0, prev = 0.0;
      for (std::size_t k = 0; k < prof.breakpoints.size(); ++k) {
        const double cur = e.phi.value_at(prof.breakpoints[k]);
        sum += prof.levels[k] * (cur - prev);
        prev = cur;
      }
      return sum;
    }
    case NormKind::marcinkiewicz: {
      validate_phi(e.phi);
      const RearrangementProfile prof = rearrange(f);
      if (prof.empty()) return 0.0;
      // the ratio is monotone between breakpoints of either function, so the
      // union of breakpoints plus one far tail point carries the sup
      std::vector<double> points(prof.breakpoints);
      for (double s : e.phi.s)
        if (s > 0.0) points.push_back(s);
      points.push_back(2.0 * std::max(prof.breakpoints.back(), e.phi.s.back()));
      double sup = 0.0;
      for (double s : points) {
        const double denom = e.phi.value_at(s);
        if (denom <= 0.0) continue;
        sup = std::max(sup, prof.cumulative_at(s) / denom);
      }
      return sup;
    }
    case NormKind::orlicz:
      return luxemburg_norm(f, e);
  }
  throw std::logic_error("unreachable");
}

bool contains_one(const SymmetricNormSpec& e) {
  switch (e.kind) {
    case NormKind::lp:
      return e.p == kInfExponent;
    case NormKind::lorentz:
      if (!e.phi_total_variation_finite)
        throw std::invalid_argument("contains_one: lorentz spec lacks the total-variation declaration");
      return *e.phi_total_variation_finite;
    case NormKind::marcinkiewicz:
      if (!e.s_over_phi_bounded)
        throw std::invalid_argument("contains_one: marcinkiewicz spec lacks the s/phi declaration");
      return *e.s_over_phi_bounded;
    case NormKind::orlicz:
      if (!e.orlicz_vanishes_near_zero)
        throw std::invalid_argument("contains_one: orlicz spec lacks the vanishing declaration");
      return *e.orlicz_vanishes_near_zero;
  }
  throw std::logic_error("unreachable");
}

LimitSpaceReport limit_in_space_check(const AverageProfile& profile, const Field& f,
                                      const SymmetricNormSpec& e) {
  if (contains_one(e))
    throw std::invalid_argument("limit_in_space_check: space contains the constant one, outside the hypotheses");
  if (profile.fields.empty()) throw std::invalid_argument("limit_in_space_check: empty profile");

  const Field& last = profile.fields.back();
  LimitSpaceReport rep;
  rep.majorization = majorizes(scale_profile(rearrange(f), profile.beta_bound), rearrange(last));
  rep.limit_norm = symmetric_norm(last, e);
  rep.norm_cap = profile.beta_bound * symmetric_norm(f, e);
  rep.pass = rep.majorization.pass && rep.limit_norm <= rep.norm_cap + 1e-9;
  return rep;
}

namespace norms {

namespace {

std::string exponent_tag(double p) {
  if (p == kInfExponent) return "inf";
  if (p == std::floor(p)) return std::to_string(static_cast<long>(p));
  return std::to_string(p);
}

} // namespace

SymmetricNormSpec lp(double p) {
  SymmetricNormSpec e;
  e.kind = NormKind::lp;
  e.p = p;
  e.name = "lp" + exponent_tag(p);
  return e;
}

namespace {

BreakpointFn sqrt_table() {
  BreakpointFn t;
  for (double s : {0.0, 0.0625, 0.25, 1.0, 4.0, 16.0, 64.0, 256.0, 1024.0, 4096.0}) {
    t.s.push_back(s);
    t.v.push_back(std::sqrt(s));
  }
  return t;
}

} // namespace

SymmetricNormSpec lorentz_sqrt() {
  SymmetricNormSpec e;
  e.kind = NormKind::lorentz;
  e.phi = sqrt_table();
  e.phi_total_variation_finite = false;
  e.name = "lorentz_sqrt";
  return e;
}

SymmetricNormSpec lorentz_bounded() {
  SymmetricNormSpec e;
  e.kind = NormKind::lorentz;
  e.phi.s = {0.0, 1.0, 4096.0};
  e.phi.v = {0.0, 1.0, 1.0};
  e.phi_total_variation_finite = true;
  e.name = "lorentz_bounded";
  return e;
}

SymmetricNormSpec marcinkiewicz_sqrt() {
  SymmetricNormSpec e;
  e.kind = NormKind::marcinkiewicz;
  e.phi = sqrt_table();
  e.s_over_phi_bounded = false; // s/sqrt(s) grows without bound
  e.name = "marcinkiewicz_sqrt";
  return e;
}

SymmetricNormSpec orlicz_power(double p) {
  SymmetricNormSpec e;
  e.kind = NormKind::orlicz;
  e.orlicz_power = p;
  e.orlicz_vanishes_near_zero = false; // u^p > 0 for u > 0
  e.name = "orlicz_p" + exponent_tag(p);
  return e;
}

SymmetricNormSpec preset(const std::string& name) {
  if (name == "lp1") return lp(1.0);
  if (name == "lp2") return lp(2.0);
  if (name == "lpinf") return lp(kInfExponent);
  if (name == "lorentz_sqrt") return lorentz_sqrt();
  if (name == "lorentz_bounded") return lorentz_bounded();
  if (name == "marcinkiewicz_sqrt") return marcinkiewicz_sqrt();
  if (name == "orlicz_p2") return orlicz_power(2.0);
  throw std::invalid_argument("unknown norm preset: " + name);
}

} // namespace norms

} // namespace ergolab
