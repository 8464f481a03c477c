#include "ergolab/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergolab {

Field KernelMatrix::apply(const Field& f) const {
  if (m_.dim() != f.size()) throw std::invalid_argument("KernelMatrix::apply: size mismatch");
  std::vector<Complex> out(f.size());
  m_.apply(f.values().data(), out.data());
  return Field(f.space_ptr(), std::move(out));
}

KernelMatrix linear_modulus(const KernelMatrix& k) {
  const std::size_t n = k.dim();
  KernelMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = Complex{std::abs(k.at(i, j)), 0.0};
  return m;
}

DsCertificate ds_certificate(const KernelMatrix& k, const MeasureSpace& space, double tol) {
  const std::size_t n = k.dim();
  if (n != space.size()) throw std::invalid_argument("ds_certificate: size mismatch");
  DsCertificate cert;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(k.at(i, j));
    cert.max_row_abs_sum = std::max(cert.max_row_abs_sum, s);
  }
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(k.at(i, j)) * space.weight(i);
    cert.max_weighted_col_sum = std::max(cert.max_weighted_col_sum, s / space.weight(j));
  }
  cert.pass = cert.max_row_abs_sum <= 1.0 + tol && cert.max_weighted_col_sum <= 1.0 + tol;
  return cert;
}

Semigroup::Semigroup(SemigroupKind kind, SpacePtr space, double h)
    : kind_(kind), space_(std::move(space)), h_(h) {
  if (!space_) throw std::invalid_argument("Semigroup: null space");
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("Semigroup: time step must be positive and finite");
}

namespace {

void require_shiftable_weights(const MeasureSpace& space) {
  // A rightward shift on a weighted space contracts l1 only when weights do
  // not increase along the shift direction.
  for (std::size_t i = 0; i + 1 < space.size(); ++i) {
    if (space.weight(i + 1) > space.weight(i))
      throw std::invalid_argument(
          "shift flow requires non-increasing cell weights along the shift direction");
  }
}

} // namespace

Semigroup Semigroup::shift_flow(SpacePtr space, double h) {
  require_shiftable_weights(*space);
  return Semigroup(SemigroupKind::shift_flow, std::move(space), h);
}

Semigroup Semigroup::twisted_shift_flow(SpacePtr space, double h, double phase_rate) {
  require_shiftable_weights(*space);
  Semigroup t(SemigroupKind::twisted_shift_flow, std::move(space), h);
  t.alpha_ = phase_rate;
  return t;
}

Semigroup Semigroup::generator_exponential(SpacePtr space, double h, std::vector<double> q) {
  const std::size_t n = space->size();
  if (q.size() != n * n)
    throw std::invalid_argument("generator_exponential: Q must be cell-count square");
  const double tol = 1e-12;
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) off += std::abs(q[i * n + j]);
    if (q[i * n + i] + off > tol)
      throw std::invalid_argument("generator_exponential: row log-norm positive, exp(sQ) not a sup-norm contraction");
  }
  for (std::size_t j = 0; j < n; ++j) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (i != j) off += std::abs(q[i * n + j]) * space->weight(i) / space->weight(j);
    if (q[j * n + j] + off > tol)
      throw std::invalid_argument("generator_exponential: column log-norm positive, exp(sQ) not an l1 contraction");
  }

  Semigroup t(SemigroupKind::generator_exponential, std::move(space), h);
  CMatrix qh(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) qh.at(i, j) = Complex{q[i * n + j] * h, 0.0};
  t.kernel_ = KernelMatrix(expm(qh));
  t.generator_ = std::move(q);
  return t;
}

Semigroup Semigroup::from_kernel(SpacePtr space, double h, KernelMatrix k) {
  if (k.dim() != space->size()) throw std::invalid_argument("from_kernel: size mismatch");
  Semigroup t(SemigroupKind::kernel_power, std::move(space), h);
  t.kernel_ = std::move(k);
  return t;
}

long Semigroup::steps_for(double s) const {
  if (s < 0.0 || !std::isfinite(s)) throw std::invalid_argument("time must be nonnegative and finite");
  const double ratio = s / h_;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio)))
    throw std::invalid_argument("time is not aligned to the semigroup grid step");
  return static_cast<long>(rounded);
}

Field Semigroup::apply(const Field& f, double s) const {
  require_same_space(f.space(), *space_);
  const long k = steps_for(s);
  const std::size_t n = f.size();
  switch (kind_) {
    case SemigroupKind::shift_flow:
    case SemigroupKind::twisted_shift_flow: {
      std::vector<Complex> out(n, Complex{0.0, 0.0});
      const Complex phase = kind_ == SemigroupKind::twisted_shift_flow
                                ? std::polar(1.0, alpha_ * s)
                                : Complex{1.0, 0.0};
      for (std::size_t i = static_cast<std::size_t>(std::min<long>(k, static_cast<long>(n)));
           i < n; ++i)
        out[i] = phase * f[i - static_cast<std::size_t>(k)];
      return Field(f.space_ptr(), std::move(out));
    }
    case SemigroupKind::generator_exponential:
    case SemigroupKind::kernel_power: {
      Field cur = f;
      for (long i = 0; i < k; ++i) cur = kernel_->apply(cur);
      return cur;
    }
  }
  throw std::logic_error("unreachable");
}

Field Semigroup::step(const Field& f) const { return apply(f, h_); }

KernelMatrix Semigroup::one_step_kernel() const {
  return kernel_ ? *kernel_ : kernel_at(h_);
}

KernelMatrix Semigroup::kernel_at(double s) const {
  const long k = steps_for(s);
  const std::size_t n = space_->size();
  switch (kind_) {
    case SemigroupKind::shift_flow:
    case SemigroupKind::twisted_shift_flow: {
      KernelMatrix m(n);
      const Complex phase = kind_ == SemigroupKind::twisted_shift_flow
                                ? std::polar(1.0, alpha_ * s)
                                : Complex{1.0, 0.0};
      for (std::size_t i = static_cast<std::size_t>(std::min<long>(k, static_cast<long>(n)));
           i < n; ++i)
        m.at(i, i - static_cast<std::size_t>(k)) = phase;
      return m;
    }
    case SemigroupKind::generator_exponential:
    case SemigroupKind::kernel_power: {
      // binary power of the one-step kernel
      CMatrix result = CMatrix::identity(n);
      CMatrix base = kernel_->matrix();
      long e = k;
      while (e > 0) {
        if (e & 1) result = matmul(result, base);
        e >>= 1;
        if (e > 0) base = matmul(base, base);
      }
      return KernelMatrix(std::move(result));
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<double> default_time_grid(const Semigroup& t, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = t.time_step() * i;
  return g;
}

DsReport verify_ds(const Semigroup& t, std::span<const Field> samples,
                   std::span<const double> s_grid, double tol) {
  if (samples.empty()) throw std::invalid_argument("verify_ds: need at least one sample");
  DsReport rep;
  rep.tolerance = tol;
  for (double s : s_grid) {
    DsRatioRow row;
    row.s = s;
    for (const Field& f : samples) {
      const double n1 = lp_norm(f, 1.0);
      const double ni = lp_norm(f, kInfExponent);
      if (n1 == 0.0) continue;
      Field g = t.apply(f, s);
      row.l1_ratio = std::max(row.l1_ratio, lp_norm(g, 1.0) / n1);
      row.linf_ratio = std::max(row.linf_ratio, lp_norm(g, kInfExponent) / ni);
    }
    rep.max_l1_ratio = std::max(rep.max_l1_ratio, row.l1_ratio);
    rep.max_linf_ratio = std::max(rep.max_linf_ratio, row.linf_ratio);
    rep.rows.push_back(row);
  }
  rep.pass = rep.max_l1_ratio <= 1.0 + tol && rep.max_linf_ratio <= 1.0 + tol;
  return rep;
}

DsReport verify_ds(const Semigroup& t, std::span<const Field> samples, double tol) {
  auto grid = default_time_grid(t);
  return verify_ds(t, samples, grid, tol);
}

SemigroupLawReport verify_semigroup(const Semigroup& t, double r, double s,
                                    std::span<const Field> samples, double tol) {
  SemigroupLawReport rep;
  for (const Field& f : samples) {
    const double n1 = lp_norm(f, 1.0);
    if (n1 == 0.0) continue;
    Field lhs = t.apply(f, r + s);
    Field rhs = t.apply(t.apply(f, s), r);
    double res = lp_norm(combine(1.0, lhs, -1.0, rhs), 1.0) / n1;
    rep.max_residual = std::max(rep.max_residual, res);
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

ContinuityReport verify_strong_continuity(const Semigroup& t, const Field& f, double p,
                                          int levels) {
  if (!(p >= 1.0) || p == kInfExponent)
    throw std::invalid_argument("verify_strong_continuity: p must be finite and >= 1");
  ContinuityReport rep;
  if (t.kind() == SemigroupKind::generator_exponential) {
    const std::vector<double>& q = *t.generator();
    const std::size_t n = t.space().size();
    for (int k = 0; k < levels; ++k) {
      const double s = t.time_step() / std::ldexp(1.0, k);
      CMatrix qs(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) qs.at(i, j) = Complex{q[i * n + j] * s, 0.0};
      Field g = KernelMatrix(expm(qs)).apply(f);
      rep.rows.push_back({s, lp_norm(combine(1.0, g, -1.0, f), p)});
    }
    return rep;
  }
  // Shift and kernel kinds exist only on the grid: report the floor value.
  rep.grid_floor = true;
  Field g = t.step(f);
  rep.rows.push_back({t.time_step(), lp_norm(combine(1.0, g, -1.0, f), p)});
  return rep;
}

} // namespace ergolab
