#include "ergolab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergolab {

using Cx = std::complex<double>;

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Cx{1.0, 0.0};
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& rhs) {
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += rhs.a_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Cx c) {
  for (auto& v : a_) v *= c;
  return *this;
}

void CMatrix::apply(const Cx* x, Cx* y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    Cx s{0.0, 0.0};
    const Cx* row = a_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

double CMatrix::one_norm() const {
  double m = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += std::abs(at(i, j));
    m = std::max(m, s);
  }
  return m;
}

double CMatrix::inf_norm() const {
  double m = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += std::abs(at(i, j));
    m = std::max(m, s);
  }
  return m;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  const std::size_t n = a.dim();
  if (n != b.dim()) throw std::invalid_argument("matmul: dimension mismatch");
  CMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Cx aik = a.at(i, k);
      if (aik == Cx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < n; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  }
  return c;
}

CMatrix lu_solve(CMatrix a, const CMatrix& b) {
  const std::size_t n = a.dim();
  if (n != b.dim()) throw std::invalid_argument("lu_solve: dimension mismatch");
  std::vector<std::size_t> piv(n);
  for (std::size_t i = 0; i < n; ++i) piv[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a.at(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      double v = std::abs(a.at(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) throw std::runtime_error("lu_solve: singular matrix");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
      std::swap(piv[k], piv[p]);
    }
    const Cx pivot = a.at(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Cx m = a.at(i, k) / pivot;
      a.at(i, k) = m;
      for (std::size_t j = k + 1; j < n; ++j) a.at(i, j) -= m * a.at(k, j);
    }
  }

  CMatrix x(n);
  // forward/back substitution column by column
  std::vector<Cx> col(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) col[i] = b.at(piv[i], c);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) col[i] -= a.at(i, j) * col[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) col[i] -= a.at(i, j) * col[j];
      col[i] /= a.at(i, i);
    }
    for (std::size_t i = 0; i < n; ++i) x.at(i, c) = col[i];
  }
  return x;
}

namespace {

CMatrix pade_expm(const CMatrix& a, int degree) {
  static const double coef13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                  1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                  670442572800.0,      33522128640.0,       1323241920.0,
                                  40840800.0,          960960.0,            16380.0,
                                  182.0,               1.0};
  const std::size_t n = a.dim();
  std::vector<double> c;
  switch (degree) {
    case 3: c = {120, 60, 12, 1}; break;
    case 5: c = {30240, 15120, 3360, 420, 30, 1}; break;
    case 7: c = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1}; break;
    case 9:
      c = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
           2162160.0,     110880.0,     3960.0,       90.0,        1.0};
      break;
    default: c.assign(coef13, coef13 + 14); break;
  }

  // U = A * (odd part), V = even part; exp(A) ~ (V - U)^{-1} (V + U)
  CMatrix a2 = matmul(a, a);
  CMatrix u(n), v(n);
  if (degree <= 9) {
    CMatrix pow = CMatrix::identity(n); // A^0
    CMatrix usum(n), vsum(n);
    for (int k = 0; 2 * k + 1 <= degree; ++k) {
      // pow = A^{2k}
      CMatrix tu = pow;
      tu *= Cx{c[static_cast<std::size_t>(2 * k + 1)], 0.0};
      usum += tu;
      CMatrix tv = pow;
      tv *= Cx{c[static_cast<std::size_t>(2 * k)], 0.0};
      vsum += tv;
      if (2 * k + 3 <= degree + 1) pow = matmul(pow, a2);
    }
    u = matmul(a, usum);
    v = vsum;
  } else {
    CMatrix a4 = matmul(a2, a2);
    CMatrix a6 = matmul(a2, a4);
    CMatrix w1(n), w2(n), z1(n), z2(n);
    auto axpy = [&](CMatrix& dst, const CMatrix& m, double s) {
      CMatrix t = m;
      t *= Cx{s, 0.0};
      dst += t;
    };
    axpy(w1, a6, c[13]);
    axpy(w1, a4, c[11]);
    axpy(w1, a2, c[9]);
    axpy(w2, a6, c[7]);
    axpy(w2, a4, c[5]);
    axpy(w2, a2, c[3]);
    w2 += [&] {
      CMatrix id = CMatrix::identity(n);
      id *= Cx{c[1], 0.0};
      return id;
    }();
    CMatrix w = matmul(a6, w1);
    w += w2;
    u = matmul(a, w);
    axpy(z1, a6, c[12]);
    axpy(z1, a4, c[10]);
    axpy(z1, a2, c[8]);
    axpy(z2, a6, c[6]);
    axpy(z2, a4, c[4]);
    axpy(z2, a2, c[2]);
    z2 += [&] {
      CMatrix id = CMatrix::identity(n);
      id *= Cx{c[0], 0.0};
      return id;
    }();
    v = matmul(a6, z1);
    v += z2;
  }

  CMatrix num = v;
  num += u;
  CMatrix den = v;
  CMatrix neg_u = u;
  neg_u *= Cx{-1.0, 0.0};
  den += neg_u;
  return lu_solve(std::move(den), num);
}

} // namespace

CMatrix expm(const CMatrix& a) {
  const double theta3 = 1.495585217958292e-2;
  const double theta5 = 2.539398330063230e-1;
  const double theta7 = 9.504178996162932e-1;
  const double theta9 = 2.097847961257068e0;
  const double theta13 = 5.371920351148152e0;

  const double nrm = a.one_norm();
  if (nrm <= theta3) return pade_expm(a, 3);
  if (nrm <= theta5) return pade_expm(a, 5);
  if (nrm <= theta7) return pade_expm(a, 7);
  if (nrm <= theta9) return pade_expm(a, 9);

  int s = 0;
  double scaled = nrm;
  while (scaled > theta13) {
    scaled /= 2.0;
    ++s;
  }
  CMatrix b = a;
  b *= Cx{std::ldexp(1.0, -s), 0.0};
  CMatrix e = pade_expm(b, 13);
  for (int k = 0; k < s; ++k) e = matmul(e, e);
  return e;
}

} // namespace ergolab
