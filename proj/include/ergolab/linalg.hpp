#ifndef ERGOLAB_LINALG_HPP
#define ERGOLAB_LINALG_HPP

#include <complex>
#include <cstddef>
#include <vector>

// Minimal dense complex linear algebra: just enough for kernel matrices on
// spaces of a few thousand cells and for the Pade matrix exponential.

namespace ergolab {

class CMatrix {
public:
  CMatrix() = default;
  explicit CMatrix(std::size_t n) : n_(n), a_(n * n, std::complex<double>{0.0, 0.0}) {}

  static CMatrix identity(std::size_t n);

  std::size_t dim() const { return n_; }
  std::complex<double>& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const std::complex<double>& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const std::vector<std::complex<double>>& data() const { return a_; }
  std::vector<std::complex<double>>& data() { return a_; }

  CMatrix& operator+=(const CMatrix& rhs);
  CMatrix& operator*=(std::complex<double> c);

  void apply(const std::complex<double>* x, std::complex<double>* y) const; // y = A x

  double one_norm() const;      // max column absolute sum
  double inf_norm() const;      // max row absolute sum

private:
  std::size_t n_ = 0;
  std::vector<std::complex<double>> a_;
};

CMatrix matmul(const CMatrix& a, const CMatrix& b);

// Solve A X = B in place via LU with partial pivoting. Throws on singular A.
CMatrix lu_solve(CMatrix a, const CMatrix& b);

// exp(A) by scaling and squaring with diagonal Pade approximants
// (degrees 3/5/7/9/13, theta thresholds per the standard double-precision
// backward-error analysis, ~1e-16 unit roundoff target).
CMatrix expm(const CMatrix& a);

} // namespace ergolab

#endif
