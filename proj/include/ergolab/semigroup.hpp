#ifndef ERGOLAB_SEMIGROUP_HPP
#define ERGOLAB_SEMIGROUP_HPP

#include <optional>
#include <span>
#include <vector>

#include "ergolab/linalg.hpp"
#include "ergolab/measure.hpp"

// Concrete semigroups {T_s} of Dunford-Schwartz operators: simultaneous
// contractions of the weighted l1 and sup norms. Continuous time is
// restricted to integer multiples of the grid step h so that the semigroup
// law T_{r+s} = T_r T_s holds exactly; fractional times are rejected rather
// than interpolated.

namespace ergolab {

enum class SemigroupKind {
  shift_flow,            // T_{kh}: shift k cells toward higher positions, mass off the end dropped
  twisted_shift_flow,    // e^{i*alpha*s} times the shift; DS but not positive
  generator_exponential, // T_s = exp(sQ) for a sub-conservative generator Q
  kernel_power           // T_{kh} = K^k for a user-supplied one-step kernel (not validated)
};

// Dense one-step operator acting on Field values. Rows map output cells,
// columns input cells: (Kf)_i = sum_j K_ij f_j.
class KernelMatrix {
public:
  KernelMatrix() = default;
  explicit KernelMatrix(CMatrix m) : m_(std::move(m)) {}
  explicit KernelMatrix(std::size_t n) : m_(n) {}

  static KernelMatrix identity(std::size_t n) { return KernelMatrix(CMatrix::identity(n)); }

  std::size_t dim() const { return m_.dim(); }
  Complex& at(std::size_t i, std::size_t j) { return m_.at(i, j); }
  const Complex& at(std::size_t i, std::size_t j) const { return m_.at(i, j); }
  const CMatrix& matrix() const { return m_; }

  Field apply(const Field& f) const;

private:
  CMatrix m_;
};

// Entrywise absolute values: the smallest positive operator dominating K,
// with |K f| <= |K|(|f|) pointwise.
KernelMatrix linear_modulus(const KernelMatrix& k);

struct DsCertificate {
  bool pass = false;
  double max_row_abs_sum = 0.0;      // sup-norm contraction certificate
  double max_weighted_col_sum = 0.0; // weighted l1 contraction certificate
};

// Checks row absolute sums <= 1 + tol and weight-scaled column absolute sums
// sum_i |K_ij| w_i / w_j <= 1 + tol. On uniform weights the column test is the
// plain column sum.
DsCertificate ds_certificate(const KernelMatrix& k, const MeasureSpace& space,
                             double tol = 1e-12);

class Semigroup {
public:
  static Semigroup shift_flow(SpacePtr space, double h);
  static Semigroup twisted_shift_flow(SpacePtr space, double h, double phase_rate);
  // Q row-major, dim == cell count; validated sub-conservative on rows and
  // (weight-scaled) columns so that exp(sQ) is DS for every s >= 0.
  static Semigroup generator_exponential(SpacePtr space, double h, std::vector<double> q);
  // One-step kernel semigroup T_{kh} = K^k. The kernel is taken as-is; run
  // verify_ds to certify it.
  static Semigroup from_kernel(SpacePtr space, double h, KernelMatrix k);

  SemigroupKind kind() const { return kind_; }
  double time_step() const { return h_; }
  const SpacePtr& space_ptr() const { return space_; }
  const MeasureSpace& space() const { return *space_; }
  double phase_rate() const { return alpha_; }

  // Number of grid steps for time s; throws on s < 0 or misalignment
  // (relative tolerance 1e-9).
  long steps_for(double s) const;

  Field apply(const Field& f, double s) const;
  Field step(const Field& f) const; // T_h

  // Materialized matrix of T_s. For shift kinds this is the phase-weighted
  // partial permutation; for matrix kinds the repeated-squaring power of the
  // one-step kernel. Pure, so concurrent callers need no locking.
  KernelMatrix kernel_at(double s) const;
  KernelMatrix one_step_kernel() const;
  // Row-major generator Q; present only for the generator_exponential kind.
  const std::optional<std::vector<double>>& generator() const { return generator_; }

private:
  Semigroup(SemigroupKind kind, SpacePtr space, double h);

  SemigroupKind kind_;
  SpacePtr space_;
  double h_;
  double alpha_ = 0.0;
  std::optional<KernelMatrix> kernel_; // one-step kernel for matrix kinds
  std::optional<std::vector<double>> generator_;
};

struct DsRatioRow {
  double s = 0.0;
  double l1_ratio = 0.0;
  double linf_ratio = 0.0;
};

struct DsReport {
  bool pass = false;
  double tolerance = 1e-9;
  double max_l1_ratio = 0.0;
  double max_linf_ratio = 0.0;
  std::vector<DsRatioRow> rows; // worst ratios over samples, per s
};

// Default verification grid: s = 0, h, ..., 8h.
std::vector<double> default_time_grid(const Semigroup& t, int count = 9);

// Contraction certification over samples and a time grid: every ratio
// ||T_s f||_1 / ||f||_1 and ||T_s f||_inf / ||f||_inf must be <= 1 + tol.
DsReport verify_ds(const Semigroup& t, std::span<const Field> samples,
                   std::span<const double> s_grid, double tol = 1e-9);
DsReport verify_ds(const Semigroup& t, std::span<const Field> samples, double tol = 1e-9);

struct SemigroupLawReport {
  bool pass = false;
  double max_residual = 0.0; // max ||T_{r+s}f - T_r T_s f||_1 / ||f||_1
};

SemigroupLawReport verify_semigroup(const Semigroup& t, double r, double s,
                                    std::span<const Field> samples, double tol = 1e-9);

struct ContinuityRow {
  double s = 0.0;
  double deviation = 0.0; // ||T_s f - f||_p
};

struct ContinuityReport {
  bool grid_floor = false; // shift kinds: s cannot go below h; row reports the floor value
  std::vector<ContinuityRow> rows;
};

// Strong continuity probe. Generator kind: s = h/2^k for k = 0..levels-1 via
// fresh exponentials, values must tail off toward 0. Shift kinds: the single
// row s = h, flagged as the grid resolution floor.
ContinuityReport verify_strong_continuity(const Semigroup& t, const Field& f, double p,
                                          int levels = 6);

} // namespace ergolab

#endif
