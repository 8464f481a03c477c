#ifndef ERGOLAB_MEASURE_HPP
#define ERGOLAB_MEASURE_HPP

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

// Discretized sigma-finite measure spaces and complex measurable functions.
//
// The continuum is modeled by finitely many weighted atoms ("cells"); every
// almost-everywhere statement becomes a statement over all cells, so the
// operator inequalities exercised elsewhere hold exactly instead of up to
// quadrature error. A space whose label contains "infinite-model" stands for
// a truncation of an infinite measure space; no operation here assumes the
// total measure is small or even bounded.

namespace ergolab {

using Complex = std::complex<double>;

class MeasureSpace {
public:
  // Throws std::invalid_argument on empty cell list, non-positive or
  // non-finite weights, or length mismatch.
  static std::shared_ptr<const MeasureSpace> create(std::vector<long long> cells,
                                                    std::vector<double> weights,
                                                    std::string label = {});

  // Cells 0..count-1 with one uniform weight. Counting measure by default.
  static std::shared_ptr<const MeasureSpace> integer_range(std::size_t count,
                                                           double weight = 1.0,
                                                           std::string label = {});

  std::size_t size() const { return cells_.size(); }
  std::span<const long long> cells() const { return cells_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::string& label() const { return label_; }
  double total_measure() const { return total_; }
  bool infinite_model() const;

private:
  MeasureSpace(std::vector<long long> cells, std::vector<double> weights, std::string label);
  std::vector<long long> cells_;
  std::vector<double> weights_;
  std::string label_;
  double total_ = 0.0;
};

using SpacePtr = std::shared_ptr<const MeasureSpace>;

// A complex-valued function on a MeasureSpace. Immutable; all entries finite.
class Field {
public:
  Field(SpacePtr space, std::vector<Complex> values);

  static Field zero(SpacePtr space);
  // Unit point mass at cell position `index` (by position, not cell id).
  static Field delta(SpacePtr space, std::size_t index, Complex amplitude = 1.0);

  const MeasureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::span<const Complex> values() const { return values_; }
  Complex operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

private:
  SpacePtr space_;
  std::vector<Complex> values_;
};

// Per-cell inclusion flags; models the Egorov set G and its complement.
class SubsetMask {
public:
  SubsetMask(SpacePtr space, std::vector<bool> included);
  static SubsetMask all(SpacePtr space, bool value = true);

  const MeasureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  bool included(std::size_t i) const { return included_[i]; }
  std::size_t size() const { return included_.size(); }
  double included_measure() const;
  double excluded_measure() const;
  std::size_t excluded_count() const;

private:
  SpacePtr space_;
  std::vector<bool> included_;
};

inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

// ||f||_p. For finite p >= 1: (sum |f|^p w)^(1/p); for p = inf: max |f| over
// cells of positive weight. Throws std::invalid_argument for p < 1.
double lp_norm(const Field& f, double p);

// mu{|f| > lambda}, strict inequality. lambda must be > 0.
double distribution(const Field& f, double lambda);

// Multiplication by the characteristic function of G.
Field restrict_to(const Field& f, const SubsetMask& g);

// a*f + b*g, pointwise. Spaces must match.
Field combine(Complex a, const Field& f, Complex b, const Field& g);

// sum f_i * conj(g_i) * w_i
Complex inner_product(const Field& f, const Field& g);

// Pointwise modulus as a real-valued field.
Field abs_field(const Field& f);

// Shared-space check used across modules; throws std::invalid_argument.
void require_same_space(const MeasureSpace& a, const MeasureSpace& b);

} // namespace ergolab

#endif
