#include "ergolab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ergolab {

MeasureSpace::MeasureSpace(std::vector<long long> cells, std::vector<double> weights,
                           std::string label)
    : cells_(std::move(cells)), weights_(std::move(weights)), label_(std::move(label)) {
  for (double w : weights_) total_ += w;
}

std::shared_ptr<const MeasureSpace> MeasureSpace::create(std::vector<long long> cells,
                                                         std::vector<double> weights,
                                                         std::string label) {
  if (cells.empty()) throw std::invalid_argument("MeasureSpace: empty cell list");
  if (cells.size() != weights.size())
    throw std::invalid_argument("MeasureSpace: cells/weights length mismatch");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("MeasureSpace: weights must be strictly positive and finite");
  }
  return std::shared_ptr<const MeasureSpace>(
      new MeasureSpace(std::move(cells), std::move(weights), std::move(label)));
}

std::shared_ptr<const MeasureSpace> MeasureSpace::integer_range(std::size_t count, double weight,
                                                                std::string label) {
  std::vector<long long> cells(count);
  for (std::size_t i = 0; i < count; ++i) cells[i] = static_cast<long long>(i);
  return create(std::move(cells), std::vector<double>(count, weight), std::move(label));
}

bool MeasureSpace::infinite_model() const {
  return label_.find("infinite-model") != std::string::npos;
}

Field::Field(SpacePtr space, std::vector<Complex> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw std::invalid_argument("Field: null space");
  if (values_.size() != space_->size())
    throw std::invalid_argument("Field: value count does not match cell count");
  for (const Complex& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("Field: non-finite value");
  }
}

Field Field::zero(SpacePtr space) {
  std::size_t n = space->size();
  return Field(std::move(space), std::vector<Complex>(n, Complex{0.0, 0.0}));
}

Field Field::delta(SpacePtr space, std::size_t index, Complex amplitude) {
  std::size_t n = space->size();
  if (index >= n) throw std::invalid_argument("Field::delta: index out of range");
  std::vector<Complex> v(n, Complex{0.0, 0.0});
  v[index] = amplitude;
  return Field(std::move(space), std::move(v));
}

SubsetMask::SubsetMask(SpacePtr space, std::vector<bool> included)
    : space_(std::move(space)), included_(std::move(included)) {
  if (!space_) throw std::invalid_argument("SubsetMask: null space");
  if (included_.size() != space_->size())
    throw std::invalid_argument("SubsetMask: flag count does not match cell count");
}

SubsetMask SubsetMask::all(SpacePtr space, bool value) {
  std::size_t n = space->size();
  return SubsetMask(std::move(space), std::vector<bool>(n, value));
}

double SubsetMask::included_measure() const {
  double m = 0.0;
  for (std::size_t i = 0; i < included_.size(); ++i)
    if (included_[i]) m += space_->weight(i);
  return m;
}

double SubsetMask::excluded_measure() const {
  double m = 0.0;
  for (std::size_t i = 0; i < included_.size(); ++i)
    if (!included_[i]) m += space_->weight(i);
  return m;
}

std::size_t SubsetMask::excluded_count() const {
  std::size_t c = 0;
  for (bool b : included_)
    if (!b) ++c;
  return c;
}

void require_same_space(const MeasureSpace& a, const MeasureSpace& b) {
  if (&a != &b) throw std::invalid_argument("operands live on different measure spaces");
}

double lp_norm(const Field& f, double p) {
  if (std::isnan(p) || p < 1.0) throw std::invalid_argument("lp_norm: exponent must satisfy p >= 1");
  const auto& space = f.space();
  if (p == kInfExponent) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (space.weight(i) > 0.0) m = std::max(m, std::abs(f[i]));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::abs(f[i]) * space.weight(i);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]) * space.weight(i);
    return std::sqrt(s);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]), p) * space.weight(i);
  return std::pow(s, 1.0 / p);
}

double distribution(const Field& f, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("distribution: lambda must be positive");
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f[i]) > lambda) m += f.space().weight(i);
  return m;
}

Field restrict_to(const Field& f, const SubsetMask& g) {
  require_same_space(f.space(), g.space());
  std::vector<Complex> v(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!g.included(i)) v[i] = Complex{0.0, 0.0};
  return Field(f.space_ptr(), std::move(v));
}

Field combine(Complex a, const Field& f, Complex b, const Field& g) {
  require_same_space(f.space(), g.space());
  std::vector<Complex> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * f[i] + b * g[i];
  return Field(f.space_ptr(), std::move(v));
}

Complex inner_product(const Field& f, const Field& g) {
  require_same_space(f.space(), g.space());
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]) * f.space().weight(i);
  return s;
}

Field abs_field(const Field& f) {
  std::vector<Complex> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = Complex{std::abs(f[i]), 0.0};
  return Field(f.space_ptr(), std::move(v));
}

} // namespace ergolab
