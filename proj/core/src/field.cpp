#include "fw/field.hpp"

#include <algorithm>
#include <cmath>

#include "fw/errors.hpp"

namespace fw {

namespace {

void require_same_grid(const Field& a, const Field& b) {
  if (a.empty() || b.empty())
    throw InvalidFieldError("operation on an empty field");
  if (a.grid_ptr().get() != b.grid_ptr().get())
    throw InvalidFieldError("fields live on different grids");
}

}  // namespace

Field::Field(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw InvalidFieldError("null grid");
  values_.assign(grid_->size(), 0.0);
}

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidFieldError("null grid");
  if (static_cast<int>(values_.size()) != grid_->size())
    throw InvalidFieldError("field length does not match its grid");
}

Field Field::from_function(const GridPtr& grid,
                           const std::function<double(double)>& f) {
  std::vector<double> v(grid->size());
  for (int j = 0; j < grid->size(); ++j) v[j] = f(grid->x(j));
  return Field(grid, std::move(v));
}

Field Field::from_spectrum(GridPtr grid, Spectrum spectrum) {
  Field out;
  out.grid_ = std::move(grid);
  if (!out.grid_) throw InvalidFieldError("null grid");
  out.values_ = out.grid_->backward(spectrum);
  out.spectrum_ = std::move(spectrum);
  // Keep the cache consistent with what backward() actually used.
  out.spectrum_[0].imag(0.0);
  out.spectrum_.back().imag(0.0);
  out.spectrum_valid_ = true;
  return out;
}

const Spectrum& Field::spectrum() const {
  if (!spectrum_valid_) {
    spectrum_ = grid_->forward(values_);
    spectrum_valid_ = true;
  }
  return spectrum_;
}

double Field::eval(double x) const {
  const Spectrum& s = spectrum();
  const Grid& g = *grid_;
  const int half = g.size() / 2;
  // Incremental rotation through e^{i k_1 x}.
  const std::complex<double> step = std::polar(1.0, g.wavenumber(1) * x);
  std::complex<double> rot = step;
  double acc = s[0].real();
  for (int n = 1; n < half; ++n) {
    acc += 2.0 * (s[n].real() * rot.real() - s[n].imag() * rot.imag());
    rot *= step;
  }
  // Nyquist mode enters as a pure cosine anchored at x = -L.
  const double nyq_sign = (half % 2 == 0) ? 1.0 : -1.0;
  acc += nyq_sign * s[half].real() *
         std::cos(g.wavenumber(half) * (x + g.half_period()));
  return acc;
}

double Field::mean() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum / static_cast<double>(values_.size());
}

double Field::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double Field::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Field::finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  spectrum_valid_ = false;
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  spectrum_valid_ = false;
  return *this;
}

Field& Field::operator*=(double a) {
  for (double& v : values_) v *= a;
  spectrum_valid_ = false;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double a, Field f) { return f *= a; }
Field operator-(Field f) { return f *= -1.0; }

Field pointwise_multiply(const Field& a, const Field& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (int j = 0; j < a.size(); ++j) v[j] = a[j] * b[j];
  return Field(a.grid_ptr(), std::move(v));
}

double integral(const Field& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum * f.grid().dx();
}

double l1_norm(const Field& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += std::abs(v);
  return sum * f.grid().dx();
}

double l2_norm(const Field& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v * v;
  return std::sqrt(sum * f.grid().dx());
}

}  // namespace fw
