#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fw/grid.hpp"

namespace fw {

// Real periodic scalar field: values at the collocation points together with
// a lazily computed half-spectrum. Fields are value types; copies are
// independent. A single instance is not meant to be shared across threads
// (the spectrum cache is mutable), but distinct copies are.
class Field {
public:
  Field() = default;
  explicit Field(GridPtr grid);  // zero field
  Field(GridPtr grid, std::vector<double> values);

  static Field from_function(const GridPtr& grid,
                             const std::function<double(double)>& f);
  static Field from_spectrum(GridPtr grid, Spectrum spectrum);

  bool empty() const { return !grid_; }
  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int size() const { return grid_ ? grid_->size() : 0; }

  std::span<const double> values() const { return values_; }
  double operator[](int j) const { return values_[j]; }
  const Spectrum& spectrum() const;

  // Trigonometric interpolation; exact for band-limited data, periodic in x.
  double eval(double x) const;

  double mean() const;
  double min_value() const;
  double max_value() const;
  double max_abs() const;
  bool finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double a);

private:
  GridPtr grid_;
  std::vector<double> values_;
  mutable Spectrum spectrum_;
  mutable bool spectrum_valid_ = false;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double a, Field f);
Field operator-(Field f);

// Plain collocation product (no de-aliasing).
Field pointwise_multiply(const Field& a, const Field& b);

// Trapezoid quadrature on the periodic grid (dx * sum).
double integral(const Field& f);
double l1_norm(const Field& f);
double l2_norm(const Field& f);

}  // namespace fw
