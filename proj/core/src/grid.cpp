#include "fw/grid.hpp"

#include <fftw3.h>

#include <cmath>

#include "fw/errors.hpp"

namespace fw {

namespace {

// The FFTW planner is not reentrant; plan creation/destruction is serialized.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Grid::Grid(double half_period, int n_points)
    : half_period_(half_period), n_points_(n_points) {
  if (!(half_period > 0.0) || !std::isfinite(half_period))
    throw InvalidGridError("grid half-period must be positive and finite");
  if (n_points < 8 || n_points % 2 != 0)
    throw InvalidGridError("grid size must be even and at least 8");

  points_.resize(n_points_);
  for (int j = 0; j < n_points_; ++j)
    points_[j] = -half_period_ + dx() * static_cast<double>(j);

  std::vector<double> real_buf(n_points_);
  Spectrum complex_buf(n_points_ / 2 + 1);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_forward_ = fftw_plan_dft_r2c_1d(
      n_points_, real_buf.data(),
      reinterpret_cast<fftw_complex*>(complex_buf.data()),
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_backward_ = fftw_plan_dft_c2r_1d(
      n_points_, reinterpret_cast<fftw_complex*>(complex_buf.data()),
      real_buf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
}

Grid::~Grid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_forward_) fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  if (plan_backward_) fftw_destroy_plan(static_cast<fftw_plan>(plan_backward_));
}

GridPtr Grid::make(double half_period, int n_points) {
  return std::make_shared<const Grid>(half_period, n_points);
}

double Grid::wavenumber(int n) const {
  return M_PI * static_cast<double>(n) / half_period_;
}

Spectrum Grid::forward(const std::vector<double>& values) const {
  if (static_cast<int>(values.size()) != n_points_)
    throw InvalidFieldError("field length does not match its grid");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidFieldError("non-finite field value");

  std::vector<double> in(values);
  Spectrum out(n_modes());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_forward_), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));

  // Normalize and shift the phase reference from index 0 to x = -L, so that
  // coefficients live in the e^{i k_n x} basis: vhat_n = (-1)^n raw_n / N.
  const double inv_n = 1.0 / static_cast<double>(n_points_);
  for (int n = 0; n < n_modes(); ++n)
    out[n] *= (n % 2 == 0 ? inv_n : -inv_n);
  out[0] = std::complex<double>(out[0].real(), 0.0);
  out[n_modes() - 1] = std::complex<double>(out[n_modes() - 1].real(), 0.0);
  return out;
}

std::vector<double> Grid::backward(const Spectrum& spectrum) const {
  if (static_cast<int>(spectrum.size()) != n_modes())
    throw InvalidFieldError("spectrum length does not match its grid");
  for (const auto& c : spectrum)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw InvalidFieldError("non-finite spectral coefficient");

  Spectrum in(spectrum);
  for (int n = 1; n < n_modes(); n += 2) in[n] = -in[n];
  in[0] = std::complex<double>(in[0].real(), 0.0);
  in[n_modes() - 1] = std::complex<double>(in[n_modes() - 1].real(), 0.0);

  std::vector<double> out(n_points_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_backward_),
                       reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

GridPtr Grid::refined() const {
  std::call_once(refined_once_, [this] {
    refined_ = Grid::make(half_period_, 2 * n_points_);
  });
  return refined_;
}

}  // namespace fw
