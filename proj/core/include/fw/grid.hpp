#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <vector>

namespace fw {

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

// Half-spectrum of a real field, modes n = 0..N/2, in the basis
//   v(x) = sum_n vhat_n e^{i k_n x},   k_n = pi n / L.
using Spectrum = std::vector<std::complex<double>>;

// Uniform periodic grid on [-L, L) with cached FFT plans.
// Immutable after construction and safe to share between threads; the
// transforms may be called concurrently on distinct buffers.
class Grid {
public:
  Grid(double half_period, int n_points);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  static GridPtr make(double half_period, int n_points);

  double half_period() const { return half_period_; }
  int size() const { return n_points_; }
  double dx() const { return 2.0 * half_period_ / n_points_; }
  double x(int j) const { return points_[j]; }
  const std::vector<double>& points() const { return points_; }

  // k_n for integer n in [-N/2, N/2); the stored half-spectrum covers n >= 0.
  double wavenumber(int n) const;
  int n_modes() const { return n_points_ / 2 + 1; }
  double max_wavenumber() const { return wavenumber(n_points_ / 2); }

  Spectrum forward(const std::vector<double>& values) const;
  std::vector<double> backward(const Spectrum& spectrum) const;

  // Same period, doubled resolution; used for de-aliased products.
  GridPtr refined() const;

private:
  double half_period_;
  int n_points_;
  std::vector<double> points_;
  void* plan_forward_ = nullptr;   // fftw plans, opaque here
  void* plan_backward_ = nullptr;
  mutable GridPtr refined_;
  mutable std::once_flag refined_once_;
};

}  // namespace fw
