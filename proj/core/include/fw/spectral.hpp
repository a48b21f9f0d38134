#pragma once

#include <functional>

#include "fw/field.hpp"

namespace fw {

enum class MollifierKind { gaussian, sharp_cutoff };

// Fourier-symbol mollifier family J_eps. The symbol is 1 at k = 0, takes
// values in [0, 1] and is non-increasing in |k|.
struct MollifierSpec {
  double epsilon = 1.0;
  MollifierKind kind = MollifierKind::gaussian;

  MollifierSpec() = default;
  MollifierSpec(double eps, MollifierKind kind_);

  double symbol(double k) const;

  // Sharp cutoff far above any resolvable wavenumber; J_eps acts as the
  // identity on every grid in practical use.
  static MollifierSpec identity();
};

// Mode-wise application of a real even symbol m(k).
Field apply_even_multiplier(const Field& f,
                            const std::function<double(double)>& m);

// Mode-wise application of i*m(k) with m real and odd; the Nyquist bin is
// zeroed (its sine partner is not representable on the grid).
Field apply_odd_multiplier(const Field& f,
                           const std::function<double(double)>& m);

Field derivative(const Field& f);              // symbol i k
Field helmholtz_inverse(const Field& f);       // symbol 1/(1+k^2)
Field nonlocal_t(const Field& f);              // symbol i k/(1+k^2), zero mean
Field second_deriv_helmholtz(const Field& f);  // symbol -k^2/(1+k^2)

Field mollify(const Field& f, const MollifierSpec& spec);

// Discrete H^s norm, sqrt(2L * sum (1+k^2)^s |vhat|^2); at s = 0 it equals
// the trapezoid L^2 quadrature.
double sobolev_norm(const Field& f, double s);

// Collocation product with 2/3-rule zero padding onto the refined grid.
// Exact for quadratic nonlinearities except the Nyquist bin, which is
// dropped (consistently with the odd multipliers above).
Field multiply_dealiased(const Field& a, const Field& b);

// f(x - shift) via phase rotation of the spectrum.
Field spectral_shift(const Field& f, double shift);

}  // namespace fw
