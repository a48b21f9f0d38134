#include "fw/spectral.hpp"

#include <cmath>

#include "fw/errors.hpp"

namespace fw {

MollifierSpec::MollifierSpec(double eps, MollifierKind kind_)
    : epsilon(eps), kind(kind_) {
  if (!(eps > 0.0) || !(eps <= 1.0) || !std::isfinite(eps))
    throw InvalidMollifierError("mollifier scale must satisfy 0 < eps <= 1");
}

double MollifierSpec::symbol(double k) const {
  switch (kind) {
    case MollifierKind::gaussian: {
      const double ek = epsilon * k;
      return std::exp(-ek * ek);
    }
    case MollifierKind::sharp_cutoff:
      return std::abs(k) <= 1.0 / epsilon ? 1.0 : 0.0;
  }
  return 1.0;
}

MollifierSpec MollifierSpec::identity() {
  return MollifierSpec(1e-12, MollifierKind::sharp_cutoff);
}

Field apply_even_multiplier(const Field& f,
                            const std::function<double(double)>& m) {
  const Spectrum& s = f.spectrum();
  const Grid& g = f.grid();
  Spectrum out(s.size());
  for (size_t n = 0; n < s.size(); ++n)
    out[n] = s[n] * m(g.wavenumber(static_cast<int>(n)));
  return Field::from_spectrum(f.grid_ptr(), std::move(out));
}

Field apply_odd_multiplier(const Field& f,
                           const std::function<double(double)>& m) {
  const Spectrum& s = f.spectrum();
  const Grid& g = f.grid();
  Spectrum out(s.size());
  for (size_t n = 0; n + 1 < s.size(); ++n)
    out[n] = std::complex<double>(0.0, m(g.wavenumber(static_cast<int>(n)))) *
             s[n];
  out.back() = 0.0;
  out[0] = std::complex<double>(0.0, 0.0);  // m odd forces m(0) = 0
  return Field::from_spectrum(f.grid_ptr(), std::move(out));
}

Field derivative(const Field& f) {
  return apply_odd_multiplier(f, [](double k) { return k; });
}

Field helmholtz_inverse(const Field& f) {
  return apply_even_multiplier(f, [](double k) { return 1.0 / (1.0 + k * k); });
}

Field nonlocal_t(const Field& f) {
  return apply_odd_multiplier(f, [](double k) { return k / (1.0 + k * k); });
}

Field second_deriv_helmholtz(const Field& f) {
  return apply_even_multiplier(
      f, [](double k) { return -k * k / (1.0 + k * k); });
}

Field mollify(const Field& f, const MollifierSpec& spec) {
  if (!(spec.epsilon > 0.0))
    throw InvalidMollifierError("mollifier scale must be positive");
  return apply_even_multiplier(f, [&](double k) { return spec.symbol(k); });
}

double sobolev_norm(const Field& f, double s) {
  const Spectrum& sp = f.spectrum();
  const Grid& g = f.grid();
  const int half = g.size() / 2;
  double sum = std::norm(sp[0]);
  for (int n = 1; n < half; ++n) {
    const double k = g.wavenumber(n);
    sum += 2.0 * std::pow(1.0 + k * k, s) * std::norm(sp[n]);
  }
  const double k_nyq = g.wavenumber(half);
  sum += std::pow(1.0 + k_nyq * k_nyq, s) * std::norm(sp[half]);
  return std::sqrt(2.0 * g.half_period() * sum);
}

Field multiply_dealiased(const Field& a, const Field& b) {
  if (a.grid_ptr().get() != b.grid_ptr().get())
    throw InvalidFieldError("fields live on different grids");
  const GridPtr fine = a.grid().refined();
  const int half = a.size() / 2;

  auto upsample = [&](const Field& f) {
    Spectrum up(fine->size() / 2 + 1, std::complex<double>(0.0, 0.0));
    const Spectrum& s = f.spectrum();
    for (int n = 0; n < half; ++n) up[n] = s[n];
    up[half] = 0.5 * s[half];  // the coarse Nyquist cosine splits in two
    return Field::from_spectrum(fine, std::move(up));
  };

  const Field fa = upsample(a);
  const Field fb = upsample(b);
  std::vector<double> prod(fine->size());
  for (int j = 0; j < fine->size(); ++j) prod[j] = fa[j] * fb[j];
  const Spectrum sp = fine->forward(prod);

  Spectrum down(a.size() / 2 + 1, std::complex<double>(0.0, 0.0));
  for (int n = 0; n < half; ++n) down[n] = sp[n];
  return Field::from_spectrum(a.grid_ptr(), std::move(down));
}

Field spectral_shift(const Field& f, double shift) {
  const Spectrum& s = f.spectrum();
  const Grid& g = f.grid();
  const int half = g.size() / 2;
  Spectrum out(s.size());
  for (int n = 0; n < half; ++n)
    out[n] = s[n] * std::polar(1.0, -g.wavenumber(n) * shift);
  // Only the cosine component of the Nyquist mode survives a shift.
  out[half] = s[half] * std::cos(g.wavenumber(half) * shift);
  return Field::from_spectrum(f.grid_ptr(), std::move(out));
}

}  // namespace fw
