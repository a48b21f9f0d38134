#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fw/errors.hpp"
#include "fw/spectral.hpp"
#include "test_util.hpp"

using namespace fw;
using testutil::max_abs_diff;
using testutil::random_field;

TEST_CASE("grid invariants") {
  auto g = Grid::make(M_PI, 64);
  CHECK(g->size() == 64);
  CHECK(g->x(0) == doctest::Approx(-M_PI).epsilon(1e-15));
  for (int j = 1; j < g->size(); ++j) {
    CHECK(g->x(j) > g->x(j - 1));
    CHECK(g->x(j) - g->x(j - 1) == doctest::Approx(g->dx()).epsilon(1e-14));
  }
  CHECK(g->wavenumber(0) == 0.0);
  CHECK(g->wavenumber(1) == doctest::Approx(1.0));
  CHECK(g->wavenumber(32) == doctest::Approx(32.0));

  CHECK_THROWS_AS(Grid::make(M_PI, 6), InvalidGridError);
  CHECK_THROWS_AS(Grid::make(M_PI, 9), InvalidGridError);
  CHECK_THROWS_AS(Grid::make(0.0, 64), InvalidGridError);
}

TEST_CASE("transform round trip and Parseval") {
  auto g = Grid::make(M_PI, 128);
  std::mt19937 rng(42);
  Field f = random_field(g, rng);

  SUBCASE("constant concentrates at k = 0") {
    Field one = Field::from_function(g, [](double) { return 1.0; });
    const Spectrum& s = one.spectrum();
    CHECK(std::abs(s[0] - std::complex<double>(1.0, 0.0)) < 1e-14);
    for (size_t n = 1; n < s.size(); ++n) CHECK(std::abs(s[n]) < 1e-14);
  }

  SUBCASE("cos(x) lives on mode 1") {
    Field c = Field::from_function(g, [](double x) { return std::cos(x); });
    const Spectrum& s = c.spectrum();
    CHECK(std::abs(s[1] - std::complex<double>(0.5, 0.0)) < 1e-14);
    for (size_t n = 0; n < s.size(); ++n)
      if (n != 1) CHECK(std::abs(s[n]) < 1e-13);
  }

  SUBCASE("random round trip to 1e-12") {
    Field back = Field::from_spectrum(g, f.spectrum());
    CHECK(max_abs_diff(f, back) < 1e-12 * std::max(1.0, f.max_abs()));
  }

  SUBCASE("Parseval: H^0 equals trapezoid L^2") {
    CHECK(sobolev_norm(f, 0.0) ==
          doctest::Approx(l2_norm(f)).epsilon(1e-12));
  }

  SUBCASE("non-finite input is rejected") {
    std::vector<double> v(g->size(), 0.0);
    v[3] = std::nan("");
    Field bad(g, std::move(v));
    CHECK_THROWS_AS(bad.spectrum(), InvalidFieldError);
  }
}

TEST_CASE("trigonometric interpolation") {
  auto g = Grid::make(M_PI, 64);
  std::mt19937 rng(7);
  Field f = random_field(g, rng);
  for (int j = 0; j < g->size(); j += 5)
    CHECK(f.eval(g->x(j)) == doctest::Approx(f[j]).epsilon(1e-12));
  // Exact off-grid values for a band-limited function.
  Field c3 = Field::from_function(g, [](double x) { return std::cos(3 * x); });
  for (double x : {0.123, -2.5, 3.0, 9.9})
    CHECK(c3.eval(x) == doctest::Approx(std::cos(3 * x)).epsilon(1e-12));
}

TEST_CASE("derivative") {
  auto g = Grid::make(M_PI, 64);
  Field s1 = Field::from_function(g, [](double x) { return std::sin(x); });
  Field c1 = Field::from_function(g, [](double x) { return std::cos(x); });
  CHECK(max_abs_diff(derivative(s1), c1) < 1e-12);

  Field cst = Field::from_function(g, [](double) { return 4.2; });
  CHECK(derivative(cst).max_abs() < 1e-13);

  // analytic differentiation oracle
  Field s3 = Field::from_function(g, [](double x) { return std::sin(3 * x); });
  Field d3 =
      Field::from_function(g, [](double x) { return 3.0 * std::cos(3 * x); });
  CHECK(max_abs_diff(derivative(s3), d3) < 1e-12);
}

TEST_CASE("helmholtz inverse") {
  auto g = Grid::make(M_PI, 64);
  Field cst = Field::from_function(g, [](double) { return -1.7; });
  CHECK(max_abs_diff(helmholtz_inverse(cst), cst) < 1e-13);

  Field c1 = Field::from_function(g, [](double x) { return std::cos(x); });
  Field half = 0.5 * c1;
  CHECK(max_abs_diff(helmholtz_inverse(c1), half) < 1e-13);

  // multiplier table oracle: 1/(1+4) at k = 2
  Field c2 = Field::from_function(g, [](double x) { return std::cos(2 * x); });
  CHECK(max_abs_diff(helmholtz_inverse(c2), (1.0 / 5.0) * c2) < 1e-13);

  // (I - dxx) result = f, second derivative taken spectrally
  Field r = helmholtz_inverse(c2);
  Field resid = r - derivative(derivative(r)) - c2;
  CHECK(resid.max_abs() < 1e-12);

  CHECK(std::abs(helmholtz_inverse(c2).mean() - c2.mean()) < 1e-14);
}

TEST_CASE("nonlocal T") {
  auto g = Grid::make(M_PI, 64);
  Field cst = Field::from_function(g, [](double) { return 2.0; });
  CHECK(nonlocal_t(cst).max_abs() < 1e-13);

  Field s1 = Field::from_function(g, [](double x) { return std::sin(x); });
  Field c1 = Field::from_function(g, [](double x) { return std::cos(x); });
  CHECK(max_abs_diff(nonlocal_t(s1), 0.5 * c1) < 1e-13);

  Field s2 = Field::from_function(g, [](double x) { return std::sin(2 * x); });
  Field c2 = Field::from_function(g, [](double x) { return std::cos(2 * x); });
  CHECK(max_abs_diff(nonlocal_t(s2), 0.4 * c2) < 1e-13);

  std::mt19937 rng(3);
  Field f = random_field(g, rng);
  CHECK(max_abs_diff(nonlocal_t(f), derivative(helmholtz_inverse(f))) < 1e-13);
  CHECK(std::abs(nonlocal_t(f).mean()) < 1e-14);
}

TEST_CASE("second derivative of helmholtz inverse") {
  auto g = Grid::make(M_PI, 64);
  Field cst = Field::from_function(g, [](double) { return 3.0; });
  CHECK(second_deriv_helmholtz(cst).max_abs() < 1e-13);

  Field c1 = Field::from_function(g, [](double x) { return std::cos(x); });
  CHECK(max_abs_diff(second_deriv_helmholtz(c1), -0.5 * c1) < 1e-13);

  // operator identity oracle
  std::mt19937 rng(11);
  Field f = random_field(g, rng);
  Field lhs = second_deriv_helmholtz(f);
  Field rhs = helmholtz_inverse(f) - f;
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("multiplier consistency over all modes") {
  auto g = Grid::make(M_PI, 64);
  const int half = g->size() / 2;
  for (int n = 0; n <= half; ++n) {
    const double k = g->wavenumber(n);
    Field c = Field::from_function(g, [&](double x) { return std::cos(k * x); });
    Field s = Field::from_function(g, [&](double x) { return std::sin(k * x); });
    // T cos(kx) = -k/(1+k^2) sin(kx); T sin(kx) = k/(1+k^2) cos(kx).
    const double t = k / (1.0 + k * k);
    if (n < half) {
      CHECK(max_abs_diff(nonlocal_t(c), -t * s) < 1e-12);
      CHECK(max_abs_diff(nonlocal_t(s), t * c) < 1e-12);
    } else {
      // the Nyquist sine vanishes at the nodes, so T cos must too
      CHECK(nonlocal_t(c).max_abs() < 1e-12);
    }
    CHECK(max_abs_diff(helmholtz_inverse(c), (1.0 / (1.0 + k * k)) * c) <
          1e-12);
    CHECK(max_abs_diff(second_deriv_helmholtz(c),
                       (-k * k / (1.0 + k * k)) * c) < 1e-12);
  }
}

TEST_CASE("multiplier operators commute") {
  auto g = Grid::make(2.0, 64);
  std::mt19937 rng(5);
  Field f = random_field(g, rng);
  CHECK(max_abs_diff(nonlocal_t(helmholtz_inverse(f)),
                     helmholtz_inverse(nonlocal_t(f))) < 1e-12);
  CHECK(max_abs_diff(derivative(second_deriv_helmholtz(f)),
                     second_deriv_helmholtz(derivative(f))) < 1e-12);
  MollifierSpec mol(0.5, MollifierKind::gaussian);
  CHECK(max_abs_diff(mollify(nonlocal_t(f), mol),
                     nonlocal_t(mollify(f, mol))) < 1e-12);
}

TEST_CASE("mollifier") {
  auto g = Grid::make(M_PI, 64);

  SUBCASE("validation") {
    CHECK_THROWS_AS(MollifierSpec(0.0, MollifierKind::gaussian),
                    InvalidMollifierError);
    CHECK_THROWS_AS(MollifierSpec(-1.0, MollifierKind::sharp_cutoff),
                    InvalidMollifierError);
    CHECK_THROWS_AS(MollifierSpec(1.5, MollifierKind::gaussian),
                    InvalidMollifierError);
  }

  SUBCASE("symbol shape") {
    for (MollifierKind kind :
         {MollifierKind::gaussian, MollifierKind::sharp_cutoff}) {
      MollifierSpec m(0.3, kind);
      CHECK(m.symbol(0.0) == 1.0);
      double prev = 1.0;
      for (double k = 0.5; k < 40.0; k += 0.5) {
        const double v = m.symbol(k);
        CHECK(v >= 0.0);
        CHECK(v <= prev + 1e-15);
        prev = v;
      }
    }
  }

  SUBCASE("identity surrogate leaves fields unchanged") {
    std::mt19937 rng(9);
    Field f = random_field(g, rng);
    CHECK(max_abs_diff(mollify(f, MollifierSpec::identity()), f) < 1e-13);
  }

  SUBCASE("gaussian symbol on a single mode") {
    const double eps = 0.4;
    MollifierSpec m(eps, MollifierKind::gaussian);
    Field c1 = Field::from_function(g, [](double x) { return std::cos(x); });
    // closed-form symbol oracle: exp(-eps^2) at k = 1
    CHECK(max_abs_diff(mollify(c1, m), std::exp(-eps * eps) * c1) < 1e-13);
  }

  SUBCASE("constants are preserved") {
    Field cst = Field::from_function(g, [](double) { return 0.77; });
    for (double eps : {1.0, 0.25, 0.01})
      CHECK(max_abs_diff(mollify(cst, MollifierSpec(eps, MollifierKind::gaussian)),
                         cst) < 1e-14);
  }

  SUBCASE("contraction in every H^s") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
      Field f = random_field(g, rng);
      MollifierSpec m(0.5, MollifierKind::gaussian);
      Field jf = mollify(f, m);
      for (double s : {0.0, 1.0, 2.0})
        CHECK(sobolev_norm(jf, s) <= sobolev_norm(f, s) * (1.0 + 1e-13));
    }
  }
}

TEST_CASE("sobolev norm") {
  auto g = Grid::make(M_PI, 64);

  Field one = Field::from_function(g, [](double) { return 1.0; });
  CHECK(sobolev_norm(one, 0.0) ==
        doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-13));

  Field c1 = Field::from_function(g, [](double x) { return std::cos(x); });
  // single-mode oracle: the (1+1)^{1/2} factor
  CHECK(sobolev_norm(c1, 1.0) ==
        doctest::Approx(std::sqrt(2.0) * sobolev_norm(c1, 0.0)).epsilon(1e-13));

  SUBCASE("interpolation inequality, (s0, s, s1) = (0, 1, 2)") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      Field f = random_field(g, rng);
      const double n0 = sobolev_norm(f, 0.0);
      const double n1 = sobolev_norm(f, 1.0);
      const double n2 = sobolev_norm(f, 2.0);
      CHECK(n1 <= std::sqrt(n0 * n2) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("dealiased product") {
  auto g = Grid::make(M_PI, 64);

  SUBCASE("exact for representable products") {
    Field a = Field::from_function(g, [](double x) { return std::cos(3 * x); });
    Field b = Field::from_function(
        g, [](double x) { return std::sin(5 * x) + 0.2; });
    Field exact = pointwise_multiply(a, b);  // modes up to 8 < N/2, no aliasing
    CHECK(max_abs_diff(multiply_dealiased(a, b), exact) < 1e-13);
  }

  SUBCASE("multiplying by one is the identity") {
    std::mt19937 rng(23);
    Field f = random_field(g, rng);
    Field one = Field::from_function(g, [](double) { return 1.0; });
    CHECK(max_abs_diff(multiply_dealiased(f, one), f) < 1e-13);
  }

  SUBCASE("kills aliasing of high modes") {
    // cos(31x)^2 = 1/2 + cos(62x)/2 aliases to mode 2 on a 64-point grid
    Field hi = Field::from_function(g, [](double x) { return std::cos(31 * x); });
    Field direct = pointwise_multiply(hi, hi);
    Field clean = multiply_dealiased(hi, hi);
    const Spectrum& s = clean.spectrum();
    CHECK(std::abs(s[2]) < 1e-13);          // no aliased image
    CHECK(std::abs(direct.spectrum()[2]) > 0.1);  // the plain product has one
    CHECK(std::abs(s[0] - 0.5) < 1e-13);
  }
}

TEST_CASE("spectral shift") {
  auto g = Grid::make(M_PI, 64);
  Field c1 = Field::from_function(g, [](double x) { return std::cos(x); });
  const double d = 0.7341;
  Field shifted = spectral_shift(c1, d);
  Field expect =
      Field::from_function(g, [&](double x) { return std::cos(x - d); });
  CHECK(max_abs_diff(shifted, expect) < 1e-13);

  std::mt19937 rng(29);
  Field f = random_field(g, rng);
  CHECK(max_abs_diff(spectral_shift(f, 2.0 * M_PI), f) < 1e-12);
}
