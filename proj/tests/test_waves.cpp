#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fw/errors.hpp"
#include "fw/traveling_waves.hpp"
#include "test_util.hpp"

using namespace fw;

namespace {

// Direct periodization oracle: cosine transform of sum_{|j|<=30} e^{-|y+2pi j|}
// by trapezoid quadrature (the kink sits on a node, so the error is O(h^2)).
std::vector<double> periodized_kernel_coefficients(int k_max, int q_points) {
  std::vector<double> a_vals(q_points);
  for (int q = 0; q < q_points; ++q) {
    const double y = -M_PI + 2.0 * M_PI * q / q_points;
    double sum = 0.0;
    for (int j = -30; j <= 30; ++j) sum += std::exp(-std::abs(y + 2.0 * M_PI * j));
    a_vals[q] = sum;
  }
  std::vector<double> coef(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    double s = 0.0;
    for (int q = 0; q < q_points; ++q) {
      const double y = -M_PI + 2.0 * M_PI * q / q_points;
      s += a_vals[q] * std::cos(k * y);
    }
    coef[k] = s * (2.0 * M_PI / q_points);
  }
  return coef;
}

WaveSolution perturbed_solution(const WaveProblem& p, double c,
                                const std::vector<std::pair<int, double>>& modes) {
  WaveSolution sol;
  sol.a.assign(p.n_modes + 1, 0.0);
  sol.c = c;
  for (auto [k, v] : modes) sol.a[k] = v;
  return sol;
}

}  // namespace

TEST_CASE("kernel coefficients match the periodized kernel") {
  CHECK(kernel_coefficient(0) == 2.0);
  CHECK(kernel_coefficient(1) == 1.0);
  CHECK(kernel_coefficient(4) == doctest::Approx(2.0 / 17.0).epsilon(1e-15));

  const auto brute = periodized_kernel_coefficients(16, 1 << 21);
  for (int k = 0; k <= 16; ++k)
    CHECK(std::abs(brute[k] - kernel_coefficient(k)) < 1e-10);

  // kernel positivity: the periodized kernel is a sum of positive terms
  for (int q = 0; q < 64; ++q) {
    const double y = -M_PI + 2.0 * M_PI * q / 64.0;
    double sum = 0.0;
    for (int j = -30; j <= 30; ++j) sum += std::exp(-std::abs(y + 2.0 * M_PI * j));
    CHECK(sum > 0.0);
  }
}

TEST_CASE("bifurcation point") {
  CHECK(bifurcation_point(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(bifurcation_point(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bifurcation_point(3.0) == doctest::Approx(1.5).epsilon(1e-15));

  std::mt19937 rng(41);
  std::uniform_real_distribution<double> unif(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = unif(rng);
    const double c = bifurcation_point(a);
    CHECK(std::abs(2.0 * c * c - (a + c)) < 1e-14);          // dispersion identity
    CHECK(c < 0.5 + std::sqrt(a + 0.25));                    // below the constant-mode speed
    CHECK(std::abs(linearized_multiplier(1, c, a)) < 1e-12); // cos(y) in the kernel
  }
}

TEST_CASE("linearized multiplier") {
  CHECK(linearized_multiplier(0, 0.5, 0.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(linearized_multiplier(4096, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-5));

  SUBCASE("k = 1 is the only vanishing mode at the bifurcation") {
    for (double a : {0.0, 0.5, 1.0, 3.0, 7.3}) {
      const double c = bifurcation_point(a);
      CHECK(std::abs(linearized_multiplier(1, c, a)) < 1e-14);
      for (int k = 2; k <= 64; ++k)
        CHECK(std::abs(linearized_multiplier(k, c, a)) > 1e-3);
      CHECK(std::abs(linearized_multiplier(0, c, a)) > 1e-3);
    }
  }

  SUBCASE("consistency with the kernel coefficient") {
    const double c = 0.8, a = 0.6;
    for (int k = 0; k <= 8; ++k)
      CHECK(linearized_multiplier(k, c, a) ==
            doctest::Approx(1.0 - (a + c) / (2.0 * c * c) * kernel_coefficient(k))
                .epsilon(1e-14));
  }
}

TEST_CASE("residual of the fixed-point map") {
  WaveProblem p;
  p.A = 1.0;
  p.n_modes = 32;

  SUBCASE("the trivial solution is exact for random (c, A)") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> uc(0.1, 3.0);
    std::uniform_real_distribution<double> ua(0.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
      WaveProblem q = p;
      q.A = ua(rng);
      const WaveSolution sol = perturbed_solution(q, uc(rng), {});
      CHECK(w_norm(residual_f(sol, q)) < 1e-13);
    }
  }

  SUBCASE("quadratic remainder at the bifurcation point") {
    const double c_star = bifurcation_point(p.A);
    std::vector<double> deltas{1e-4, 1e-5, 1e-6};
    std::vector<double> norms;
    for (double d : deltas) {
      const WaveSolution sol = perturbed_solution(p, c_star, {{1, d}});
      norms.push_back(w_norm(residual_f(sol, p)));
    }
    // the linear term is annihilated, so the norm scales like delta^2
    const double ex1 = std::log10(norms[0] / norms[1]);
    const double ex2 = std::log10(norms[1] / norms[2]);
    CHECK(ex1 >= 1.99);
    CHECK(ex2 >= 1.99);
  }

  SUBCASE("directional derivative matches the multiplier on cos(2y)") {
    const double c_star = bifurcation_point(p.A);
    const double d = 1e-6;
    const WaveSolution sol = perturbed_solution(p, c_star, {{2, d}});
    const std::vector<double> f = residual_f(sol, p);
    CHECK(f[2] == doctest::Approx(linearized_multiplier(2, c_star, p.A) * d)
                      .epsilon(1e-4));
  }

  SUBCASE("singularity guard") {
    const WaveSolution sol = perturbed_solution(p, 0.5, {{0, 1.2}});  // phi = 0.6 > c
    CHECK_THROWS_AS(residual_f(sol, p), SingularityGuardError);
  }

  SUBCASE("even route agrees with a full spectral evaluation") {
    // independent route: build phi as a Field on a 2*pi grid and apply the
    // same fixed-point map with generic (non-cosine-restricted) operators
    auto g = Grid::make(M_PI, 256);
    const double c = 1.3;
    const WaveSolution sol =
        perturbed_solution(p, c, {{0, 0.04}, {1, 0.1}, {3, -0.02}});
    const std::vector<double> f = residual_f(sol, p);

    const Field phi = wave_velocity_field(sol, g);
    std::vector<double> ratio_vals(g->size());
    for (int j = 0; j < g->size(); ++j)
      ratio_vals[j] = c * p.A / (phi[j] - c) - phi[j];
    const Field ratio(g, std::move(ratio_vals));
    const Field conv = apply_even_multiplier(
        ratio, [](double k) { return 2.0 / (1.0 + k * k); });
    Field f_field = phi - (1.0 / (2.0 * c)) * multiply_dealiased(phi, phi) +
                    (1.0 / (2.0 * c)) * conv;
    Field a_over_c = Field::from_function(g, [&](double) { return p.A / c; });
    f_field += a_over_c;

    // the coefficient-route residual, resampled on the same grid
    std::vector<double> f_vals = eval_cosine_series(f, g->points());
    for (int j = 0; j < g->size(); ++j)
      CHECK(std::abs(f_vals[j] - f_field[j]) < 1e-10);
    // and the full route output is even: F(-y) = F(y)
    for (int j = 1; j < g->size() / 2; ++j)
      CHECK(f_field[j] ==
            doctest::Approx(f_field[g->size() - j]).epsilon(1e-11));
  }
}

TEST_CASE("newton solver") {
  WaveProblem p;
  p.A = 1.0;
  p.n_modes = 32;

  SUBCASE("trivial solution at generic speed") {
    const WaveSolution sol =
        newton_solve(perturbed_solution(p, 1.7, {}), p, FixSpeed{});
    CHECK(sol.residual_w < 1e-10);
    for (double a : sol.a) CHECK(std::abs(a) < 1e-12);
  }

  SUBCASE("amplitude-pinned solve lands near the bifurcation speed") {
    const double s = 0.05;
    WaveSolution guess = perturbed_solution(p, bifurcation_point(p.A), {{1, s}});
    const WaveSolution sol = newton_solve(guess, p, FixAmplitude{s});
    CHECK(sol.residual_w < 1e-10);
    CHECK(sol.a[1] == s);
    CHECK(std::abs(sol.c - 1.0) < 0.05);
    // higher harmonics come in at second order
    CHECK(std::abs(sol.a[2]) < 0.01);
    CHECK(std::abs(sol.a[0]) < 0.01);
  }

  SUBCASE("analytic and finite-difference Jacobians agree") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> unif(-0.01, 0.01);
    WaveSolution sol = perturbed_solution(p, 0.9, {});
    for (int k = 0; k <= p.n_modes; ++k) sol.a[k] = unif(rng) / (1.0 + k * k);
    for (const NewtonConstraint& constraint :
         {NewtonConstraint(FixSpeed{}), NewtonConstraint(FixAmplitude{0.01})}) {
      const auto ja = newton_jacobian(sol, p, constraint, JacobianMode::analytic);
      const auto jf =
          newton_jacobian(sol, p, constraint, JacobianMode::finite_difference);
      double worst = 0.0;
      for (std::size_t r = 0; r < ja.size(); ++r)
        for (std::size_t cidx = 0; cidx < ja.size(); ++cidx)
          worst = std::max(worst, std::abs(ja[r][cidx] - jf[r][cidx]));
      CHECK(worst < 1e-6);
    }
  }

  SUBCASE("finite-difference mode converges to the same wave") {
    const double s = 0.04;
    WaveSolution guess = perturbed_solution(p, bifurcation_point(p.A), {{1, s}});
    const WaveSolution sa =
        newton_solve(guess, p, FixAmplitude{s}, JacobianMode::analytic);
    const WaveSolution sf =
        newton_solve(guess, p, FixAmplitude{s}, JacobianMode::finite_difference);
    CHECK(std::abs(sa.c - sf.c) < 1e-9);
  }
}

TEST_CASE("branch continuation") {
  WaveProblem p;
  p.A = 1.0;
  p.n_modes = 32;
  std::vector<double> s_values;
  for (int i = 1; i <= 10; ++i) s_values.push_back(0.02 * i);
  const WaveBranch branch = continue_branch(p, s_values);
  REQUIRE_FALSE(branch.truncated);
  REQUIRE(branch.points.size() == s_values.size());

  SUBCASE("every step converged and the speed moves continuously") {
    double prev_c = bifurcation_point(p.A);
    for (const BranchPoint& bp : branch.points) {
      CHECK(bp.residual_w < 1e-10);
      CHECK(std::abs(bp.c - prev_c) < 0.1);
      prev_c = bp.c;
    }
  }

  SUBCASE("tangency: the branch leaves along cos(y)") {
    CHECK(branch.points[0].tangency_ratio < branch.points[2].tangency_ratio);
    CHECK(branch.points[2].tangency_ratio < branch.points[9].tangency_ratio);
  }

  SUBCASE("amplitudes must be monotone") {
    CHECK_THROWS_AS(continue_branch(p, {0.1, 0.05}), Error);
  }
}

TEST_CASE("surface profile reconstruction") {
  WaveProblem p;
  p.A = 1.0;
  p.n_modes = 32;
  auto g = Grid::make(M_PI, 128);

  SUBCASE("trivial solution gives the constant -A") {
    const WaveSolution sol = perturbed_solution(p, 1.4, {});
    const Field psi = reconstruct_psi(sol, p, g);
    for (int j = 0; j < g->size(); ++j)
      CHECK(psi[j] == doctest::Approx(-p.A).epsilon(1e-14));
  }

  SUBCASE("A = 0 collapses to the single-equation wave") {
    WaveProblem p0 = p;
    p0.A = 0.0;
    const WaveSolution sol = perturbed_solution(p0, 0.6, {{1, 0.01}});
    const Field psi = reconstruct_psi(sol, p0, g);
    CHECK(psi.max_abs() < 1e-15);
  }

  SUBCASE("branch solution satisfies the second travelling equation") {
    WaveSolution guess = perturbed_solution(p, bifurcation_point(p.A), {{1, 0.1}});
    const WaveSolution sol = newton_solve(guess, p, FixAmplitude{0.1});
    CHECK(psi_equation_residual(sol, p, g) < 1e-8);
  }

  SUBCASE("grid must be 2*pi periodic") {
    const WaveSolution sol = perturbed_solution(p, 1.4, {});
    auto bad = Grid::make(2.0, 64);
    CHECK_THROWS_AS(reconstruct_psi(sol, p, bad), InvalidGridError);
  }
}

TEST_CASE("waves persist under time evolution") {
  WaveProblem p;
  p.A = 1.0;
  p.n_modes = 32;

  SUBCASE("the trivial wave is a constant equilibrium") {
    const WaveSolution sol = perturbed_solution(p, 1.2, {});
    const WaveValidation v = validate_wave_in_time(sol, p, 64, 1e-2, 0.5);
    CHECK(v.status == RunStatus::completed);
    CHECK(v.max_l2_error < 1e-12);
    CHECK(v.min_psi == doctest::Approx(-1.0).epsilon(1e-12));
  }

  SUBCASE("a small branch wave translates rigidly") {
    WaveSolution guess = perturbed_solution(p, bifurcation_point(p.A), {{1, 0.05}});
    const WaveSolution sol = newton_solve(guess, p, FixAmplitude{0.05});
    const WaveValidation v = validate_wave_in_time(sol, p, 128, 2e-3, 1.0);
    CHECK(v.status == RunStatus::completed);
    CHECK(v.max_l2_error < 1e-6);
    CHECK(v.min_psi < 0.0);  // recorded: the surface variable is negative
  }
}
