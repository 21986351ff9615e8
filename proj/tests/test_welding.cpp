#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dtoda/welding.hpp"
#include "oracles.hpp"

using namespace dtoda;

TEST_SUITE("welding") {

TEST_CASE("mobius_weld: closed-form pair and Fourier modes") {
  const int N = 16, M = 256;
  SUBCASE("a = 0, alpha = 0 is the identity") {
    const WeldingSolution sol = mobius_weld({0.0, 0.0}, N, M);
    CHECK(std::abs(sol.pair.a1() - 1.0) < 1e-15);
    CHECK(std::abs(sol.pair.b() - 1.0) < 1e-15);
    for (int n = 2; n <= N; ++n) CHECK(std::abs(sol.pair.f_coeffs[n - 1]) < 1e-15);
    CHECK(sol.residual_sup < 1e-14);
  }
  SUBCASE("a = 0.3, alpha = 0") {
    const WeldingSolution sol = mobius_weld({0.3, 0.0}, N, M);
    CHECK(std::abs(sol.pair.b() - 1.0482848367219182) < 1e-12);
    CHECK(std::abs(sol.pair.g_coeffs[0] - (-0.3144854510165754)) < 1e-12);
    CHECK(std::abs(sol.pair.a1() - 0.9539392014169457) < 1e-12);
    // the truncated pair welds the exact gamma up to its own coefficient tail
    CHECK(sol.residual_sup < 1e-8);

    const CircleHomeo gamma = CircleHomeo::mobius({0.3, 0.0}, N, M);
    CHECK(std::abs(gamma.fourier_coeff(-1) - 0.3) < 1e-13);
    CHECK(std::abs(gamma.fourier_coeff(0) - 0.91) < 1e-13);
    CHECK(std::abs(gamma.fourier_coeff(1) - (-0.273)) < 1e-13);
    CHECK(std::abs(gamma.fourier_coeff(2) - 0.0819) < 1e-13);
  }
  SUBCASE("|a| guard") {
    CHECK_THROWS_AS(mobius_weld({0.95, 0.0}, N, M), Error);
  }
}

TEST_CASE("weld: identity converges immediately") {
  const CircleHomeo id = CircleHomeo::identity(16, 256);
  const WeldingSolution sol = weld(id);
  CHECK(sol.newton_iters <= 1);
  CHECK(sol.residual_sup < 1e-12);
  CHECK(std::abs(sol.pair.a1() - 1.0) < 1e-12);
  for (int m = 0; m <= 16; ++m) CHECK(std::abs(sol.pair.g_coeffs[m]) < 1e-12);
}

TEST_CASE("weld: Mobius gamma recovers the closed form") {
  const int N = 24, M = 256;  // wide enough that the pair tail clears 10*tol
  const cdouble a(0.3, 0.0);
  const double alpha = 0.7;
  const CircleHomeo gamma = CircleHomeo::mobius({a, alpha}, N, M);
  const WeldingSolution sol = weld(gamma);
  const WeldingSolution exact = mobius_weld({a, alpha}, N, M);
  CHECK(sol.residual_sup < 1e-10);
  for (int n = 1; n <= N; ++n)
    CHECK(std::abs(sol.pair.f_coeffs[n - 1] - exact.pair.f_coeffs[n - 1]) < 1e-9);
  for (int m = 0; m <= N; ++m)
    CHECK(std::abs(sol.pair.g_coeffs[m] - exact.pair.g_coeffs[m]) < 1e-9);
}

TEST_CASE("weld: perturbed Mobius and the reconstruction round trip") {
  // angle bumps induce slowly decaying pair coefficients, so the window must
  // be wide enough for the residual tail to clear the undersizing guard
  const int N = 32, M = 256;
  const CircleHomeo base = CircleHomeo::mobius({cdouble(0.2, 0.0), 0.0}, N, M);
  const CircleHomeo gamma = CircleHomeo::perturbed(base, {{3, cdouble(0.01, 0.0)}});
  const WeldingSolution sol = weld(gamma, 1e-9);
  CHECK(sol.residual_sup < 1e-7);  // dominated by the pair's coefficient tail
  CHECK(std::abs(sol.pair.a1() * sol.pair.b() - 1.0) < 1e-14);

  const CircleHomeo back = gamma_from_pair(sol.pair, M);
  double sup = 0.0;
  for (int k = 0; k < M; ++k)
    sup = std::max(sup, std::abs(back.samples()[k] - gamma.samples()[k]));
  CHECK(sup < 5e-8);
}

TEST_CASE("weld: uniqueness against the initial guess") {
  const int N = 32, M = 256;
  const CircleHomeo gamma = CircleHomeo::perturbed(
      CircleHomeo::mobius({cdouble(0.15, 0.05), 0.3}, N, M), {{2, cdouble(0.008, 0.004)}});
  const WeldingSolution from_fit = weld(gamma, 1e-9);
  const WeldingSolution from_id = weld_from(gamma, UnivalentPair::identity(N), 1e-9);
  for (int n = 1; n <= N; ++n)
    CHECK(std::abs(from_fit.pair.f_coeffs[n - 1] - from_id.pair.f_coeffs[n - 1]) < 2e-8);
  for (int m = 0; m <= N; ++m)
    CHECK(std::abs(from_fit.pair.g_coeffs[m] - from_id.pair.g_coeffs[m]) < 2e-8);
}

TEST_CASE("weld: reflection symmetry") {
  // gamma(conj w) = conj(gamma(w)) forces conjugate-symmetric pair coefficients
  const int N = 32, M = 256;
  const CircleHomeo gamma = CircleHomeo::perturbed(
      CircleHomeo::mobius({cdouble(0.2, 0.0), 0.0}, N, M),
      {{2, cdouble(0.0, 0.005)}, {5, cdouble(0.0, -0.002)}});
  for (int n = -N - 1; n <= N - 1; ++n)
    CHECK(std::abs(gamma.fourier_coeff(n).imag()) < 1e-12);
  const WeldingSolution sol = weld(gamma, 1e-9, 60, 1e-5);
  for (int n = 1; n <= N; ++n)
    CHECK(std::abs(sol.pair.f_coeffs[n - 1].imag()) < 1e-10);
  for (int m = 0; m <= N; ++m)
    CHECK(std::abs(sol.pair.g_coeffs[m].imag()) < 1e-10);
}

TEST_CASE("homeomorphism validity checks") {
  const int N = 8, M = 64;
  SUBCASE("orientation-reversing samples are rejected") {
    std::vector<cdouble> rev(M);
    for (int k = 0; k < M; ++k) {
      const double th = -2.0 * std::numbers::pi * k / M;
      rev[k] = cdouble(std::cos(th), std::sin(th));
    }
    CHECK_THROWS_AS(CircleHomeo::from_samples(std::move(rev), N), NotAHomeomorphism);
  }
  SUBCASE("off-circle samples are rejected") {
    std::vector<cdouble> off(M);
    for (int k = 0; k < M; ++k) {
      const double th = 2.0 * std::numbers::pi * k / M;
      off[k] = 1.001 * cdouble(std::cos(th), std::sin(th));
    }
    CHECK_THROWS_AS(CircleHomeo::from_samples(std::move(off), N), NotAHomeomorphism);
  }
  SUBCASE("grid too small for the order") {
    std::vector<cdouble> v(16, 1.0);
    CHECK_THROWS_AS(CircleHomeo::from_samples(std::move(v), 8), GridTooSmall);
  }
}

TEST_CASE("invert_circle_map") {
  const int N = 16, M = 256;
  SUBCASE("identity") {
    const CircleHomeo id = CircleHomeo::identity(N, M);
    const std::vector<cdouble> inv = invert_circle_map(id);
    for (int k = 0; k < M; ++k) {
      const double th = 2.0 * std::numbers::pi * k / M;
      CHECK(std::abs(inv[k] - cdouble(std::cos(th), std::sin(th))) < 1e-12);
    }
  }
  SUBCASE("Mobius: composition residual and the t0 mode") {
    const CircleHomeo gamma = CircleHomeo::mobius({cdouble(0.3, 0.0), 0.0}, N, M);
    const std::vector<cdouble> inv = invert_circle_map(gamma);
    for (int k = 0; k < M; ++k) {
      const double th = 2.0 * std::numbers::pi * k / M;
      const cdouble target(std::cos(th), std::sin(th));
      CHECK(std::abs(gamma.eval_angle(std::arg(inv[k])) - target) < 1e-11);
    }
    // 1/gamma^{-1} has w^{-1} coefficient t_0 = 0.91
    std::vector<cdouble> recip(M);
    for (int k = 0; k < M; ++k) recip[k] = std::conj(inv[k]);
    cdouble d_m1 = 0.0;
    for (int k = 0; k < M; ++k) {
      const double th = 2.0 * std::numbers::pi * k / M;
      d_m1 += recip[k] * cdouble(std::cos(th), std::sin(th));
    }
    d_m1 /= static_cast<double>(M);
    CHECK(std::abs(d_m1 - 0.91) < 1e-10);
  }
}

TEST_CASE("gamma_from_pair") {
  const int N = 16, M = 256;
  SUBCASE("identity pair") {
    const CircleHomeo g = gamma_from_pair(UnivalentPair::identity(N), M);
    for (int k = 0; k < M; ++k) {
      const double th = 2.0 * std::numbers::pi * k / M;
      CHECK(std::abs(g.samples()[k] - cdouble(std::cos(th), std::sin(th))) < 1e-12);
    }
  }
  SUBCASE("Mobius pair reproduces gamma") {
    const cdouble a(0.2, 0.05);
    const double alpha = 0.4;
    const CircleHomeo want = CircleHomeo::mobius({a, alpha}, N, M);
    const CircleHomeo got = gamma_from_pair(mobius_weld({a, alpha}, N, M).pair, M);
    double sup = 0.0;
    for (int k = 0; k < M; ++k)
      sup = std::max(sup, std::abs(got.samples()[k] - want.samples()[k]));
    CHECK(sup < 1e-10);
  }
}

}  // TEST_SUITE
