#include <doctest.h>

#include <cmath>

#include "dtoda/tau.hpp"
#include "oracles.hpp"

using namespace dtoda;

namespace {

UnivalentPair perturbed_free_pair(int N) {
  TruncatedSeries f(N), g(N);
  f.set_coeff(1, 1.0);
  f.set_coeff(2, 0.03);
  f.set_coeff(3, cdouble(0.0, -0.02));
  g.set_coeff(1, 1.0);
  g.set_coeff(0, 0.02);
  g.set_coeff(-1, cdouble(0.015, 0.01));
  return UnivalentPair::from_series(f, g);
}

}  // namespace

TEST_SUITE("tau") {

TEST_CASE("potentials are coefficient relabelings of v") {
  CoordinateVector c(Chart::inverse, 8);
  for (int n = 1; n <= 8; ++n) {
    c.set_v(n, cdouble(0.1 / n, 0.02 * n));
    c.set_v(-n, cdouble(-0.05, 0.01 * n));
  }
  const GeneratingPotentials p = potentials(c);
  for (int n = 1; n <= 8; ++n) {
    CHECK(std::abs(p.psi.coeff(n) - c.v_at(-n) / static_cast<double>(n)) < 1e-15);
    CHECK(std::abs(p.phi.coeff(-n) - c.v_at(n) / static_cast<double>(n)) < 1e-15);
  }
}

TEST_CASE("log tau, inverse chart") {
  const int N = 16, M = 256;
  SUBCASE("identity") {
    const CircleHomeo id = CircleHomeo::identity(N, M);
    const WeldingSolution sol = weld(id);
    const CoordinateVector c = inverse_chart(id, sol);
    CHECK(std::abs(log_tau_inverse(id, sol, c) - (-0.75)) < 1e-12);
  }
  SUBCASE("Mobius(0.3, 0): closed form and the explicit sum") {
    const CircleHomeo gamma = CircleHomeo::mobius({cdouble(0.3, 0.0), 0.0}, N, M);
    const WeldingSolution sol = mobius_weld({cdouble(0.3, 0.0), 0.0}, N, M);
    const CoordinateVector c = inverse_chart(gamma, sol);
    const cdouble lt = log_tau_inverse(gamma, sol, c);
    CHECK(std::abs(lt - oracles::log_tau_closed(c.t_at(0), c.t_at(1), c.t_at(-1))) < 1e-9);
    CHECK(std::abs(lt - (-0.7420243479876935)) < 1e-7);
    // independent route: the absolutely convergent series form
    cdouble four = 2.0 * c.t_at(0) * c.v_at(0) - c.t_at(0) * c.t_at(0);
    for (int n = 1; n <= N; ++n)
      four -= static_cast<double>(n - 2) *
              (c.t_at(n) * c.v_at(n) + c.t_at(-n) * c.v_at(-n));
    CHECK(std::abs(lt - four / 4.0) < 1e-9);
  }
}

TEST_CASE("log tau, direct chart") {
  const int N = 16, M = 256;
  SUBCASE("identity pair") {
    const UnivalentPair id = UnivalentPair::identity(N);
    const CoordinateVector c = direct_chart(id, M);
    CHECK(std::abs(log_tau_direct(id, c) - (-0.75)) < 1e-12);
    CHECK(std::abs(log_tau_extended(id, c) - (-1.5)) < 1e-12);
  }
  SUBCASE("Mobius(0.3, 0) closed form in the direct variables") {
    const oracles::Mobius mb{cdouble(0.3, 0.0), 0.0};
    const UnivalentPair pair = mobius_weld({mb.a, mb.alpha}, N, M).pair;
    const CoordinateVector c = direct_chart(pair, M);
    const cdouble want = oracles::log_tau_closed(mb.t0_dir(), mb.t1_dir(), mb.tm1_dir());
    CHECK(std::abs(log_tau_direct(pair, c) - want) < 1e-9);
  }
  SUBCASE("quadrature route agrees where the potentials converge") {
    const UnivalentPair pair = mobius_weld({cdouble(0.1, 0.0), 0.2}, N, M).pair;
    const CoordinateVector c = direct_chart(pair, M);
    CHECK(std::abs(log_tau_direct_quadrature(pair, c, M) - log_tau_direct(pair, c)) <
          1e-10);
  }
  SUBCASE("quadrature route guards its tail") {
    const UnivalentPair pair = mobius_weld({cdouble(0.8, 0.0), 0.0}, N, M).pair;
    const CoordinateVector c = direct_chart(pair, M);
    CHECK_THROWS_AS(log_tau_direct_quadrature(pair, c, M), Error);
  }
}

TEST_CASE("extended tau is real and Wirtinger-consistent") {
  const int N = 12, M = 256;
  const UnivalentPair base = perturbed_free_pair(N);
  const CoordinateVector c = direct_chart(base, M, Chart::extended);
  const double lt = log_tau_extended(base, c);
  CHECK(std::abs(lt - 2.0 * log_tau_direct(base, c).real()) < 1e-14);

  // real and imaginary steps of t_1 recover v_1 through the Wirtinger pair
  const ChartFamily fam = ChartFamily::direct(base, Chart::extended, M, 1e-12);
  const double h = 1e-4;
  const auto ext_at = [&](cdouble dt) {
    const auto p = fam.at({{1, dt}});
    return log_tau_extended(p.pair, p.coords);
  };
  const double d_re = (ext_at(+h) - ext_at(-h)) / (2.0 * h);
  const double d_im = (ext_at(cdouble(0, +h)) - ext_at(cdouble(0, -h))) / (2.0 * h);
  const cdouble v1 = 0.5 * cdouble(d_re, -d_im);
  CHECK(std::abs(v1 - c.v_at(1)) < 1e-6);
}

TEST_CASE("gradient of log tau is the v-vector") {
  const int M = 256;
  SUBCASE("direct chart at a perturbed free pair") {
    const UnivalentPair base = perturbed_free_pair(12);
    const ChartFamily fam = ChartFamily::direct(base, Chart::direct, M, 1e-12);
    const std::vector<int> idx{-3, -2, -1, 0, 1, 2, 3};
    const auto grad = gradient_fd(fam, idx, 1e-3);
    const CoordinateVector& c = fam.base_point().coords;
    for (size_t i = 0; i < idx.size(); ++i)
      CHECK(std::abs(grad[i] - c.v_at(idx[i])) <
            1e-6 * std::max(1.0, std::abs(c.v_at(idx[i]))));
  }
  SUBCASE("inverse chart at a Mobius base") {
    const CircleHomeo base = CircleHomeo::mobius({cdouble(0.3, 0.0), 0.0}, 16, M);
    const ChartFamily fam = ChartFamily::inverse(base);
    const std::vector<int> idx{-2, -1, 0, 1, 2};
    const auto grad = gradient_fd(fam, idx, 1e-3);
    const CoordinateVector& c = fam.base_point().coords;
    for (size_t i = 0; i < idx.size(); ++i)
      CHECK(std::abs(grad[i] - c.v_at(idx[i])) <
            2e-5 * std::max(1.0, std::abs(c.v_at(idx[i]))));
  }
}

TEST_CASE("Hessian of the free energy carries the Grunsky pattern") {
  const int M = 256;
  SUBCASE("direct/extended family at a perturbed base") {
    const UnivalentPair base = perturbed_free_pair(12);
    const ChartFamily fam = ChartFamily::direct(base, Chart::extended, M, 1e-12);
    const std::vector<int> idx{-2, -1, 0, 1, 2};
    const FreeEnergyRecord rec = hessian_fd(fam, idx, 1e-3);
    const GrunskyMatrix kappa = grunsky(base.inverse_pair());
    const int K = static_cast<int>(idx.size());
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j) {
        const cdouble want = hessian_expected(kappa, idx[i], idx[j]);
        const cdouble got = rec.hessian[static_cast<size_t>(i) * K + j];
        CHECK(std::abs(got - want) < 1e-5 * std::max(1.0, std::abs(want)));
        CHECK(std::abs(got - rec.hessian[static_cast<size_t>(j) * K + i]) < 1e-12);
      }
  }
  SUBCASE("inverse chart at Mobius(0.3, 0)") {
    const CircleHomeo base = CircleHomeo::mobius({cdouble(0.3, 0.0), 0.0}, 16, M);
    const ChartFamily fam = ChartFamily::inverse(base);
    const std::vector<int> idx{-1, 0, 1};
    const FreeEnergyRecord rec = hessian_fd(fam, idx, 1e-3);
    const GrunskyMatrix bm = grunsky(fam.base_point().pair);
    const int K = 3;
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j) {
        const cdouble want = hessian_expected(bm, idx[i], idx[j]);
        const cdouble got = rec.hessian[static_cast<size_t>(i) * K + j];
        CHECK(std::abs(got - want) < 2e-5 * std::max(1.0, std::abs(want)));
      }
    // closed forms of the disc family
    CHECK(std::abs(rec.hessian[1 * K + 1] - std::log(0.91)) < 2e-5);   // d2F/dt0^2
    CHECK(std::abs(rec.hessian[0 * K + 2] - (-0.91)) < 2e-5);          // d2F/dt1 dt-1
  }
}

TEST_CASE("hessian_expected matches the generating pattern") {
  GrunskyMatrix gm(2);
  gm.set(0, 0, cdouble(0.3, 0.1));
  gm.set(1, 2, cdouble(0.05, -0.02));
  gm.set(2, 0, cdouble(0.07, 0.0));
  CHECK(hessian_expected(gm, 0, 0) == -2.0 * gm.at(0, 0));
  CHECK(hessian_expected(gm, 1, 2) == -2.0 * gm.at(1, 2));
  CHECK(hessian_expected(gm, 2, 0) == 2.0 * gm.at(2, 0));
}

}  // TEST_SUITE
