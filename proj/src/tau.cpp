#include "dtoda/tau.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace dtoda {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<cdouble> unit_nodes(int M) {
  std::vector<cdouble> w(M);
  for (int k = 0; k < M; ++k) {
    const double th = kTwoPi * k / M;
    w[k] = cdouble(std::cos(th), std::sin(th));
  }
  return w;
}

cdouble mean_contour(const std::vector<cdouble>& h, const std::vector<cdouble>& w) {
  cdouble s = 0.0;
  for (size_t k = 0; k < h.size(); ++k) s += h[k] * w[k];
  return s / static_cast<double>(h.size());
}

}  // namespace

GeneratingPotentials potentials(const CoordinateVector& coords) {
  const int N = coords.order;
  GeneratingPotentials p{coords.chart, TruncatedSeries(N), TruncatedSeries(N)};
  for (int n = 1; n <= N; ++n) {
    const cdouble vm = coords.v_at(-n);
    const cdouble vp = coords.v_at(n);
    if (vm != 0.0) p.psi.set_coeff(n, vm / static_cast<double>(n));
    if (vp != 0.0) p.phi.set_coeff(-n, vp / static_cast<double>(n));
  }
  return p;
}

cdouble log_tau_inverse(const CircleHomeo& gamma, const WeldingSolution& sol,
                        const CoordinateVector& coords) {
  (void)sol;
  const int M = gamma.grid_size();
  const GeneratingPotentials pot = potentials(coords);
  const std::vector<cdouble> w = unit_nodes(M);
  const std::vector<cdouble> psi = CircleGrid::sample(pot.psi, M).values();
  const std::vector<cdouble> dpsi = CircleGrid::sample(derivative(pot.psi), M).values();
  const std::vector<cdouble> phi = CircleGrid::sample(pot.phi, M).values();
  const std::vector<cdouble> dphi = CircleGrid::sample(derivative(pot.phi), M).values();

  const std::vector<cdouble> inv = invert_circle_map(gamma);
  std::vector<cdouble> h1(M), h2(M);
  for (int k = 0; k < M; ++k) {
    const cdouble recip = std::conj(inv[k]);  // 1/gamma^{-1} on the grid
    h1[k] = recip * (w[k] * dphi[k] + 2.0 * phi[k]);
    h2[k] = gamma.samples()[k] / (w[k] * w[k]) * (w[k] * dpsi[k] - 2.0 * psi[k]);
  }
  const cdouble t0 = coords.t_at(0);
  const cdouble four =
      2.0 * t0 * coords.v_at(0) - t0 * t0 + mean_contour(h1, w) + mean_contour(h2, w);
  return four / 4.0;
}

cdouble log_tau_direct(const UnivalentPair& pair, const CoordinateVector& coords) {
  (void)pair;
  const int N = coords.order;
  const cdouble t0 = coords.t_at(0);
  cdouble four = 2.0 * t0 * coords.v_at(0) - t0 * t0;
  // The series sums t_n v_n products whose factors are quadratures with
  // opposite dynamic ranges; past the resolution of the window the computed
  // products grow instead of decaying, so the sum stops in front of the
  // first sustained growth above the rounding floor.
  std::vector<double> mag(N + 1, 0.0);
  std::vector<cdouble> term(N + 1, 0.0);
  for (int n = 1; n <= N; ++n) {
    term[n] = static_cast<double>(n - 2) *
              (coords.t_at(n) * coords.v_at(n) + coords.t_at(-n) * coords.v_at(-n));
    mag[n] = std::abs(term[n]);
  }
  const double floor = 1e-13 * std::max(1.0, std::norm(t0));
  int cut = N;
  for (int n = 4; n <= N; ++n) {
    if (mag[n] > floor && mag[n - 1] > floor && mag[n] > 1.2 * mag[n - 1] &&
        (n == 4 || mag[n - 1] > 1.2 * mag[n - 2])) {
      cut = n - 2;
      break;
    }
  }
  for (int n = 1; n <= cut; ++n) four -= term[n];
  return four / 4.0;
}

cdouble log_tau_direct_quadrature(const UnivalentPair& pair,
                                  const CoordinateVector& coords, int M) {
  const int N = coords.order;
  const GeneratingPotentials pot = potentials(coords);
  const std::vector<cdouble> w = unit_nodes(M);
  const TruncatedSeries fs = pair.f_series();
  const TruncatedSeries gs = pair.g_series();
  const std::vector<cdouble> f = CircleGrid::sample(fs, M).values();
  const std::vector<cdouble> g = CircleGrid::sample(gs, M).values();
  const std::vector<cdouble> df = CircleGrid::sample(derivative(fs), M).values();
  const std::vector<cdouble> dg = CircleGrid::sample(derivative(gs), M).values();
  const TruncatedSeries dpsi = derivative(pot.psi);
  const TruncatedSeries dphi = derivative(pot.phi);

  // tail guard: the potentials are evaluated off S^1, on the curve itself
  double tail = 0.0;
  for (int k = 0; k < M; ++k) {
    tail = std::max(tail, std::abs(coords.v_at(N) * std::pow(std::abs(g[k]), -N)));
    tail = std::max(tail, std::abs(coords.v_at(-N) * std::pow(std::abs(f[k]), N)));
  }
  if (tail > 1e-8)
    throw Error("log_tau_direct_quadrature: potential tail does not decay on the curve");

  std::vector<cdouble> h1(M), h2(M);
  for (int k = 0; k < M; ++k) {
    const cdouble Phi = evaluate(pot.phi, g[k]);
    const cdouble dPhi = evaluate(dphi, g[k]);
    const cdouble Psi = evaluate(pot.psi, f[k]);
    const cdouble dPsi = evaluate(dpsi, f[k]);
    h1[k] = dg[k] / f[k] * (g[k] * dPhi + 2.0 * Phi);
    h2[k] = g[k] * df[k] / (f[k] * f[k]) * (f[k] * dPsi - 2.0 * Psi);
  }
  const cdouble t0 = coords.t_at(0);
  const cdouble four =
      2.0 * t0 * coords.v_at(0) - t0 * t0 + mean_contour(h1, w) + mean_contour(h2, w);
  return four / 4.0;
}

double log_tau_extended(const UnivalentPair& pair, const CoordinateVector& coords) {
  // 4 log tau = X + conj(X) with X the direct-chart combination
  return 2.0 * log_tau_direct(pair, coords).real();
}

cdouble log_tau(const ChartFamily::Point& p) {
  switch (p.coords.chart) {
    case Chart::inverse:
      return log_tau_inverse(*p.gamma, *p.sol, p.coords);
    case Chart::direct:
      return log_tau_direct(p.pair, p.coords);
    case Chart::extended:
      return cdouble(log_tau_extended(p.pair, p.coords), 0.0);
    case Chart::wz:
      break;
  }
  throw Error("log_tau: unsupported chart");
}

namespace {

// FD probes differentiate the holomorphic branch; the extended (real) value
// is twice its real part and recovers the same v's through the Wirtinger pair
cdouble holomorphic_log_tau(const ChartFamily::Point& p) {
  if (p.coords.chart == Chart::inverse)
    return log_tau_inverse(*p.gamma, *p.sol, p.coords);
  return log_tau_direct(p.pair, p.coords);
}

using ShiftKey = std::vector<std::pair<int, long long>>;  // (index, delta/h quantized)

struct ProbeCache {
  const ChartFamily& family;
  double quantum;  // smallest shift unit
  std::map<ShiftKey, cdouble> values;

  cdouble value(const std::vector<std::pair<int, double>>& shifts) {
    ShiftKey key;
    for (const auto& [n, s] : shifts)
      if (s != 0.0) key.emplace_back(n, std::llround(s / quantum));
    std::sort(key.begin(), key.end());
    const auto it = values.find(key);
    if (it != values.end()) return it->second;
    std::vector<std::pair<int, cdouble>> cshifts;
    for (const auto& [n, s] : shifts)
      if (s != 0.0) cshifts.emplace_back(n, cdouble(s, 0.0));
    const cdouble v = holomorphic_log_tau(family.at(cshifts));
    values.emplace(std::move(key), v);
    return v;
  }
};

cdouble second_diff(ProbeCache& cache, int m, int n, double h) {
  if (m == n) {
    const cdouble fp = cache.value({{m, +h}});
    const cdouble f0 = cache.value({});
    const cdouble fm = cache.value({{m, -h}});
    return (fp - 2.0 * f0 + fm) / (h * h);
  }
  const cdouble fpp = cache.value({{m, +h}, {n, +h}});
  const cdouble fpm = cache.value({{m, +h}, {n, -h}});
  const cdouble fmp = cache.value({{m, -h}, {n, +h}});
  const cdouble fmm = cache.value({{m, -h}, {n, -h}});
  return (fpp - fpm - fmp + fmm) / (4.0 * h * h);
}

}  // namespace

namespace {

int probe_window(const ChartFamily& family, const std::vector<int>& idx) {
  int w = 0;
  for (int n : idx) w = std::max(w, std::abs(n));
  return std::min(family.order(), std::max(w + 4, 6));
}

// regression path for the inverse chart: gradients of log tau and of the
// whole v-vector over the probe window
struct RegressedDerivatives {
  std::vector<cdouble> dlog_tau;                // by window column
  std::vector<std::vector<cdouble>> dv;         // dv[m + window][column]
  int window;
};

RegressedDerivatives regress(const ChartFamily& family, double h, int window) {
  // model the gradient over the full coordinate window; walk only the gentle
  // low axes (the realized spill is attributed by the regression)
  const DerivativeProbes probes(family, h, family.order(), window);
  const int span = 2 * family.order() + 1;
  const int W = family.order();
  const auto obs = [&](const ChartFamily::Point& p) {
    std::vector<cdouble> out;
    out.reserve(span + 1);
    out.push_back(holomorphic_log_tau(p));
    for (int m = -W; m <= W; ++m) out.push_back(p.coords.v_at(m));
    return out;
  };
  const auto grads = probes.gradient(obs);
  RegressedDerivatives rd;
  rd.window = W;
  rd.dlog_tau = grads[0];
  rd.dv.assign(span, {});
  for (int m = 0; m < span; ++m) rd.dv[m] = grads[m + 1];
  return rd;
}

RegressedDerivatives regress_richardson(const ChartFamily& family, double h, int window,
                                        bool richardson) {
  RegressedDerivatives a = regress(family, h, window);
  if (!richardson) return a;
  const RegressedDerivatives b = regress(family, h / 2, window);
  for (size_t j = 0; j < a.dlog_tau.size(); ++j)
    a.dlog_tau[j] = (4.0 * b.dlog_tau[j] - a.dlog_tau[j]) / 3.0;
  for (size_t m = 0; m < a.dv.size(); ++m)
    for (size_t j = 0; j < a.dv[m].size(); ++j)
      a.dv[m][j] = (4.0 * b.dv[m][j] - a.dv[m][j]) / 3.0;
  return a;
}

}  // namespace

std::vector<cdouble> gradient_fd(const ChartFamily& family, const std::vector<int>& idx,
                                 double h, bool richardson) {
  if (family.chart() == Chart::inverse) {
    const RegressedDerivatives rd =
        regress_richardson(family, h, probe_window(family, idx), richardson);
    std::vector<cdouble> g;
    g.reserve(idx.size());
    for (int n : idx) g.push_back(rd.dlog_tau[n + rd.window]);
    return g;
  }
  ProbeCache cache{family, h / 4.0, {}};
  std::vector<cdouble> g;
  g.reserve(idx.size());
  for (int n : idx) {
    const cdouble dh =
        (cache.value({{n, +h}}) - cache.value({{n, -h}})) / (2.0 * h);
    if (!richardson) {
      g.push_back(dh);
      continue;
    }
    const cdouble dh2 =
        (cache.value({{n, +h / 2}}) - cache.value({{n, -h / 2}})) / h;
    g.push_back((4.0 * dh2 - dh) / 3.0);
  }
  return g;
}

FreeEnergyRecord hessian_fd(const ChartFamily& family, const std::vector<int>& idx,
                            double h, bool richardson) {
  FreeEnergyRecord rec;
  rec.chart = family.chart();
  rec.indices = idx;
  const int K = static_cast<int>(idx.size());
  rec.hessian.assign(static_cast<size_t>(K) * K, 0.0);

  if (family.chart() == Chart::inverse) {
    rec.log_tau = log_tau(family.base_point());
    const RegressedDerivatives rd =
        regress_richardson(family, h, probe_window(family, idx), richardson);
    rec.gradient.reserve(idx.size());
    for (int n : idx) rec.gradient.push_back(rd.dlog_tau[n + rd.window]);
    // the free energy generates v, so its Hessian is the differential of the
    // v-vector; symmetrize the two regressed routes to each entry
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j)
        rec.hessian[static_cast<size_t>(i) * K + j] =
            0.5 * (rd.dv[idx[i] + rd.window][idx[j] + rd.window] +
                   rd.dv[idx[j] + rd.window][idx[i] + rd.window]);
    return rec;
  }

  ProbeCache cache{family, h / 4.0, {}};
  rec.log_tau = cache.value({});
  rec.gradient = gradient_fd(family, idx, h, richardson);
  for (int i = 0; i < K; ++i)
    for (int j = i; j < K; ++j) {
      cdouble d = second_diff(cache, idx[i], idx[j], h);
      if (richardson) {
        const cdouble d2 = second_diff(cache, idx[i], idx[j], h / 2);
        d = (4.0 * d2 - d) / 3.0;
      }
      rec.hessian[static_cast<size_t>(i) * K + j] = d;
      rec.hessian[static_cast<size_t>(j) * K + i] = d;
    }
  return rec;
}

cdouble hessian_expected(const GrunskyMatrix& gm, int m, int n) {
  if (m == 0 && n == 0) return -2.0 * gm.at(0, 0);
  if (n == 0) return static_cast<double>(std::abs(m)) * gm.at(m, 0);
  if (m == 0) return static_cast<double>(std::abs(n)) * gm.at(0, n);
  return -std::abs(static_cast<double>(m) * n) * gm.at(m, n);
}

}  // namespace dtoda
