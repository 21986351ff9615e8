#include "dtoda/coords.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dtoda {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cdouble mean_contour(const std::vector<cdouble>& h, const std::vector<cdouble>& nodes) {
  cdouble s = 0.0;
  for (size_t k = 0; k < h.size(); ++k) s += h[k] * nodes[k];
  return s / static_cast<double>(h.size());
}

std::vector<cdouble> unit_nodes(int M) {
  std::vector<cdouble> w(M);
  for (int k = 0; k < M; ++k) {
    const double th = kTwoPi * k / M;
    w[k] = cdouble(std::cos(th), std::sin(th));
  }
  return w;
}

std::vector<cdouble> analysis_bins(std::vector<cdouble> v) {
  detail::fft(v, -1);
  const double M = static_cast<double>(v.size());
  for (auto& c : v) c /= M;
  return v;
}

struct PairGridData {
  int M = 0;
  std::vector<cdouble> w, f, g, df, dg, finv, logfw, loggw;
};

// 1/f enters every integrand; sampling its series reciprocal (instead of
// dividing pointwise) keeps the contour quadratures exact mode pairings of
// the stored coefficients, so disc-family anchors hold at any |a|
PairGridData pair_grid(const UnivalentPair& pair, int M) {
  PairGridData d;
  d.M = M;
  d.w = unit_nodes(M);
  const TruncatedSeries fs = pair.f_series();
  const TruncatedSeries gs = pair.g_series();
  d.f = CircleGrid::sample(fs, M).values();
  d.g = CircleGrid::sample(gs, M).values();
  d.df = CircleGrid::sample(derivative(fs), M).values();
  d.dg = CircleGrid::sample(derivative(gs), M).values();
  d.finv = CircleGrid::sample(reciprocal(fs, Expansion::at_zero), M).values();
  const TruncatedSeries id = TruncatedSeries::identity(pair.order);
  const TruncatedSeries lf = log_unit(mul(fs, reciprocal(id, Expansion::at_zero)));
  const TruncatedSeries lg = log_unit(mul(gs, reciprocal(id, Expansion::at_infinity)));
  d.logfw = CircleGrid::sample(lf, M).values();
  d.loggw = CircleGrid::sample(lg, M).values();
  for (const cdouble& fv : d.f)
    if (std::abs(fv) < 1e-8)
      throw FVanishesOnCircle("direct chart: f vanishes on the sampling circle");
  return d;
}

}  // namespace

const char* chart_name(Chart c) {
  switch (c) {
    case Chart::inverse: return "inverse";
    case Chart::direct: return "direct";
    case Chart::extended: return "extended";
    case Chart::wz: return "wz";
  }
  return "?";
}

std::vector<cdouble> inverse_chart_t(const CircleHomeo& gamma) {
  const int N = gamma.order();
  std::vector<cdouble> t(2 * N + 1, 0.0);
  for (int n = 1; n <= N; ++n)
    t[-n + N] = -gamma.fourier_coeff(-n) / static_cast<double>(n);
  t[N] = gamma.fourier_coeff(0);
  const std::vector<cdouble> inv = invert_circle_map(gamma);
  std::vector<cdouble> recip(inv.size());
  for (size_t k = 0; k < inv.size(); ++k) recip[k] = std::conj(inv[k]);  // |inv| = 1
  const std::vector<cdouble> d = analysis_bins(std::move(recip));
  const int M = gamma.grid_size();
  const auto bin = [M](int n) { return ((n % M) + M) % M; };
  for (int n = 1; n <= N; ++n) t[n + N] = d[bin(n - 1)] / static_cast<double>(n);
  return t;
}

CoordinateVector inverse_chart(const CircleHomeo& gamma, const WeldingSolution& sol) {
  const int N = gamma.order();
  const int M = gamma.grid_size();
  CoordinateVector c(Chart::inverse, N);

  for (int n = 1; n <= N; ++n) {
    c.set_t(-n, -gamma.fourier_coeff(-n) / static_cast<double>(n));
    c.set_v(-n, -gamma.fourier_coeff(n));
  }
  c.set_t(0, gamma.fourier_coeff(0));

  const std::vector<cdouble> inv = invert_circle_map(gamma);
  std::vector<cdouble> recip(inv.size());
  for (size_t k = 0; k < inv.size(); ++k) recip[k] = std::conj(inv[k]);
  const std::vector<cdouble> d = analysis_bins(recip);
  const auto bin = [M](int n) { return ((n % M) + M) % M; };
  for (int n = 1; n <= N; ++n) {
    c.set_t(n, d[bin(n - 1)] / static_cast<double>(n));
    c.set_v(n, d[bin(-n - 1)]);
  }

  // v_0: two S^1 integrals plus the curve integral of G/(F z) pulled back
  // through z = f(w), where G(f(w)) = gamma(w) and F(f(w)) = w.
  const UnivalentPair& pair = sol.pair;
  const TruncatedSeries fs = pair.f_series();
  const TruncatedSeries id = TruncatedSeries::identity(N);
  const TruncatedSeries lf = log_unit(mul(fs, reciprocal(id, Expansion::at_zero)));
  const TruncatedSeries lg =
      log_unit(mul(pair.g_series(), reciprocal(id, Expansion::at_infinity)));
  const std::vector<cdouble> w = unit_nodes(M);
  const std::vector<cdouble> fv = CircleGrid::sample(fs, M).values();
  const std::vector<cdouble> dfv = CircleGrid::sample(derivative(fs), M).values();
  const std::vector<cdouble> lfv = CircleGrid::sample(lf, M).values();
  const std::vector<cdouble> lgv = CircleGrid::sample(lg, M).values();

  std::vector<cdouble> h1(M), h2(M), h3(M);
  for (int k = 0; k < M; ++k) {
    const cdouble gam = gamma.samples()[k];
    h1[k] = lfv[k] * gam / (w[k] * w[k]);
    h2[k] = lgv[k] * recip[k];
    h3[k] = gam * dfv[k] / (w[k] * fv[k]);
  }
  c.set_v(0, mean_contour(h1, w) - mean_contour(h2, w) - mean_contour(h3, w));
  return c;
}

std::vector<cdouble> direct_chart_t(const UnivalentPair& pair, int M) {
  const int N = pair.order;
  const PairGridData d = pair_grid(pair, M);
  std::vector<cdouble> t(2 * N + 1, 0.0);

  std::vector<cdouble> h(M);
  // t_0 = (1/2 pi i) contour g'(w)/f(w) dw
  for (int k = 0; k < M; ++k) h[k] = d.dg[k] * d.finv[k];
  t[N] = mean_contour(h, d.w);

  std::vector<cdouble> gpow(M, 1.0);  // g^{-n}
  for (int n = 1; n <= N; ++n) {
    for (int k = 0; k < M; ++k) gpow[k] /= d.g[k];
    for (int k = 0; k < M; ++k) h[k] = gpow[k] * d.dg[k] * d.finv[k];
    t[n + N] = mean_contour(h, d.w) / static_cast<double>(n);
  }
  std::vector<cdouble> fpow(M);  // f^{n-2}
  for (int k = 0; k < M; ++k) fpow[k] = d.finv[k];
  for (int n = 1; n <= N; ++n) {
    for (int k = 0; k < M; ++k) h[k] = d.g[k] * fpow[k] * d.df[k];
    t[-n + N] = -mean_contour(h, d.w) / static_cast<double>(n);
    for (int k = 0; k < M; ++k) fpow[k] *= d.f[k];
  }
  return t;
}

CoordinateVector direct_chart(const UnivalentPair& pair, int M, Chart tag) {
  if (tag != Chart::direct && tag != Chart::extended)
    throw Error("direct_chart: tag must be direct or extended");
  const int N = pair.order;
  const PairGridData d = pair_grid(pair, M);
  CoordinateVector c(tag, N);

  std::vector<cdouble> h(M);
  for (int k = 0; k < M; ++k) h[k] = d.dg[k] * d.finv[k];
  c.set_t(0, mean_contour(h, d.w));

  std::vector<cdouble> gpow(M, 1.0);
  for (int n = 1; n <= N; ++n) {
    for (int k = 0; k < M; ++k) gpow[k] /= d.g[k];
    for (int k = 0; k < M; ++k) h[k] = gpow[k] * d.dg[k] * d.finv[k];
    c.set_t(n, mean_contour(h, d.w) / static_cast<double>(n));
  }
  gpow.assign(M, 1.0);
  for (int n = 1; n <= N; ++n) {
    for (int k = 0; k < M; ++k) gpow[k] *= d.g[k];
    for (int k = 0; k < M; ++k) h[k] = gpow[k] * d.dg[k] * d.finv[k];
    c.set_v(n, mean_contour(h, d.w));
  }
  std::vector<cdouble> fpow(M);
  for (int k = 0; k < M; ++k) fpow[k] = d.finv[k];
  for (int n = 1; n <= N; ++n) {
    for (int k = 0; k < M; ++k) h[k] = d.g[k] * fpow[k] * d.df[k];
    c.set_t(-n, -mean_contour(h, d.w) / static_cast<double>(n));
    for (int k = 0; k < M; ++k) fpow[k] *= d.f[k];
  }
  for (int k = 0; k < M; ++k) fpow[k] = d.finv[k] * d.finv[k] * d.finv[k];
  for (int n = 1; n <= N; ++n) {
    for (int k = 0; k < M; ++k) h[k] = d.g[k] * fpow[k] * d.df[k];
    c.set_v(-n, -mean_contour(h, d.w));
    for (int k = 0; k < M; ++k) fpow[k] *= d.finv[k];
  }

  // v_0 = (1/2 pi i)[ contour log(g/w) g'/f dw - contour log(f/w) g f'/f^2 dw
  //                   - contour (g/f) dw/w ]
  std::vector<cdouble> h1(M), h2(M), h3(M);
  for (int k = 0; k < M; ++k) {
    h1[k] = d.loggw[k] * d.dg[k] * d.finv[k];
    h2[k] = d.logfw[k] * d.g[k] * d.df[k] * d.finv[k] * d.finv[k];
    h3[k] = d.g[k] * d.finv[k] / d.w[k];
  }
  c.set_v(0, mean_contour(h1, d.w) - mean_contour(h2, d.w) - mean_contour(h3, d.w));
  return c;
}

CauchyData cauchy_data(const UnivalentPair& pair, int M) {
  const int N = pair.order;
  const PairGridData d = pair_grid(pair, M);
  CauchyData cd{TruncatedSeries(N), TruncatedSeries(N), TruncatedSeries(N),
                TruncatedSeries(N)};

  std::vector<cdouble> h(M), gpow(M, 1.0);
  // S_+ coefficients (1/2 pi i) contour g^{-j-1} g'/f dw, j = 0..N-1
  for (int j = 0; j <= N - 1; ++j) {
    for (int k = 0; k < M; ++k) gpow[k] /= d.g[k];
    for (int k = 0; k < M; ++k) h[k] = gpow[k] * d.dg[k] * d.finv[k];
    const cdouble cj = mean_contour(h, d.w);
    if (cj != 0.0) cd.S_plus.set_coeff(j, cj);
  }
  // S_- coefficients -(1/2 pi i) contour g^{j-1} g'/f dw at z^{-j}, j = 1..N
  gpow.assign(M, 1.0);
  for (int j = 1; j <= N; ++j) {
    for (int k = 0; k < M; ++k) h[k] = gpow[k] * d.dg[k] * d.finv[k];
    cd.S_minus.set_coeff(-j, -mean_contour(h, d.w));
    for (int k = 0; k < M; ++k) gpow[k] *= d.g[k];
  }
  // S~_+ coefficients (1/2 pi i) contour g f' f^{-j-3} dw, j = 0..N-1
  std::vector<cdouble> fpow(M);
  for (int k = 0; k < M; ++k) fpow[k] = d.finv[k] * d.finv[k] * d.finv[k];
  for (int j = 0; j <= N - 1; ++j) {
    for (int k = 0; k < M; ++k) h[k] = d.g[k] * d.df[k] * fpow[k];
    cd.St_plus.set_coeff(j, mean_contour(h, d.w));
    for (int k = 0; k < M; ++k) fpow[k] *= d.finv[k];
  }
  // S~_- coefficients -(1/2 pi i) contour g f' f^{j-3} dw at z^{-j}, j = 1..N
  for (int k = 0; k < M; ++k) fpow[k] = d.finv[k] * d.finv[k];
  for (int j = 1; j <= N; ++j) {
    for (int k = 0; k < M; ++k) h[k] = d.g[k] * d.df[k] * fpow[k];
    cd.St_minus.set_coeff(-j, -mean_contour(h, d.w));
    for (int k = 0; k < M; ++k) fpow[k] *= d.f[k];
  }
  return cd;
}

CoordinateVector wz_moments(const TruncatedSeries& g, int M) {
  const int N = g.order();
  const std::vector<cdouble> w = unit_nodes(M);
  const std::vector<cdouble> gv = CircleGrid::sample(g, M).values();
  const std::vector<cdouble> dgv = CircleGrid::sample(derivative(g), M).values();
  for (const cdouble& z : gv)
    if (std::abs(z) < 1e-8)
      throw Error("wz_moments: curve passes through the origin");

  CoordinateVector c(Chart::wz, N);
  std::vector<cdouble> h(M), gpow(M, 1.0);
  for (int k = 0; k < M; ++k) h[k] = std::conj(gv[k]) * dgv[k];
  c.set_t(0, mean_contour(h, w));
  for (int n = 1; n <= N; ++n) {
    for (int k = 0; k < M; ++k) gpow[k] /= gv[k];
    for (int k = 0; k < M; ++k) h[k] = gpow[k] * std::conj(gv[k]) * dgv[k];
    c.set_t(n, mean_contour(h, w));
    c.set_t(-n, -std::conj(c.t_at(n)));
  }
  gpow.assign(M, 1.0);
  for (int n = 1; n <= N; ++n) {
    for (int k = 0; k < M; ++k) gpow[k] *= gv[k];
    for (int k = 0; k < M; ++k) h[k] = gpow[k] * std::conj(gv[k]) * dgv[k];
    c.set_v(n, mean_contour(h, w));
    c.set_v(-n, -std::conj(c.v_at(n)));
  }

  // (1/pi) interior integral of log|z|, reduced by Stokes to the boundary:
  // (1/2 pi) contour log|z| Im(zbar dz) - t_0/2, then gauged against the
  // centered disc of equal area, which shifts it by t_0/2 - (t_0/2) log t_0.
  double boundary = 0.0;
  for (int k = 0; k < M; ++k) {
    const cdouble zb = std::conj(gv[k]);
    const cdouble dz = dgv[k] * cdouble(0.0, 1.0) * w[k];
    boundary += std::log(std::abs(gv[k])) * (zb * dz).imag();
  }
  boundary /= static_cast<double>(M);  // (1/2 pi) contour ... d theta
  const cdouble t0 = c.t_at(0);
  c.set_v(0, boundary - 0.5 * t0 * std::log(t0));
  return c;
}

// ---------------------------------------------------------------------------
// chart inversion

InverseChartSolver::InverseChartSolver(CircleHomeo base, double tol, int angle_modes)
    : base_(std::move(base)),
      tol_(tol),
      modes_(angle_modes > 0 ? angle_modes : 4 * base_.order()) {
  if (2 * modes_ >= base_.grid_size())
    throw Error("InverseChartSolver: angle modes exceed the grid bandwidth");
  base_t_ = inverse_chart_t(base_);
  J_ = jacobian(std::vector<double>(2 * modes_ + 1, 0.0));
}

CircleHomeo InverseChartSolver::at(const std::vector<double>& u) const {
  const int M = base_.grid_size();
  std::vector<cdouble> samples(M);
  for (int k = 0; k < M; ++k) {
    const double th = kTwoPi * k / M;
    double bump = u[0];
    for (int m = 1; m <= modes_; ++m)
      bump += u[2 * m - 1] * std::cos(m * th) + u[2 * m] * std::sin(m * th);
    const double ang = base_.angles()[k] + bump;
    samples[k] = cdouble(std::cos(ang), std::sin(ang));
  }
  return CircleHomeo::from_samples(std::move(samples), base_.order());
}

RMatrix InverseChartSolver::jacobian(const std::vector<double>& u0) const {
  const int N = base_.order();
  const int rows = 2 * (2 * N + 1);
  const int cols = 2 * modes_ + 1;
  const std::vector<cdouble> t0 = inverse_chart_t(at(u0));
  RMatrix J(rows, cols);
  const double h = 1e-6;
  for (int c = 0; c < cols; ++c) {
    std::vector<double> u = u0;
    u[c] += h;
    const std::vector<cdouble> tc = inverse_chart_t(at(u));
    for (int i = 0; i < 2 * N + 1; ++i) {
      J(2 * i, c) = (tc[i] - t0[i]).real() / h;
      J(2 * i + 1, c) = (tc[i] - t0[i]).imag() / h;
    }
  }
  return J;
}

CircleHomeo InverseChartSolver::solve_impl(const std::vector<cdouble>& target_t,
                                           bool strict) const {
  const int N = base_.order();
  if (static_cast<int>(target_t.size()) != 2 * N + 1)
    throw Error("InverseChartSolver: target size mismatch");
  const int rows = 2 * (2 * N + 1);
  std::vector<double> u(2 * modes_ + 1, 0.0);
  const RMatrix* J = &J_;
  RMatrix refreshed;

  double best = 1e300;
  int stall = 0, flat = 0;
  for (int it = 0; it < 60; ++it) {
    CircleHomeo cur = at(u);
    const std::vector<cdouble> t = inverse_chart_t(cur);
    double res = 0.0;
    for (int i = 0; i < 2 * N + 1; ++i)
      res = std::max(res, std::abs(t[i] - target_t[i]));
    if (res < tol_) return cur;
    if (res < best * (1.0 - 1e-3))
      flat = 0;
    else if (!strict && ++flat >= 3)
      return cur;  // parked at the projection onto the chart image
    if (res < 0.7 * best) {
      stall = 0;
    } else if (++stall >= 3) {
      refreshed = jacobian(u);
      J = &refreshed;
      stall = -10;  // one refresh only
    }
    best = std::min(best, res);
    std::vector<double> rhs(rows);
    for (int i = 0; i < 2 * N + 1; ++i) {
      rhs[2 * i] = (target_t[i] - t[i]).real();
      rhs[2 * i + 1] = (target_t[i] - t[i]).imag();
    }
    // angle modes beyond the coordinate window are scaled down: they carry
    // almost no fit information but their welded response lands beyond mode
    // N and would poison the probe welds
    const auto col_scale = [&](int c) {
      const int mode = (c + 1) / 2;  // parameter layout: u0, (cos, sin) per mode
      return mode <= N + 2 ? 1.0 : 0.05;
    };
    std::vector<double> du;
    try {
      RMatrix Js = *J;
      for (int r = 0; r < Js.rows; ++r)
        for (int c = 0; c < Js.cols; ++c) Js(r, c) *= col_scale(c);
      du = damped_normal_solve(Js, rhs, 1e-4);
      for (int c = 0; c < Js.cols; ++c) du[c] *= col_scale(c);
    } catch (const SingularMatrix&) {
      throw ChartDegenerate("inverse chart: singular Jacobian");
    }
    double scale = 1.0;
    bool stepped = false;
    for (int back = 0; back < 8 && !stepped; ++back) {
      std::vector<double> trial = u;
      for (size_t i = 0; i < u.size(); ++i) trial[i] += scale * du[i];
      try {
        at(trial);  // may leave the homeomorphism class on a long step
        u = std::move(trial);
        stepped = true;
      } catch (const NotAHomeomorphism&) {
        scale *= 0.5;
      }
    }
    if (!stepped) {
      if (!strict) return cur;
      throw NoConvergence("inverse chart: step keeps leaving the class");
    }
  }
  if (!strict) return at(u);
  throw NoConvergence("inverse chart inversion did not reach tolerance");
}

CircleHomeo InverseChartSolver::solve(const std::vector<cdouble>& target_t) const {
  return solve_impl(target_t, true);
}

CircleHomeo InverseChartSolver::solve_nearest(const std::vector<cdouble>& target_t) const {
  return solve_impl(target_t, false);
}

// In the truncated window t_N responds only to the dropped coefficient
// a_{N+1} (and b_N only to t_{-N-1}), so the invertible block matches t over
// [-N, N-1] with b_N pinned at its base value.
DirectChartSolver::DirectChartSolver(UnivalentPair base, int M, double tol)
    : base_(std::move(base)), grid_(M), tol_(tol) {
  base_.validate();
  base_t_ = direct_chart_t(base_, grid_);
  std::vector<cdouble> x0(2 * base_.order);
  for (int n = 1; n <= base_.order; ++n) x0[n - 1] = base_.f_coeffs[n - 1];
  for (int m = 0; m < base_.order; ++m) x0[base_.order + m] = base_.g_coeffs[m];
  J_ = jacobian(x0);
  const double cond = condition_estimate(J_);
  if (cond > 1e10)
    throw ChartDegenerate("direct chart: Jacobian condition " + std::to_string(cond));
}

UnivalentPair DirectChartSolver::at(const std::vector<cdouble>& x) const {
  UnivalentPair p = base_;
  const int N = base_.order;
  for (int n = 1; n <= N; ++n) p.f_coeffs[n - 1] = x[n - 1];
  for (int m = 0; m < N; ++m) p.g_coeffs[m] = x[N + m];
  p.g_lead = 1.0 / p.f_coeffs[0];
  return p;
}

CMatrix DirectChartSolver::jacobian(const std::vector<cdouble>& x0) const {
  const int N = base_.order;
  const int dim = 2 * N;  // unknowns a_1..a_N, b_0..b_{N-1}; rows t_{-N}..t_{N-1}
  const std::vector<cdouble> t0 = direct_chart_t(at(x0), grid_);
  CMatrix J(dim, dim);
  const double h = 1e-6;
  for (int c = 0; c < dim; ++c) {
    std::vector<cdouble> x = x0;
    x[c] += h;
    const std::vector<cdouble> tc = direct_chart_t(at(x), grid_);
    for (int i = 0; i < dim; ++i) J(i, c) = (tc[i] - t0[i]) / h;
  }
  return J;
}

UnivalentPair DirectChartSolver::solve(const std::vector<cdouble>& target_t) const {
  const int N = base_.order;
  const int dim = 2 * N;
  if (static_cast<int>(target_t.size()) != 2 * N + 1)
    throw Error("DirectChartSolver: target size mismatch");
  std::vector<cdouble> x(dim);
  for (int n = 1; n <= N; ++n) x[n - 1] = base_.f_coeffs[n - 1];
  for (int m = 0; m < N; ++m) x[N + m] = base_.g_coeffs[m];

  const CMatrix* J = &J_;
  CMatrix refreshed;
  double best = 1e300;
  int stall = 0;
  for (int it = 0; it < 60; ++it) {
    const UnivalentPair cur = at(x);
    const std::vector<cdouble> t = direct_chart_t(cur, grid_);
    double res = 0.0;
    for (int i = 0; i < dim; ++i) res = std::max(res, std::abs(t[i] - target_t[i]));
    if (res < tol_) return cur;
    if (res < 0.7 * best) {
      best = res;
      stall = 0;
    } else if (++stall >= 3) {
      refreshed = jacobian(x);
      J = &refreshed;
      stall = -10;
    }
    std::vector<cdouble> rhs(dim);
    for (int i = 0; i < dim; ++i) rhs[i] = target_t[i] - t[i];
    std::vector<cdouble> dx;
    try {
      dx = lu_solve(*J, rhs);
    } catch (const SingularMatrix&) {
      throw ChartDegenerate("direct chart: singular Jacobian");
    }
    for (int i = 0; i < dim; ++i) x[i] += dx[i];
  }
  throw NoConvergence("direct chart inversion did not reach tolerance");
}

CircleHomeo chart_invert(const CoordinateVector& target, const CircleHomeo& base,
                         double tol) {
  if (target.chart != Chart::inverse)
    throw Error("chart_invert: coordinate chart does not match the family");
  return InverseChartSolver(base, tol).solve(target.t);
}

UnivalentPair chart_invert(const CoordinateVector& target, const UnivalentPair& base,
                           int M, double tol) {
  if (target.chart != Chart::direct && target.chart != Chart::extended)
    throw Error("chart_invert: coordinate chart does not match the family");
  return DirectChartSolver(base, M, tol).solve(target.t);
}

}  // namespace dtoda
