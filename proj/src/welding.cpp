#include "dtoda/welding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dtoda/linalg.hpp"

namespace dtoda {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double x) {
  x = std::fmod(x, kTwoPi);
  return x < 0.0 ? x + kTwoPi : x;
}

}  // namespace

void CircleHomeo::finalize() {
  const int M = grid_size();
  if (!detail::is_pow2(M) || M < 4 * (order_ + 1))
    throw GridTooSmall("CircleHomeo: need a power-of-two grid with M >= 4(N+1)");
  for (const cdouble& s : samples_)
    if (std::abs(std::abs(s) - 1.0) > 1e-10)
      throw NotAHomeomorphism("CircleHomeo: samples leave the unit circle");

  spectrum_ = samples_;
  detail::fft(spectrum_, -1);
  for (auto& c : spectrum_) c /= static_cast<double>(M);
  fourier_.assign(2 * order_ + 1, 0.0);
  for (int n = -order_ - 1; n <= order_ - 1; ++n) {
    const int bin = (((n + 1) % M) + M) % M;  // coefficient of w^{n+1}
    fourier_[n + order_ + 1] = spectrum_[bin];
  }

  angles_.resize(M);
  double prev = std::arg(samples_[0]);
  angles_[0] = prev;
  for (int k = 1; k < M; ++k) {
    double a = std::arg(samples_[k]);
    while (a < prev) a += kTwoPi;
    while (a - prev > kTwoPi) a -= kTwoPi;
    if (a <= prev)
      throw NotAHomeomorphism("CircleHomeo: boundary angle not strictly increasing");
    angles_[k] = a;
    prev = a;
  }
  if (angles_[M - 1] - angles_[0] >= kTwoPi)
    throw NotAHomeomorphism("CircleHomeo: winding number is not one");
}

CircleHomeo CircleHomeo::identity(int N, int M) {
  CircleHomeo g;
  g.order_ = N;
  g.samples_.resize(M);
  for (int k = 0; k < M; ++k) {
    const double th = kTwoPi * k / M;
    g.samples_[k] = cdouble(std::cos(th), std::sin(th));
  }
  g.finalize();
  return g;
}

CircleHomeo CircleHomeo::mobius(const MobiusParams& p, int N, int M) {
  if (std::abs(p.a) > 0.9)
    throw Error("CircleHomeo::mobius: |a| <= 0.9 required");
  CircleHomeo g;
  g.order_ = N;
  g.samples_.resize(M);
  const cdouble phase(std::cos(p.alpha), -std::sin(p.alpha));
  for (int k = 0; k < M; ++k) {
    const double th = kTwoPi * k / M;
    const cdouble z(std::cos(th), std::sin(th));
    g.samples_[k] = phase * (z + std::conj(p.a)) / (1.0 + p.a * z);
  }
  g.finalize();
  return g;
}

CircleHomeo CircleHomeo::from_samples(std::vector<cdouble> samples, int N) {
  CircleHomeo g;
  g.order_ = N;
  g.samples_ = std::move(samples);
  g.finalize();
  return g;
}

CircleHomeo CircleHomeo::from_fourier(const std::vector<std::pair<int, cdouble>>& coeffs,
                                      int N, int M) {
  std::vector<cdouble> bins(M, 0.0);
  for (const auto& [n, c] : coeffs) {
    if (n < -N - 1 || n > N - 1)
      throw Error("CircleHomeo::from_fourier: mode outside [-N-1, N-1]");
    bins[(((n + 1) % M) + M) % M] += c;
  }
  detail::fft(bins, +1);
  CircleHomeo g;
  g.order_ = N;
  g.samples_ = std::move(bins);
  g.finalize();
  return g;
}

CircleHomeo CircleHomeo::perturbed(const CircleHomeo& base,
                                   const std::vector<std::pair<int, cdouble>>& modes) {
  const int M = base.grid_size();
  std::vector<cdouble> samples(M);
  for (int k = 0; k < M; ++k) {
    const double th = kTwoPi * k / M;
    double bump = 0.0;
    for (const auto& [n, eta] : modes) {
      const cdouble e(std::cos(n * th), std::sin(n * th));
      bump += (eta * e).real();
    }
    const double ang = base.angles()[k] + bump;
    samples[k] = cdouble(std::cos(ang), std::sin(ang));
  }
  return from_samples(std::move(samples), base.order());
}

cdouble CircleHomeo::fourier_coeff(int n) const {
  if (n < -order_ - 1 || n > order_ - 1) return 0.0;
  return fourier_[n + order_ + 1];
}

cdouble CircleHomeo::eval_angle(double theta) const {
  const int M = grid_size();
  const cdouble w(std::cos(theta), std::sin(theta));
  const cdouble wc = std::conj(w);
  cdouble s = spectrum_[0];
  cdouble up = 1.0, dn = 1.0;
  for (int j = 1; j <= M / 2 - 1; ++j) {
    up *= w;
    dn *= wc;
    s += spectrum_[j] * up + spectrum_[M - j] * dn;
  }
  return s;
}

cdouble CircleHomeo::eval_angle_derivative(double theta) const {
  const int M = grid_size();
  const cdouble w(std::cos(theta), std::sin(theta));
  const cdouble wc = std::conj(w);
  cdouble s = 0.0;
  cdouble up = 1.0, dn = 1.0;
  for (int j = 1; j <= M / 2 - 1; ++j) {
    up *= w;
    dn *= wc;
    s += cdouble(0.0, static_cast<double>(j)) * (spectrum_[j] * up - spectrum_[M - j] * dn);
  }
  return s;
}

WeldingSolution mobius_weld(const MobiusParams& p, int N, int M) {
  if (std::abs(p.a) > 0.9) throw Error("mobius_weld: |a| <= 0.9 required");
  const double root = std::sqrt(1.0 - std::norm(p.a));
  const cdouble half_phase(std::cos(p.alpha / 2), std::sin(p.alpha / 2));
  const cdouble b = half_phase / root;
  const cdouble c = -std::conj(p.a) / (half_phase * root);

  TruncatedSeries f(N), g(N);
  cdouble coeff = 1.0 / b;
  for (int n = 1; n <= N; ++n) {
    f.set_coeff(n, coeff);  // f = (1/b) z / (1 + a z)
    coeff *= -p.a;
  }
  g.set_coeff(1, b);
  g.set_coeff(0, c);

  WeldingSolution sol{UnivalentPair::from_series(f, g), 0.0, 0, {}};
  const CircleGrid fg = CircleGrid::sample(f, M);
  sol.curve_samples = fg.values();
  const CircleHomeo gamma = CircleHomeo::mobius(p, N, M);
  double sup = 0.0;
  for (int k = 0; k < M; ++k)
    sup = std::max(sup, std::abs(fg.values()[k] - (b * gamma.samples()[k] + c)));
  sol.residual_sup = sup;
  return sol;
}

MobiusParams mobius_fit(const CircleHomeo& gamma) {
  const cdouble c0 = gamma.fourier_coeff(0);
  const cdouble c1 = gamma.fourier_coeff(1);
  if (std::abs(c0) < 1e-8)
    throw NotAHomeomorphism("mobius_fit: degenerate leading Fourier mode");
  MobiusParams p;
  p.a = -c1 / c0;
  if (std::abs(p.a) > 0.9) p.a *= 0.9 / std::abs(p.a);
  p.alpha = -std::arg(c0 / (1.0 - std::norm(p.a)));
  return p;
}

WeldingSolution weld(const CircleHomeo& gamma, double tol, int max_iter,
                     double tail_guard) {
  const UnivalentPair guess =
      mobius_weld(mobius_fit(gamma), gamma.order(), gamma.grid_size()).pair;
  return weld_from(gamma, guess, tol, max_iter, tail_guard);
}

WeldingSolution weld_from(const CircleHomeo& gamma, const UnivalentPair& initial,
                          double tol, int max_iter, double tail_guard) {
  if (tail_guard < 0.0) tail_guard = 10.0 * tol;
  const int N = gamma.order();
  const int M = gamma.grid_size();
  const int dim = 2 * N + 1;  // a_1..a_N, b_0..b_N
  // Fit twice the unknown window in least squares: the square [-N, N] system
  // leaves directions it cannot see, and their image spills into the modes
  // just beyond N on deformed inputs.  The guard band is down-weighted so the
  // unresolvable physical tail cannot drag the in-window fit off its zero.
  const int K = std::min(2 * N, M / 2 - 1);
  const int rows = 2 * K + 1;
  // phase 1 keeps a down-weighted guard band; once the in-window residual is
  // nearly converged the guard is dropped and plain Newton polishes the
  // square system (the pinned directions no longer move)
  double guard_weight = 0.03;
  const auto row_weight = [&](int n) { return std::abs(n) <= N ? 1.0 : guard_weight; };

  UnivalentPair pair = initial;

  // Fourier modes of gamma^{-m}, m = 0..N, and of gamma itself; gamma is
  // fixed throughout, so these Jacobian pieces are constant.
  std::vector<std::vector<cdouble>> gpow_modes(N + 1);
  std::vector<cdouble> pw(M, 1.0);
  for (int m = 0; m <= N; ++m) {
    std::vector<cdouble> bins = pw;
    detail::fft(bins, -1);
    for (auto& c : bins) c /= static_cast<double>(M);
    gpow_modes[m] = std::move(bins);
    if (m < N)
      for (int k = 0; k < M; ++k) pw[k] /= gamma.samples()[k];
  }
  std::vector<cdouble> gamma_modes(M);
  {
    std::vector<cdouble> bins = gamma.samples();
    detail::fft(bins, -1);
    for (auto& c : bins) c /= static_cast<double>(M);
    gamma_modes = std::move(bins);
  }
  const auto bin = [M](int n) { return ((n % M) + M) % M; };

  struct State {
    std::vector<cdouble> modes;  // residual Fourier modes in [-K, K]
    double mode_norm = 0.0;      // max |mode| over [-N, N], the solvable part
    double fit_l2 = 0.0;         // l2 over the fitted window, the GN objective
    double sup = 0.0;            // pointwise sup, includes the tail
    double tail = 0.0;           // max residual mode beyond N
  };
  const auto eval_state = [&](const UnivalentPair& pr) {
    const TruncatedSeries fs = pr.f_series();
    const TruncatedSeries gs = pr.g_series();
    std::vector<cdouble> r(M);
    const CircleGrid fgrid = CircleGrid::sample(fs, M);
    State st;
    for (int k = 0; k < M; ++k) {
      r[k] = fgrid.values()[k] - evaluate(gs, gamma.samples()[k]);
      st.sup = std::max(st.sup, std::abs(r[k]));
    }
    detail::fft(r, -1);
    for (auto& c : r) c /= static_cast<double>(M);
    st.modes.assign(rows, 0.0);
    for (int n = -K; n <= K; ++n) {
      st.modes[n + K] = r[bin(n)];
      st.fit_l2 += std::norm(row_weight(n) * st.modes[n + K]);
      if (std::abs(n) <= N)
        st.mode_norm = std::max(st.mode_norm, std::abs(st.modes[n + K]));
    }
    st.fit_l2 = std::sqrt(st.fit_l2);
    st.tail = 0.0;
    for (int n = N + 1; n <= M - N - 1; ++n) st.tail = std::max(st.tail, std::abs(r[n]));
    return st;
  };

  State st = eval_state(pair);

  // the residual is linear in the unknowns except through b = 1/a_1, so the
  // damping can start essentially off
  double lambda = 1e-8;
  int iters = 0;
  bool polish = false;
  while (st.mode_norm >= tol && iters < max_iter) {
    if (!polish && st.mode_norm < 1e3 * tol) {
      polish = true;
      guard_weight = 0.0;
      lambda = 1e-10;
      st = eval_state(pair);  // objective changes with the weights
    }
    // complex Jacobian in mode space; column order a_1..a_N, b_0..b_N
    CMatrix J(rows, dim);
    const cdouble a1 = pair.a1();
    for (int col = 0; col < N; ++col) {
      const int n = col + 1;
      J(n + K, col) += 1.0;  // d r / d a_n = w^n
      if (n == 1)
        for (int row = -K; row <= K; ++row)
          J(row + K, col) += gamma_modes[bin(row)] / (a1 * a1);
    }
    for (int col = 0; col <= N; ++col)
      for (int row = -K; row <= K; ++row)
        J(row + K, N + col) = -gpow_modes[col][bin(row)];
    for (int row = -K; row <= K; ++row) {
      const double w = row_weight(row);
      if (w == 1.0) continue;
      for (int col = 0; col < dim; ++col) J(row + K, col) *= w;
    }

    std::vector<cdouble> rhs(rows);
    for (int i = 0; i < rows; ++i) rhs[i] = -row_weight(i - K) * st.modes[i];
    std::vector<cdouble> step;
    try {
      step = damped_normal_solve(J, rhs, lambda);
    } catch (const SingularMatrix&) {
      throw NoConvergence("weld: singular Gauss-Newton system");
    }

    UnivalentPair trial = pair;
    for (int n = 1; n <= N; ++n) trial.f_coeffs[n - 1] += step[n - 1];
    for (int m = 0; m <= N; ++m) trial.g_coeffs[m] += step[N + m];
    trial.g_lead = 1.0 / trial.f_coeffs[0];

    State trial_st;
    bool ok = true;
    try {
      trial_st = eval_state(trial);
    } catch (const Error&) {
      ok = false;
    }
    ++iters;
    if (ok && (trial_st.fit_l2 < st.fit_l2 || trial_st.mode_norm < tol)) {
      pair = trial;
      st = std::move(trial_st);
      lambda = std::max(1e-14, lambda * 0.3);
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) {
        if (!polish) {
          polish = true;  // weighted objective bottomed out; drop the guard
          guard_weight = 0.0;
          lambda = 1e-10;
          st = eval_state(pair);
          continue;
        }
        throw NoConvergence("weld: step rejected repeatedly");
      }
    }
  }
  if (st.mode_norm >= tol)
    throw NoConvergence("weld: iteration budget exhausted, mode residual " +
                        std::to_string(st.mode_norm));
  if (st.tail > tail_guard)
    throw TruncationUndersized(
        "weld: modes converged but residual energy beyond mode N exceeds the guard");

  WeldingSolution sol{pair, st.sup, iters, {}};
  const CircleGrid fgrid = CircleGrid::sample(pair.f_series(), M);
  sol.curve_samples = fgrid.values();
  return sol;
}

CircleHomeo gamma_from_pair(const UnivalentPair& pair, int M) {
  pair.validate();
  const TruncatedSeries fs = pair.f_series();
  const TruncatedSeries gs = pair.g_series();
  const TruncatedSeries dgs = derivative(gs);
  const CircleGrid fgrid = CircleGrid::sample(fs, M);
  const CircleGrid ggrid = CircleGrid::sample(gs, M);

  std::vector<double> theta(M, 0.0);
  for (int k = 0; k < M; ++k) {
    const cdouble target = fgrid.values()[k];
    double th;
    if (k == 0) {
      // coarse scan for the global start; continuation handles the rest
      double best = 1e300;
      th = 0.0;
      for (int j = 0; j < M; ++j) {
        const double d = std::abs(ggrid.values()[j] - target);
        if (d < best) {
          best = d;
          th = kTwoPi * j / M;
        }
      }
    } else if (k == 1) {
      th = theta[0] + kTwoPi / M;
    } else {
      th = 2.0 * theta[k - 1] - theta[k - 2];
    }
    bool done = false;
    for (int it = 0; it < 40; ++it) {
      const cdouble w(std::cos(th), std::sin(th));
      const cdouble h = evaluate(gs, w) - target;
      const cdouble dh = cdouble(0.0, 1.0) * w * evaluate(dgs, w);
      if (std::abs(dh) < 1e-14)
        throw NewtonStall("gamma_from_pair: derivative vanished at node " +
                          std::to_string(k));
      const double step = (h / dh).real();
      th -= step;
      if (std::abs(step) < 1e-14) {
        done = true;
        break;
      }
    }
    if (!done)
      throw NewtonStall("gamma_from_pair: no convergence at node " + std::to_string(k));
    theta[k] = th;
  }
  std::vector<cdouble> out(M);
  for (int k = 0; k < M; ++k) out[k] = cdouble(std::cos(theta[k]), std::sin(theta[k]));
  return CircleHomeo::from_samples(std::move(out), pair.order);
}

std::vector<cdouble> invert_circle_map(const CircleHomeo& gamma) {
  const int M = gamma.grid_size();
  const std::vector<double>& psi = gamma.angles();  // psi_k = arg gamma(w_k), increasing
  const auto psi_at = [&](int idx) { return idx < M ? psi[idx] : psi[0] + kTwoPi; };

  std::vector<cdouble> out(M);
  for (int j = 0; j < M; ++j) {
    // solve arg gamma(e^{i theta}) = 2 pi j / M (mod 2 pi) for theta
    const double target = psi[0] + wrap_2pi(kTwoPi * j / M - psi[0]);
    int lo = 0, hi = M;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      if (psi_at(mid) <= target)
        lo = mid;
      else
        hi = mid;
    }
    const double th_lo = kTwoPi * lo / M, th_hi = kTwoPi * hi / M;
    const double cell = std::max(1e-300, psi_at(hi) - psi_at(lo));
    double theta = th_lo + (th_hi - th_lo) * (target - psi_at(lo)) / cell;

    for (int it = 0; it < 60; ++it) {
      const cdouble gv = gamma.eval_angle(theta);
      const cdouble gd = gamma.eval_angle_derivative(theta);
      // branch of arg gv: the bracket spans less than a winding, so pick the
      // lift closest to the bracket midpoint
      const double mid = 0.5 * (psi_at(lo) + psi_at(hi));
      const double ang = mid + std::remainder(std::arg(gv) - mid, kTwoPi);
      const double slope = (gd / gv).imag();  // d(arg gamma)/d(theta)
      if (slope <= 0.0)
        throw NotAHomeomorphism("invert_circle_map: non-monotone boundary angle");
      const double err = ang - target;
      if (std::abs(err) < 1e-13) break;
      double next = theta - err / slope;
      if (next < th_lo || next > th_hi)
        next = 0.5 * (theta + (err > 0.0 ? th_lo : th_hi));  // bisect toward the root
      if (std::abs(next - theta) < 1e-15) {
        theta = next;
        break;
      }
      theta = next;
    }
    out[j] = cdouble(std::cos(theta), std::sin(theta));
  }
  return out;
}

}  // namespace dtoda
