#include "dtoda/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dtoda {

namespace {

constexpr double kLossThreshold = 1e-13;

int clampi(int x, int lo, int hi) { return std::max(lo, std::min(hi, x)); }

}  // namespace

TruncatedSeries::TruncatedSeries(int order) : order_(order), c_(1, 0.0) {
  if (order < 0) throw Error("TruncatedSeries: negative order");
}

TruncatedSeries TruncatedSeries::constant(int order, cdouble c) {
  TruncatedSeries s(order);
  s.c_[0] = c;
  return s;
}

TruncatedSeries TruncatedSeries::monomial(int order, int n, cdouble c) {
  TruncatedSeries s(order);
  s.set_coeff(n, c);
  return s;
}

int TruncatedSeries::n_min() const {
  for (int n = lo_; n <= hi_; ++n)
    if (c_[n - lo_] != 0.0) return n;
  return 0;
}

int TruncatedSeries::n_max() const {
  for (int n = hi_; n >= lo_; --n)
    if (c_[n - lo_] != 0.0) return n;
  return 0;
}

cdouble TruncatedSeries::coeff(int n) const {
  if (n < lo_ || n > hi_) return 0.0;
  return c_[n - lo_];
}

void TruncatedSeries::set_coeff(int n, cdouble c) {
  if (std::abs(n) > order_)
    throw Error("TruncatedSeries::set_coeff: exponent " + std::to_string(n) +
                " outside ambient order " + std::to_string(order_));
  if (n < lo_) {
    c_.insert(c_.begin(), lo_ - n, 0.0);
    lo_ = n;
  } else if (n > hi_) {
    c_.insert(c_.end(), n - hi_, 0.0);
    hi_ = n;
  }
  c_[n - lo_] = c;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& rhs) {
  for (int n = rhs.lo_; n <= rhs.hi_; ++n) {
    cdouble c = rhs.coeff(n);
    if (c != 0.0 || (n >= lo_ && n <= hi_)) set_coeff(n, coeff(n) + c);
  }
  loss_ = loss_ || rhs.loss_;
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& rhs) {
  for (int n = rhs.lo_; n <= rhs.hi_; ++n) {
    cdouble c = rhs.coeff(n);
    if (c != 0.0 || (n >= lo_ && n <= hi_)) set_coeff(n, coeff(n) - c);
  }
  loss_ = loss_ || rhs.loss_;
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(cdouble s) {
  for (auto& c : c_) c *= s;
  return *this;
}

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  const int N = a.order();
  if (b.order() != N) throw Error("mul: mismatched ambient orders");
  TruncatedSeries r(N);
  const int lo = clampi(a.n_min() + b.n_min(), -N, N);
  const int hi = clampi(a.n_max() + b.n_max(), -N, N);
  // touch the window edges so intermediate zeros are representable
  r.set_coeff(lo, 0.0);
  r.set_coeff(hi, 0.0);
  double discarded = 0.0, mass = 0.0;
  for (int i = a.n_min(); i <= a.n_max(); ++i) {
    const cdouble ai = a.coeff(i);
    if (ai == 0.0) continue;
    for (int j = b.n_min(); j <= b.n_max(); ++j) {
      const cdouble t = ai * b.coeff(j);
      if (t == 0.0) continue;
      const int e = i + j;
      mass += std::abs(t);
      if (std::abs(e) > N)
        discarded += std::abs(t);
      else
        r.set_coeff(e, r.coeff(e) + t);
    }
  }
  if (a.truncation_loss() || b.truncation_loss() ||
      discarded > kLossThreshold * std::max(1e-300, mass))
    r.mark_loss();
  return r;
}

TruncatedSeries derivative(const TruncatedSeries& a) {
  const int N = a.order();
  TruncatedSeries r(N);
  for (int n = a.n_min(); n <= a.n_max(); ++n) {
    if (n == 0) continue;
    const cdouble c = static_cast<double>(n) * a.coeff(n);
    if (c == 0.0) continue;
    if (std::abs(n - 1) > N)
      r.mark_loss();  // z^{-N} differentiates out of the window
    else
      r.set_coeff(n - 1, c);
  }
  if (a.truncation_loss()) r.mark_loss();
  return r;
}

TruncatedSeries project(const TruncatedSeries& a, Part part) {
  TruncatedSeries r(a.order());
  const auto keep = [part](int n) {
    switch (part) {
      case Part::pos: return n > 0;
      case Part::neg: return n < 0;
      case Part::zero: return n == 0;
      case Part::geq0: return n >= 0;
      case Part::leq0: return n <= 0;
    }
    return false;
  };
  for (int n = a.n_min(); n <= a.n_max(); ++n)
    if (keep(n) && a.coeff(n) != 0.0) r.set_coeff(n, a.coeff(n));
  if (a.truncation_loss()) r.mark_loss();
  return r;
}

TruncatedSeries reciprocal(const TruncatedSeries& a, Expansion form) {
  const int N = a.order();
  // anchor = the factored-out end of the window
  const int v = (form == Expansion::at_zero) ? a.n_min() : a.n_max();
  const cdouble c = a.coeff(v);
  if (std::abs(c) < 1e-12 * std::max(1.0, norm_inf(a)) || c == 0.0)
    throw SingularLeadingCoefficient("reciprocal: vanishing anchor coefficient");
  // a = c z^v (1 + u), u supported strictly on the non-anchored side;
  // solve (1 + u) w = 1 coefficientwise.
  const int dir = (form == Expansion::at_zero) ? 1 : -1;
  const int len = 2 * N;  // relative offsets 0..len of the one-sided expansion
  std::vector<cdouble> u(len + 1, 0.0), w(len + 1, 0.0);
  for (int k = 1; k <= len; ++k) {
    const int e = v + dir * k;
    if (e >= a.n_min() && e <= a.n_max()) u[k] = a.coeff(e) / c;
  }
  w[0] = 1.0;
  for (int k = 1; k <= len; ++k) {
    cdouble s = 0.0;
    for (int j = 1; j <= k; ++j) s += u[j] * w[k - j];
    w[k] = -s;
  }
  TruncatedSeries r(N);
  bool lost = a.truncation_loss();
  for (int k = 0; k <= len; ++k) {
    const int e = -v + dir * k;
    if (w[k] == 0.0) continue;
    if (std::abs(e) > N)
      lost = lost || std::abs(w[k]) > kLossThreshold;
    else
      r.set_coeff(e, w[k] / c);
  }
  if (lost) r.mark_loss();
  return r;
}

TruncatedSeries pow_int(const TruncatedSeries& a, int n, Expansion form) {
  const int N = a.order();
  if (n == 0) return TruncatedSeries::constant(N, 1.0);
  TruncatedSeries base = (n > 0) ? a : reciprocal(a, form);
  TruncatedSeries r = base;
  for (int k = 1; k < std::abs(n); ++k) r = mul(r, base);
  return r;
}

namespace {

Expansion infer_form(const TruncatedSeries& b) {
  if (b.n_min() >= 0) return Expansion::at_zero;
  if (b.n_max() <= 1) return Expansion::at_infinity;
  throw IncompatibleValuation(
      "compose: argument window spans both ends; specify the expansion form");
}

// Horner in descending exponent for the part of a supported on one side.
TruncatedSeries horner_side(const TruncatedSeries& a, const TruncatedSeries& b,
                            bool negative_side, const TruncatedSeries* b_inv) {
  const int N = a.order();
  TruncatedSeries r(N);
  if (!negative_side) {
    const int top = a.n_max();
    if (top < 0) return r;
    for (int e = top; e >= 0; --e) {
      if (e != top) r = mul(r, b);
      r += TruncatedSeries::constant(N, a.coeff(e));
    }
  } else {
    const int bot = a.n_min();
    if (bot >= 0) return r;
    for (int e = bot; e <= -1; ++e) {
      if (e != bot) r = mul(r, *b_inv);
      r += TruncatedSeries::constant(N, a.coeff(e));
    }
    r = mul(r, *b_inv);
  }
  return r;
}

bool circle_regular(const TruncatedSeries& s) {
  const int N = s.order();
  const double scale = 1.0 + norm_l1(s);
  double edge = 0.0;
  for (int n : {N, N - 1, -N, -(N - 1)}) edge = std::max(edge, std::abs(s.coeff(n)));
  return edge <= 1e-11 * scale;
}

}  // namespace

TruncatedSeries compose_horner(const TruncatedSeries& a, const TruncatedSeries& b,
                               Expansion form_of_b) {
  TruncatedSeries r = horner_side(a, b, false, nullptr);
  if (a.n_min() < 0) {
    const TruncatedSeries binv = reciprocal(b, form_of_b);
    r += horner_side(a, b, true, &binv);
  }
  return r;
}

TruncatedSeries compose(const TruncatedSeries& a, const TruncatedSeries& b,
                        Expansion form_of_b) {
  const int N = a.order();
  if (b.order() != N) throw Error("compose: mismatched ambient orders");
  if (circle_regular(a) && circle_regular(b)) {
    int M = 4;
    while (M < 4 * (N + 1)) M <<= 1;
    const CircleGrid gb = CircleGrid::sample(b, M);
    bool ok = true;
    if (a.n_min() < 0) {
      for (const cdouble& s : gb.values())
        if (std::abs(s) < 1e-8) {
          ok = false;
          break;
        }
    }
    if (ok) {
      std::vector<cdouble> vals(M);
      for (int k = 0; k < M; ++k) vals[k] = evaluate(a, gb.values()[k]);
      const CircleGrid gc{std::move(vals)};
      TruncatedSeries r = gc.to_series(-N, N, N);
      double outside = 0.0;
      for (int n = N + 1; n <= M / 2; ++n) {
        outside = std::max(outside, std::abs(gc.fourier_coeff(n)));
        outside = std::max(outside, std::abs(gc.fourier_coeff(-n)));
      }
      if (outside > kLossThreshold * (1.0 + norm_l1(r))) r.mark_loss();
      return r;
    }
  }
  return compose_horner(a, b, form_of_b);
}

TruncatedSeries compose(const TruncatedSeries& a, const TruncatedSeries& b) {
  const Expansion form =
      (a.n_min() >= 0) ? Expansion::at_zero /* unused */ : infer_form(b);
  return compose(a, b, form);
}

TruncatedSeries comp_inverse(const TruncatedSeries& a) {
  const int N = a.order();
  const cdouble lin = a.coeff(1);
  if (std::abs(lin) < 1e-12)
    throw SingularLeadingCoefficient("comp_inverse: |linear coefficient| < 1e-12");
  Expansion form;
  if (a.n_min() >= 1)
    form = Expansion::at_zero;
  else if (a.n_max() <= 1)
    form = Expansion::at_infinity;
  else
    throw IncompatibleValuation("comp_inverse: window spans both ends");

  // linear-term bootstrap, then Newton on coefficients
  TruncatedSeries b(N);
  b.set_coeff(1, 1.0 / lin);
  if (form == Expansion::at_infinity) b.set_coeff(0, -a.coeff(0) / lin);

  const TruncatedSeries da = derivative(a);
  const TruncatedSeries id = TruncatedSeries::identity(N);
  // A'(B) anchors at exponent 0 either way
  const Expansion recip_form = form;
  for (int it = 0; it < 50; ++it) {
    TruncatedSeries err = compose_horner(a, b, form) - id;
    TruncatedSeries step = mul(err, reciprocal(compose_horner(da, b, form), recip_form));
    b -= step;
    if (norm_inf(step) < 1e-14 * std::max(1.0, norm_inf(b))) return b;
  }
  throw Error("comp_inverse: Newton failed to converge in 50 iterations");
}

TruncatedSeries log_unit(const TruncatedSeries& a) {
  const int N = a.order();
  const cdouble c = a.coeff(0);
  const double scale = std::max(1e-300, norm_inf(a));
  if (std::abs(c) < 1e-12 * scale)
    throw NonUnitInput("log_unit: vanishing constant term");
  double pos = 0.0, neg = 0.0;
  for (int n = a.n_min(); n <= a.n_max(); ++n) {
    if (n > 0) pos += std::abs(a.coeff(n));
    if (n < 0) neg += std::abs(a.coeff(n));
  }
  if (pos > 1e-13 * scale && neg > 1e-13 * scale)
    throw NonUnitInput("log_unit: series has content on both sides of the constant");
  const int dir = (pos >= neg) ? 1 : -1;

  // u one-sided: n L_n = n u_n - sum_{m=1}^{n-1} (n-m) L_{n-m} u_m
  std::vector<cdouble> u(N + 1, 0.0), L(N + 1, 0.0);
  for (int k = 1; k <= N; ++k) u[k] = a.coeff(dir * k) / c;
  for (int n = 1; n <= N; ++n) {
    cdouble s = static_cast<double>(n) * u[n];
    for (int m = 1; m < n; ++m) s -= static_cast<double>(n - m) * L[n - m] * u[m];
    L[n] = s / static_cast<double>(n);
  }
  TruncatedSeries r = TruncatedSeries::constant(N, std::log(c));
  for (int k = 1; k <= N; ++k)
    if (L[k] != 0.0) r.set_coeff(dir * k, L[k]);
  if (a.truncation_loss()) r.mark_loss();
  return r;
}

cdouble evaluate(const TruncatedSeries& a, cdouble z) {
  cdouble pos = 0.0;
  if (a.n_max() >= 0) {
    for (int e = a.n_max(); e >= 0; --e) pos = pos * z + a.coeff(e);
  }
  cdouble neg = 0.0;
  if (a.n_min() < 0) {
    if (z == 0.0) throw Error("evaluate: negative exponents at z = 0");
    const cdouble zi = 1.0 / z;
    neg = a.coeff(a.n_min());
    for (int e = a.n_min() + 1; e <= -1; ++e) neg = neg * zi + a.coeff(e);
    neg *= zi;
  }
  return pos + neg;
}

double norm_l1(const TruncatedSeries& a) {
  double s = 0.0;
  for (int n = a.n_min(); n <= a.n_max(); ++n) s += std::abs(a.coeff(n));
  return s;
}

double norm_inf(const TruncatedSeries& a) {
  double s = 0.0;
  for (int n = a.n_min(); n <= a.n_max(); ++n) s = std::max(s, std::abs(a.coeff(n)));
  return s;
}

double max_coeff_dist(const TruncatedSeries& a, const TruncatedSeries& b) {
  double s = 0.0;
  const int lo = std::min(a.n_min(), b.n_min());
  const int hi = std::max(a.n_max(), b.n_max());
  for (int n = lo; n <= hi; ++n) s = std::max(s, std::abs(a.coeff(n) - b.coeff(n)));
  return s;
}

namespace detail {

bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

void fft(std::vector<cdouble>& x, int sign) {
  const int n = static_cast<int>(x.size());
  if (!is_pow2(n)) throw Error("fft: length must be a power of two");
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / len;
    const cdouble wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cdouble w = 1.0;
      for (int k = 0; k < len / 2; ++k) {
        const cdouble u = x[i + k];
        const cdouble v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace detail

CircleGrid::CircleGrid(int M) : v_(M, 0.0) {
  if (!detail::is_pow2(M) || M < 4) throw GridTooSmall("CircleGrid: M must be a power of two >= 4");
}

CircleGrid::CircleGrid(std::vector<cdouble> samples) : v_(std::move(samples)) {
  if (!detail::is_pow2(size()) || size() < 4)
    throw GridTooSmall("CircleGrid: M must be a power of two >= 4");
}

cdouble CircleGrid::node(int k) const {
  const double th = 2.0 * std::numbers::pi * k / size();
  return {std::cos(th), std::sin(th)};
}

CircleGrid CircleGrid::sample(const TruncatedSeries& a, int M) {
  if (M < 4 * (a.order() + 1))
    throw GridTooSmall("CircleGrid::sample: need M >= 4(N+1)");
  CircleGrid g(M);
  std::vector<cdouble> bins(M, 0.0);
  for (int n = a.n_min(); n <= a.n_max(); ++n) {
    const int b = ((n % M) + M) % M;
    bins[b] += a.coeff(n);
  }
  detail::fft(bins, +1);
  g.v_ = std::move(bins);
  return g;
}

TruncatedSeries CircleGrid::to_series(int lo, int hi, int order) const {
  const int M = size();
  std::vector<cdouble> bins = v_;
  detail::fft(bins, -1);
  TruncatedSeries r(order);
  for (int n = lo; n <= hi; ++n) {
    if (std::abs(n) > order) continue;
    const int b = ((n % M) + M) % M;
    const cdouble c = bins[b] / static_cast<double>(M);
    if (c != 0.0) r.set_coeff(n, c);
  }
  return r;
}

cdouble CircleGrid::fourier_coeff(int n) const {
  const int M = size();
  cdouble s = 0.0;
  for (int k = 0; k < M; ++k) {
    const double th = -2.0 * std::numbers::pi * n * k / M;
    s += v_[k] * cdouble(std::cos(th), std::sin(th));
  }
  return s / static_cast<double>(M);
}

cdouble CircleGrid::contour_integral() const {
  const int M = size();
  cdouble s = 0.0;
  for (int k = 0; k < M; ++k) s += v_[k] * node(k);
  return s / static_cast<double>(M);
}

}  // namespace dtoda
