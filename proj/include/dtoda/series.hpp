#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dtoda {

using cdouble = std::complex<double>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularLeadingCoefficient : Error { using Error::Error; };
struct IncompatibleValuation : Error { using Error::Error; };
struct NonUnitInput : Error { using Error::Error; };
struct GridTooSmall : Error { using Error::Error; };

enum class Part { pos, neg, zero, geq0, leq0 };

// Which end of a Laurent window anchors a reciprocal/composition:
// at_zero expands around the origin (factor out the lowest exponent),
// at_infinity around infinity (factor out the highest exponent).
enum class Expansion { at_zero, at_infinity };

// Finite window of complex Laurent coefficients.  Every operation clips its
// result to the ambient window [-order, order]; coefficient mass discarded by
// clipping beyond 1e-13 (relative) sets the truncation-loss flag.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int order);

  static TruncatedSeries constant(int order, cdouble c);
  static TruncatedSeries monomial(int order, int n, cdouble c = 1.0);
  static TruncatedSeries identity(int order) { return monomial(order, 1); }

  int order() const { return order_; }
  // window of the nonzero support; [0, 0] for the zero series
  int n_min() const;
  int n_max() const;

  cdouble coeff(int n) const;
  void set_coeff(int n, cdouble c);

  bool truncation_loss() const { return loss_; }
  void mark_loss() { loss_ = true; }

  TruncatedSeries& operator+=(const TruncatedSeries& rhs);
  TruncatedSeries& operator-=(const TruncatedSeries& rhs);
  TruncatedSeries& operator*=(cdouble s);

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) {
    a += b;
    return a;
  }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) {
    a -= b;
    return a;
  }
  friend TruncatedSeries operator*(TruncatedSeries a, cdouble s) {
    a *= s;
    return a;
  }
  friend TruncatedSeries operator*(cdouble s, TruncatedSeries a) {
    a *= s;
    return a;
  }
  friend TruncatedSeries operator-(TruncatedSeries a) {
    a *= -1.0;
    return a;
  }

 private:
  int order_;
  int lo_ = 0, hi_ = 0;
  std::vector<cdouble> c_;  // c_[i] = coefficient of z^(lo_ + i)
  bool loss_ = false;
};

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);
inline TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  return mul(a, b);
}

TruncatedSeries derivative(const TruncatedSeries& a);
TruncatedSeries project(const TruncatedSeries& a, Part part);
TruncatedSeries pow_int(const TruncatedSeries& a, int n, Expansion form);

// 1/A as a Laurent expansion anchored at the chosen end of A's window.
TruncatedSeries reciprocal(const TruncatedSeries& a, Expansion form);

// A(B(z)).  The expansion form of B is inferred from its window (explicit
// overload below when the window alone is ambiguous).  Circle-regular inputs
// go through sample-evaluate-refit on a grid, everything else through
// coefficient Horner.
TruncatedSeries compose(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries compose(const TruncatedSeries& a, const TruncatedSeries& b,
                        Expansion form_of_b);
TruncatedSeries compose_horner(const TruncatedSeries& a, const TruncatedSeries& b,
                               Expansion form_of_b);

// Series B with A(B(z)) = z through order N.  A must be a_1 z + ... (Taylor)
// or b z + b_0 + b_1/z + ... (expansion at infinity) with nonvanishing linear
// coefficient.
TruncatedSeries comp_inverse(const TruncatedSeries& a);

// log A for A = c (1 + u) with u supported strictly on one side of zero.
// Principal branch of log c; the series part is branch-free.
TruncatedSeries log_unit(const TruncatedSeries& a);

cdouble evaluate(const TruncatedSeries& a, cdouble z);

double norm_l1(const TruncatedSeries& a);
double norm_inf(const TruncatedSeries& a);
// max |a_n - b_n| over the union of both windows
double max_coeff_dist(const TruncatedSeries& a, const TruncatedSeries& b);

// Samples h(w_k) at the M-th roots of unity w_k = exp(2 pi i k / M).
// M must be a power of two; sampling a series of order N needs M >= 4(N+1)
// so that products of two full-window series stay alias-free.
class CircleGrid {
 public:
  explicit CircleGrid(int M);
  explicit CircleGrid(std::vector<cdouble> samples);

  int size() const { return static_cast<int>(v_.size()); }
  cdouble node(int k) const;
  const std::vector<cdouble>& values() const { return v_; }
  std::vector<cdouble>& values() { return v_; }

  static CircleGrid sample(const TruncatedSeries& a, int M);

  // Fourier window read; exponents are mod-M bin classes, so content beyond
  // the Nyquist range aliases onto its representative bin.
  TruncatedSeries to_series(int lo, int hi, int order) const;
  cdouble fourier_coeff(int n) const;

  // (1/2 pi i) closed contour integral of the sampled function over S^1,
  // i.e. mean of h_k * w_k.  Spectrally exact for band-limited integrands.
  cdouble contour_integral() const;

 private:
  std::vector<cdouble> v_;
};

namespace detail {
// X_j = sum_k x_k exp(sign 2 pi i j k / M), M a power of two.
void fft(std::vector<cdouble>& x, int sign);
bool is_pow2(int m);
}  // namespace detail

}  // namespace dtoda
