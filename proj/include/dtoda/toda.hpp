#pragma once

#include "dtoda/fd.hpp"

namespace dtoda {

struct TailDivergence : Error { using Error::Error; };
struct EvaluationOffDomain : Error { using Error::Error; };

// Lax pair in the spectral variable p:
//   L(p)      = r p + sum_{n>=0} u_{n+1} p^{-n}
//   L~^{-1}(p) = r p^{-1} + sum_{n>=0} u~_{n+1} p^{n}
// with the common r.  Direct chart: (L, L~) = (g, f); inverse chart:
// (L, L~) = (g^{-1}, f^{-1}).
struct LaxPair {
  Chart source = Chart::direct;
  TruncatedSeries L{0}, Ltilde{0}, Ltilde_inv{0};
};

LaxPair lax_from_pair(const UnivalentPair& pair, Chart chart);
LaxPair lax_from_point(const ChartFamily::Point& p);

// B_n = (L^n)_{>0} + (1/2)(L^n)_0 for n >= 1.
TruncatedSeries b_operator(const TruncatedSeries& L, int n);
// B~_n = ((L~^{-1})^n)_{<0} + (1/2)((L~^{-1})^n)_0 for n >= 1; takes L~^{-1}.
TruncatedSeries b_tilde_operator(const TruncatedSeries& Ltilde_inv, int n);

// {A, B}_T = p (dA/dp)(dB/dt_0) - p (dA/dt_0)(dB/dp), with the t_0
// derivatives supplied by the caller.
TruncatedSeries poisson(const TruncatedSeries& A, const TruncatedSeries& A_t0,
                        const TruncatedSeries& B, const TruncatedSeries& B_t0);

double norm_window_inf(const TruncatedSeries& s, int lo, int hi);

struct LaxReport {
  int n = 0;
  double h = 0.0;
  double residual = 0.0;         // max of the two sibling equations
  double residual_L = 0.0;       // || d L/d t_n - {B, L} ||
  double residual_Ltilde = 0.0;  // || d L~/d t_n - {B, L~} ||
};

// Finite-difference Lax residual for the flow t_n (n != 0, |n| <= order/2);
// every t_0 derivative inside the bracket is itself a finite difference.
// Inverse-chart families probe through DerivativeProbes; a shared probe
// cloud can be passed in when several flows are evaluated at one base.
LaxReport lax_residual(const ChartFamily& family, int n, double h);
LaxReport lax_residual(const ChartFamily& family, int n, const DerivativeProbes& probes);

// || {L, L~^{-1}}_T - 1 || over coefficients up to order N/2.
double string_residual(const ChartFamily& family, double h);
double string_residual(const ChartFamily& family, const DerivativeProbes& probes);

struct RhReport {
  double res1 = 0.0;    // sup | L^{-1} M - L~^{-1} |
  double res2 = 0.0;    // sup | L~ M~ - L |
  double res_mm = 0.0;  // sup | M - M~ |
};

// Direct chart: node set is S^1.
RhReport rh_residual(const UnivalentPair& pair, const CoordinateVector& coords, int M);
// Inverse chart: the relations hold on the welded curve; nodes are the curve
// points pulled back through the pair, where L = gamma(w) and L~ = w.
RhReport rh_residual_inverse(const CircleHomeo& gamma, const CoordinateVector& coords);

struct OrlovPair {
  TruncatedSeries M, Mtilde;
};

// M = sum n t_n L^n + t_0 + sum v_n L^{-n} (cut at order/2, tail monitored),
// M~ = -sum n t_{-n} L~^{-n} + t_0 - sum v_{-n} L~^n.
OrlovPair orlov(const CoordinateVector& coords, const LaxPair& lax);

}  // namespace dtoda
