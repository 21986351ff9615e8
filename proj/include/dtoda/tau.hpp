#pragma once

#include <vector>

#include "dtoda/fd.hpp"
#include "dtoda/grunsky.hpp"

namespace dtoda {

// psi/phi (inverse chart) or Psi/Phi (direct chart): the formal potentials
// whose coefficients are the v's, psi = sum v_{-n}/n z^n, phi = sum v_n/n z^{-n}.
struct GeneratingPotentials {
  Chart chart = Chart::inverse;
  TruncatedSeries psi, phi;
};

GeneratingPotentials potentials(const CoordinateVector& coords);

// 4 log tau = 2 t_0 v_0 - t_0^2
//           + (1/2 pi i) contour (1/gamma^{-1})(w phi' + 2 phi) dw
//           + (1/2 pi i) contour (gamma/w^2)(w psi' - 2 psi) dw
cdouble log_tau_inverse(const CircleHomeo& gamma, const WeldingSolution& sol,
                        const CoordinateVector& coords);

// Direct-chart value.  The two contour integrals reduce termwise against the
// coordinate quadratures to -(n-2)(t_n v_n + t_{-n} v_{-n}); summing that
// form keeps the evaluation inside every coefficient's convergence annulus.
cdouble log_tau_direct(const UnivalentPair& pair, const CoordinateVector& coords);

// Literal S^1 quadrature of the direct-chart integrals with the potentials
// evaluated pointwise.  Valid only while the potential tails decay on the
// curve; used as an independent cross-check at small deformations.
cdouble log_tau_direct_quadrature(const UnivalentPair& pair,
                                  const CoordinateVector& coords, int M);

// Extended (real) value: the direct-chart expression plus its conjugate.
double log_tau_extended(const UnivalentPair& pair, const CoordinateVector& coords);

cdouble log_tau(const ChartFamily::Point& p);

struct FreeEnergyRecord {
  Chart chart = Chart::inverse;
  cdouble log_tau = 0.0;
  std::vector<int> indices;              // probed n
  std::vector<cdouble> gradient;         // d log tau / d t_n
  std::vector<cdouble> hessian;          // row-major over indices x indices
};

// Centered differences with one Richardson pass (h and h/2).  Direct and
// extended families realize axis shifts exactly and use classical stencils;
// inverse families probe nearest feasible points and the differentials are
// recovered by the regression in DerivativeProbes.  The second derivatives of
// the inverse chart go through the generated first derivatives: the gradient
// of log tau is checked against v, and the Hessian is the regressed
// d v_m / d t_n, which the free energy identities make the same object.
std::vector<cdouble> gradient_fd(const ChartFamily& family, const std::vector<int>& idx,
                                 double h, bool richardson = true);
FreeEnergyRecord hessian_fd(const ChartFamily& family, const std::vector<int>& idx,
                            double h, bool richardson = true);

// The Hessian pattern the free energy must reproduce:
//   -|mn| b_{m,n} (m, n != 0),  |m| b_{m,0} (n = 0),  -2 b_{0,0} (m = n = 0),
// with b the Grunsky matrix of (f, g) for the inverse chart and of (F, G)
// for the direct/extended charts.
cdouble hessian_expected(const GrunskyMatrix& gm, int m, int n);

}  // namespace dtoda
