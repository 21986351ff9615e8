#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "dtoda/linalg.hpp"
#include "dtoda/welding.hpp"

namespace dtoda {

struct FVanishesOnCircle : Error { using Error::Error; };
struct ChartDegenerate : Error { using Error::Error; };

enum class Chart { inverse, direct, extended, wz };

const char* chart_name(Chart c);

struct CoordinateVector {
  Chart chart = Chart::inverse;
  int order = 0;
  std::vector<cdouble> t, v;  // index n + order, n in [-order, order]

  CoordinateVector() = default;
  CoordinateVector(Chart c, int N)
      : chart(c), order(N), t(2 * N + 1, 0.0), v(2 * N + 1, 0.0) {}

  cdouble t_at(int n) const { return t.at(n + order); }
  cdouble v_at(int n) const { return v.at(n + order); }
  void set_t(int n, cdouble x) { t.at(n + order) = x; }
  void set_v(int n, cdouble x) { v.at(n + order) = x; }
};

// Fourier-side chart: gamma carries t_{-n}, t_0, v_{-n}; 1/gamma^{-1} carries
// t_n, v_n; v_0 needs the welded pair for its curve integral.
CoordinateVector inverse_chart(const CircleHomeo& gamma, const WeldingSolution& sol);

// Contour-integral chart over S^1 for a (free or welded) pair; the same
// integrals serve the welded (direct) and unconstrained (extended) readings.
CoordinateVector direct_chart(const UnivalentPair& pair, int M,
                              Chart tag = Chart::direct);

struct CauchyData {
  TruncatedSeries S_plus, S_minus, St_plus, St_minus;
};

CauchyData cauchy_data(const UnivalentPair& pair, int M);

// Exterior-map harmonic moments t_n = (1/2 pi i) contour z^{-n} zbar dz, with
// t_{-n} = -conj(t_n), v_{-n} = -conj(v_n).  v_0 is the interior area
// integral of log|z| relative to the centered disc of equal area (the gauge
// in which every centered disc has v_0 = 0).
CoordinateVector wz_moments(const TruncatedSeries& g, int M);

// Newton inversion of the inverse chart over boundary-angle perturbations of
// a base homeomorphism.  Matches the t-half of `target`; the v's ride along.
class InverseChartSolver {
 public:
  // angle_modes <= 0 picks the default 4N: the matched window [-N, N] leaves
  // the higher Fourier coordinates free, and the solver needs enough
  // parameters for them to absorb the motion
  InverseChartSolver(CircleHomeo base, double tol = 1e-10, int angle_modes = 0);
  // strict inversion: throws NoConvergence when the target cannot be reached
  CircleHomeo solve(const std::vector<cdouble>& target_t) const;
  // projection: returns the family point whose t-vector is nearest to the
  // target (the chart image is a real hypersurface, so an exact match may
  // not exist; the residual is then normal to the reachable tangent space)
  CircleHomeo solve_nearest(const std::vector<cdouble>& target_t) const;
  const std::vector<cdouble>& base_t() const { return base_t_; }
  int order() const { return base_.order(); }
  // chart Jacobian w.r.t. the angle-mode parameters, frozen at the base
  const RMatrix& jacobian_matrix() const { return J_; }

 private:
  CircleHomeo at(const std::vector<double>& u) const;
  RMatrix jacobian(const std::vector<double>& u0) const;
  CircleHomeo solve_impl(const std::vector<cdouble>& target_t, bool strict) const;

  CircleHomeo base_;
  double tol_;
  int modes_;  // angle modes 1..modes_ plus the constant
  std::vector<cdouble> base_t_;
  RMatrix J_;
};

// Newton inversion of the direct/extended chart over free pairs
// (a_1..a_N, b_0..b_N), b = 1/a_1; everything is holomorphic, so the
// iteration is a complex square Newton with a frozen forward-difference
// Jacobian.
class DirectChartSolver {
 public:
  DirectChartSolver(UnivalentPair base, int M, double tol = 1e-10);
  UnivalentPair solve(const std::vector<cdouble>& target_t) const;
  const std::vector<cdouble>& base_t() const { return base_t_; }
  int order() const { return base_.order; }

 private:
  UnivalentPair at(const std::vector<cdouble>& x) const;
  CMatrix jacobian(const std::vector<cdouble>& x0) const;

  UnivalentPair base_;
  int grid_;
  double tol_;
  std::vector<cdouble> base_t_;
  CMatrix J_;
};

// t-halves only, the fast paths used inside the Newton loops
std::vector<cdouble> inverse_chart_t(const CircleHomeo& gamma);
std::vector<cdouble> direct_chart_t(const UnivalentPair& pair, int M);

CircleHomeo chart_invert(const CoordinateVector& target, const CircleHomeo& base,
                         double tol = 1e-10);
UnivalentPair chart_invert(const CoordinateVector& target, const UnivalentPair& base,
                           int M, double tol = 1e-10);

}  // namespace dtoda
