#pragma once

#include <functional>

#include "dtoda/family.hpp"

namespace dtoda {

// Finite-difference derivatives of chart observables.
//
// On the direct/extended charts the coordinate axes are exactly realizable
// and the engine reduces to classical centered stencils.  The inverse-chart
// image is a real hypersurface of the coordinate space, so axis targets are
// only realizable up to a projection; the engine therefore probes nearest
// feasible points in the directions {e_n, i e_n} and recovers the complex
// differential by least squares over the measured (delta t, delta F) pairs,
// which is exact for observables analytic in the coordinates.
class DerivativeProbes {
 public:
  using Observable = std::function<std::vector<cdouble>(const ChartFamily::Point&)>;

  // Gradients are resolved over coordinates |n| <= window; probes walk the
  // axes |j| <= probe_window (default: the full window).  On the inverse
  // chart the realized probes spill onto nearby coordinates, so the model
  // window must cover every coordinate the observables are sensitive to,
  // while the probe axes can stay low where the chart is gentle.
  DerivativeProbes(const ChartFamily& family, double h, int window,
                   int probe_window = -1);

  int window() const { return window_; }
  double step() const { return h_; }

  // d obs / d t_n for n in [-window, window] per observable component;
  // result[c][n + window] is the partial of component c.
  std::vector<std::vector<cdouble>> gradient(const Observable& obs) const;

 private:
  const ChartFamily& fam_;
  double h_;
  int window_;
  bool projected_;  // inverse chart: realized points are projections
  struct Probe {
    std::vector<cdouble> dt;  // realized t - base t over the window
    ChartFamily::Point point;
  };
  std::vector<Probe> plus_, minus_;  // paired probes per direction
  std::vector<double> steps_;        // per-row probe step
  std::vector<cdouble> base_t_;
  CMatrix W_;  // measured direction matrix (rows = directions)
};

}  // namespace dtoda
