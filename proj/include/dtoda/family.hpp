#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "dtoda/coords.hpp"

namespace dtoda {

// A one-chart neighborhood for finite-difference probes: move the t-vector,
// get back the realized family point.  Inverse-chart families live on
// boundary-angle perturbations of a welded homeomorphism; direct/extended
// families on free pairs.  The chart Jacobian is frozen at the base, which
// keeps repeated probes cheap.
class ChartFamily {
 public:
  struct Point {
    CoordinateVector coords;
    UnivalentPair pair;                   // welded pair (inverse) or the free pair
    std::optional<CircleHomeo> gamma;     // inverse chart only
    std::optional<WeldingSolution> sol;   // inverse chart only
  };

  static ChartFamily inverse(const CircleHomeo& base, double tol = 1e-12,
                             double weld_tol = 1e-10);
  static ChartFamily direct(const UnivalentPair& base, Chart tag, int M,
                            double tol = 1e-12);

  Chart chart() const { return chart_; }
  int order() const;
  int grid() const { return grid_; }

  const Point& base_point() const { return base_point_; }
  // realize the point at base t + sum of shifts (index, delta)
  Point at(const std::vector<std::pair<int, cdouble>>& shifts) const;

 private:
  ChartFamily() = default;
  Point make_point_inverse(const CircleHomeo& gamma) const;
  Point make_point_direct(const UnivalentPair& pair) const;

  Chart chart_ = Chart::inverse;
  int grid_ = 0;
  double weld_tol_ = 1e-10;
  std::shared_ptr<const InverseChartSolver> inv_;
  std::shared_ptr<const DirectChartSolver> dir_;
  Point base_point_;
};

}  // namespace dtoda
