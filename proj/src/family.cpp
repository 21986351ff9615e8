#include "dtoda/family.hpp"

namespace dtoda {

ChartFamily ChartFamily::inverse(const CircleHomeo& base, double tol, double weld_tol) {
  ChartFamily f;
  f.chart_ = Chart::inverse;
  f.grid_ = base.grid_size();
  f.weld_tol_ = weld_tol;
  f.inv_ = std::make_shared<InverseChartSolver>(base, tol);
  f.base_point_ = f.make_point_inverse(base);
  return f;
}

ChartFamily ChartFamily::direct(const UnivalentPair& base, Chart tag, int M, double tol) {
  if (tag != Chart::direct && tag != Chart::extended)
    throw Error("ChartFamily::direct: tag must be direct or extended");
  ChartFamily f;
  f.chart_ = tag;
  f.grid_ = M;
  f.dir_ = std::make_shared<DirectChartSolver>(base, M, tol);
  f.base_point_ = f.make_point_direct(base);
  return f;
}

int ChartFamily::order() const {
  return chart_ == Chart::inverse ? inv_->order() : dir_->order();
}

ChartFamily::Point ChartFamily::make_point_inverse(const CircleHomeo& gamma) const {
  // probe points carry the physical truncation tail of their perturbation;
  // the in-window fit stays tight while the tail guard is widened
  WeldingSolution sol = weld(gamma, weld_tol_, 60, 1e-2);
  Point p{inverse_chart(gamma, sol), sol.pair, gamma, std::move(sol)};
  return p;
}

ChartFamily::Point ChartFamily::make_point_direct(const UnivalentPair& pair) const {
  return Point{direct_chart(pair, grid_, chart_), pair, std::nullopt, std::nullopt};
}

ChartFamily::Point ChartFamily::at(const std::vector<std::pair<int, cdouble>>& shifts) const {
  if (chart_ == Chart::inverse) {
    // the chart image is a real hypersurface: probes land on the nearest
    // feasible point and report their realized coordinates
    std::vector<cdouble> target = inv_->base_t();
    const int N = inv_->order();
    for (const auto& [n, dt] : shifts) target.at(n + N) += dt;
    return make_point_inverse(inv_->solve_nearest(target));
  }
  std::vector<cdouble> target = dir_->base_t();
  const int N = dir_->order();
  for (const auto& [n, dt] : shifts) target.at(n + N) += dt;
  return make_point_direct(dir_->solve(target));
}

}  // namespace dtoda
