#include "dtoda/fd.hpp"

#include "dtoda/linalg.hpp"

namespace dtoda {

DerivativeProbes::DerivativeProbes(const ChartFamily& family, double h, int window,
                                   int probe_window)
    : fam_(family), h_(h), window_(window),
      projected_(family.chart() == Chart::inverse) {
  const int N = fam_.order();
  if (probe_window < 0 || probe_window > window_) probe_window = window_;
  if (window_ > N) throw Error("DerivativeProbes: window exceeds the chart order");
  const CoordinateVector& base = fam_.base_point().coords;
  base_t_.resize(2 * window_ + 1);
  for (int n = -window_; n <= window_; ++n) base_t_[n + window_] = base.t_at(n);

  std::vector<cdouble> dirs{1.0};
  if (projected_) dirs.push_back(cdouble(0.0, 1.0));

  const int rows = static_cast<int>(dirs.size()) * (2 * probe_window + 1);
  W_ = CMatrix(rows, 2 * window_ + 1);
  steps_.reserve(rows);
  plus_.reserve(rows);
  minus_.reserve(rows);
  int row = 0;
  for (const cdouble dir : dirs) {
    for (int j = -probe_window; j <= probe_window; ++j) {
      // the t_n coordinate scales like 1/n, so high-index axes get
      // proportionally smaller probe steps
      const double hj = h_ / std::max(1, std::abs(j));
      Probe p{{}, fam_.at({{j, +hj * dir}})};
      Probe m{{}, fam_.at({{j, -hj * dir}})};
      p.dt.resize(2 * window_ + 1);
      m.dt.resize(2 * window_ + 1);
      for (int n = -window_; n <= window_; ++n) {
        p.dt[n + window_] = p.point.coords.t_at(n) - base_t_[n + window_];
        m.dt[n + window_] = m.point.coords.t_at(n) - base_t_[n + window_];
      }
      for (int n = 0; n < 2 * window_ + 1; ++n)
        W_(row, n) = (p.dt[n] - m.dt[n]) / (2.0 * hj);
      steps_.push_back(hj);
      plus_.push_back(std::move(p));
      minus_.push_back(std::move(m));
      ++row;
    }
  }
}

std::vector<std::vector<cdouble>> DerivativeProbes::gradient(const Observable& obs) const {
  const int rows = W_.rows;
  const int cols = W_.cols;
  std::vector<std::vector<cdouble>> fplus(rows), fminus(rows);
  for (int r = 0; r < rows; ++r) {
    fplus[r] = obs(plus_[r].point);
    fminus[r] = obs(minus_[r].point);
  }
  const size_t comps = fplus.empty() ? 0 : fplus[0].size();
  std::vector<std::vector<cdouble>> grads(comps, std::vector<cdouble>(cols, 0.0));
  if (!projected_) {
    // exact axis probes: plain centered differences along each probed axis
    for (size_t c = 0; c < comps; ++c)
      for (int r = 0; r < rows; ++r) {
        // row r probes axis j = r - probe span offset; W row is e_j exactly
        for (int j = 0; j < cols; ++j)
          if (W_(r, j) != cdouble(0.0)) grads[c][j] = (fplus[r][c] - fminus[r][c]) / (2.0 * steps_[r]);
      }
    return grads;
  }
  for (size_t c = 0; c < comps; ++c) {
    std::vector<cdouble> rhs(rows);
    for (int r = 0; r < rows; ++r)
      rhs[r] = (fplus[r][c] - fminus[r][c]) / (2.0 * steps_[r]);
    grads[c] = damped_normal_solve(W_, rhs, 1e-12);
  }
  return grads;
}

}  // namespace dtoda
