#include "dtoda/grunsky.hpp"

#include <cmath>

namespace dtoda {

std::pair<TruncatedSeries, TruncatedSeries> faber(const UnivalentPair& pair, int n) {
  if (n < 1 || n > pair.order) throw Error("faber: n out of range");
  const TruncatedSeries G = comp_inverse(pair.g_series());
  const TruncatedSeries F = comp_inverse(pair.f_series());
  const TruncatedSeries Pn = project(pow_int(G, n, Expansion::at_infinity), Part::geq0);
  const TruncatedSeries Qn = project(pow_int(F, -n, Expansion::at_zero), Part::leq0);
  return {Pn, Qn};
}

FaberSet faber_set(const UnivalentPair& pair, int n_max) {
  if (n_max < 1 || n_max > pair.order) throw Error("faber_set: n_max out of range");
  const TruncatedSeries G = comp_inverse(pair.g_series());
  const TruncatedSeries Finv = reciprocal(comp_inverse(pair.f_series()), Expansion::at_zero);
  FaberSet fs;
  fs.order = n_max;
  TruncatedSeries Gp = TruncatedSeries::constant(pair.order, 1.0);
  TruncatedSeries Fp = Gp;
  for (int n = 1; n <= n_max; ++n) {
    Gp = mul(Gp, G);
    Fp = mul(Fp, Finv);
    fs.P.push_back(project(Gp, Part::geq0));
    fs.Q.push_back(project(Fp, Part::leq0));
  }
  return fs;
}

GrunskyMatrix::GrunskyMatrix(int order)
    : order_(order), e_(static_cast<size_t>(2 * order + 1) * (2 * order + 1), 0.0) {}

cdouble GrunskyMatrix::at(int m, int n) const {
  if (std::abs(m) > order_ || std::abs(n) > order_)
    throw Error("GrunskyMatrix::at: index out of range");
  return e_[static_cast<size_t>(m + order_) * (2 * order_ + 1) + (n + order_)];
}

void GrunskyMatrix::set(int m, int n, cdouble v) {
  if (std::abs(m) > order_ || std::abs(n) > order_)
    throw Error("GrunskyMatrix::set: index out of range");
  e_[static_cast<size_t>(m + order_) * (2 * order_ + 1) + (n + order_)] = v;
}

double GrunskyMatrix::symmetry_defect() const {
  double d = 0.0;
  for (int m = -order_; m <= order_; ++m)
    for (int n = m + 1; n <= order_; ++n) d = std::max(d, std::abs(at(m, n) - at(n, m)));
  return d;
}

GrunskyMatrix grunsky(const UnivalentPair& pair) {
  pair.validate();
  const int N = pair.order;
  const int Ng = N / 2;
  const TruncatedSeries f = pair.f_series();
  const TruncatedSeries g = pair.g_series();
  const FaberSet fs = faber_set(pair, Ng);

  GrunskyMatrix B(Ng);

  // b_{n,m}, n,m >= 1: coefficients of P_n(g(zeta)) - zeta^n
  for (int n = 1; n <= Ng; ++n) {
    const TruncatedSeries png = compose_horner(fs.P[n - 1], g, Expansion::at_infinity);
    for (int m = 1; m <= Ng; ++m) B.set(n, m, png.coeff(-m) / static_cast<double>(n));
  }

  // b_{n,-m} and b_{n,0} from P_n(f(zeta)) = n b_{n,0} + n sum b_{n,-m} zeta^m
  for (int n = 1; n <= Ng; ++n) {
    const TruncatedSeries pnf = compose_horner(fs.P[n - 1], f, Expansion::at_zero);
    B.set(0, n, pnf.coeff(0) / static_cast<double>(n));  // symmetry slot for b_{n,0}
    for (int m = 1; m <= Ng; ++m) B.set(n, -m, pnf.coeff(m) / static_cast<double>(n));
  }

  // b_{m,-n} (mirror slots) and b_{-n,0} from Q_n(g(zeta))
  for (int n = 1; n <= Ng; ++n) {
    const TruncatedSeries qng = compose_horner(fs.Q[n - 1], g, Expansion::at_infinity);
    B.set(0, -n, -qng.coeff(0) / static_cast<double>(n));  // symmetry slot for b_{-n,0}
    for (int m = 1; m <= Ng; ++m) B.set(-n, m, qng.coeff(-m) / static_cast<double>(n));
  }

  // b_{-n,-m} from Q_n(f(zeta)) - zeta^{-n}
  for (int n = 1; n <= Ng; ++n) {
    const TruncatedSeries qnf = compose_horner(fs.Q[n - 1], f, Expansion::at_zero);
    for (int m = 1; m <= Ng; ++m) B.set(-n, -m, qnf.coeff(m) / static_cast<double>(n));
  }

  // column/row zero from the logarithmic expansions; b_{0,0} = log b
  const TruncatedSeries id = TruncatedSeries::identity(N);
  const TruncatedSeries log_g = log_unit(mul(g, reciprocal(id, Expansion::at_infinity)));
  const TruncatedSeries log_f = log_unit(mul(f, reciprocal(id, Expansion::at_zero)));
  B.set(0, 0, log_g.coeff(0));
  for (int m = 1; m <= Ng; ++m) {
    B.set(m, 0, -log_g.coeff(-m));
    B.set(-m, 0, -log_f.coeff(m));
  }

  // the mixed block has two independent routes; disagreement signals
  // truncation undersizing
  double worst = 0.0;
  for (int n = 1; n <= Ng; ++n)
    for (int m = 1; m <= Ng; ++m) worst = std::max(worst, std::abs(B.at(n, -m) - B.at(-m, n)));
  for (int m = 1; m <= Ng; ++m) {
    worst = std::max(worst, std::abs(B.at(m, 0) - B.at(0, m)));
    worst = std::max(worst, std::abs(B.at(-m, 0) - B.at(0, -m)));
  }
  if (worst > 1e-8)
    throw SymmetryViolation("grunsky: independent entry routes disagree by " +
                            std::to_string(worst));
  return B;
}

ComplementarityReport complementarity_diagnostic(const GrunskyMatrix& bmat) {
  const int Ng = bmat.order();
  CMatrix Bm(Ng, Ng), Cm(Ng, Ng);
  for (int m = 1; m <= Ng; ++m)
    for (int n = 1; n <= Ng; ++n) {
      const double s = std::sqrt(static_cast<double>(n) * m);
      Bm(m - 1, n - 1) = s * bmat.at(-m, n);
      Cm(m - 1, n - 1) = s * bmat.at(m, -n);
    }
  ComplementarityReport r;
  r.order = Ng;
  r.cond_B = condition_estimate(Bm);
  r.cond_C = condition_estimate(Cm);
  return r;
}

ComplementarityReport complementarity_diagnostic(const UnivalentPair& pair) {
  return complementarity_diagnostic(grunsky(pair));
}

}  // namespace dtoda
