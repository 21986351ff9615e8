#pragma once

#include <utility>
#include <vector>

#include "dtoda/linalg.hpp"
#include "dtoda/univalent.hpp"

namespace dtoda {

struct SymmetryViolation : Error { using Error::Error; };

// Faber polynomials of a pair: P_n(w) = ((g^{-1}(w))^n)_{>=0} has degree n in
// w with leading coefficient b^{-n}; Q_n(w) = ((f^{-1}(w))^{-n})_{<=0} has
// degree n in 1/w with leading coefficient a_1^n.
struct FaberSet {
  int order = 0;
  std::vector<TruncatedSeries> P;  // P[k] = P_{k+1}
  std::vector<TruncatedSeries> Q;  // Q[k] = Q_{k+1}
};

std::pair<TruncatedSeries, TruncatedSeries> faber(const UnivalentPair& pair, int n);
FaberSet faber_set(const UnivalentPair& pair, int n_max);

// Generalized Grunsky coefficients b_{m,n}, m, n in [-order, order].  Mirror
// entries are filled from independent computation routes, so the stored
// matrix measures the symmetry defect instead of hiding it.
class GrunskyMatrix {
 public:
  explicit GrunskyMatrix(int order);

  int order() const { return order_; }
  cdouble at(int m, int n) const;
  void set(int m, int n, cdouble v);

  double symmetry_defect() const;  // max |b_{m,n} - b_{n,m}|

 private:
  int order_;
  std::vector<cdouble> e_;
};

// Grunsky matrix of the pair, exposed to half the series order (products of
// Faber polynomials with the maps consume the other half of the bandwidth).
// Throws SymmetryViolation when the two independent routes to a mixed entry
// disagree beyond 1e-8.
GrunskyMatrix grunsky(const UnivalentPair& pair);

struct ComplementarityReport {
  int order = 0;
  double cond_B = 0.0;  // B_{mn} = sqrt(nm) b_{-m,n}
  double cond_C = 0.0;  // C_{mn} = sqrt(mn) b_{m,-n}
};

ComplementarityReport complementarity_diagnostic(const UnivalentPair& pair);
ComplementarityReport complementarity_diagnostic(const GrunskyMatrix& bmat);

}  // namespace dtoda
