#pragma once

#include <vector>

#include "dtoda/series.hpp"

namespace dtoda {

// Normalized pair: f(z) = a_1 z + ... univalent near 0, g(z) = b z + b_0 +
// b_1/z + ... univalent near infinity, with a_1 b = 1.  With role = inverse
// the same container holds (F, G) = (f^{-1}, g^{-1}).
struct UnivalentPair {
  enum class Role { forward, inverse };

  int order = 0;
  std::vector<cdouble> f_coeffs;  // a_1 .. a_N, f_coeffs[k] = a_{k+1}
  cdouble g_lead = 1.0;           // b
  std::vector<cdouble> g_coeffs;  // b_0 .. b_N
  Role role = Role::forward;

  static UnivalentPair identity(int N);
  static UnivalentPair from_series(const TruncatedSeries& f, const TruncatedSeries& g,
                                   Role role = Role::forward);

  cdouble a1() const { return f_coeffs.at(0); }
  cdouble b() const { return g_lead; }

  TruncatedSeries f_series() const;
  TruncatedSeries g_series() const;

  // throws when a_1 b drifts from 1 beyond 1e-12 or a leading coefficient vanishes
  void validate() const;

  // (F, G) = (f^{-1}, g^{-1}) with the roles swapped accordingly
  UnivalentPair inverse_pair() const;
};

// The z -> 1/z transform: (f~, g~) = (1/g(1/z), 1/f(1/z)).
UnivalentPair swap_interior_exterior(const UnivalentPair& pair);

}  // namespace dtoda
