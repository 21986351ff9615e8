#include "dtoda/univalent.hpp"

#include <cmath>

namespace dtoda {

UnivalentPair UnivalentPair::identity(int N) {
  UnivalentPair p;
  p.order = N;
  p.f_coeffs.assign(N, 0.0);
  p.f_coeffs[0] = 1.0;
  p.g_lead = 1.0;
  p.g_coeffs.assign(N + 1, 0.0);
  return p;
}

UnivalentPair UnivalentPair::from_series(const TruncatedSeries& f, const TruncatedSeries& g,
                                         Role role) {
  const int N = f.order();
  if (g.order() != N) throw Error("UnivalentPair: mismatched orders");
  if (norm_inf(project(f, Part::leq0)) > 1e-13 * std::max(1.0, norm_inf(f)))
    throw Error("UnivalentPair: f must have no exponents below 1");
  if (norm_inf(project(project(g, Part::pos) - TruncatedSeries::monomial(N, 1, g.coeff(1)),
                       Part::pos)) > 1e-13 * std::max(1.0, norm_inf(g)))
    throw Error("UnivalentPair: g must have no exponents above 1");
  UnivalentPair p;
  p.order = N;
  p.role = role;
  p.f_coeffs.resize(N);
  for (int n = 1; n <= N; ++n) p.f_coeffs[n - 1] = f.coeff(n);
  p.g_lead = g.coeff(1);
  p.g_coeffs.resize(N + 1);
  for (int n = 0; n <= N; ++n) p.g_coeffs[n] = g.coeff(-n);
  p.validate();
  return p;
}

TruncatedSeries UnivalentPair::f_series() const {
  TruncatedSeries s(order);
  s.set_coeff(1, f_coeffs[0]);
  for (int n = 2; n <= order; ++n)
    if (f_coeffs[n - 1] != 0.0) s.set_coeff(n, f_coeffs[n - 1]);
  return s;
}

TruncatedSeries UnivalentPair::g_series() const {
  TruncatedSeries s(order);
  s.set_coeff(1, g_lead);
  for (int n = 0; n <= order; ++n)
    if (g_coeffs[n] != 0.0) s.set_coeff(-n, g_coeffs[n]);
  return s;
}

void UnivalentPair::validate() const {
  if (static_cast<int>(f_coeffs.size()) != order ||
      static_cast<int>(g_coeffs.size()) != order + 1)
    throw Error("UnivalentPair: coefficient storage does not match order");
  if (std::abs(a1()) < 1e-12 || std::abs(b()) < 1e-12)
    throw SingularLeadingCoefficient("UnivalentPair: vanishing leading coefficient");
  if (std::abs(a1() * b() - 1.0) > 1e-12)
    throw Error("UnivalentPair: normalization a1 * b = 1 violated");
}

UnivalentPair UnivalentPair::inverse_pair() const {
  const TruncatedSeries F = comp_inverse(f_series());
  const TruncatedSeries G = comp_inverse(g_series());
  return from_series(F, G, role == Role::forward ? Role::inverse : Role::forward);
}

UnivalentPair swap_interior_exterior(const UnivalentPair& pair) {
  const int N = pair.order;
  // substitute z -> 1/z by mirroring exponents, then take reciprocals
  const auto mirror = [N](const TruncatedSeries& s) {
    TruncatedSeries r(N);
    for (int n = s.n_min(); n <= s.n_max(); ++n)
      if (s.coeff(n) != 0.0 && std::abs(n) <= N) r.set_coeff(-n, s.coeff(n));
    return r;
  };
  const TruncatedSeries f_new = reciprocal(mirror(pair.g_series()), Expansion::at_zero);
  const TruncatedSeries g_new = reciprocal(mirror(pair.f_series()), Expansion::at_infinity);
  return UnivalentPair::from_series(project(f_new, Part::pos), g_new, pair.role);
}

}  // namespace dtoda
