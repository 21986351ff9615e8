#pragma once

#include <utility>
#include <vector>

#include "dtoda/univalent.hpp"

namespace dtoda {

struct NotAHomeomorphism : Error { using Error::Error; };
struct NewtonStall : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct TruncationUndersized : Error { using Error::Error; };

struct MobiusParams {
  cdouble a = 0.0;  // |a| <= 0.9
  double alpha = 0.0;
};

// Orientation-preserving circle homeomorphism gamma, held as grid samples
// together with the Fourier window c_n, n in [-N-1, N-1], of
// gamma(w) = sum c_n w^{n+1}.
class CircleHomeo {
 public:
  static CircleHomeo identity(int N, int M);
  static CircleHomeo mobius(const MobiusParams& p, int N, int M);
  static CircleHomeo from_samples(std::vector<cdouble> samples, int N);
  static CircleHomeo from_fourier(const std::vector<std::pair<int, cdouble>>& coeffs,
                                  int N, int M);
  // gamma with the boundary angle re-parametrized:
  // Theta(theta) = Theta_base(theta) + sum_j Re(eta_j e^{i n_j theta})
  static CircleHomeo perturbed(const CircleHomeo& base,
                               const std::vector<std::pair<int, cdouble>>& modes);

  int order() const { return order_; }
  int grid_size() const { return static_cast<int>(samples_.size()); }
  const std::vector<cdouble>& samples() const { return samples_; }
  cdouble fourier_coeff(int n) const;  // c_n, zero outside the window

  // band-limited interpolation of the samples at an arbitrary angle
  cdouble eval_angle(double theta) const;
  cdouble eval_angle_derivative(double theta) const;  // d(gamma)/d(theta)

  // unwrapped boundary angles Theta_k = arg gamma(w_k), increasing
  const std::vector<double>& angles() const { return angles_; }

 private:
  CircleHomeo() = default;
  void finalize();  // fourier window, angle table, validity checks

  int order_ = 0;
  std::vector<cdouble> samples_;
  std::vector<cdouble> fourier_;   // window [-N-1, N-1]
  std::vector<cdouble> spectrum_;  // all M analysis bins
  std::vector<double> angles_;
};

struct WeldingSolution {
  UnivalentPair pair;
  double residual_sup = 0.0;
  int newton_iters = 0;
  std::vector<cdouble> curve_samples;  // f(w_k), the welded curve
};

// Closed-form welding of the Mobius family:
//   f(z) = (1/b) z / (1 + a z),  g(z) = b z + c,
//   b = e^{i alpha/2} / sqrt(1 - |a|^2),  c = -conj(a) e^{-i alpha/2} / sqrt(1 - |a|^2).
WeldingSolution mobius_weld(const MobiusParams& p, int N, int M);

// Least-squares Mobius parameters read off gamma's leading Fourier modes.
MobiusParams mobius_fit(const CircleHomeo& gamma);

// Damped Gauss-Newton solve of f(w) = g(gamma(w)) over the Fourier modes
// [-N, N] of the grid residual, unknowns (a_1..a_N, b_0..b_N), b = 1/a_1.
// weld() starts from the Mobius fit of gamma; weld_from() from a given pair.
// tail_guard bounds the residual energy the truncated pair may leave beyond
// mode N before the solve reports TruncationUndersized; < 0 means 10 * tol.
WeldingSolution weld(const CircleHomeo& gamma, double tol = 1e-10, int max_iter = 60,
                     double tail_guard = -1.0);
WeldingSolution weld_from(const CircleHomeo& gamma, const UnivalentPair& initial,
                          double tol = 1e-10, int max_iter = 60,
                          double tail_guard = -1.0);

// Per-node Newton solve of g(gamma_k) = f(w_k) on the unit circle.
CircleHomeo gamma_from_pair(const UnivalentPair& pair, int M);

// Samples of gamma^{-1} at the grid nodes (angle accuracy 1e-12).
std::vector<cdouble> invert_circle_map(const CircleHomeo& gamma);

}  // namespace dtoda
