#include "dtoda/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace dtoda {

namespace {

template <class T>
std::vector<T> lu_solve_impl(Matrix<T> A, std::vector<T> b) {
  const int n = A.rows;
  if (A.cols != n || static_cast<int>(b.size()) != n)
    throw Error("lu_solve: shape mismatch");
  std::vector<int> piv(n);
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(A(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(A(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best < 1e-300) throw SingularMatrix("lu_solve: singular pivot");
    piv[k] = p;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
      std::swap(b[k], b[p]);
    }
    for (int i = k + 1; i < n; ++i) {
      const T m = A(i, k) / A(k, k);
      A(i, k) = m;
      for (int j = k + 1; j < n; ++j) A(i, j) -= m * A(k, j);
      b[i] -= m * b[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    T s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * b[j];
    b[i] = s / A(i, i);
  }
  return b;
}

template <class T>
T conj_if(const T& x);
template <>
cdouble conj_if(const cdouble& x) { return std::conj(x); }
template <>
double conj_if(const double& x) { return x; }

template <class T>
std::vector<T> damped_normal_impl(const Matrix<T>& A, const std::vector<T>& b,
                                  double lambda) {
  const int m = A.rows, n = A.cols;
  Matrix<T> G(n, n);
  std::vector<T> rhs(n, T(0));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      T s(0);
      for (int k = 0; k < m; ++k) s += conj_if(A(k, i)) * A(k, j);
      G(i, j) = s;
      G(j, i) = conj_if(s);
    }
    T s(0);
    for (int k = 0; k < m; ++k) s += conj_if(A(k, i)) * b[k];
    rhs[i] = s;
  }
  // relative Marquardt scaling with an absolute floor, so directions with a
  // nearly vanishing column norm stay pinned instead of blowing up the step
  double dmax = 0.0;
  for (int i = 0; i < n; ++i) dmax = std::max(dmax, std::abs(G(i, i)));
  for (int i = 0; i < n; ++i) G(i, i) += T(lambda * (std::abs(G(i, i)) + dmax));
  return lu_solve_impl(std::move(G), std::move(rhs));
}

}  // namespace

std::vector<cdouble> lu_solve(CMatrix A, std::vector<cdouble> b) {
  return lu_solve_impl(std::move(A), std::move(b));
}
std::vector<double> lu_solve(RMatrix A, std::vector<double> b) {
  return lu_solve_impl(std::move(A), std::move(b));
}

std::vector<cdouble> damped_normal_solve(const CMatrix& A, const std::vector<cdouble>& b,
                                         double lambda) {
  return damped_normal_impl(A, b, lambda);
}
std::vector<double> damped_normal_solve(const RMatrix& A, const std::vector<double>& b,
                                        double lambda) {
  return damped_normal_impl(A, b, lambda);
}

double condition_estimate(const CMatrix& A, int iters) {
  const int n = A.rows;
  if (n == 0) return 1.0;
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  const auto mat_vec = [&](const std::vector<cdouble>& x, bool adjoint) {
    std::vector<cdouble> y(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (adjoint)
          y[j] += std::conj(A(i, j)) * x[i];
        else
          y[i] += A(i, j) * x[j];
      }
    return y;
  };
  const auto nrm = [](const std::vector<cdouble>& x) {
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
  };
  std::vector<cdouble> x(n);
  for (auto& v : x) v = cdouble(ud(rng), ud(rng));
  double smax = 0.0;
  for (int it = 0; it < iters; ++it) {
    auto y = mat_vec(mat_vec(x, false), true);
    const double ny = nrm(y);
    if (ny == 0.0) return std::numeric_limits<double>::infinity();
    for (auto& v : y) v /= ny;
    smax = std::sqrt(ny);
    x = std::move(y);
  }
  // smallest singular value by inverse iteration through LU solves
  double smin;
  try {
    for (auto& v : x) v = cdouble(ud(rng), ud(rng));
    double mu = 0.0;
    for (int it = 0; it < iters; ++it) {
      // y = (A^H A)^{-1} x  solved as A z = x, A^H y = z
      auto z = lu_solve(A, x);
      CMatrix AH(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) AH(i, j) = std::conj(A(j, i));
      auto y = lu_solve(std::move(AH), std::move(z));
      const double ny = nrm(y);
      if (ny == 0.0) return std::numeric_limits<double>::infinity();
      mu = ny;
      for (auto& v : y) v /= ny;
      x = std::move(y);
    }
    smin = 1.0 / std::sqrt(mu);
  } catch (const SingularMatrix&) {
    return std::numeric_limits<double>::infinity();
  }
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace dtoda
