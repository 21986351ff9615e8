#pragma once

#include <vector>

#include "dtoda/series.hpp"

namespace dtoda {

// Row-major dense matrix over double or complex<double>.  Only the small
// solver kernels the project needs: LU with partial pivoting, least-squares
// normal equations, and a two-sided power-iteration condition estimate.
template <class T>
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<T> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, T(0)) {}
  T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

using CMatrix = Matrix<cdouble>;
using RMatrix = Matrix<double>;

struct SingularMatrix : Error { using Error::Error; };

// Solve A x = b in place (A square), partial pivoting.
std::vector<cdouble> lu_solve(CMatrix A, std::vector<cdouble> b);
std::vector<double> lu_solve(RMatrix A, std::vector<double> b);

// Levenberg-damped normal equations (A^H A + lambda diag(A^H A)) x = A^H b.
std::vector<cdouble> damped_normal_solve(const CMatrix& A, const std::vector<cdouble>& b,
                                         double lambda);
std::vector<double> damped_normal_solve(const RMatrix& A, const std::vector<double>& b,
                                        double lambda);

// 2-norm condition number estimate of a square matrix via power iteration on
// A^H A (largest singular value) and inverse iteration through an LU of A
// (smallest).  Returns +inf when A is numerically singular.
double condition_estimate(const CMatrix& A, int iters = 30);

}  // namespace dtoda
