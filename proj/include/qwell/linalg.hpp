// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace qwell {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

/// Symmetric tridiagonal matrix: diag has n entries, off has n-1.
struct Tridiag {
  Vec diag;
  Vec off;

  int size() const { return static_cast<int>(diag.size()); }
  Vec apply(const Vec& x) const;
  CVec apply(const CVec& x) const;
  double norm_bound() const;  // Gershgorin upper bound on |lambda|
};

/// Number of eigenvalues of T strictly below x (Sturm/LDL count).
int sturm_count(const Tridiag& T, double x);

/// k-th smallest eigenvalue (0-based) by bisection; accurate to a few ulp of
/// the Gershgorin scale.
double tridiag_eigenvalue(const Tridiag& T, int k);

/// Eigenvalues k0..k1 inclusive, ascending.
std::vector<double> tridiag_eigenvalues(const Tridiag& T, int k0, int k1);

/// Inverse iteration for the eigenvector at a known eigenvalue. Orthogonalizes
/// against `prev` each sweep so clustered pairs stay separated.
Vec tridiag_eigenvector(const Tridiag& T, double lambda,
                        const std::vector<Vec>& prev = {}, unsigned seed = 7);

/// Solve (T - shift) x = b by tridiagonal LU with partial pivoting.
Vec tridiag_shifted_solve(const Tridiag& T, double shift, const Vec& b);

struct EigenPairs {
  Vec values;
  Mat vectors;  // columns
};

/// Dense symmetric eigendecomposition (ascending).
EigenPairs eigh(const Mat& A);

struct CEigenPairs {
  Vec values;
  CMat vectors;
};

/// Dense Hermitian eigendecomposition (ascending).
CEigenPairs eigh(const CMat& A);

/// Largest singular value of a (tall) block.
double block_two_norm(const Mat& B);
double block_two_norm(const CMat& B);

/// Operator 2-norm of a Hermitian matrix.
double sym_two_norm(const Mat& A);
double herm_two_norm(const CMat& A);

/// e^{-iAt} for Hermitian A via eigendecomposition.
CMat herm_propagator(const CMat& A, double t);
CMat sym_propagator(const Mat& A, double t);

/// Matrix-free real symmetric operator.
struct LinOp {
  long n = 0;
  std::function<void(const double* x, double* y)> apply;

  Vec operator()(const Vec& x) const;
};

struct LanczosOptions {
  int max_iter = 400;
  double tol = 1e-10;          // residual tolerance relative to op scale
  unsigned seed = 12345;
  std::vector<Vec> deflate;    // orthonormal frame kept out of the Krylov space
};

struct LanczosResult {
  Vec values;
  Mat vectors;
  Vec residuals;   // ||A v - lambda v|| per pair
  bool converged = false;
  int iterations = 0;
};

/// Lowest k eigenpairs by Lanczos with full reorthogonalization. The operator
/// is shifted internally so convergence targets the low end.
LanczosResult lanczos_lowest(const LinOp& op, int k, const LanczosOptions& opt);

/// Lowest eigenpair of op restricted to the orthogonal complement of
/// `frame` via shift-inverted, deflated Lanczos. `solve(sigma, b)` must return
/// (op - sigma)^{-1} b on the whole space.
struct DeflatedShiftInvertResult {
  double value = 0;
  Vec vector;
  double residual = 0;
  bool converged = false;
};
DeflatedShiftInvertResult lowest_in_complement(
    const LinOp& op, const std::vector<Vec>& frame, double sigma,
    const std::function<Vec(double, const Vec&)>& solve, int iters = 24);

/// Conjugate gradient for SPD apply with optional Jacobi preconditioner.
struct CgResult {
  int iterations = 0;
  double residual = 0;
  bool converged = false;
};
CgResult cg_solve(const std::function<void(const double*, double*)>& apply,
                  long n, const Vec& b, Vec& x, double tol, int max_iter,
                  const Vec* inv_diag = nullptr);

/// Least-squares linear fit y ~ a + b x; returns (a, b).
std::pair<double, double> linear_fit(const std::vector<double>& x,
                                     const std::vector<double>& y);

}  // namespace qwell
