// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qwell/linalg.hpp"

namespace qwell {

enum class Boundary { Dirichlet, Periodic };

/// 1D grid over [-1,1]. Dirichlet grids hold the m interior nodes of a
/// length-2 box; periodic grids tile the circle with m nodes.
struct Grid1D {
  int m = 0;
  Boundary boundary = Boundary::Dirichlet;

  static Grid1D dirichlet(int m) { return Grid1D{m, Boundary::Dirichlet}; }
  static Grid1D periodic(int m) { return Grid1D{m, Boundary::Periodic}; }

  double spacing() const {
    return boundary == Boundary::Dirichlet ? 2.0 / (m + 1) : 2.0 / m;
  }
  // Written so mirrored nodes negate exactly in floating point.
  double node(int i) const {
    return boundary == Boundary::Dirichlet
               ? static_cast<double>(2 * (i + 1) - (m + 1)) / (m + 1)
               : static_cast<double>(2 * i - m) / m;
  }
  std::vector<double> nodes() const;
};

/// Tensor product of at most three 1D grids; flattened index runs with the
/// last coordinate fastest.
struct TensorGrid {
  std::vector<Grid1D> dims;

  int ndim() const { return static_cast<int>(dims.size()); }
  long total() const;
  long flatten(const std::vector<int>& idx) const;
  std::vector<int> unflatten(long flat) const;
  /// Uniform quadrature weight (product of spacings).
  double weight() const;
};

/// A potential term depending on at most two coordinates.
struct PotentialTerm {
  std::vector<int> coords;  // size 1 or 2
  std::function<double(double)> f1;
  std::function<double(double, double)> f2;
};

struct Potential {
  std::vector<PotentialTerm> terms;

  static Potential zero() { return {}; }
  static Potential one_body(int coord, std::function<double(double)> f);
  static Potential two_body(int c1, int c2,
                            std::function<double(double, double)> f);
  Potential& add(PotentialTerm t);
  double eval(const std::vector<double>& x) const;
};

/// Sparse real-symmetric operator. Entries are stored as an upper triangle
/// (row <= col); a compiled adjacency makes apply() cheap. A matrix-free
/// apply hook may replace the entry list.
struct SparseSymOp {
  long n = 0;

  SparseSymOp() = default;
  explicit SparseSymOp(long dim) : n(dim) {}
  static SparseSymOp matrix_free(long dim,
                                 std::function<void(const double*, double*)> f,
                                 Vec diag_hint = Vec(), double norm_hint = 0);

  void add_entry(long row, long col, double value);
  void compile();
  bool compiled() const { return compiled_; }
  bool matrix_free_only() const { return static_cast<bool>(free_apply_); }

  void apply(const double* x, double* y) const;
  Vec apply(const Vec& x) const;
  CVec apply(const CVec& x) const;

  LinOp as_linop() const;
  Mat dense() const;
  Vec diagonal() const;
  double norm_bound() const;  // Gershgorin-style bound
  /// Bandwidth if the entry list is tridiagonal, else nullopt.
  std::optional<Tridiag> as_tridiag() const;

  std::vector<std::tuple<long, long, double>> entries;  // row <= col

 private:
  bool compiled_ = false;
  std::vector<long> row_ptr_;
  std::vector<long> cols_;
  std::vector<double> vals_;
  std::function<void(const double*, double*)> free_apply_;
  Vec free_diag_;
  double free_norm_ = 0;
};

struct LowSpectrum {
  int k = 0;
  Vec eigenvalues;
  Mat eigenvectors;  // columns on the grid
  Vec residuals;
  double tol = 0;
  unsigned seed = 0;
  bool converged = false;
  std::string method;
};

/// Second-order finite-difference Laplacian (stencil (2,-1,-1)/delta^2).
SparseSymOp laplacian_1d(const Grid1D& grid);

/// Diagonal operator sampling a sum of <=2-body closed-form terms.
SparseSymOp sample_potential(const TensorGrid& grid, const Potential& V);

/// sum_u g_u (1D Laplacian on coordinate u) + diag(V).
SparseSymOp assemble_schrodinger(const TensorGrid& grid,
                                 const std::vector<double>& g,
                                 const Potential& V,
                                 long dim_cap = 4000000);

/// k smallest eigenpairs. Tridiagonal operators use bisection + inverse
/// iteration; small operators are densified; the rest run shifted Lanczos
/// with full reorthogonalization.
LowSpectrum lowest_eigenpairs(const SparseSymOp& op, int k, double tol = 1e-10,
                              int dense_threshold = 600);

/// Serialization helpers.
std::string grid_metadata_json(const TensorGrid& grid);
void write_eigenpairs_csv(const std::string& path, const LowSpectrum& sp);
void write_grid_vector(const std::string& path_base, const TensorGrid& grid,
                       const Vec& v);
Vec read_grid_vector(const std::string& path_base);

}  // namespace qwell
