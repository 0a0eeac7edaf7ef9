// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "qwell/grid.hpp"
#include "qwell/linalg.hpp"

namespace qwell {

/// Unary (domain-wall) code on m qubits: level j of an (m+1)-dim qudit maps
/// to the computational state whose m-j lowest qubits are 1. Qubit q is bit q
/// of the basis index.
struct UnaryCode {
  int m = 0;

  long codeword(int j) const { return (1L << (m - j)) - 1; }
  int levels() const { return m + 1; }
  bool is_codeword(long mask) const;
  /// Level j with codeword(j) == mask, or -1.
  int level_of(long mask) const;
};

/// Hermitian term on a few qubits. Local basis index bit i corresponds to
/// qubit support[i] (support ascending).
struct LocalQubitTerm {
  std::vector<int> support;
  Mat matrix;

  int locality() const { return static_cast<int>(support.size()); }
  bool stoquastic(double tol = 1e-12) const;
  double worst_offdiag() const;
  double two_norm() const { return sym_two_norm(matrix); }
};

/// Sum of local terms plus a scalar offset on a fixed qubit register.
struct TermList {
  int nqubits = 0;
  double constant = 0;
  std::vector<LocalQubitTerm> terms;

  TermList& append(const TermList& other, double weight = 1.0);
  Mat dense() const;             // nqubits <= 14
  std::string to_json() const;   // {support, matrix row-major} entries
};

/// Unary embedding of a real symmetric (m+1)x(m+1) matrix into local terms on
/// m qubits. Guarantees, brute-force verified at build time for m <= 10:
/// restriction to the code space equals U A U^dag entrywise, and the embedded
/// operator maps the code space into itself exactly.
TermList sigma_embed(const Mat& A, bool verify = true);

/// Diagonal penalty whose zero eigenspace is exactly the n-fold code space,
/// with spectral gap 4. Per coordinate: (m-1) I - sum Z_q Z_{q+1} + Z_0 -
/// Z_{m-1}.
TermList penalty_hamiltonian(int n, int m);

struct CertifyResult {
  bool stoquastic = false;
  double worst_offdiag = 0;
  int worst_term = -1;
  int max_locality = 0;
  std::vector<int> localities;
};

CertifyResult certify_stoquastic(const TermList& tl, double tol = 1e-12);

struct HstarEmbedding {
  TermList hhat;     // embedded discretized operator
  TermList penalty;  // Q-hat (unweighted)
  TermList hstar;    // hhat + c * penalty
  double c = 0;      // penalty weight actually used
  int n = 0;         // coordinates
  std::vector<int> m;  // qubits per coordinate
  SparseSymOp grid_op;  // the discretized operator on the tensor grid
};

/// Full pipeline: finite-difference discretization of -sum g_u d^2/dx_u^2 + V
/// on the Dirichlet tensor grid, unary embedding per coordinate, 2-local
/// diagonal embedding of the cross terms, penalty added with weight
/// c = (sum of term norms) + 1 unless a positive c is supplied.
HstarEmbedding assemble_hstar(const TensorGrid& grid,
                              const std::vector<double>& g, const Potential& V,
                              double c = -1.0);

}  // namespace qwell
