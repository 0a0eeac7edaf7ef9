// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <tuple>
#include <vector>

#include "qwell/linalg.hpp"

namespace qwell {

/// XX+ZZ Hamiltonian: sum a_ij X_i X_j + b_ij Z_i Z_j over pairs i < j.
struct XxzzHamiltonian {
  int n = 0;
  std::vector<std::tuple<int, int, double>> xx;  // (i, j, a_ij)
  std::vector<std::tuple<int, int, double>> zz;  // (i, j, b_ij)
};

/// Entrywise block substitution: x >= 0 -> diag(x, x); x < 0 -> off-diagonal
/// (-x). Doubles the dimension; the new index pairs rows (2i, 2i+1).
Mat replace_entries(const Mat& Hk);

/// Entrywise absolute value.
Mat entrywise_abs(const Mat& A);

struct BlockEmbedding {
  int n = 0;                 // source qubits; embedded operators act on n+1
  std::vector<Mat> source_terms;    // H_k with H = -sum_k H_k
  std::vector<Mat> embedded_terms;  // terms of H_tilde = sum_k (-replace(H_k))
  std::vector<std::vector<int>> supports;  // qubits touched per term (ancilla = n)
  Mat H;        // dense source Hamiltonian (2^n)
  Mat H_tilde;  // dense embedded Hamiltonian (2^{n+1})

  bool all_terms_stoquastic(double tol = 1e-12) const;
  int max_locality() const;
};

/// Embed each 2-local term (sign absorbed so H = -sum H_k) via the block
/// substitution; the assembled H_tilde equals
/// H (x) |-><-| + (-sum |H_k|) (x) |+><+| with the ancilla as last qubit.
BlockEmbedding embed_xxzz(const XxzzHamiltonian& ham);

struct SectorDynamicsResult {
  double error = 0;    // ||(I (x) <-|) e^{-i H_tilde t} (psi (x) |->) - e^{-iHt} psi||
  double leakage = 0;  // ||(I (x) <+|) e^{-i H_tilde t} (psi (x) |->)||
};

/// Exact dense check of the |-> sector correspondence.
SectorDynamicsResult verify_sector_dynamics(const BlockEmbedding& emb,
                                            const CVec& psi, double t);

}  // namespace qwell
