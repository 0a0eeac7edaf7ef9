// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "qwell/linalg.hpp"

namespace qwell {

/// Hermitian operator split against a finite-dimensional subspace S:
/// A = restriction to S, B = restriction to S-perp, R = coupling block.
struct BlockSplit {
  CMat H;
  CMat frame;  // orthonormal columns spanning S

  int dim_S() const { return static_cast<int>(frame.cols()); }
  CMat block_A() const;        // frame^dag H frame
  double coupling_norm() const;  // ||P_{S-perp} H P_S||
};

/// Outcome of one two-sided check: lhs is the measured quantity, rhs the
/// formula bound; margin = rhs - lhs.
struct CheckResult {
  double lhs = 0;
  double rhs = 0;
  double margin = 0;
  bool pass = false;
  bool skipped = false;
  int worst_k = -1;
  unsigned seed = 0;
};

inline constexpr double kWeylSlack = 1e-10;
inline constexpr double kLeakSlack = 1e-8;

/// |lambda_k(A) - lambda_k(B)| <= ||A - B|| for k in [k0, k1].
CheckResult check_weyl(const CMat& A, const CMat& B, int k0, int k1);

/// With Delta = min eig(B-block) - max eig(A-block) > 0 (measured; otherwise
/// skipped): |lambda_k(H) - lambda_k(A)| <= ||R|| for k < dim(S).
CheckResult check_pert_spec(const BlockSplit& split);

/// ||e^{-iAt} - e^{-iBt}|| <= ||A - B|| t.
CheckResult check_duhamel(const CMat& A, const CMat& B, double t);

/// ||P_{S-perp} e^{-iHt} P_S|| <= sqrt(2 ||R|| t).
CheckResult check_trunc_leak(const BlockSplit& split, double t);

/// ||P_S e^{-iHt} P_S - e^{-iAt}|| <= (2 sqrt 2 / 3) (||R|| t)^{3/2},
/// both sides restricted to S.
CheckResult check_pert_sim(const BlockSplit& split, double t);

/// Seeded random Hermitian matrix (Gaussian entries, symmetrized).
CMat random_hermitian(int n, unsigned seed, double scale = 1.0);

/// Random block instance with tunable gap and coupling:
/// H = diag(A, B + delta_target I) + coupling, ||R|| ~ coupling_scale.
BlockSplit random_block_split(int dim_S, int dim_rest, unsigned seed,
                              double delta_target, double coupling_scale);

struct SuiteSummary {
  std::string lemma;
  int total = 0;
  int passed = 0;
  int skipped = 0;
  double worst_margin = 0;
  unsigned worst_seed = 0;
  bool ok() const { return passed + skipped == total && total > 0; }
};

/// Batch property run per lemma; instances are reproducible from base_seed.
SuiteSummary run_weyl_suite(int instances, unsigned base_seed);
SuiteSummary run_pert_spec_suite(int instances, unsigned base_seed);
SuiteSummary run_duhamel_suite(int instances, unsigned base_seed);
SuiteSummary run_trunc_leak_suite(int instances, unsigned base_seed);
SuiteSummary run_pert_sim_suite(int instances, unsigned base_seed);

std::string suite_summary_json(const std::vector<SuiteSummary>& suites);

}  // namespace qwell
