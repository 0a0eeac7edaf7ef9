// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qwell/perturbation.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qwell {

using json = nlohmann::json;

CMat BlockSplit::block_A() const { return frame.adjoint() * H * frame; }

double BlockSplit::coupling_norm() const {
  // R has rank <= dim(S): SVD of the thin block (I - P_S) H frame.
  CMat HF = H * frame;
  CMat proj = frame * (frame.adjoint() * HF);
  return block_two_norm(CMat(HF - proj));
}

CheckResult check_weyl(const CMat& A, const CMat& B, int k0, int k1) {
  if (A.rows() != B.rows())
    throw std::invalid_argument("check_weyl: dimension mismatch");
  CheckResult r;
  Vec ea = eigh(A).values, eb = eigh(B).values;
  r.rhs = herm_two_norm(CMat(A - B)) + kWeylSlack;
  r.lhs = 0;
  for (int k = k0; k <= k1; ++k) {
    double d = std::abs(ea[k] - eb[k]);
    if (d > r.lhs) {
      r.lhs = d;
      r.worst_k = k;
    }
  }
  r.margin = r.rhs - r.lhs;
  r.pass = r.lhs <= r.rhs;
  return r;
}

CheckResult check_pert_spec(const BlockSplit& split) {
  CheckResult r;
  const int m = split.dim_S();
  CMat A = split.block_A();
  Vec ea = eigh(A).values;

  // Measured Delta: lemma precondition, skip (never fail) if violated.
  CEigenPairs full = eigh(split.H);
  const long n = split.H.rows();
  CMat comp(n, n - m);
  {
    // Orthonormal basis of S-perp via Householder QR of the frame.
    Eigen::HouseholderQR<CMat> qr(split.frame);
    CMat Q = qr.householderQ() * CMat::Identity(n, n);
    comp = Q.rightCols(n - m);
  }
  CMat B = comp.adjoint() * split.H * comp;
  double delta = eigh(B).values.minCoeff() - ea.maxCoeff();
  if (!(delta > 0)) {
    r.skipped = true;
    return r;
  }

  r.rhs = split.coupling_norm() + kWeylSlack;
  for (int k = 0; k < m; ++k) {
    double d = std::abs(full.values[k] - ea[k]);
    if (d > r.lhs) {
      r.lhs = d;
      r.worst_k = k;
    }
  }
  r.margin = r.rhs - r.lhs;
  r.pass = r.lhs <= r.rhs;
  return r;
}

CheckResult check_duhamel(const CMat& A, const CMat& B, double t) {
  if (A.rows() > 256)
    throw std::invalid_argument("check_duhamel: dense check limited to dim <= 256");
  CheckResult r;
  CMat Ua = herm_propagator(A, t);
  CMat Ub = herm_propagator(B, t);
  r.lhs = block_two_norm(CMat(Ua - Ub));
  r.rhs = herm_two_norm(CMat(A - B)) * t + kWeylSlack;
  r.margin = r.rhs - r.lhs;
  r.pass = r.lhs <= r.rhs;
  return r;
}

CheckResult check_trunc_leak(const BlockSplit& split, double t) {
  CheckResult r;
  CMat U = herm_propagator(split.H, t);
  CMat UF = U * split.frame;
  CMat proj = split.frame * (split.frame.adjoint() * UF);
  r.lhs = block_two_norm(CMat(UF - proj));
  r.rhs = std::sqrt(2.0 * split.coupling_norm() * t) + kLeakSlack;
  r.margin = r.rhs - r.lhs;
  r.pass = r.lhs <= r.rhs;
  return r;
}

CheckResult check_pert_sim(const BlockSplit& split, double t) {
  CheckResult r;
  CMat U = herm_propagator(split.H, t);
  CMat inS = split.frame.adjoint() * U * split.frame;  // P_S e^{-iHt} P_S on S
  CMat A = split.block_A();
  CMat UA = herm_propagator(A, t);
  r.lhs = block_two_norm(CMat(inS - UA));
  double Rn = split.coupling_norm();
  r.rhs = (2.0 * std::sqrt(2.0) / 3.0) * std::pow(Rn * t, 1.5) + kLeakSlack;
  r.margin = r.rhs - r.lhs;
  r.pass = r.lhs <= r.rhs;
  return r;
}

CMat random_hermitian(int n, unsigned seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  CMat M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = cplx(g(rng), g(rng));
  CMat H = scale * 0.5 * (M + M.adjoint());
  return H;
}

BlockSplit random_block_split(int dim_S, int dim_rest, unsigned seed,
                              double delta_target, double coupling_scale) {
  const int n = dim_S + dim_rest;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> g(0.0, 1.0);
  CMat A = random_hermitian(dim_S, seed * 3 + 1);
  CMat B = random_hermitian(dim_rest, seed * 3 + 2);
  // Lift B above A by delta_target (measured Delta may differ once the
  // coupling is added; checks re-measure).
  double topA = eigh(A).values.maxCoeff();
  double botB = eigh(B).values.minCoeff();
  B += (topA - botB + delta_target) * CMat::Identity(dim_rest, dim_rest);
  CMat R(dim_rest, dim_S);
  for (int i = 0; i < dim_rest; ++i)
    for (int j = 0; j < dim_S; ++j) R(i, j) = cplx(g(rng), g(rng));
  if (R.norm() > 0) R *= coupling_scale / block_two_norm(R);

  BlockSplit split;
  split.H = CMat::Zero(n, n);
  split.H.topLeftCorner(dim_S, dim_S) = A;
  split.H.bottomRightCorner(dim_rest, dim_rest) = B;
  split.H.bottomLeftCorner(dim_rest, dim_S) = R;
  split.H.topRightCorner(dim_S, dim_rest) = R.adjoint();
  split.frame = CMat::Zero(n, dim_S);
  split.frame.topLeftCorner(dim_S, dim_S) = CMat::Identity(dim_S, dim_S);
  return split;
}

namespace {

SuiteSummary run_generic(const std::string& name, int instances,
                         unsigned base_seed,
                         const std::function<CheckResult(unsigned)>& one) {
  SuiteSummary s;
  s.lemma = name;
  s.total = instances;
  s.worst_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    unsigned seed = base_seed + i;
    CheckResult r = one(seed);
    if (r.skipped) {
      ++s.skipped;
      continue;
    }
    if (r.pass) ++s.passed;
    if (r.margin < s.worst_margin) {
      s.worst_margin = r.margin;
      s.worst_seed = seed;
    }
  }
  return s;
}

}  // namespace

SuiteSummary run_weyl_suite(int instances, unsigned base_seed) {
  return run_generic("weyl", instances, base_seed, [](unsigned seed) {
    std::mt19937_64 rng(seed);
    int n = 8 + static_cast<int>(rng() % 57);  // dim <= 64
    CMat A = random_hermitian(n, seed * 7 + 1);
    CMat E = random_hermitian(n, seed * 7 + 2, 0.3);
    CheckResult r = check_weyl(A, CMat(A + E), 0, n - 1);
    r.seed = seed;
    return r;
  });
}

SuiteSummary run_pert_spec_suite(int instances, unsigned base_seed) {
  return run_generic("pert-spec", instances, base_seed, [](unsigned seed) {
    std::mt19937_64 rng(seed);
    int dim_S = 2 + static_cast<int>(rng() % 6);
    int rest = 8 + static_cast<int>(rng() % 40);
    double delta = (rng() % 4 == 0) ? -0.5 : 0.5 + 0.1 * (rng() % 30);
    double coup = 0.01 * (1 + rng() % 100);
    BlockSplit sp = random_block_split(dim_S, rest, seed, delta, coup);
    CheckResult r = check_pert_spec(sp);
    r.seed = seed;
    return r;
  });
}

SuiteSummary run_duhamel_suite(int instances, unsigned base_seed) {
  return run_generic("duhamel", instances, base_seed, [](unsigned seed) {
    std::mt19937_64 rng(seed);
    int n = 8 + static_cast<int>(rng() % 57);
    double ts[3] = {0.1, 1.0, 10.0};
    double t = ts[rng() % 3];
    CMat A = random_hermitian(n, seed * 11 + 1);
    CMat E = random_hermitian(n, seed * 11 + 2, 0.05 * (1 + rng() % 10));
    CheckResult r = check_duhamel(A, CMat(A + E), t);
    r.seed = seed;
    return r;
  });
}

SuiteSummary run_trunc_leak_suite(int instances, unsigned base_seed) {
  return run_generic("trunc-leak", instances, base_seed, [](unsigned seed) {
    std::mt19937_64 rng(seed);
    int dim_S = 2 + static_cast<int>(rng() % 4);
    int rest = 8 + static_cast<int>(rng() % 56);
    double coups[3] = {1e-3, 1e-2, 1e-1};
    double coup = coups[rng() % 3];
    double t = 0.25 * (1 + rng() % 8);
    BlockSplit sp = random_block_split(dim_S, rest, seed, 0.2, coup);
    CheckResult r = check_trunc_leak(sp, t);
    r.seed = seed;
    return r;
  });
}

SuiteSummary run_pert_sim_suite(int instances, unsigned base_seed) {
  return run_generic("pert-sim", instances, base_seed, [](unsigned seed) {
    std::mt19937_64 rng(seed);
    int dim_S = 2 + static_cast<int>(rng() % 4);
    int rest = 8 + static_cast<int>(rng() % 56);
    double coups[3] = {1e-3, 1e-2, 1e-1};
    double coup = coups[rng() % 3];
    double t = 1.0;
    BlockSplit sp = random_block_split(dim_S, rest, seed, 0.2, coup);
    CheckResult r = check_pert_sim(sp, t);
    r.seed = seed;
    return r;
  });
}

std::string suite_summary_json(const std::vector<SuiteSummary>& suites) {
  json j = json::array();
  for (const auto& s : suites) {
    j.push_back({{"lemma", s.lemma},
                 {"total", s.total},
                 {"passed", s.passed},
                 {"skipped", s.skipped},
                 {"worst_margin", s.worst_margin},
                 {"worst_seed", s.worst_seed},
                 {"ok", s.ok()}});
  }
  return j.dump(2);
}

}  // namespace qwell
