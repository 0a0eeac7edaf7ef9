// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qwell/perturbation.hpp"

using namespace qwell;

TEST_CASE("weyl: equal matrices and uniform shift saturation") {
  CMat A = random_hermitian(12, 1);
  CheckResult r = check_weyl(A, A, 0, 11);
  CHECK(r.pass);
  CHECK(r.lhs == 0.0);

  double eps = 0.37;
  CMat B = A + eps * CMat::Identity(12, 12);
  r = check_weyl(A, B, 0, 11);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(eps).epsilon(1e-10));  // tight
}

TEST_CASE("pert-spec: block-diagonal is exact, small coupling bounded") {
  BlockSplit sp = random_block_split(2, 10, 3, 1.0, 0.0);
  CheckResult r = check_pert_spec(sp);
  CHECK(r.pass);
  CHECK(r.lhs < 1e-12);

  // A = diag(0,1), B = diag(5,6), explicit small R
  BlockSplit sp2;
  sp2.H = CMat::Zero(4, 4);
  sp2.H(0, 0) = 0;
  sp2.H(1, 1) = 1;
  sp2.H(2, 2) = 5;
  sp2.H(3, 3) = 6;
  sp2.H(2, 0) = sp2.H(0, 2) = 0.05;
  sp2.H(3, 1) = sp2.H(1, 3) = -0.04;
  sp2.frame = CMat::Zero(4, 2);
  sp2.frame(0, 0) = 1;
  sp2.frame(1, 1) = 1;
  r = check_pert_spec(sp2);
  CHECK(r.pass);
  CHECK(r.lhs > 0.0);
  CHECK(r.rhs >= 0.05);
}

TEST_CASE("pert-spec skips instances violating the gap precondition") {
  // Negative lift makes the blocks overlap; measured Delta < 0 -> skip.
  BlockSplit sp = random_block_split(3, 12, 5, -2.0, 0.1);
  CheckResult r = check_pert_spec(sp);
  CHECK(r.skipped);
}

TEST_CASE("duhamel: trivial cases and random pairs") {
  CMat A = random_hermitian(10, 7);
  CheckResult r = check_duhamel(A, A, 1.0);
  CHECK(r.pass);
  CHECK(r.lhs < 1e-12);
  r = check_duhamel(A, random_hermitian(10, 8), 0.0);
  CHECK(r.pass);
  CHECK(r.lhs < 1e-12);
}

TEST_CASE("trunc-leak: invariant subspace has zero leakage") {
  BlockSplit sp = random_block_split(2, 8, 9, 0.5, 0.0);
  CheckResult r = check_trunc_leak(sp, 2.0);
  CHECK(r.pass);
  CHECK(r.lhs < 1e-12);
}

TEST_CASE("pert-sim: R=0 gives propagator-tolerance agreement") {
  BlockSplit sp = random_block_split(3, 9, 10, 0.5, 0.0);
  CheckResult r = check_pert_sim(sp, 1.5);
  CHECK(r.pass);
  CHECK(r.lhs < 1e-11);
}

TEST_CASE("pert-sim scaling: error grows at least linearly in ||R||") {
  // The 3/2-power rhs is an upper envelope; the measured error should scale
  // with exponent >= 1 across coupling decades.
  std::vector<double> lnR, lnE;
  for (double coup : {1e-3, 1e-2, 1e-1}) {
    BlockSplit sp = random_block_split(2, 20, 77, 0.8, coup);
    CheckResult r = check_pert_sim(sp, 1.0);
    CHECK(r.pass);
    lnR.push_back(std::log(coup));
    lnE.push_back(std::log(std::max(r.lhs, 1e-300)));
  }
  auto [icpt, slope] = linear_fit(lnR, lnE);
  (void)icpt;
  CHECK(slope >= 1.0);
}

TEST_CASE("property suites: zero violations over seeded batches") {
  auto w = run_weyl_suite(60, 1000);
  CHECK(w.ok());
  auto ps = run_pert_spec_suite(60, 2000);
  CHECK(ps.ok());
  CHECK(ps.skipped > 0);  // the ensemble deliberately includes gap violations
  auto d = run_duhamel_suite(40, 3000);
  CHECK(d.ok());
  auto tl = run_trunc_leak_suite(40, 4000);
  CHECK(tl.ok());
  auto sim = run_pert_sim_suite(40, 5000);
  CHECK(sim.ok());
}

TEST_CASE("suite failures reproduce bit-identically from the seed") {
  auto a = run_trunc_leak_suite(25, 9000);
  auto b = run_trunc_leak_suite(25, 9000);
  CHECK(a.worst_margin == b.worst_margin);
  CHECK(a.worst_seed == b.worst_seed);
}
