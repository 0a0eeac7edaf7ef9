// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qwell/pauli.hpp"

using namespace qwell;

namespace {

// Independent Kronecker-product oracle, built the pedestrian way.
CMat kron(const CMat& A, const CMat& B) {
  CMat C(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      C.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return C;
}

CMat pauli_matrix(PauliFactor f) {
  CMat m(2, 2);
  switch (f) {
    case PauliFactor::I: m << 1, 0, 0, 1; break;
    case PauliFactor::X: m << 0, 1, 1, 0; break;
    case PauliFactor::Y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

CMat kron_oracle(const PauliOperator& op) {
  const long dim = 1L << op.n;
  CMat H = CMat::Zero(dim, dim);
  for (const auto& [c, s] : op.terms) {
    CMat t = CMat::Identity(1, 1);
    for (int q = 0; q < op.n; ++q) t = kron(t, pauli_matrix(s.factors[q]));
    H += c * t;
  }
  return H;
}

TimHamiltonian random_tim(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  TimHamiltonian t;
  t.n = n;
  for (int i = 0; i < n; ++i) {
    t.a.push_back(u(rng));
    t.b.push_back(u(rng));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) t.bzz.emplace_back(i, j, u(rng));
  return t;
}

}  // namespace

TEST_CASE("to_dense: single Z term") {
  PauliOperator op(1);
  op.add(1.0, "Z");
  CMat H = to_dense(op);
  CHECK(H(0, 0) == cplx(1, 0));
  CHECK(H(1, 1) == cplx(-1, 0));
  CHECK(std::abs(H(0, 1)) == 0.0);
}

TEST_CASE("to_dense: TIM n=1 a=3 b=4 has eigenvalues +-5") {
  TimHamiltonian t;
  t.n = 1;
  t.a = {3.0};
  t.b = {4.0};
  Spectrum sp = exact_spectrum(t.to_pauli());
  CHECK(sp.eigenvalues[0] == doctest::Approx(-5.0).epsilon(1e-13));
  CHECK(sp.eigenvalues[1] == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("to_dense matches the Kronecker oracle") {
  TimHamiltonian t;
  t.n = 2;
  t.a = {1.0, 1.0};
  t.b = {0.0, 0.0};
  t.bzz = {{0, 1, 1.0}};
  PauliOperator op = t.to_pauli();
  CHECK((to_dense(op) - kron_oracle(op)).norm() < 1e-14);

  // random operators incl. Y terms
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const char* syms = "IXYZ";
  for (int trial = 0; trial < 8; ++trial) {
    PauliOperator r(3);
    for (int k = 0; k < 5; ++k) {
      std::string s;
      for (int q = 0; q < 3; ++q) s += syms[rng() % 4];
      r.add(u(rng), s);
    }
    CHECK((to_dense(r) - kron_oracle(r)).norm() < 1e-13);
  }
}

TEST_CASE("to_dense is linear in coefficients") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    PauliOperator A = random_tim(3, 100 + trial).to_pauli();
    PauliOperator B = random_tim(3, 200 + trial).to_pauli();
    double alpha = u(rng), beta = u(rng);
    PauliOperator C(3);
    for (auto& [c, s] : A.terms) C.add(alpha * c, s);
    for (auto& [c, s] : B.terms) C.add(beta * c, s);
    CMat want = alpha * to_dense(A) + beta * to_dense(B);
    CHECK((to_dense(C) - want).cwiseAbs().maxCoeff() < 1e-13 * want.norm());
  }
}

TEST_CASE("exact_spectrum: X eigenpairs and Z1 Z2 degeneracies") {
  PauliOperator x(1);
  x.add(1.0, "X");
  Spectrum sp = exact_spectrum(x);
  CHECK(sp.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(sp.eigenvalues[1] == doctest::Approx(1.0));
  // |-> and |+>
  CVec minus = sp.eigenvectors.col(0), plus = sp.eigenvectors.col(1);
  CHECK(std::abs(std::abs(minus[0]) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(plus[0] - plus[1]) < 1e-12);

  PauliOperator zz(2);
  zz.add(1.0, "ZZ");
  Spectrum sp2 = exact_spectrum(zz);
  CHECK(sp2.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(sp2.eigenvalues[1] == doctest::Approx(-1.0));
  CHECK(sp2.eigenvalues[2] == doctest::Approx(1.0));
  CHECK(sp2.eigenvalues[3] == doctest::Approx(1.0));
}

TEST_CASE("exact_spectrum: random TIM agrees with generic Hermitian solve") {
  TimHamiltonian t = random_tim(3, 42);
  PauliOperator op = t.to_pauli();
  Spectrum sp = exact_spectrum(op);  // real-symmetric path
  CMat H = kron_oracle(op);
  CEigenPairs ep = eigh(H);  // generic complex path
  double hn = std::max(1.0, herm_two_norm(H));
  for (int i = 0; i < 8; ++i)
    CHECK(std::abs(sp.eigenvalues[i] - ep.values[i]) < 1e-10 * hn);
  CHECK(sp.max_residual < 1e-10);
}

TEST_CASE("exact_propagate: identity at t=0, phase on Z, Rabi flip on X") {
  PauliOperator z(1);
  z.add(1.0, "Z");
  CVec zero(2);
  zero << 1, 0;
  CVec r0 = exact_propagate(z, 0.0, zero);
  CHECK((r0 - zero).norm() < 1e-14);
  CVec rt = exact_propagate(z, 0.7, zero);
  CHECK(std::abs(std::abs(rt[0]) - 1.0) < 1e-12);

  // Closed-form Rabi rotation: e^{-iXt}|0> at t = pi/2 lands on |1|=1.
  PauliOperator x(1);
  x.add(1.0, "X");
  CVec rx = exact_propagate(x, M_PI / 2.0, zero);
  CHECK(std::abs(rx[1]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact_propagate rejects non-normalized input") {
  PauliOperator z(1);
  z.add(1.0, "Z");
  CVec bad(2);
  bad << 1.5, 0;
  CHECK_THROWS(exact_propagate(z, 1.0, bad));
}

TEST_CASE("propagation is unitary with the group property") {
  TimHamiltonian t = random_tim(2, 77);
  PauliOperator op = t.to_pauli();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  CVec psi(4);
  for (int i = 0; i < 4; ++i) psi[i] = cplx(g(rng), g(rng));
  psi.normalize();
  double s = 0.4, tt = 1.1;
  CVec a = exact_propagate(op, s + tt, psi);
  CVec b = exact_propagate(op, tt, exact_propagate(op, s, psi));
  CHECK(std::abs(a.norm() - 1.0) < 1e-12);
  CHECK((a - b).norm() < 1e-10);
}

TEST_CASE("sign conjugation: negating a_u leaves the spectrum unchanged") {
  for (unsigned seed : {301u, 302u, 303u}) {
    TimHamiltonian t = random_tim(3, seed);
    TimHamiltonian t2 = t;
    t2.a[1] = -t2.a[1];
    Spectrum s1 = exact_spectrum(t.to_pauli());
    Spectrum s2 = exact_spectrum(t2.to_pauli());
    for (int i = 0; i < 8; ++i)
      CHECK(s1.eigenvalues[i] == doctest::Approx(s2.eigenvalues[i]).epsilon(1e-12));
  }
}

TEST_CASE("TIM JSON round-trip") {
  TimHamiltonian t = random_tim(3, 55);
  TimHamiltonian u = TimHamiltonian::from_json(t.to_json());
  CHECK(u.n == t.n);
  for (int i = 0; i < 3; ++i) {
    CHECK(u.a[i] == t.a[i]);
    CHECK(u.b[i] == t.b[i]);
  }
  CHECK(u.bzz == t.bzz);
  CHECK_THROWS(TimHamiltonian::from_json(R"({"n":2,"a":[1,0],"b":[0,0],"bzz":[[1,0,0.5]]})"));
}

TEST_CASE("dense realization caps at 14 qubits") {
  PauliOperator big(15);
  PauliString s(15);
  s.factors[0] = PauliFactor::Z;
  big.add(1.0, s);
  CHECK_THROWS(to_dense(big));
}
