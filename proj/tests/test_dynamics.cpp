// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qwell/dynamics.hpp"

using namespace qwell;

namespace {

constexpr double kPi = std::numbers::pi;

SparseSymOp harmonic_1d(int m, double strength) {
  Grid1D g = Grid1D::dirichlet(m);
  TensorGrid tg{{g}};
  return assemble_schrodinger(tg, {1.0}, Potential::one_body(0, [=](double x) {
                                return strength * x * x;
                              }));
}

CVec gaussian_packet(const Grid1D& g, double x0, double sigma) {
  CVec psi(g.m);
  for (int i = 0; i < g.m; ++i) {
    double x = g.node(i);
    psi[i] = std::exp(-(x - x0) * (x - x0) / (2 * sigma * sigma));
  }
  psi.normalize();
  return psi;
}

}  // namespace

TEST_CASE("t = 0 leaves the state unchanged") {
  SparseSymOp H = harmonic_1d(64, 10.0);
  CVec psi = gaussian_packet(Grid1D::dirichlet(64), 0.1, 0.2);
  for (auto m : {PropMethod::Dense, PropMethod::Krylov, PropMethod::CrankNicolson}) {
    CVec out = propagate(H, psi, 0.0, m, 1e-10);
    CHECK((out - psi).norm() < 1e-10);
  }
}

TEST_CASE("non-normalized input is rejected") {
  SparseSymOp H = harmonic_1d(32, 1.0);
  CVec bad = CVec::Ones(32);
  CHECK_THROWS(propagate(H, bad, 1.0, PropMethod::Dense, 1e-10));
}

TEST_CASE("cross-method agreement on the V = 50 x^2 benchmark") {
  const int m = 512;
  SparseSymOp H = harmonic_1d(m, 50.0);
  // Displaced packet, one classical period is t ~ 0.44. The width keeps the
  // boundary amplitude below 1e-9 so the Dirichlet walls stay invisible.
  CVec psi = gaussian_packet(Grid1D::dirichlet(m), 0.2, 0.12);
  const double t = 0.5;
  Propagation rec_d, rec_k, rec_c;
  CVec a = propagate(H, psi, t, PropMethod::Dense, 1e-10, &rec_d);
  CVec b = propagate(H, psi, t, PropMethod::Krylov, 1e-8, &rec_k);
  CVec c = propagate(H, psi, t, PropMethod::CrankNicolson, 2e-8, &rec_c);
  CHECK((a - b).norm() < 1e-6);
  CHECK((a - c).norm() < 1e-6);
  CHECK((b - c).norm() < 1e-6);
  // unitarity: norm drift within tolerance on every run
  CHECK(rec_d.norm_drift < 1e-10);
  CHECK(rec_k.norm_drift < 1e-8);
  CHECK(rec_c.norm_drift < 1e-8);
  // time-independent H: energy drift recorded and small
  CHECK(rec_k.energy_drift < 1e-7);
  CHECK(rec_c.energy_drift < 1e-7);
}

TEST_CASE("split-step evolves a plane wave with the exact phase") {
  PeriodicMesh mesh{16, 1};  // 33 points
  const int k = 3;
  const int M = mesh.points_per_dim();
  CVec psi(M);
  for (int i = 0; i < M; ++i)
    psi[i] = std::exp(cplx(0.0, 2.0 * kPi * k * mesh.node(i)));
  psi.normalize();
  const double t = 0.37;
  CVec out = propagate_split_step(mesh, Vec::Zero(M), psi, t, 1);
  double omega = (2.0 * kPi * k) * (2.0 * kPi * k);
  CVec want = std::exp(cplx(0.0, -omega * t)) * psi;
  CHECK((out - want).norm() < 1e-10);
}

TEST_CASE("split-step norm preservation with a potential") {
  PeriodicMesh mesh{12, 1};
  const int M = mesh.points_per_dim();
  Vec V(M);
  for (int i = 0; i < M; ++i) V[i] = 3.0 * std::cos(2 * kPi * mesh.node(i));
  CVec psi(M);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < M; ++i) psi[i] = cplx(g(rng), g(rng));
  psi.normalize();
  Propagation rec;
  CVec out = propagate_split_step(mesh, V, psi, 1.0, 200, &rec);
  CHECK(rec.norm_drift < 1e-12);
  CHECK(out.size() == M);
}

TEST_CASE("fourier mesh roundtrip recovers coefficients") {
  CHECK(fourier_mesh_roundtrip(1, 1) < 1e-12);
  CHECK(fourier_mesh_roundtrip(37, 1) < 1e-12);
  CHECK(fourier_mesh_roundtrip(12, 2) < 1e-12);

  // constant function -> single coefficient c_0
  PeriodicMesh mesh{5, 1};
  CVec f = CVec::Constant(mesh.total(), cplx(2.5, -1.0));
  CVec c = mesh_forward(mesh, f);
  CHECK(std::abs(c[0] - cplx(2.5, -1.0)) < 1e-13);
  for (int i = 1; i < mesh.total(); ++i) CHECK(std::abs(c[i]) < 1e-13);

  // single mode k -> single coefficient at bin k
  const int k = 4;
  for (int i = 0; i < mesh.total(); ++i)
    f[i] = std::exp(cplx(0.0, 2 * kPi * k * mesh.node(i)));
  c = mesh_forward(mesh, f);
  for (int p = 0; p < mesh.total(); ++p) {
    if (mesh.bin_frequency(p) == k)
      CHECK(std::abs(c[p] - cplx(1, 0)) < 1e-12);
    else
      CHECK(std::abs(c[p]) < 1e-12);
  }
}

TEST_CASE("measure_acceptance: product states, orthogonality, dense oracle") {
  // 2D grid 16 x 16, mu on the first coordinate.
  const int m = 16;
  double w1 = 0.1, w2 = 0.07;  // arbitrary per-coordinate weights
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  CVec mu(m), chi(m);
  for (int i = 0; i < m; ++i) {
    mu[i] = cplx(g(rng), g(rng));
    chi[i] = cplx(g(rng), g(rng));
  }
  mu /= std::sqrt(w1) * mu.norm();
  chi /= std::sqrt(w2) * chi.norm();
  CVec prod(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) prod[i * m + j] = mu[i] * chi[j];
  double acc = measure_acceptance({m, m}, prod, 1, mu, w1 * w2, w1);
  CHECK(acc == doctest::Approx(1.0).epsilon(1e-12));

  // psi orthogonal to mu on the first block -> 0
  CVec mu_perp = chi / chi.norm() / std::sqrt(w1);
  cplx ov = mu.dot(mu_perp) * w1;
  CVec mo = mu_perp - ov / w1 * mu / (mu.norm() * mu.norm());
  mo /= std::sqrt(w1) * mo.norm();
  CVec prod2(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) prod2[i * m + j] = mo[i] * chi[j];
  CHECK(measure_acceptance({m, m}, prod2, 1, mu, w1 * w2, w1) < 1e-12);

  // random psi vs dense projector computation
  CVec psi(m * m);
  for (int i = 0; i < m * m; ++i) psi[i] = cplx(g(rng), g(rng));
  psi /= std::sqrt(w1 * w2) * psi.norm();
  double got = measure_acceptance({m, m}, psi, 1, mu, w1 * w2, w1);
  // dense oracle: M = |mu><mu| (x) I with weights folded in
  double want = 0;
  for (int j = 0; j < m; ++j) {
    cplx a = 0;
    for (int i = 0; i < m; ++i) a += std::conj(mu[i]) * psi[i * m + j] * w1;
    want += std::norm(a) * w2;
  }
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("duhamel consistency: bounded potential perturbation") {
  const int m = 128;
  SparseSymOp H1 = harmonic_1d(m, 10.0);
  Grid1D g = Grid1D::dirichlet(m);
  TensorGrid tg{{g}};
  const double eps = 0.01;
  SparseSymOp H2 = assemble_schrodinger(tg, {1.0}, Potential::one_body(0, [=](double x) {
                                          return 10.0 * x * x + eps * std::cos(x);
                                        }));
  CVec psi = gaussian_packet(g, 0.0, 0.25);
  const double t = 1.0;
  CVec a = propagate(H1, psi, t, PropMethod::Dense, 1e-12);
  CVec b = propagate(H2, psi, t, PropMethod::Dense, 1e-12);
  // || psi_1(t) - psi_2(t) || <= ||Delta V||_inf t, with 2x slack
  CHECK((a - b).norm() <= 2.0 * eps * t);
}

TEST_CASE("krylov handles a Laplacian-scale operator with recorded events") {
  const int m = 256;
  SparseSymOp H = harmonic_1d(m, 0.0);
  CVec psi = gaussian_packet(Grid1D::dirichlet(m), 0.0, 0.15);
  Propagation rec;
  CVec out = propagate(H, psi, 0.05, PropMethod::Krylov, 1e-9, &rec);
  CVec want = propagate(H, psi, 0.05, PropMethod::Dense, 1e-12);
  CHECK((out - want).norm() < 1e-7);
  CHECK(rec.steps >= 1);
}
