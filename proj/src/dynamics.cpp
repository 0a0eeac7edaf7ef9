// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qwell/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qwell {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_normalized(const CVec& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("propagate: state must be normalized");
}

double energy(const SparseSymOp& op, const CVec& psi) {
  return psi.dot(op.apply(psi)).real();
}

CVec propagate_dense(const SparseSymOp& op, const CVec& psi, double t) {
  if (op.n > 2048)
    throw std::invalid_argument("propagate: dense method limited to n <= 2048");
  EigenPairs ep = eigh(op.dense());
  CVec coeff = ep.vectors.transpose().cast<cplx>() * psi;
  for (long i = 0; i < coeff.size(); ++i)
    coeff[i] *= std::exp(cplx(0.0, -ep.values[i] * t));
  return ep.vectors.cast<cplx>() * coeff;
}

// One adaptive Lanczos-exponential substep; returns the advanced state and
// the actually-covered time through `tau`. `tau_floor` is the step below
// which the kmax-dimensional space provably carries the whole spectral
// width, where the beta-based estimator bottoms out at its noise floor.
CVec krylov_substep(const SparseSymOp& op, const CVec& psi, double& tau,
                    double step_tol, double tau_floor, int kmax,
                    Propagation* rec) {
  const long n = op.n;
  CMat basis(n, kmax);
  std::vector<double> alpha, beta;
  double v0n = psi.norm();
  basis.col(0) = psi / v0n;
  int k = 0;
  for (; k < kmax; ++k) {
    CVec w = op.apply(CVec(basis.col(k)));
    double a = basis.col(k).dot(w).real();
    alpha.push_back(a);
    w -= a * basis.col(k);
    if (k > 0) w -= beta[k - 1] * basis.col(k - 1);
    for (int pass = 0; pass < 2; ++pass) {
      CVec coeff = basis.leftCols(k + 1).adjoint() * w;
      w -= basis.leftCols(k + 1) * coeff;
    }
    double b = w.norm();
    if (b < 1e-14 * std::abs(a) + 1e-300) {
      beta.push_back(0.0);
      if (rec) rec->events.push_back("krylov breakdown (invariant subspace)");
      break;
    }
    beta.push_back(b);
    if (k + 1 < kmax) basis.col(k + 1) = w / b;
  }
  const int dim = static_cast<int>(alpha.size());
  Mat T = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) T(i, i) = alpha[i];
  for (int i = 0; i + 1 < dim; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
  EigenPairs ep = eigh(T);

  for (;;) {
    CVec y(dim);
    for (int i = 0; i < dim; ++i)
      y[i] = std::exp(cplx(0.0, -ep.values[i] * tau)) * ep.vectors(0, i);
    y = ep.vectors.cast<cplx>() * y;
    // Residual estimate: weight of the last basis vector times the next
    // coupling.
    double err = (dim > 0) ? std::abs(beta[dim - 1]) * std::abs(y[dim - 1]) : 0.0;
    if (dim >= 1 && beta[dim - 1] == 0.0) err = 0.0;
    if (err <= step_tol || tau <= tau_floor) {
      return v0n * (basis.leftCols(dim) * y);
    }
    tau *= 0.5;
    if (rec) rec->events.push_back("krylov substep halved");
  }
}

CVec propagate_krylov(const SparseSymOp& op, const CVec& psi, double t,
                      double tol, Propagation* rec) {
  // Rounding injects top-of-spectrum components into the Krylov space, so the
  // substep must cover the full operator width: tau ~ kmax / ||op||.
  const int kmax = 32;
  double remaining = t;
  CVec cur = psi;
  double scale = std::max(op.norm_bound(), 1.0);
  double tau = std::min(remaining, 0.6 * kmax / scale);
  // Below this step the 32-dim space carries the whole spectral width with
  // error far under machine precision, so the noise-floored estimator is
  // overridden.
  const double tau_floor = 0.5 * kmax / scale;
  long steps = 0;
  while (remaining > 0) {
    tau = std::min(tau, remaining);
    double step_tol = tol * tau / t;
    double tau_in = tau;
    cur = krylov_substep(op, cur, tau, step_tol, tau_floor, kmax, rec);
    remaining -= tau;
    ++steps;
    if (steps > 2000000)
      throw std::runtime_error("propagate: krylov step-size underflow");
    if (tau == tau_in && tau > 1.01 * tau_floor)
      tau *= 1.25;  // accepted via the estimator: grow
  }
  if (rec) rec->steps = steps;
  return cur;
}

CVec propagate_crank_nicolson(const SparseSymOp& op, const CVec& psi, double t,
                              double tol, Propagation* rec) {
  // Step count from the state's energy scale: global error ~ t tau^2 E^3 / 12.
  CVec hpsi = op.apply(psi);
  double echar = std::max(hpsi.norm(), 1.0);
  double tau = std::sqrt(12.0 * tol / (t * echar * echar * echar));
  long steps = std::max<long>(16, static_cast<long>(std::ceil(t / tau)));
  if (steps > 50000000)
    throw std::runtime_error("propagate: crank-nicolson step-size underflow");
  tau = t / steps;
  if (rec) rec->steps = steps;

  // (I + i B) x = (I - i B) psi with B = (tau/2) H. Solve via the SPD system
  // (I + B^2) y = rhs, x = (I - i B) y, using CG with Jacobi preconditioning.
  const long n = op.n;
  Vec diag = op.diagonal();
  Vec inv_diag(n);
  const double half_tau = 0.5 * tau;
  for (long i = 0; i < n; ++i) {
    double d = half_tau * diag[i];
    inv_diag[i] = 1.0 / (1.0 + d * d);
  }
  auto apply_spd = [&](const double* x, double* y) {
    // y = (I + B^2) x
    static thread_local Vec tmp1, tmp2;
    tmp1.resize(n);
    tmp2.resize(n);
    op.apply(x, tmp1.data());
    op.apply(tmp1.data(), tmp2.data());
    for (long i = 0; i < n; ++i)
      y[i] = x[i] + half_tau * half_tau * tmp2[i];
  };
  double cg_tol = std::max(1e-13, tol / (10.0 * steps));

  CVec cur = psi;
  for (long s = 0; s < steps; ++s) {
    CVec Bcur = half_tau * op.apply(cur);
    CVec rhs = cur - cplx(0, 1) * Bcur;
    // two real solves
    Vec re = rhs.real(), im = rhs.imag();
    Vec yre, yim;
    CgResult r1 = cg_solve(apply_spd, n, re, yre, cg_tol, 10000, &inv_diag);
    CgResult r2 = cg_solve(apply_spd, n, im, yim, cg_tol, 10000, &inv_diag);
    if (!r1.converged || !r2.converged)
      throw std::runtime_error("propagate: crank-nicolson CG stalled");
    CVec y(n);
    for (long i = 0; i < n; ++i) y[i] = cplx(yre[i], yim[i]);
    cur = y - cplx(0, 1) * half_tau * op.apply(y);
  }
  return cur;
}

}  // namespace

CVec propagate(const SparseSymOp& op, const CVec& psi, double t,
               PropMethod method, double tol, Propagation* rec) {
  require_normalized(psi);
  if (psi.size() != op.n)
    throw std::invalid_argument("propagate: state dimension mismatch");
  if (rec) {
    rec->method = method;
    rec->t = t;
  }
  double e0 = energy(op, psi);
  CVec out;
  switch (method) {
    case PropMethod::Dense:
      out = propagate_dense(op, psi, t);
      if (rec) rec->steps = 1;
      break;
    case PropMethod::Krylov:
      out = propagate_krylov(op, psi, t, tol, rec);
      break;
    case PropMethod::CrankNicolson:
      out = propagate_crank_nicolson(op, psi, t, tol, rec);
      break;
    case PropMethod::SplitStep:
      throw std::invalid_argument(
          "propagate: split-step runs on a periodic mesh; use "
          "propagate_split_step");
  }
  if (rec) {
    rec->norm_drift = std::abs(out.norm() - psi.norm());
    double scale = std::max(std::abs(e0), 1.0);
    rec->energy_drift = std::abs(energy(op, out) - e0) / scale;
  }
  return out;
}

namespace {

// DFT along one axis; naive O(M^2) per line with precomputed twiddles.
// Mesh sizes are small and odd, so no radix tricks are needed.
void dft_axis(CVec& data, int M, long stride, long lines, long line_stride,
              bool forward) {
  std::vector<cplx> tw(M);
  double sgn = forward ? -1.0 : 1.0;
  for (int k = 0; k < M; ++k)
    tw[k] = std::exp(cplx(0.0, sgn * kTwoPi * k / M));
  std::vector<cplx> buf(M);
  for (long l = 0; l < lines; ++l) {
    long base = (l / stride) * line_stride + (l % stride);
    for (int k = 0; k < M; ++k) {
      cplx acc = 0;
      for (int x = 0; x < M; ++x)
        acc += data[base + x * stride] * tw[(static_cast<long>(k) * x) % M];
      buf[k] = acc;
    }
    double norm = forward ? 1.0 / M : 1.0;
    for (int k = 0; k < M; ++k) data[base + k * stride] = buf[k] * norm;
  }
}

void mesh_dft(const PeriodicMesh& mesh, CVec& data, bool forward) {
  const int M = mesh.points_per_dim();
  long stride = 1;
  for (int d = mesh.n - 1; d >= 0; --d) {
    long lines = mesh.total() / M;
    dft_axis(data, M, stride, lines, stride * M, forward);
    stride *= M;
  }
}

}  // namespace

CVec mesh_forward(const PeriodicMesh& mesh, const CVec& values) {
  if (values.size() != mesh.total())
    throw std::invalid_argument("mesh_forward: size mismatch");
  CVec c = values;
  mesh_dft(mesh, c, true);
  return c;
}

CVec mesh_inverse(const PeriodicMesh& mesh, const CVec& coeffs) {
  if (coeffs.size() != mesh.total())
    throw std::invalid_argument("mesh_inverse: size mismatch");
  CVec f = coeffs;
  mesh_dft(mesh, f, false);
  return f;
}

CVec propagate_split_step(const PeriodicMesh& mesh, const Vec& V_diag,
                          const CVec& psi, double t, long steps,
                          Propagation* rec) {
  require_normalized(psi);
  if (psi.size() != mesh.total() || V_diag.size() != mesh.total())
    throw std::invalid_argument("propagate_split_step: size mismatch");
  if (steps < 1) throw std::invalid_argument("propagate_split_step: steps >= 1");
  const double tau = t / steps;
  const int M = mesh.points_per_dim();

  // Kinetic phase per Fourier bin: sum over dims of (2 pi k_d)^2.
  CVec kin_phase(mesh.total());
  for (long f = 0; f < mesh.total(); ++f) {
    long rem = f;
    double k2 = 0;
    for (int d = mesh.n - 1; d >= 0; --d) {
      int p = static_cast<int>(rem % M);
      rem /= M;
      double kd = kTwoPi * mesh.bin_frequency(p);
      k2 += kd * kd;
    }
    kin_phase[f] = std::exp(cplx(0.0, -k2 * tau));
  }
  CVec half_v(mesh.total());
  for (long f = 0; f < mesh.total(); ++f)
    half_v[f] = std::exp(cplx(0.0, -0.5 * tau * V_diag[f]));

  CVec cur = psi;
  for (long s = 0; s < steps; ++s) {
    cur = cur.cwiseProduct(half_v);
    cur = mesh_forward(mesh, cur);
    cur = cur.cwiseProduct(kin_phase);
    cur = mesh_inverse(mesh, cur);
    cur = cur.cwiseProduct(half_v);
  }
  if (rec) {
    rec->method = PropMethod::SplitStep;
    rec->t = t;
    rec->steps = steps;
    rec->norm_drift = std::abs(cur.norm() - psi.norm());
  }
  return cur;
}

double measure_acceptance(const std::vector<int>& dims, const CVec& psi,
                          int mu_ndims, const CVec& mu, double weight_psi,
                          double weight_mu) {
  long n_first = 1, n_rest = 1;
  for (size_t d = 0; d < dims.size(); ++d) {
    if (static_cast<int>(d) < mu_ndims)
      n_first *= dims[d];
    else
      n_rest *= dims[d];
  }
  if (psi.size() != n_first * n_rest || mu.size() != n_first)
    throw std::invalid_argument("measure_acceptance: grid mismatch");
  // <mu (x) e_rest | psi> for every rest index; last coordinate fastest means
  // the leading block is the slow index.
  double acc = 0;
  for (long r = 0; r < n_rest; ++r) {
    cplx amp = 0;
    for (long f = 0; f < n_first; ++f)
      amp += std::conj(mu[f]) * psi[f * n_rest + r];
    acc += std::norm(amp);
  }
  // The mu contraction is a quadrature over the leading block (weight_mu);
  // the remaining sum is a quadrature with the complementary weight.
  double w_rest = (n_rest == 1) ? 1.0 : weight_psi / weight_mu;
  return acc * weight_mu * weight_mu * w_rest;
}

double fourier_mesh_roundtrip(int m, int n, unsigned seed) {
  if (m > 128 || n > 2)
    throw std::invalid_argument("fourier_mesh_roundtrip: m <= 128, n <= 2");
  PeriodicMesh mesh{m, n};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  CVec coeffs(mesh.total());
  for (long i = 0; i < mesh.total(); ++i) coeffs[i] = cplx(g(rng), g(rng));
  CVec values = mesh_inverse(mesh, coeffs);
  CVec back = mesh_forward(mesh, values);
  return (back - coeffs).cwiseAbs().maxCoeff();
}

}  // namespace qwell
