// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qwell/tim_universality.hpp"

#include <cmath>
#include <stdexcept>

namespace qwell {

Mat replace_entries(const Mat& Hk) {
  const long n = Hk.rows();
  if (Hk.cols() != n) throw std::invalid_argument("replace_entries: square input");
  if ((Hk - Hk.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, Hk.norm()))
    throw std::invalid_argument("replace_entries: input must be real symmetric");
  Mat out = Mat::Zero(2 * n, 2 * n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      double x = Hk(i, j);
      if (x >= 0) {
        out(2 * i, 2 * j) = x;
        out(2 * i + 1, 2 * j + 1) = x;
      } else {
        out(2 * i, 2 * j + 1) = -x;
        out(2 * i + 1, 2 * j) = -x;
      }
    }
  return out;
}

Mat entrywise_abs(const Mat& A) { return A.cwiseAbs(); }

namespace {

Mat pauli2(char c) {
  Mat m(2, 2);
  if (c == 'X')
    m << 0, 1, 1, 0;
  else if (c == 'Z')
    m << 1, 0, 0, -1;
  else
    m << 1, 0, 0, 1;
  return m;
}

Mat kron(const Mat& A, const Mat& B) {
  Mat C(A.rows() * B.rows(), A.cols() * B.cols());
  for (long i = 0; i < A.rows(); ++i)
    for (long j = 0; j < A.cols(); ++j)
      C.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return C;
}

// Extend a local matrix on `support` (ascending qubit indices) to nq qubits.
Mat extend(const Mat& local, const std::vector<int>& support, int nq) {
  const long dim = 1L << nq;
  const int k = static_cast<int>(support.size());
  Mat out = Mat::Zero(dim, dim);
  const long ldim = 1L << k;
  for (long r = 0; r < dim; ++r) {
    long lr = 0;
    for (int q = 0; q < k; ++q)
      lr = (lr << 1) | ((r >> (nq - 1 - support[q])) & 1);
    for (long lc = 0; lc < ldim; ++lc) {
      double v = local(lr, lc);
      if (v == 0.0) continue;
      long c = r;
      for (int q = 0; q < k; ++q) {
        long bit = (lc >> (k - 1 - q)) & 1;
        long pos = nq - 1 - support[q];
        c = (c & ~(1L << pos)) | (bit << pos);
      }
      out(r, c) += v;
    }
  }
  return out;
}

}  // namespace

bool BlockEmbedding::all_terms_stoquastic(double tol) const {
  for (const Mat& t : embedded_terms)
    for (long i = 0; i < t.rows(); ++i)
      for (long j = 0; j < t.cols(); ++j)
        if (i != j && t(i, j) > tol) return false;
  return true;
}

int BlockEmbedding::max_locality() const {
  int k = 0;
  for (const auto& s : supports) k = std::max<int>(k, static_cast<int>(s.size()));
  return k;
}

BlockEmbedding embed_xxzz(const XxzzHamiltonian& ham) {
  if (ham.n > 6)
    throw std::invalid_argument("embed_xxzz: dense verification limited to n <= 6");
  BlockEmbedding emb;
  emb.n = ham.n;
  const long dim = 1L << ham.n;
  const long dim_t = dim << 1;
  emb.H = Mat::Zero(dim, dim);
  emb.H_tilde = Mat::Zero(dim_t, dim_t);

  auto add_term = [&](int i, int j, double coeff, char p) {
    if (coeff == 0.0) return;
    // One H_k per coefficient-weighted Pauli product, sign absorbed so that
    // H = -sum_k H_k.
    Mat local = coeff * kron(pauli2(p), pauli2(p));  // the term of H
    Mat Hk_local = -local;
    Mat embedded_local = -replace_entries(Hk_local);  // term of H_tilde
    std::vector<int> sup{i, j};
    std::vector<int> sup_anc{i, j, ham.n};
    emb.source_terms.push_back(Hk_local);
    emb.embedded_terms.push_back(embedded_local);
    emb.supports.push_back(sup_anc);
    emb.H += extend(local, sup, ham.n);
    emb.H_tilde += extend(embedded_local, sup_anc, ham.n + 1);
  };
  for (const auto& [i, j, a] : ham.xx) {
    if (i >= j || i < 0 || j >= ham.n)
      throw std::invalid_argument("embed_xxzz: xx indices must satisfy 0 <= i < j < n");
    add_term(i, j, a, 'X');
  }
  for (const auto& [i, j, b] : ham.zz) {
    if (i >= j || i < 0 || j >= ham.n)
      throw std::invalid_argument("embed_xxzz: zz indices must satisfy 0 <= i < j < n");
    add_term(i, j, b, 'Z');
  }

  if (!emb.all_terms_stoquastic())
    throw std::runtime_error("embed_xxzz: stoquasticity certification failed");
  return emb;
}

SectorDynamicsResult verify_sector_dynamics(const BlockEmbedding& emb,
                                            const CVec& psi, double t) {
  const long dim = 1L << emb.n;
  if (psi.size() != dim)
    throw std::invalid_argument("verify_sector_dynamics: state dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("verify_sector_dynamics: state must be normalized");

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CVec big = CVec::Zero(2 * dim);  // psi (x) |->, ancilla fastest index
  for (long i = 0; i < dim; ++i) {
    big[2 * i] = psi[i] * inv_sqrt2;
    big[2 * i + 1] = -psi[i] * inv_sqrt2;
  }
  CVec evolved = sym_propagator(emb.H_tilde, t) * big;
  CVec minus(dim), plus(dim);
  for (long i = 0; i < dim; ++i) {
    minus[i] = (evolved[2 * i] - evolved[2 * i + 1]) * inv_sqrt2;
    plus[i] = (evolved[2 * i] + evolved[2 * i + 1]) * inv_sqrt2;
  }
  CVec want = sym_propagator(emb.H, t) * psi;
  SectorDynamicsResult r;
  r.error = (minus - want).norm();
  r.leakage = plus.norm();
  return r;
}

}  // namespace qwell
