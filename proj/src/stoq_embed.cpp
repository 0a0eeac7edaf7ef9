// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qwell/stoq_embed.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qwell {

using json = nlohmann::json;

bool UnaryCode::is_codeword(long mask) const { return level_of(mask) >= 0; }

int UnaryCode::level_of(long mask) const {
  for (int j = 0; j <= m; ++j)
    if (codeword(j) == mask) return j;
  return -1;
}

bool LocalQubitTerm::stoquastic(double tol) const {
  return worst_offdiag() <= tol;
}

double LocalQubitTerm::worst_offdiag() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (long i = 0; i < matrix.rows(); ++i)
    for (long j = 0; j < matrix.cols(); ++j)
      if (i != j) worst = std::max(worst, matrix(i, j));
  return worst;
}

TermList& TermList::append(const TermList& other, double weight) {
  if (other.nqubits != nqubits)
    throw std::invalid_argument("TermList::append: register size mismatch");
  constant += weight * other.constant;
  for (LocalQubitTerm t : other.terms) {
    t.matrix *= weight;
    terms.push_back(std::move(t));
  }
  return *this;
}

Mat TermList::dense() const {
  if (nqubits > 14)
    throw std::invalid_argument("TermList::dense: limited to 14 qubits");
  const long dim = 1L << nqubits;
  Mat H = Mat::Identity(dim, dim) * constant;
  for (const auto& t : terms) {
    const int k = t.locality();
    const long ldim = 1L << k;
    for (long r = 0; r < dim; ++r) {
      long lr = 0;
      for (int i = 0; i < k; ++i) lr |= ((r >> t.support[i]) & 1) << i;
      for (long lc = 0; lc < ldim; ++lc) {
        double v = t.matrix(lr, lc);
        if (v == 0.0) continue;
        long c = r;
        for (int i = 0; i < k; ++i) {
          long bit = (lc >> i) & 1;
          c = (c & ~(1L << t.support[i])) | (bit << t.support[i]);
        }
        H(r, c) += v;
      }
    }
  }
  return H;
}

std::string TermList::to_json() const {
  json j;
  j["nqubits"] = nqubits;
  j["constant"] = constant;
  j["terms"] = json::array();
  for (const auto& t : terms) {
    json e;
    e["support"] = t.support;
    std::vector<double> flat;
    for (long r = 0; r < t.matrix.rows(); ++r)
      for (long c = 0; c < t.matrix.cols(); ++c) flat.push_back(t.matrix(r, c));
    e["matrix"] = flat;
    j["terms"].push_back(e);
  }
  return j.dump(2);
}

namespace {

// Restriction of codeword j to support qubits, as a local basis index.
long restrict_codeword(const UnaryCode& code, int j, const std::vector<int>& sup) {
  long mask = code.codeword(j);
  long l = 0;
  for (size_t i = 0; i < sup.size(); ++i) l |= ((mask >> sup[i]) & 1) << i;
  return l;
}

void verify_sigma(const Mat& A, const TermList& tl) {
  const int m = tl.nqubits;
  UnaryCode code{m};
  Mat H = tl.dense();
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) {
      double got = H(code.codeword(i), code.codeword(j));
      if (std::abs(got - A(i, j)) > 1e-12 * scale)
        throw std::runtime_error("sigma_embed: restriction identity failed");
    }
  // Code-space closure: columns at codewords are supported on codewords.
  for (int j = 0; j <= m; ++j) {
    long cj = code.codeword(j);
    for (long r = 0; r < H.rows(); ++r) {
      if (H(r, cj) == 0.0) continue;
      if (!code.is_codeword(r))
        throw std::runtime_error("sigma_embed: code-space closure failed");
    }
  }
}

}  // namespace

TermList sigma_embed(const Mat& A, bool verify) {
  const int levels = static_cast<int>(A.rows());
  if (A.cols() != levels || levels < 2)
    throw std::invalid_argument("sigma_embed: need a square matrix, dim >= 2");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("sigma_embed: input must be real symmetric");
  const int m = levels - 1;
  UnaryCode code{m};

  TermList tl;
  tl.nqubits = m;
  tl.constant = A(m, m);

  // Diagonal: telescoping 1-local projectors, value A(j,j) on codeword j.
  for (int q = 0; q < m; ++q) {
    int l = m - 1 - q;
    double d = A(l, l) - A(l + 1, l + 1);
    if (d == 0.0) continue;
    LocalQubitTerm t;
    t.support = {q};
    t.matrix = Mat::Zero(2, 2);
    t.matrix(1, 1) = d;
    tl.terms.push_back(std::move(t));
  }

  // Off-diagonal (j,k): X-window on the qubits where the codewords differ,
  // clamped by neighbor projectors so every other codeword is annihilated.
  for (int j = 0; j <= m; ++j)
    for (int k = j + 1; k <= m; ++k) {
      double alpha = A(j, k);
      if (alpha == 0.0) continue;
      int lo = (k < m) ? (m - k - 1) : (m - k);
      int hi = (j > 0) ? (m - j) : (m - j - 1);
      LocalQubitTerm t;
      for (int q = lo; q <= hi; ++q) t.support.push_back(q);
      const long ldim = 1L << t.support.size();
      t.matrix = Mat::Zero(ldim, ldim);
      long pj = restrict_codeword(code, j, t.support);
      long pk = restrict_codeword(code, k, t.support);
      t.matrix(pj, pk) = alpha;
      t.matrix(pk, pj) = alpha;
      tl.terms.push_back(std::move(t));
    }

  if (verify && m <= 10) verify_sigma(A, tl);
  return tl;
}

TermList penalty_hamiltonian(int n, int m) {
  if (m < 2) throw std::invalid_argument("penalty_hamiltonian: need m >= 2");
  TermList tl;
  tl.nqubits = n * m;
  tl.constant = 0;
  for (int coord = 0; coord < n; ++coord) {
    const int off = (n - 1 - coord) * m;  // last coordinate on the low qubits
    tl.constant += m - 1;
    for (int q = 0; q + 1 < m; ++q) {
      LocalQubitTerm zz;
      zz.support = {off + q, off + q + 1};
      zz.matrix = Mat::Zero(4, 4);
      // -Z_q Z_{q+1}: diagonal -(+1,-1,-1,+1) in local basis (b1 b0)
      zz.matrix(0, 0) = -1;
      zz.matrix(1, 1) = 1;
      zz.matrix(2, 2) = 1;
      zz.matrix(3, 3) = -1;
      tl.terms.push_back(std::move(zz));
    }
    LocalQubitTerm z0;
    z0.support = {off};
    z0.matrix = Mat::Zero(2, 2);
    z0.matrix(0, 0) = 1;   // +Z_0
    z0.matrix(1, 1) = -1;
    tl.terms.push_back(std::move(z0));
    LocalQubitTerm zm;
    zm.support = {off + m - 1};
    zm.matrix = Mat::Zero(2, 2);
    zm.matrix(0, 0) = -1;  // -Z_{m-1}
    zm.matrix(1, 1) = 1;
    tl.terms.push_back(std::move(zm));
  }
  return tl;
}

CertifyResult certify_stoquastic(const TermList& tl, double tol) {
  CertifyResult r;
  r.stoquastic = true;
  r.worst_offdiag = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < tl.terms.size(); ++i) {
    const auto& t = tl.terms[i];
    r.localities.push_back(t.locality());
    r.max_locality = std::max(r.max_locality, t.locality());
    double w = t.worst_offdiag();
    if (w > r.worst_offdiag) {
      r.worst_offdiag = w;
      r.worst_term = static_cast<int>(i);
    }
    if (w > tol) r.stoquastic = false;
  }
  return r;
}

HstarEmbedding assemble_hstar(const TensorGrid& grid,
                              const std::vector<double>& g, const Potential& V,
                              double c) {
  const int n = grid.ndim();
  HstarEmbedding out;
  out.n = n;
  int total_qubits = 0;
  std::vector<int> offsets(n);
  for (int u = 0; u < n; ++u) {
    if (grid.dims[u].boundary != Boundary::Dirichlet)
      throw std::invalid_argument("assemble_hstar: Dirichlet grids only");
    out.m.push_back(grid.dims[u].m - 1);
    if (out.m[u] < 2)
      throw std::invalid_argument("assemble_hstar: need >= 3 points per side");
    total_qubits += out.m[u];
  }
  {
    int acc = 0;
    for (int u = n - 1; u >= 0; --u) {
      offsets[u] = acc;  // last coordinate on the low qubits
      acc += out.m[u];
    }
  }

  out.grid_op = assemble_schrodinger(grid, g, V);
  out.hhat.nqubits = total_qubits;

  // Split the potential into per-coordinate diagonals and cross tables.
  for (int u = 0; u < n; ++u) {
    const Grid1D& gd = grid.dims[u];
    const int pts = gd.m;
    const double inv_d2 = g[u] / (gd.spacing() * gd.spacing());
    Mat A = Mat::Zero(pts, pts);
    for (int i = 0; i < pts; ++i) {
      A(i, i) = 2.0 * inv_d2;
      if (i + 1 < pts) A(i, i + 1) = A(i + 1, i) = -inv_d2;
    }
    for (const auto& term : V.terms)
      if (term.coords.size() == 1 && term.coords[0] == u)
        for (int i = 0; i < pts; ++i) A(i, i) += term.f1(gd.node(i));
    TermList sig = sigma_embed(A, pts - 1 <= 10);
    // Relocate supports onto this coordinate's qubit block.
    for (auto& t : sig.terms)
      for (auto& q : t.support) q += offsets[u];
    sig.nqubits = total_qubits;
    out.hhat.append(sig);
  }

  // Cross terms: exact 2-local diagonal embedding by mixed differences of the
  // sampled table.
  for (const auto& term : V.terms) {
    if (term.coords.size() != 2) continue;
    int u = term.coords[0], v = term.coords[1];
    const Grid1D& gu = grid.dims[u];
    const Grid1D& gv = grid.dims[v];
    Mat D(gu.m, gv.m);
    for (int i = 0; i < gu.m; ++i)
      for (int j = 0; j < gv.m; ++j) D(i, j) = term.f2(gu.node(i), gv.node(j));
    const int mu = out.m[u], mv = out.m[v];
    out.hhat.constant += D(mu, mv);
    for (int q = 0; q < mu; ++q) {
      double a = D(mu - 1 - q, mv) - D(mu - q, mv);
      if (a == 0.0) continue;
      LocalQubitTerm t;
      t.support = {offsets[u] + q};
      t.matrix = Mat::Zero(2, 2);
      t.matrix(1, 1) = a;
      out.hhat.terms.push_back(std::move(t));
    }
    for (int q = 0; q < mv; ++q) {
      double b = D(mu, mv - 1 - q) - D(mu, mv - q);
      if (b == 0.0) continue;
      LocalQubitTerm t;
      t.support = {offsets[v] + q};
      t.matrix = Mat::Zero(2, 2);
      t.matrix(1, 1) = b;
      out.hhat.terms.push_back(std::move(t));
    }
    for (int qu = 0; qu < mu; ++qu)
      for (int qv = 0; qv < mv; ++qv) {
        int lu = mu - 1 - qu, lv = mv - 1 - qv;
        double w = D(lu, lv) - D(lu + 1, lv) - D(lu, lv + 1) + D(lu + 1, lv + 1);
        if (w == 0.0) continue;
        LocalQubitTerm t;
        int qa = offsets[u] + qu, qb = offsets[v] + qv;
        if (qa > qb) std::swap(qa, qb);
        t.support = {qa, qb};
        t.matrix = Mat::Zero(4, 4);
        t.matrix(3, 3) = w;  // |1><1| (x) |1><1|
        out.hhat.terms.push_back(std::move(t));
      }
  }

  // Per-coordinate penalties relocated onto their qubit blocks.
  out.penalty.nqubits = total_qubits;
  for (int u = 0; u < n; ++u) {
    TermList one = penalty_hamiltonian(1, out.m[u]);
    for (auto& t : one.terms)
      for (auto& q : t.support) q += offsets[u];
    one.nqubits = total_qubits;
    out.penalty.append(one);
  }

  if (c > 0) {
    out.c = c;
  } else {
    double norm_sum = std::abs(out.hhat.constant);
    for (const auto& t : out.hhat.terms) norm_sum += t.two_norm();
    out.c = norm_sum + 1.0;
  }
  out.hstar = out.hhat;
  out.hstar.append(out.penalty, out.c);

  CertifyResult cert = certify_stoquastic(out.hstar);
  if (!cert.stoquastic)
    throw std::runtime_error("assemble_hstar: stoquasticity certification failed");
  return out;
}

}  // namespace qwell
