// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qwell/pauli.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qwell {

using json = nlohmann::json;

PauliString PauliString::parse(const std::string& s) {
  PauliString p(static_cast<int>(s.size()));
  for (size_t i = 0; i < s.size(); ++i) {
    switch (s[i]) {
      case 'I': p.factors[i] = PauliFactor::I; break;
      case 'X': p.factors[i] = PauliFactor::X; break;
      case 'Y': p.factors[i] = PauliFactor::Y; break;
      case 'Z': p.factors[i] = PauliFactor::Z; break;
      default: throw std::invalid_argument("PauliString: bad symbol");
    }
  }
  return p;
}

bool PauliString::has_odd_y() const {
  int y = 0;
  for (auto f : factors) y += (f == PauliFactor::Y);
  return y % 2 == 1;
}

std::string PauliString::str() const {
  static const char* sym = "IXYZ";
  std::string s(n, 'I');
  for (int i = 0; i < n; ++i) s[i] = sym[static_cast<int>(factors[i])];
  return s;
}

PauliOperator& PauliOperator::add(double coeff, const PauliString& s) {
  if (s.n != n) throw std::invalid_argument("PauliOperator: qubit count mismatch");
  if (!std::isfinite(coeff))
    throw std::invalid_argument("PauliOperator: non-finite coefficient");
  terms.emplace_back(coeff, s);
  return *this;
}

PauliOperator& PauliOperator::add(double coeff, const std::string& s) {
  return add(coeff, PauliString::parse(s));
}

bool PauliOperator::is_real() const {
  for (const auto& [c, s] : terms)
    if (s.has_odd_y()) return false;
  return true;
}

double PauliOperator::coeff_one_norm() const {
  double s = 0;
  for (const auto& [c, p] : terms) s += std::abs(c);
  return s;
}

PauliOperator TimHamiltonian::to_pauli() const {
  PauliOperator op(n);
  for (int u = 0; u < n; ++u) {
    if (a[u] != 0.0) {
      PauliString s(n);
      s.factors[u] = PauliFactor::X;
      op.add(a[u], s);
    }
    if (b[u] != 0.0) {
      PauliString s(n);
      s.factors[u] = PauliFactor::Z;
      op.add(b[u], s);
    }
  }
  for (const auto& [u, v, w] : bzz) {
    if (w == 0.0) continue;
    PauliString s(n);
    s.factors[u] = PauliFactor::Z;
    s.factors[v] = PauliFactor::Z;
    op.add(w, s);
  }
  return op;
}

std::string TimHamiltonian::to_json() const {
  json j;
  j["n"] = n;
  j["a"] = a;
  j["b"] = b;
  j["bzz"] = json::array();
  for (const auto& [u, v, w] : bzz) j["bzz"].push_back({u, v, w});
  return j.dump(2);
}

TimHamiltonian TimHamiltonian::from_json(const std::string& text) {
  json j = json::parse(text);
  TimHamiltonian t;
  t.n = j.at("n").get<int>();
  t.a = j.value("a", std::vector<double>(t.n, 0.0));
  t.b = j.value("b", std::vector<double>(t.n, 0.0));
  if (static_cast<int>(t.a.size()) != t.n || static_cast<int>(t.b.size()) != t.n)
    throw std::invalid_argument("TimHamiltonian: coefficient length mismatch");
  if (j.contains("bzz"))
    for (const auto& e : j["bzz"]) {
      int u = e.at(0).get<int>(), v = e.at(1).get<int>();
      double w = e.at(2).get<double>();
      if (u >= v || u < 0 || v >= t.n)
        throw std::invalid_argument("TimHamiltonian: bzz indices must satisfy 0 <= u < v < n");
      t.bzz.emplace_back(u, v, w);
    }
  for (double c : t.a)
    if (!std::isfinite(c)) throw std::invalid_argument("TimHamiltonian: non-finite a");
  for (double c : t.b)
    if (!std::isfinite(c)) throw std::invalid_argument("TimHamiltonian: non-finite b");
  return t;
}

namespace {

void check_dense_dim(int n) {
  if (n > kMaxDenseQubits)
    throw std::invalid_argument("dense realization limited to n <= 14 qubits");
  if (n < 1) throw std::invalid_argument("need at least one qubit");
}

// Single-qubit factors in the computational basis.
const cplx kI[2][2] = {{1, 0}, {0, 1}};
const cplx kX[2][2] = {{0, 1}, {1, 0}};
const cplx kY[2][2] = {{0, cplx(0, -1)}, {cplx(0, 1), 0}};
const cplx kZ[2][2] = {{1, 0}, {0, -1}};

const cplx (*factor_matrix(PauliFactor f))[2] {
  switch (f) {
    case PauliFactor::I: return kI;
    case PauliFactor::X: return kX;
    case PauliFactor::Y: return kY;
    default: return kZ;
  }
}

}  // namespace

CMat to_dense(const PauliOperator& op) {
  check_dense_dim(op.n);
  const long dim = 1L << op.n;
  CMat H = CMat::Zero(dim, dim);
  // Pauli strings are generalized permutations: for each column there is a
  // single nonzero row. Fill column by column.
  for (const auto& [coeff, s] : op.terms) {
    for (long col = 0; col < dim; ++col) {
      long row = 0;
      cplx amp = coeff;
      for (int q = 0; q < op.n; ++q) {
        int bit = static_cast<int>((col >> (op.n - 1 - q)) & 1);
        const cplx(*f)[2] = factor_matrix(s.factors[q]);
        int obit = (s.factors[q] == PauliFactor::X || s.factors[q] == PauliFactor::Y)
                       ? 1 - bit
                       : bit;
        amp *= f[obit][bit];
        row = (row << 1) | obit;
      }
      H(row, col) += amp;
    }
  }
  // Hermiticity guard.
  double scale = std::max(1.0, op.coeff_one_norm());
  double defect = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-14 * scale)
    throw std::runtime_error("to_dense: Hermiticity defect above tolerance");
  return H;
}

Mat to_dense_real(const PauliOperator& op) {
  if (!op.is_real())
    throw std::invalid_argument("to_dense_real: operator has odd-Y terms");
  CMat H = to_dense(op);
  return H.real();
}

Spectrum exact_spectrum(const PauliOperator& op) {
  if (op.n > 12)
    throw std::invalid_argument("exact_spectrum limited to n <= 12 qubits");
  Spectrum sp;
  if (op.is_real()) {
    Mat H = to_dense_real(op);
    EigenPairs ep = eigh(H);
    sp.eigenvalues = ep.values;
    sp.eigenvectors = ep.vectors.cast<cplx>();
    double hn = std::max(1.0, sym_two_norm(H));
    for (int i = 0; i < ep.values.size(); ++i)
      sp.max_residual = std::max(
          sp.max_residual,
          (H * ep.vectors.col(i) - ep.values[i] * ep.vectors.col(i)).norm() / hn);
  } else {
    CMat H = to_dense(op);
    CEigenPairs ep = eigh(H);
    sp.eigenvalues = ep.values;
    sp.eigenvectors = ep.vectors;
    double hn = std::max(1.0, herm_two_norm(H));
    for (int i = 0; i < ep.values.size(); ++i)
      sp.max_residual = std::max(
          sp.max_residual,
          (H * ep.vectors.col(i) - cplx(ep.values[i]) * ep.vectors.col(i)).norm() /
              hn);
  }
  return sp;
}

CVec exact_propagate(const Spectrum& sp, double t, const CVec& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("exact_propagate: state must be normalized");
  CVec coeffs = sp.eigenvectors.adjoint() * psi;
  for (int i = 0; i < coeffs.size(); ++i)
    coeffs[i] *= std::exp(cplx(0.0, -sp.eigenvalues[i] * t));
  return sp.eigenvectors * coeffs;
}

CVec exact_propagate(const PauliOperator& op, double t, const CVec& psi) {
  return exact_propagate(exact_spectrum(op), t, psi);
}

}  // namespace qwell
