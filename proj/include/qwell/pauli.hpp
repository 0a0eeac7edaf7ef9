// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "qwell/linalg.hpp"

namespace qwell {

enum class PauliFactor : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Tensor product of single-qubit Paulis. Qubit 0 is the leftmost Kronecker
/// factor (most significant bits of the basis index).
struct PauliString {
  int n = 0;
  std::vector<PauliFactor> factors;

  PauliString() = default;
  explicit PauliString(int nq) : n(nq), factors(nq, PauliFactor::I) {}
  /// Parse e.g. "IXZ".
  static PauliString parse(const std::string& s);
  bool has_odd_y() const;
  std::string str() const;
};

/// Weighted sum of Pauli strings on a fixed qubit count.
struct PauliOperator {
  int n = 0;
  std::vector<std::pair<double, PauliString>> terms;

  PauliOperator() = default;
  explicit PauliOperator(int nq) : n(nq) {}
  PauliOperator& add(double coeff, const PauliString& s);
  PauliOperator& add(double coeff, const std::string& s);
  /// True when every term has an even number of Y factors, i.e. the dense
  /// realization is real in the computational basis.
  bool is_real() const;
  double coeff_one_norm() const;
};

/// Transverse-field Ising model coefficients (a_u X_u + b_u Z_u + b_{uv} Z Z).
struct TimHamiltonian {
  int n = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<std::tuple<int, int, double>> bzz;  // (u, v, value), u < v

  PauliOperator to_pauli() const;
  std::string to_json() const;
  static TimHamiltonian from_json(const std::string& text);
};

inline constexpr int kMaxDenseQubits = 14;

/// Dense realization by Kronecker products (complex in general).
CMat to_dense(const PauliOperator& op);
/// Dense realization for real operators.
Mat to_dense_real(const PauliOperator& op);

struct Spectrum {
  Vec eigenvalues;        // ascending
  CMat eigenvectors;      // orthonormal columns
  double max_residual = 0;
};

/// Full eigendecomposition; real-symmetric path when the operator is real.
Spectrum exact_spectrum(const PauliOperator& op);

/// e^{-iHt} psi via exact eigendecomposition. Requires |psi| = 1 to 1e-8.
CVec exact_propagate(const PauliOperator& op, double t, const CVec& psi);
CVec exact_propagate(const Spectrum& sp, double t, const CVec& psi);

}  // namespace qwell
