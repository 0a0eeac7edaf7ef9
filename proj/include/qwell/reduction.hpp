// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "qwell/double_well.hpp"
#include "qwell/grid.hpp"
#include "qwell/pauli.hpp"

namespace qwell {

struct ReductionConfig {
  double Gstar = 100.0;   // overall kinetic scale; G_u = Gstar / a_u
  double w = 0.05;        // sign smoothing width
  std::vector<int> m;     // grid resolution per qubit
  double M1 = 2.0;        // coefficient bound (reporting)
  double M2 = 100.0;      // clamp bound: preconditioned a_u >= 1/M2
  double t = 1.0;         // verification evolution time
  double eps1 = 0.05;     // target error (reporting only)
  double h_min = 0.02;    // double-well calibration window
  double h_max = 0.15;
  int K_low = 16;         // resolved low modes for dynamics and Delta
  long dim_cap = 4000000;

  void validate(int n) const;
};

struct PreconditionResult {
  TimHamiltonian tim;            // all a_u >= 1/M2
  std::vector<bool> flipped;     // Z-conjugated qubits (a_u sign flips)
  int clamped = 0;               // qubits lifted to 1/M2
  double eig_bound = 0;          // n / M2, on every eigenvalue
  double prop_bound_per_time = 0;  // n / M2, times t on propagators
};

/// Z-conjugate negative transverse fields and lift small ones to 1/M2.
PreconditionResult precondition_tim(const TimHamiltonian& tim, double M2);

/// Everything the verification needs, in the scaled representation
/// K = H-hat / s with s = max_u a_u C_h^(u).
struct ReductionArtifact {
  ReductionConfig cfg;
  TimHamiltonian tim;                  // preconditioned instance
  std::vector<LogicalEncoding> enc;    // per-qubit calibrated encodings
  std::vector<double> scale_u;         // s_u = a_u C_h^(u)
  double s = 0;                        // global scale
  double c_shift = 0;                  // sum_u a_u (C_h eps0^(u) + 1)
  double base = 0;                     // sum_u (s_u/s) eps0^(u), in K units

  // Lowest-mode data of K: eigenvalues, overlaps with the 2^n W-columns,
  // and the W-column mass outside the resolved space.
  Vec k_evals;            // L lowest eigenvalues of K
  Vec k_resid;            // residuals (K units)
  CMat overlaps;          // (L x 2^n): <phi_l | W b_j>
  Vec tail;               // 2^n: ||(I - P_L) W b_j||

  Mat s_block;            // 2^n x 2^n: <W b_i| K |W b_j> (K units)
  double R_norm = 0;      // ||P_{S-perp} H-hat P_S|| (physical units)
  std::vector<double> R_per_qubit;  // 1D leakage pieces |b_u| ||P_+ Z psi||
  double delta = 0;       // lambda_min(H_{S-perp}) - lambda_max(H_S)
  double delta_resid = 0;

  int n_qubits() const { return tim.n; }
  /// lambda_k(H-hat - c I) from the scaled spectrum.
  double shifted_eigenvalue(int k) const;
  /// ||H-hat_S - W (H + c I) W^dag||.
  double s_block_deviation() const;
};

/// Source of calibrated encodings; the default computes them fresh, callers
/// may substitute a cache.
using EncodingProvider =
    std::function<LogicalEncoding(double G, int m, const CalibrationOptions&)>;

/// Assemble the reduction for a preconditioned TIM (n <= 3; dense-style
/// verification data kept for n <= 2 sizes).
ReductionArtifact build_reduction(const TimHamiltonian& tim,
                                  const ReductionConfig& cfg,
                                  const EncodingProvider& provider = nullptr);

struct CouplingNorm {
  double R_norm = 0;
  std::vector<double> per_qubit;
};
CouplingNorm coupling_norm(const ReductionArtifact& art);

struct SpectrumRow {
  int k = 0;
  double lam_qubit = 0;
  double lam_grid = 0;   // lambda_k(H-hat - c I)
  double diff = 0;
};

struct SpectrumReport {
  std::vector<SpectrumRow> rows;
  double bound = 0;      // ||R|| + ||H_S - W (H + c) W^dag||
  double max_diff = 0;
  bool verdict = false;  // every diff <= bound (+ numeric slack)
};

SpectrumReport verify_spectrum(const ReductionArtifact& art);

struct DynamicsReport {
  double t = 0;
  double error = 0;      // ||W^dag P_S e^{-i (H-hat - c) t} W - e^{-iHt}||
  double envelope = 0;   // (2 sqrt2/3)(||R|| t)^{3/2} + ||H_S - W(H+c)W^dag|| t
  double tail_bound = 0; // propagation mass outside the resolved modes
  bool verdict = false;
};

DynamicsReport verify_dynamics(const ReductionArtifact& art, double t);

/// Aggregate record for one experiment run.
struct ReductionReport {
  double Gstar = 0;
  SpectrumReport spectrum;
  DynamicsReport dynamics;
  double R_norm = 0;
  double delta = 0;
  std::string to_json() const;
  std::string to_table() const;
};

ReductionReport run_reduction(const TimHamiltonian& tim,
                              const ReductionConfig& cfg, bool with_dynamics);

}  // namespace qwell
