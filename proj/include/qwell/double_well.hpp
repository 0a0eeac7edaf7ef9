// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qwell/grid.hpp"
#include "qwell/linalg.hpp"

namespace qwell {

/// Quartic double well (x-1/2)^2 (x+1/2)^2 with minima at +-1/2.
inline double dw_potential(double x) {
  double u = (x - 0.5) * (x + 0.5);
  return u * u;
}
inline constexpr double kWellCenter = 0.5;

/// Smoothed sign function built from the mollifier r(x) = e^{-1/x} (x > 0).
/// Odd, |sgn_w| <= 1, equal to sgn(x) for |x| >= w.
struct SmoothSign {
  double w = 0.05;

  double operator()(double x) const;
};

/// Agmon distance between x and y at energy E in 1D: quadrature of
/// sqrt(max(V - E, 0)) along the segment.
double agmon_distance(const std::function<double(double)>& V, double E,
                      double x, double y, double abs_tol = 1e-10);

struct CalibrationOptions {
  double h_min = 0.02;
  double h_max = 0.15;
  /// Relative drift of the tunneling gap allowed between m and 2m grids.
  double gap_drift_tol = 0.005;
  bool check_refinement = true;
};

/// Calibrated 1D double-well data for one logical qubit.
struct LogicalEncoding {
  double h = 0;
  double C_h = 0;   // 2 / (grid tunneling gap)
  double G = 0;     // C_h h^2
  Grid1D grid;
  // Uncalibrated eigenvalues of -h^2 d^2/dx^2 + V_dw on the grid.
  double eps0 = 0, eps1 = 0, eps2 = 0;
  Vec psi0, psi1, psi2;  // grid vectors, L2-normalized with weight delta
  int sign_c = +1;
  // Refinement evidence.
  double gap_coarse = 0, gap_fine = 0, gap_drift = 0;
  bool refinement_ok = true;

  double E0() const { return C_h * eps0; }
  double E1() const { return C_h * eps1; }
  double E2() const { return C_h * eps2; }
  Vec psi_right() const { return (psi0 + sign_c * psi1) / std::sqrt(2.0); }
  Vec psi_left() const { return (psi0 - sign_c * psi1) / std::sqrt(2.0); }
  /// Discrete L2 inner product with the trapezoid weight.
  double inner(const Vec& f, const Vec& g) const;

  std::string to_json() const;
};

/// Uncalibrated operator -h^2 d^2/dx^2 + V_dw as a tridiagonal matrix.
Tridiag dw_operator(double h, const Grid1D& grid);

/// Parity-sector eigenvalues of a symmetric tridiagonal grid operator:
/// lowest `count` in the even and odd sectors separately.
struct SectorEigen {
  std::vector<double> even;
  std::vector<double> odd;
};
SectorEigen dw_sector_eigenvalues(const Tridiag& T, int count);

/// Eigenvector of the even (or odd) sector unfolded to the full grid;
/// exactly parity-pure by construction.
Vec dw_sector_eigenvector(const Tridiag& T, bool even, int index);

/// Tunneling gap eps1 - eps0 of -h^2 d^2/dx^2 + V_dw at resolution m.
double dw_gap(double h, int m);

/// Calibrate the gap to 2: C_h = 2/gap. Refinement-checks the gap on a 2m
/// grid and records both estimates.
LogicalEncoding calibrate(double h, int m, const CalibrationOptions& opt = {});

/// Attainable G range for h in [opt.h_min, opt.h_max] at resolution m.
std::pair<double, double> attainable_G_range(int m, const CalibrationOptions& opt = {});

/// Root-find h with C_h h^2 = G (monotone bisection on ln h), then calibrate.
LogicalEncoding encoding_for_G(double G, int m, const CalibrationOptions& opt = {});

struct PauliResiduals {
  double offdiag = 0;   // <psi0| Z |psi1>
  double diag0 = 0;     // <psi0| Z |psi0>
  double diag1 = 0;     // <psi1| Z |psi1>
  double leak0 = 0;     // ||P_+ Z psi0||
  double leak1 = 0;     // ||P_+ Z psi1||
  // Spectral split of the leakage over modes 2..K plus the remainder.
  std::vector<double> leak0_modes;
  std::vector<double> leak1_modes;
  double leak0_beyond_K = 0;
  double leak1_beyond_K = 0;
};

/// Matrix elements of the smoothed sign operator in the logical pair, plus
/// leakage onto the excited space (exact complement norm; modes 2..K listed).
PauliResiduals logical_pauli_residuals(const LogicalEncoding& enc, double w,
                                       int K = 16);

struct ConcentrationPoint {
  double x0 = 0;
  double tail_mass = 0;   // integral of |psi_right|^2 over [-1, x0]
  double envelope = 0;    // e^{-2 (1 - slack) d(1/2, x0) / h}
};

/// Left-tail masses of psi_right at the probe points, with the Agmon-distance
/// envelope (slack absorbs the o(1)).
std::vector<ConcentrationPoint> concentration_profile(
    const LogicalEncoding& enc, const std::vector<double>& probes,
    double slack = 0.2);

}  // namespace qwell
