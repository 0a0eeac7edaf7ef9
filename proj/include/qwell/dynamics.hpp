// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qwell/grid.hpp"
#include "qwell/linalg.hpp"

namespace qwell {

enum class PropMethod { Dense, Krylov, CrankNicolson, SplitStep };

/// Bookkeeping for one propagation run. Drifts are recorded, never discarded.
struct Propagation {
  PropMethod method = PropMethod::Dense;
  double t = 0;
  long steps = 0;
  double norm_drift = 0;
  double energy_drift = 0;
  std::vector<std::string> events;
};

/// e^{-i op t} psi for a sparse symmetric grid operator.
/// Methods: Dense (exact eigendecomposition, n <= 2048), Krylov (adaptive
/// Lanczos exponential), CrankNicolson (CG inner solves).
CVec propagate(const SparseSymOp& op, const CVec& psi, double t,
               PropMethod method, double tol, Propagation* rec = nullptr);

/// Uniform periodic mesh of order m over [0,1)^n: 2m+1 points per dimension,
/// matching band-limited Fourier interpolation of order m.
struct PeriodicMesh {
  int order = 0;  // m
  int n = 1;

  int points_per_dim() const { return 2 * order + 1; }
  long total() const {
    long t = 1;
    for (int d = 0; d < n; ++d) t *= points_per_dim();
    return t;
  }
  double node(int i) const { return static_cast<double>(i) / points_per_dim(); }
  /// Frequency of DFT bin p, folded into [-m, m].
  int bin_frequency(int p) const { return p <= order ? p : p - points_per_dim(); }
};

/// Forward DFT along each axis: c_k = (1/M^n) sum_x f(x) e^{-2 pi i k x}.
CVec mesh_forward(const PeriodicMesh& mesh, const CVec& values);
/// Inverse: f(x) = sum_k c_k e^{2 pi i k x}.
CVec mesh_inverse(const PeriodicMesh& mesh, const CVec& coeffs);

/// Strang-split pseudospectral step for -Delta + V on the periodic mesh.
/// Exact for V = 0 in a single step (kinetic symbol (2 pi k)^2 per dim).
CVec propagate_split_step(const PeriodicMesh& mesh, const Vec& V_diag,
                          const CVec& psi, double t, long steps,
                          Propagation* rec = nullptr);

/// Acceptance probability Tr(M |psi><psi|) with M = |mu><mu| (x) I on the
/// leading coordinate block. `dims` are points per coordinate (last fastest);
/// mu lives on the first mu_ndims coordinates. Weights are uniform products
/// of the per-coordinate spacings.
double measure_acceptance(const std::vector<int>& dims, const CVec& psi,
                          int mu_ndims, const CVec& mu, double weight_psi,
                          double weight_mu);

/// Sample a random order-m Fourier series on the mesh and re-expand; returns
/// the max coefficient recovery error (discrete orthogonality check).
double fourier_mesh_roundtrip(int m, int n, unsigned seed = 2024);

}  // namespace qwell
