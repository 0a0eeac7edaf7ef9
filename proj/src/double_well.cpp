// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qwell/double_well.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qwell {

using json = nlohmann::json;

namespace {

double mollifier(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  // Pre-split so sqrt kinks land near panel edges before recursion takes over.
  const int panels = 16;
  double total = 0;
  for (int p = 0; p < panels; ++p) {
    double x0 = a + (b - a) * p / panels;
    double x1 = a + (b - a) * (p + 1) / panels;
    double xm = 0.5 * (x0 + x1);
    double f0 = f(x0), fm = f(xm), f1 = f(x1);
    double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    total += adaptive_simpson(f, x0, x1, f0, fm, f1, whole, tol / panels, 52);
  }
  return total;
}

struct Sectors {
  Tridiag even;
  Tridiag odd;
};

Sectors split_sectors(const Tridiag& T) {
  const int m = T.size();
  Sectors s;
  if (m % 2 == 1) {
    const int c = (m - 1) / 2;
    s.even.diag = T.diag.head(c + 1);
    s.even.off = T.off.head(c);
    if (c >= 1) s.even.off[c - 1] *= std::sqrt(2.0);
    s.odd.diag = T.diag.head(c);
    s.odd.off = T.off.head(c - 1);
  } else {
    const int c = m / 2;
    s.even.diag = T.diag.head(c);
    s.even.off = T.off.head(c - 1);
    s.even.diag[c - 1] += T.off[c - 1];
    s.odd.diag = T.diag.head(c);
    s.odd.off = T.off.head(c - 1);
    s.odd.diag[c - 1] -= T.off[c - 1];
  }
  return s;
}

Vec unfold_sector(const Vec& u, int m, bool even) {
  Vec v = Vec::Zero(m);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (m % 2 == 1) {
    const int c = (m - 1) / 2;
    if (even) {
      for (int i = 0; i < c; ++i) {
        v[i] = u[i] * inv_sqrt2;
        v[m - 1 - i] = u[i] * inv_sqrt2;
      }
      v[c] = u[c];
    } else {
      for (int i = 0; i < c; ++i) {
        v[i] = u[i] * inv_sqrt2;
        v[m - 1 - i] = -u[i] * inv_sqrt2;
      }
      v[c] = 0.0;
    }
  } else {
    const int c = m / 2;
    for (int i = 0; i < c; ++i) {
      v[i] = u[i] * inv_sqrt2;
      v[m - 1 - i] = (even ? u[i] : -u[i]) * inv_sqrt2;
    }
  }
  return v;
}

}  // namespace

double SmoothSign::operator()(double x) const {
  if (!(w > 0)) throw std::invalid_argument("SmoothSign: w must be positive");
  if (x >= w) return 1.0;
  if (x <= -w) return -1.0;
  double t = x / w;
  double p = mollifier(0.5 * (1.0 + t));
  double q = mollifier(0.5 * (1.0 - t));
  return (p - q) / (p + q);
}

double agmon_distance(const std::function<double(double)>& V, double E,
                      double x, double y, double abs_tol) {
  if (x == y) return 0.0;
  double a = std::min(x, y), b = std::max(x, y);
  auto f = [&](double z) { return std::sqrt(std::max(V(z) - E, 0.0)); };
  return integrate(f, a, b, abs_tol);
}

Tridiag dw_operator(double h, const Grid1D& grid) {
  if (grid.boundary != Boundary::Dirichlet)
    throw std::invalid_argument("dw_operator: Dirichlet grids only");
  const int m = grid.m;
  const double d = grid.spacing();
  const double k = h * h / (d * d);
  Tridiag T;
  T.diag = Vec(m);
  T.off = Vec::Constant(m - 1, -k);
  for (int i = 0; i < m; ++i) T.diag[i] = 2.0 * k + dw_potential(grid.node(i));
  return T;
}

SectorEigen dw_sector_eigenvalues(const Tridiag& T, int count) {
  Sectors s = split_sectors(T);
  SectorEigen out;
  for (int i = 0; i < count; ++i) {
    out.even.push_back(tridiag_eigenvalue(s.even, i));
    out.odd.push_back(tridiag_eigenvalue(s.odd, i));
  }
  return out;
}

Vec dw_sector_eigenvector(const Tridiag& T, bool even, int index) {
  Sectors s = split_sectors(T);
  const Tridiag& sec = even ? s.even : s.odd;
  std::vector<Vec> prev;
  for (int i = 0; i < index; ++i)
    prev.push_back(tridiag_eigenvector(sec, tridiag_eigenvalue(sec, i), prev,
                                       31 + i));
  double lam = tridiag_eigenvalue(sec, index);
  Vec u = tridiag_eigenvector(sec, lam, prev, 31 + index);
  return unfold_sector(u, T.size(), even);
}

double dw_gap(double h, int m) {
  Tridiag T = dw_operator(h, Grid1D::dirichlet(m));
  Sectors s = split_sectors(T);
  return tridiag_eigenvalue(s.odd, 0) - tridiag_eigenvalue(s.even, 0);
}

double LogicalEncoding::inner(const Vec& f, const Vec& g) const {
  return grid.spacing() * f.dot(g);
}

LogicalEncoding calibrate(double h, int m, const CalibrationOptions& opt) {
  if (h < opt.h_min || h > opt.h_max)
    throw std::domain_error("calibrate: h outside [" + std::to_string(opt.h_min) +
                            ", " + std::to_string(opt.h_max) + "]");
  LogicalEncoding enc;
  enc.h = h;
  enc.grid = Grid1D::dirichlet(m);
  Tridiag T = dw_operator(h, enc.grid);
  Sectors s = split_sectors(T);

  // Eigenvalues from the full matrix so downstream solves of the same
  // tridiagonal reproduce them bitwise; sectors supply parity-pure vectors.
  enc.eps0 = tridiag_eigenvalue(T, 0);
  enc.eps1 = tridiag_eigenvalue(T, 1);
  enc.eps2 = tridiag_eigenvalue(T, 2);
  double even1 = tridiag_eigenvalue(s.even, 1);
  double odd1 = tridiag_eigenvalue(s.odd, 1);

  const double gap = enc.eps1 - enc.eps0;
  if (!(gap > 0))
    throw std::runtime_error("calibrate: nonpositive tunneling gap");
  enc.gap_coarse = gap;
  if (opt.check_refinement) {
    enc.gap_fine = dw_gap(h, 2 * m);
    enc.gap_drift = std::abs(enc.gap_fine - gap) / gap;
    enc.refinement_ok = enc.gap_drift <= opt.gap_drift_tol;
  } else {
    enc.gap_fine = gap;
    enc.gap_drift = 0;
    enc.refinement_ok = true;
  }

  enc.C_h = 2.0 / gap;
  enc.G = enc.C_h * h * h;

  const double inv_sqrt_d = 1.0 / std::sqrt(enc.grid.spacing());
  Vec u0 = tridiag_eigenvector(s.even, tridiag_eigenvalue(s.even, 0), {}, 11);
  Vec u1 = tridiag_eigenvector(s.odd, tridiag_eigenvalue(s.odd, 0), {}, 13);
  enc.psi0 = unfold_sector(u0, m, true) * inv_sqrt_d;
  enc.psi1 = unfold_sector(u1, m, false) * inv_sqrt_d;
  if (even1 < odd1) {
    std::vector<Vec> prev{u0};
    Vec u2 = tridiag_eigenvector(s.even, even1, prev, 17);
    enc.psi2 = unfold_sector(u2, m, true) * inv_sqrt_d;
  } else {
    std::vector<Vec> prev{u1};
    Vec u2 = tridiag_eigenvector(s.odd, odd1, prev, 17);
    enc.psi2 = unfold_sector(u2, m, false) * inv_sqrt_d;
  }

  // Deterministic sign conventions: psi0 has positive mean, psi1 positive
  // mean on x > 0, so psi_right concentrates on the right well.
  if (enc.psi0.sum() < 0) enc.psi0 = -enc.psi0;
  double right_mean = 0;
  for (int i = 0; i < m; ++i)
    if (enc.grid.node(i) > 0) right_mean += enc.psi1[i];
  if (right_mean < 0) enc.psi1 = -enc.psi1;
  if (enc.psi2.sum() < 0) enc.psi2 = -enc.psi2;
  enc.sign_c = +1;
  return enc;
}

std::pair<double, double> attainable_G_range(int m, const CalibrationOptions& opt) {
  auto G_at = [&](double h) { return 2.0 * h * h / dw_gap(h, m); };
  return {G_at(opt.h_max), G_at(opt.h_min)};
}

LogicalEncoding encoding_for_G(double G, int m, const CalibrationOptions& opt) {
  auto [G_lo, G_hi] = attainable_G_range(m, opt);
  if (G < G_lo || G > G_hi)
    throw std::domain_error(
        "encoding_for_G: target G=" + std::to_string(G) +
        " outside attainable [" + std::to_string(G_lo) + ", " +
        std::to_string(G_hi) + "] for h in [" + std::to_string(opt.h_min) +
        ", " + std::to_string(opt.h_max) + "]");
  auto G_at = [&](double h) { return 2.0 * h * h / dw_gap(h, m); };
  // G(h) decreases in h on this range; bisect on ln h.
  double lo = std::log(opt.h_min), hi = std::log(opt.h_max);
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    double g_mid = G_at(std::exp(mid));
    if (g_mid > G)
      lo = mid;
    else
      hi = mid;
    if (std::abs(g_mid / G - 1.0) < 1e-9) break;
  }
  double h = std::exp(0.5 * (lo + hi));
  return calibrate(h, m, opt);
}

PauliResiduals logical_pauli_residuals(const LogicalEncoding& enc, double w,
                                       int K) {
  SmoothSign sgn{w};
  const int m = enc.grid.m;
  Vec z(m);
  for (int i = 0; i < m; ++i) z[i] = sgn(enc.grid.node(i));

  Vec z0 = z.cwiseProduct(enc.psi0);
  Vec z1 = z.cwiseProduct(enc.psi1);
  PauliResiduals r;
  r.offdiag = enc.inner(enc.psi0, z1);
  r.diag0 = enc.inner(enc.psi0, z0);
  r.diag1 = enc.inner(enc.psi1, z1);
  auto leak = [&](const Vec& zv) {
    double total = enc.inner(zv, zv);
    double c0 = enc.inner(enc.psi0, zv);
    double c1 = enc.inner(enc.psi1, zv);
    return std::sqrt(std::max(0.0, total - c0 * c0 - c1 * c1));
  };
  r.leak0 = leak(z0);
  r.leak1 = leak(z1);

  // Spectral split over modes 2..K; the remainder is the complement norm.
  Tridiag T = dw_operator(enc.h, enc.grid);
  double acc0 = 0, acc1 = 0;
  std::vector<std::pair<double, Vec>> modes;
  {
    int per_sector = K / 2 + 2;
    Sectors s = split_sectors(T);
    std::vector<Vec> pe, po;
    for (int i = 0; i < per_sector; ++i) {
      double le = tridiag_eigenvalue(s.even, i);
      Vec ue = tridiag_eigenvector(s.even, le, pe, 51 + i);
      pe.push_back(ue);
      modes.emplace_back(le, unfold_sector(ue, m, true));
      double lo = tridiag_eigenvalue(s.odd, i);
      Vec uo = tridiag_eigenvector(s.odd, lo, po, 61 + i);
      po.push_back(uo);
      modes.emplace_back(lo, unfold_sector(uo, m, false));
    }
    std::sort(modes.begin(), modes.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  const double inv_sqrt_d = 1.0 / std::sqrt(enc.grid.spacing());
  for (int l = 2; l < K && l < static_cast<int>(modes.size()); ++l) {
    Vec phi = modes[l].second * inv_sqrt_d;
    double c0 = enc.inner(phi, z0);
    double c1 = enc.inner(phi, z1);
    r.leak0_modes.push_back(std::abs(c0));
    r.leak1_modes.push_back(std::abs(c1));
    acc0 += c0 * c0;
    acc1 += c1 * c1;
  }
  r.leak0_beyond_K = std::sqrt(std::max(0.0, r.leak0 * r.leak0 - acc0));
  r.leak1_beyond_K = std::sqrt(std::max(0.0, r.leak1 * r.leak1 - acc1));
  return r;
}

std::vector<ConcentrationPoint> concentration_profile(
    const LogicalEncoding& enc, const std::vector<double>& probes,
    double slack) {
  Vec pr = enc.psi_right();
  const int m = enc.grid.m;
  const double d = enc.grid.spacing();
  std::vector<ConcentrationPoint> out;
  for (double x0 : probes) {
    if (!(x0 > -kWellCenter && x0 < kWellCenter))
      throw std::domain_error("concentration_profile: probe outside (-1/2, 1/2)");
    ConcentrationPoint p;
    p.x0 = x0;
    double mass = 0;
    for (int i = 0; i < m && enc.grid.node(i) <= x0; ++i)
      mass += pr[i] * pr[i] * d;
    p.tail_mass = mass;
    double dist = agmon_distance(dw_potential, 0.0, kWellCenter, x0);
    p.envelope = std::exp(-2.0 * (1.0 - slack) * dist / enc.h);
    out.push_back(p);
  }
  return out;
}

std::string LogicalEncoding::to_json() const {
  json j;
  j["h"] = h;
  j["C_h"] = C_h;
  j["G"] = G;
  j["m"] = grid.m;
  j["eps"] = {eps0, eps1, eps2};
  j["E"] = {E0(), E1(), E2()};
  j["gap_coarse"] = gap_coarse;
  j["gap_fine"] = gap_fine;
  j["gap_drift"] = gap_drift;
  j["refinement_ok"] = refinement_ok;
  j["sign_c"] = sign_c;
  return j.dump(2);
}

}  // namespace qwell
