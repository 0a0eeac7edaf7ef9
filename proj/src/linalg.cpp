// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qwell/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qwell {

Vec Tridiag::apply(const Vec& x) const {
  const int n = size();
  Vec y(n);
  for (int i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < n) v += off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

CVec Tridiag::apply(const CVec& x) const {
  const int n = size();
  CVec y(n);
  for (int i = 0; i < n; ++i) {
    cplx v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < n) v += off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

double Tridiag::norm_bound() const {
  const int n = size();
  double b = 0;
  for (int i = 0; i < n; ++i) {
    double r = std::abs(diag[i]);
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < n) r += std::abs(off[i]);
    b = std::max(b, r);
  }
  return b;
}

int sturm_count(const Tridiag& T, double x) {
  const int n = T.size();
  const double scale = std::max(T.norm_bound(), 1.0);
  const double tiny = 1e-300 * scale;
  int count = 0;
  double q = T.diag[0] - x;
  if (q < 0) ++count;
  for (int i = 1; i < n; ++i) {
    if (std::abs(q) < tiny) q = (q < 0 ? -tiny : tiny);
    q = (T.diag[i] - x) - T.off[i - 1] * T.off[i - 1] / q;
    if (q < 0) ++count;
  }
  return count;
}

double tridiag_eigenvalue(const Tridiag& T, int k) {
  const int n = T.size();
  if (k < 0 || k >= n) throw std::invalid_argument("tridiag_eigenvalue: bad k");
  double lo = T.diag[0], hi = T.diag[0];
  for (int i = 0; i < n; ++i) {
    double r = 0;
    if (i > 0) r += std::abs(T.off[i - 1]);
    if (i + 1 < n) r += std::abs(T.off[i]);
    lo = std::min(lo, T.diag[i] - r);
    hi = std::max(hi, T.diag[i] + r);
  }
  // Bisect the count function down to a few ulp.
  for (int it = 0; it < 20000; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(T, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> tridiag_eigenvalues(const Tridiag& T, int k0, int k1) {
  std::vector<double> out;
  out.reserve(k1 - k0 + 1);
  for (int k = k0; k <= k1; ++k) out.push_back(tridiag_eigenvalue(T, k));
  return out;
}

Vec tridiag_shifted_solve(const Tridiag& T, double shift, const Vec& b) {
  const int n = T.size();
  // Banded LU with partial pivoting; fill-in adds one superdiagonal.
  Vec d(n), e(n), f(n);  // main, first and second superdiagonals of U
  Vec l(n);              // subdiagonal multipliers
  std::vector<bool> swapped(n, false);
  Vec rhs = b;
  for (int i = 0; i < n; ++i) {
    d[i] = T.diag[i] - shift;
    e[i] = (i + 1 < n) ? T.off[i] : 0.0;
    f[i] = 0.0;
  }
  Vec sub(n);
  for (int i = 0; i + 1 < n; ++i) sub[i + 1] = T.off[i];
  for (int i = 0; i + 1 < n; ++i) {
    double a11 = d[i], a21 = sub[i + 1];
    if (std::abs(a21) > std::abs(a11)) {
      swapped[i] = true;
      std::swap(d[i], sub[i + 1]);
      // row i of A below pivot: after swap, row i holds old row i+1
      double t = e[i];
      e[i] = d[i + 1];
      d[i + 1] = t;
      f[i] = e[i + 1];
      e[i + 1] = 0.0;
      std::swap(rhs[i], rhs[i + 1]);
      a11 = d[i];
      a21 = sub[i + 1];
    }
    double m = (a11 != 0.0) ? a21 / a11 : 0.0;
    l[i] = m;
    d[i + 1] -= m * e[i];
    e[i + 1] -= m * f[i];
    rhs[i + 1] -= m * rhs[i];
  }
  Vec x(n);
  for (int i = n - 1; i >= 0; --i) {
    double v = rhs[i];
    if (i + 1 < n) v -= e[i] * x[i + 1];
    if (i + 2 < n) v -= f[i] * x[i + 2];
    double piv = d[i];
    if (std::abs(piv) < 1e-300) piv = (piv < 0 ? -1e-300 : 1e-300);
    x[i] = v / piv;
  }
  return x;
}

Vec tridiag_eigenvector(const Tridiag& T, double lambda,
                        const std::vector<Vec>& prev, unsigned seed) {
  const int n = T.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  auto orth = [&](Vec& w) {
    for (const Vec& p : prev) w -= p.dot(w) * p;
  };
  orth(v);
  v.normalize();
  for (int sweep = 0; sweep < 6; ++sweep) {
    Vec w = tridiag_shifted_solve(T, lambda, v);
    orth(w);
    double nw = w.norm();
    if (!(nw > 0) || !std::isfinite(nw)) break;
    v = w / nw;
  }
  return v;
}

EigenPairs eigh(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigh: dense symmetric solve failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

CEigenPairs eigh(const CMat& A) {
  Eigen::SelfAdjointEigenSolver<CMat> es(A);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigh: dense Hermitian solve failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double block_two_norm(const Mat& B) {
  if (B.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(B);
  return svd.singularValues()(0);
}

double block_two_norm(const CMat& B) {
  if (B.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(B);
  return svd.singularValues()(0);
}

double sym_two_norm(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)),
                  std::abs(es.eigenvalues()(A.rows() - 1)));
}

double herm_two_norm(const CMat& A) {
  Eigen::SelfAdjointEigenSolver<CMat> es(A, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)),
                  std::abs(es.eigenvalues()(A.rows() - 1)));
}

CMat herm_propagator(const CMat& A, double t) {
  CEigenPairs ep = eigh(A);
  CVec phases(ep.values.size());
  for (int i = 0; i < ep.values.size(); ++i)
    phases[i] = std::exp(cplx(0.0, -ep.values[i] * t));
  return ep.vectors * phases.asDiagonal() * ep.vectors.adjoint();
}

CMat sym_propagator(const Mat& A, double t) {
  EigenPairs ep = eigh(A);
  CVec phases(ep.values.size());
  for (int i = 0; i < ep.values.size(); ++i)
    phases[i] = std::exp(cplx(0.0, -ep.values[i] * t));
  return ep.vectors.cast<cplx>() * phases.asDiagonal() *
         ep.vectors.transpose().cast<cplx>();
}

Vec LinOp::operator()(const Vec& x) const {
  Vec y(n);
  apply(x.data(), y.data());
  return y;
}

LanczosResult lanczos_lowest(const LinOp& op, int k, const LanczosOptions& opt) {
  const long n = op.n;
  LanczosResult res;
  if (k <= 0 || k > n) throw std::invalid_argument("lanczos_lowest: bad k");

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<Vec> basis;
  std::vector<double> alpha, beta;
  auto deflate = [&](Vec& w) {
    for (const Vec& p : opt.deflate) w -= p.dot(w) * p;
  };

  Vec v(n);
  for (long i = 0; i < n; ++i) v[i] = gauss(rng);
  deflate(v);
  v.normalize();
  basis.push_back(v);

  const int m = std::min<long>(opt.max_iter, n - (long)opt.deflate.size());
  double op_scale = 1.0;
  for (int j = 0; j < m; ++j) {
    Vec w = op(basis[j]);
    op_scale = std::max(op_scale, w.norm());
    double a = basis[j].dot(w);
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    deflate(w);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& q : basis) w -= q.dot(w) * q;
    double b = w.norm();

    const int cur = j + 1;
    bool check_now = (cur >= std::max(2 * k, 8) && cur % 8 == 0) || cur == m ||
                     b < 1e-14 * op_scale;
    if (check_now) {
      Mat Tm = Mat::Zero(cur, cur);
      for (int i = 0; i < cur; ++i) Tm(i, i) = alpha[i];
      for (int i = 0; i + 1 < cur; ++i) {
        Tm(i, i + 1) = beta[i];
        Tm(i + 1, i) = beta[i];
      }
      EigenPairs ep = eigh(Tm);
      int kk = std::min(k, cur);
      bool ok = cur >= k;
      for (int i = 0; i < kk && ok; ++i) {
        double r = b * std::abs(ep.vectors(cur - 1, i));
        if (r > opt.tol * op_scale) ok = false;
      }
      if (ok || cur == m || b < 1e-14 * op_scale) {
        res.values = ep.values.head(kk);
        res.vectors = Mat::Zero(n, kk);
        for (int i = 0; i < kk; ++i)
          for (int l = 0; l < cur; ++l)
            res.vectors.col(i) += ep.vectors(l, i) * basis[l];
        res.residuals = Vec(kk);
        for (int i = 0; i < kk; ++i) {
          Vec r = op(res.vectors.col(i)) - res.values[i] * res.vectors.col(i);
          res.residuals[i] = r.norm();
        }
        res.converged = ok && cur >= k;
        res.iterations = cur;
        return res;
      }
    }
    if (b < 1e-14 * op_scale) break;  // invariant subspace exhausted
    basis.push_back(w / b);
    beta.push_back(b);
  }
  res.converged = false;
  res.iterations = static_cast<int>(basis.size());
  return res;
}

DeflatedShiftInvertResult lowest_in_complement(
    const LinOp& op, const std::vector<Vec>& frame, double sigma,
    const std::function<Vec(double, const Vec&)>& solve, int iters) {
  const long n = op.n;
  DeflatedShiftInvertResult out;

  // Constrained solve: (op - sigma) x = b with x, b in the complement of the
  // frame, via the bordered system. Cache (op - sigma)^{-1} applied to frame.
  const int f = static_cast<int>(frame.size());
  std::vector<Vec> yf(f);
  Mat S(f, f);
  for (int i = 0; i < f; ++i) yf[i] = solve(sigma, frame[i]);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j) S(i, j) = frame[i].dot(yf[j]);
  Eigen::FullPivLU<Mat> Slu(S);

  auto csolve = [&](const Vec& b) {
    Vec x = solve(sigma, b);
    if (f > 0) {
      Vec rhs(f);
      for (int i = 0; i < f; ++i) rhs[i] = frame[i].dot(x);
      Vec y = Slu.solve(rhs);
      for (int i = 0; i < f; ++i) x -= y[i] * yf[i];
    }
    return x;
  };
  auto project = [&](Vec& w) {
    for (const Vec& p : frame) w -= p.dot(w) * p;
  };

  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(n);
  for (long i = 0; i < n; ++i) v[i] = gauss(rng);
  project(v);
  v.normalize();

  std::vector<Vec> basis{v};
  std::vector<double> alpha, beta;
  for (int j = 0; j < iters; ++j) {
    Vec w = csolve(basis[j]);
    project(w);
    double a = basis[j].dot(w);
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& q : basis) w -= q.dot(w) * q;
    double b = w.norm();
    if (b < 1e-13 || j + 1 == iters) break;
    basis.push_back(w / b);
    beta.push_back(b);
  }
  const int m = static_cast<int>(alpha.size());
  Mat Tm = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) Tm(i, i) = alpha[i];
  for (int i = 0; i + 1 < m; ++i) Tm(i, i + 1) = Tm(i + 1, i) = beta[i];
  EigenPairs ep = eigh(Tm);
  // Largest eigenvalue of the inverted operator -> lowest of the original.
  int idx = m - 1;
  Vec x = Vec::Zero(n);
  for (int l = 0; l < m; ++l) x += ep.vectors(l, idx) * basis[l];
  project(x);
  x.normalize();
  Vec Ax = op(x);
  project(Ax);
  out.value = x.dot(Ax);
  Vec r = Ax - out.value * x;
  out.residual = r.norm();
  out.vector = x;
  out.converged = std::isfinite(out.value);
  return out;
}

CgResult cg_solve(const std::function<void(const double*, double*)>& apply,
                  long n, const Vec& b, Vec& x, double tol, int max_iter,
                  const Vec* inv_diag) {
  CgResult res;
  if (x.size() != n) x = Vec::Zero(n);
  Vec Ax(n);
  apply(x.data(), Ax.data());
  Vec r = b - Ax;
  Vec z = inv_diag ? Vec(inv_diag->cwiseProduct(r)) : r;
  Vec p = z;
  double rz = r.dot(z);
  const double bnorm = std::max(b.norm(), 1e-300);
  Vec Ap(n);
  for (int it = 0; it < max_iter; ++it) {
    if (r.norm() <= tol * bnorm) {
      res.converged = true;
      res.iterations = it;
      res.residual = r.norm() / bnorm;
      return res;
    }
    apply(p.data(), Ap.data());
    double pAp = p.dot(Ap);
    if (!(pAp > 0)) break;  // not SPD with this shift
    double a = rz / pAp;
    x += a * p;
    r -= a * Ap;
    z = inv_diag ? Vec(inv_diag->cwiseProduct(r)) : r;
    double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
    res.iterations = it + 1;
  }
  res.residual = r.norm() / bnorm;
  res.converged = res.residual <= tol;
  return res;
}

std::pair<double, double> linear_fit(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("linear_fit: need n>=2");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  return {intercept, slope};
}

}  // namespace qwell
