// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qwell/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qwell {

using json = nlohmann::json;

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(m);
  for (int i = 0; i < m; ++i) xs[i] = node(i);
  return xs;
}

long TensorGrid::total() const {
  long t = 1;
  for (const auto& g : dims) t *= g.m;
  return t;
}

long TensorGrid::flatten(const std::vector<int>& idx) const {
  long flat = 0;
  for (int d = 0; d < ndim(); ++d) flat = flat * dims[d].m + idx[d];
  return flat;
}

std::vector<int> TensorGrid::unflatten(long flat) const {
  std::vector<int> idx(ndim());
  for (int d = ndim() - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % dims[d].m);
    flat /= dims[d].m;
  }
  return idx;
}

double TensorGrid::weight() const {
  double w = 1;
  for (const auto& g : dims) w *= g.spacing();
  return w;
}

Potential Potential::one_body(int coord, std::function<double(double)> f) {
  Potential V;
  V.terms.push_back({{coord}, std::move(f), nullptr});
  return V;
}

Potential Potential::two_body(int c1, int c2,
                              std::function<double(double, double)> f) {
  Potential V;
  V.terms.push_back({{c1, c2}, nullptr, std::move(f)});
  return V;
}

Potential& Potential::add(PotentialTerm t) {
  if (t.coords.size() > 2)
    throw std::invalid_argument("Potential: terms must be <=2-body");
  terms.push_back(std::move(t));
  return *this;
}

double Potential::eval(const std::vector<double>& x) const {
  double v = 0;
  for (const auto& t : terms) {
    if (t.coords.size() == 1)
      v += t.f1(x[t.coords[0]]);
    else
      v += t.f2(x[t.coords[0]], x[t.coords[1]]);
  }
  return v;
}

SparseSymOp SparseSymOp::matrix_free(
    long dim, std::function<void(const double*, double*)> f, Vec diag_hint,
    double norm_hint) {
  SparseSymOp op(dim);
  op.free_apply_ = std::move(f);
  op.free_diag_ = std::move(diag_hint);
  op.free_norm_ = norm_hint;
  op.compiled_ = true;
  return op;
}

void SparseSymOp::add_entry(long row, long col, double value) {
  if (row > col) std::swap(row, col);
  if (!std::isfinite(value))
    throw std::invalid_argument("SparseSymOp: non-finite entry");
  entries.emplace_back(row, col, value);
  compiled_ = false;
}

void SparseSymOp::compile() {
  if (free_apply_) {
    compiled_ = true;
    return;
  }
  std::vector<long> count(n + 1, 0);
  for (auto& [r, c, v] : entries) {
    ++count[r + 1];
    if (r != c) ++count[c + 1];
  }
  row_ptr_.assign(n + 1, 0);
  for (long i = 0; i < n; ++i) row_ptr_[i + 1] = row_ptr_[i] + count[i + 1];
  cols_.assign(row_ptr_[n], 0);
  vals_.assign(row_ptr_[n], 0.0);
  std::vector<long> fill(n, 0);
  auto put = [&](long r, long c, double v) {
    long p = row_ptr_[r] + fill[r]++;
    cols_[p] = c;
    vals_[p] = v;
  };
  for (auto& [r, c, v] : entries) {
    put(r, c, v);
    if (r != c) put(c, r, v);
  }
  compiled_ = true;
}

void SparseSymOp::apply(const double* x, double* y) const {
  if (free_apply_) {
    free_apply_(x, y);
    return;
  }
  if (!compiled_) throw std::runtime_error("SparseSymOp: call compile() first");
  for (long i = 0; i < n; ++i) {
    double acc = 0;
    for (long p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      acc += vals_[p] * x[cols_[p]];
    y[i] = acc;
  }
}

Vec SparseSymOp::apply(const Vec& x) const {
  Vec y(n);
  apply(x.data(), y.data());
  return y;
}

CVec SparseSymOp::apply(const CVec& x) const {
  CVec y(n);
  if (!free_apply_ && compiled_) {
    for (long i = 0; i < n; ++i) {
      double ar = 0, ai = 0;
      for (long p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
        const cplx& v = x[cols_[p]];
        ar += vals_[p] * v.real();
        ai += vals_[p] * v.imag();
      }
      y[i] = cplx(ar, ai);
    }
    return y;
  }
  Vec re(n), im(n), ore(n), oim(n);
  for (long i = 0; i < n; ++i) {
    re[i] = x[i].real();
    im[i] = x[i].imag();
  }
  apply(re.data(), ore.data());
  apply(im.data(), oim.data());
  for (long i = 0; i < n; ++i) y[i] = cplx(ore[i], oim[i]);
  return y;
}

LinOp SparseSymOp::as_linop() const {
  if (!compiled_) throw std::runtime_error("SparseSymOp: call compile() first");
  return LinOp{n, [this](const double* x, double* y) { apply(x, y); }};
}

Mat SparseSymOp::dense() const {
  if (n > 4096) throw std::runtime_error("SparseSymOp::dense: n > 4096");
  if (free_apply_ && entries.empty()) {
    Mat A(n, n);
    Vec e = Vec::Zero(n), col(n);
    for (long j = 0; j < n; ++j) {
      e[j] = 1;
      apply(e.data(), col.data());
      A.col(j) = col;
      e[j] = 0;
    }
    return A;
  }
  Mat A = Mat::Zero(n, n);
  for (auto& [r, c, v] : entries) {
    A(r, c) += v;
    if (r != c) A(c, r) += v;
  }
  return A;
}

Vec SparseSymOp::diagonal() const {
  if (free_apply_ && free_diag_.size() == n) return free_diag_;
  Vec d = Vec::Zero(n);
  for (auto& [r, c, v] : entries)
    if (r == c) d[r] += v;
  return d;
}

double SparseSymOp::norm_bound() const {
  if (free_apply_ && free_norm_ > 0) return free_norm_;
  Vec b = Vec::Zero(n);
  for (auto& [r, c, v] : entries) {
    b[r] += std::abs(v);
    if (r != c) b[c] += std::abs(v);
  }
  return b.size() ? b.maxCoeff() : 0.0;
}

std::optional<Tridiag> SparseSymOp::as_tridiag() const {
  if (free_apply_) return std::nullopt;
  Tridiag T;
  T.diag = Vec::Zero(n);
  T.off = Vec::Zero(n > 0 ? n - 1 : 0);
  for (auto& [r, c, v] : entries) {
    if (c == r)
      T.diag[r] += v;
    else if (c == r + 1)
      T.off[r] += v;
    else
      return std::nullopt;
  }
  return T;
}

SparseSymOp laplacian_1d(const Grid1D& grid) {
  if (grid.m < 3) throw std::invalid_argument("laplacian_1d: need m >= 3");
  const double inv_d2 = 1.0 / (grid.spacing() * grid.spacing());
  SparseSymOp op(grid.m);
  for (int i = 0; i < grid.m; ++i) {
    op.add_entry(i, i, 2.0 * inv_d2);
    if (i + 1 < grid.m) op.add_entry(i, i + 1, -inv_d2);
  }
  if (grid.boundary == Boundary::Periodic)
    op.add_entry(0, grid.m - 1, -inv_d2);
  op.compile();
  return op;
}

SparseSymOp sample_potential(const TensorGrid& grid, const Potential& V) {
  const long N = grid.total();
  SparseSymOp op(N);
  std::vector<double> x(grid.ndim());
  for (long f = 0; f < N; ++f) {
    auto idx = grid.unflatten(f);
    for (int d = 0; d < grid.ndim(); ++d) x[d] = grid.dims[d].node(idx[d]);
    double v = V.eval(x);
    if (!std::isfinite(v))
      throw std::runtime_error("sample_potential: non-finite sample");
    if (v != 0.0) op.add_entry(f, f, v);
  }
  op.compile();
  return op;
}

SparseSymOp assemble_schrodinger(const TensorGrid& grid,
                                 const std::vector<double>& g,
                                 const Potential& V, long dim_cap) {
  const int nd = grid.ndim();
  if (static_cast<int>(g.size()) != nd)
    throw std::invalid_argument("assemble_schrodinger: g size mismatch");
  for (double gu : g)
    if (!(gu > 0))
      throw std::invalid_argument("assemble_schrodinger: kinetic coefficients must be positive");
  const long N = grid.total();
  if (N > dim_cap)
    throw std::runtime_error("assemble_schrodinger: dimension overflow (" +
                             std::to_string(N) + " > cap " +
                             std::to_string(dim_cap) + ")");

  if (N > 400000) {
    // Matrix-free apply for big (3D) grids; the entry list would not fit.
    Vec diag(N);
    std::vector<double> xs(nd);
    double two_kin = 0;
    struct Axis {
      int m;
      long stride;
      double inv_d2;
      bool periodic;
    };
    std::vector<Axis> axes(nd);
    for (int d = 0; d < nd; ++d) {
      const Grid1D& gd = grid.dims[d];
      long stride = 1;
      for (int dd = d + 1; dd < nd; ++dd) stride *= grid.dims[dd].m;
      axes[d] = {gd.m, stride, g[d] / (gd.spacing() * gd.spacing()),
                 gd.boundary == Boundary::Periodic};
      two_kin += 2.0 * axes[d].inv_d2;
    }
    double vmax = 0;
    for (long f = 0; f < N; ++f) {
      auto idx = grid.unflatten(f);
      for (int d = 0; d < nd; ++d) xs[d] = grid.dims[d].node(idx[d]);
      double v = V.eval(xs);
      if (!std::isfinite(v))
        throw std::runtime_error("assemble_schrodinger: non-finite potential");
      diag[f] = two_kin + v;
      vmax = std::max(vmax, std::abs(v));
    }
    double norm_hint = 2.0 * two_kin + vmax;
    Vec diag_hint = diag;
    auto apply = [diag = std::move(diag), axes, N](const double* x, double* y) {
      for (long i = 0; i < N; ++i) y[i] = diag[i] * x[i];
      for (const Axis& a : axes) {
        const long block = a.stride * a.m;
        for (long base = 0; base < N; base += block)
          for (long s = 0; s < a.stride; ++s) {
            const double* xb = x + base + s;
            double* yb = y + base + s;
            for (int i = 0; i + 1 < a.m; ++i) {
              yb[i * a.stride] -= a.inv_d2 * xb[(i + 1) * a.stride];
              yb[(i + 1) * a.stride] -= a.inv_d2 * xb[i * a.stride];
            }
            if (a.periodic) {
              yb[0] -= a.inv_d2 * xb[(a.m - 1) * a.stride];
              yb[(a.m - 1) * a.stride] -= a.inv_d2 * xb[0];
            }
          }
      }
    };
    return SparseSymOp::matrix_free(N, std::move(apply), std::move(diag_hint),
                                    norm_hint);
  }

  SparseSymOp op(N);
  // Kronecker-extended 1D stencils, coordinate by coordinate.
  for (int d = 0; d < nd; ++d) {
    const Grid1D& gd = grid.dims[d];
    const double inv_d2 = g[d] / (gd.spacing() * gd.spacing());
    long stride = 1;
    for (int dd = d + 1; dd < nd; ++dd) stride *= grid.dims[dd].m;
    long outer = N / (stride * gd.m);
    for (long o = 0; o < outer; ++o)
      for (long s = 0; s < stride; ++s) {
        long base = o * stride * gd.m + s;
        for (int i = 0; i < gd.m; ++i) {
          long row = base + i * stride;
          op.add_entry(row, row, 2.0 * inv_d2);
          if (i + 1 < gd.m) op.add_entry(row, row + stride, -inv_d2);
        }
        if (gd.boundary == Boundary::Periodic)
          op.add_entry(base, base + (gd.m - 1) * stride, -inv_d2);
      }
  }
  std::vector<double> x(nd);
  for (long f = 0; f < N; ++f) {
    auto idx = grid.unflatten(f);
    for (int d = 0; d < nd; ++d) x[d] = grid.dims[d].node(idx[d]);
    double v = V.eval(x);
    if (!std::isfinite(v))
      throw std::runtime_error("assemble_schrodinger: non-finite potential");
    if (v != 0.0) op.add_entry(f, f, v);
  }
  op.compile();
  return op;
}

LowSpectrum lowest_eigenpairs(const SparseSymOp& op, int k, double tol,
                              int dense_threshold) {
  LowSpectrum sp;
  sp.k = k;
  sp.tol = tol;
  sp.seed = 12345;

  auto tri = op.as_tridiag();
  if (tri) {
    sp.method = "tridiag-bisection";
    sp.eigenvalues = Vec(k);
    sp.eigenvectors = Mat(op.n, k);
    sp.residuals = Vec(k);
    std::vector<Vec> found;
    for (int i = 0; i < k; ++i) {
      double lam = tridiag_eigenvalue(*tri, i);
      Vec v = tridiag_eigenvector(*tri, lam, found, sp.seed + i);
      sp.eigenvalues[i] = lam;
      sp.eigenvectors.col(i) = v;
      sp.residuals[i] = (tri->apply(v) - lam * v).norm();
      found.push_back(v);
    }
    sp.converged = true;
    return sp;
  }

  if (op.n <= dense_threshold && !op.matrix_free_only()) {
    sp.method = "dense";
    EigenPairs ep = eigh(op.dense());
    sp.eigenvalues = ep.values.head(k);
    sp.eigenvectors = ep.vectors.leftCols(k);
    sp.residuals = Vec::Zero(k);
    for (int i = 0; i < k; ++i)
      sp.residuals[i] =
          (op.apply(Vec(sp.eigenvectors.col(i))) - sp.eigenvalues[i] * sp.eigenvectors.col(i))
              .norm();
    sp.converged = true;
    return sp;
  }

  // Shifted Lanczos: shift by (min diagonal - 1) keeps the operator positive
  // definite for the low end.
  sp.method = "lanczos";
  double shift = op.diagonal().size() ? op.diagonal().minCoeff() - 1.0 : 0.0;
  LinOp shifted{op.n, [&op, shift](const double* x, double* y) {
                  op.apply(x, y);
                  long n = op.n;
                  for (long i = 0; i < n; ++i) y[i] -= shift * x[i];
                }};
  LanczosOptions lo;
  lo.tol = tol;
  lo.seed = sp.seed;
  lo.max_iter = static_cast<int>(std::min<long>(op.n, 1200));
  LanczosResult lr = lanczos_lowest(shifted, k, lo);
  sp.converged = lr.converged;
  sp.eigenvalues = lr.values.array() + shift;
  sp.eigenvectors = lr.vectors;
  sp.residuals = lr.residuals;
  if (!sp.converged && op.n <= 4096 && !op.matrix_free_only()) {
    // Dense fallback; keeps the best Lanczos residuals on record.
    LowSpectrum dense_sp = lowest_eigenpairs(op, k, tol, 4096);
    dense_sp.method = "dense-fallback";
    return dense_sp;
  }
  return sp;
}

std::string grid_metadata_json(const TensorGrid& grid) {
  json j;
  j["ndim"] = grid.ndim();
  j["total_points"] = grid.total();
  j["dims"] = json::array();
  for (const auto& g : grid.dims) {
    j["dims"].push_back({{"m", g.m},
                         {"boundary", g.boundary == Boundary::Dirichlet
                                          ? "dirichlet"
                                          : "periodic"},
                         {"spacing", g.spacing()}});
  }
  return j.dump(2);
}

void write_eigenpairs_csv(const std::string& path, const LowSpectrum& sp) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "index,eigenvalue,residual\n";
  char buf[96];
  for (int i = 0; i < sp.k; ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", i, sp.eigenvalues[i],
                  sp.residuals[i]);
    out << buf;
  }
}

void write_grid_vector(const std::string& path_base, const TensorGrid& grid,
                       const Vec& v) {
  std::ofstream bin(path_base + ".f64", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + path_base + ".f64");
  bin.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(sizeof(double) * v.size()));
  std::ofstream meta(path_base + ".json");
  json j = json::parse(grid_metadata_json(grid));
  j["dtype"] = "float64-le";
  j["length"] = v.size();
  meta << j.dump(2) << "\n";
}

Vec read_grid_vector(const std::string& path_base) {
  std::ifstream meta(path_base + ".json");
  if (!meta) throw std::runtime_error("cannot open " + path_base + ".json");
  json j;
  meta >> j;
  long len = j.at("length").get<long>();
  Vec v(len);
  std::ifstream bin(path_base + ".f64", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + path_base + ".f64");
  bin.read(reinterpret_cast<char*>(v.data()),
           static_cast<std::streamsize>(sizeof(double) * len));
  return v;
}

}  // namespace qwell
