#include "tvfem/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace tvfem {

SparseMatrix csr_from_triplets(int n_rows, int n_cols, std::vector<Triplet> triplets)
{
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols)
      throw Error("csr_from_triplets: index out of range (" + std::to_string(t.row) + "," +
                  std::to_string(t.col) + ")");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix A;
  A.n_rows = n_rows;
  A.n_cols = n_cols;
  A.row_offsets.assign(static_cast<std::size_t>(n_rows) + 1, 0);
  A.col_indices.reserve(triplets.size());
  A.values.reserve(triplets.size());

  std::size_t k = 0;
  for (int r = 0; r < n_rows; ++r) {
    while (k < triplets.size() && triplets[k].row == r) {
      const int c = triplets[k].col;
      double v = triplets[k].value;
      ++k;
      while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) {
        v += triplets[k].value;  // duplicates summed
        ++k;
      }
      A.col_indices.push_back(c);
      A.values.push_back(v);
    }
    A.row_offsets[static_cast<std::size_t>(r) + 1] = static_cast<int>(A.col_indices.size());
  }
  return A;
}

void spmv_into(const SparseMatrix& A, std::span<const double> x, std::span<double> y)
{
  if (static_cast<int>(x.size()) != A.n_cols || static_cast<int>(y.size()) != A.n_rows)
    throw Error("spmv: dimension mismatch");
  for (int r = 0; r < A.n_rows; ++r) {
    double s = 0.0;
    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k)
      s += A.values[k] * x[A.col_indices[k]];
    y[r] = s;
  }
}

std::vector<double> spmv(const SparseMatrix& A, std::span<const double> x)
{
  std::vector<double> y(A.n_rows);
  spmv_into(A, x, y);
  return y;
}

namespace {

double dot_v(std::span<const double> a, std::span<const double> b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_v(std::span<const double> a) { return std::sqrt(dot_v(a, a)); }

}  // namespace

CgResult cg_solve(const SparseMatrix& A, std::span<const double> b, const CgConfig& cfg,
                  std::span<const double> x0)
{
  const int n = A.n_rows;
  if (A.n_cols != n || static_cast<int>(b.size()) != n) throw Error("cg_solve: dimension mismatch");
  if (cfg.rel_tolerance <= 0) throw Error("cg_solve: rel_tolerance must be positive");
  const int max_it = cfg.max_iterations > 0 ? cfg.max_iterations : 10 * std::max(n, 1);

  CgResult res;
  res.x.assign(n, 0.0);
  if (!x0.empty()) {
    if (static_cast<int>(x0.size()) != n) throw Error("cg_solve: bad initial guess size");
    std::copy(x0.begin(), x0.end(), res.x.begin());
  }

  std::vector<double> inv_diag;
  if (cfg.preconditioner == Preconditioner::jacobi) {
    inv_diag.assign(n, 1.0);
    for (int r = 0; r < n; ++r)
      for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k)
        if (A.col_indices[k] == r && A.values[k] != 0.0) inv_diag[r] = 1.0 / A.values[k];
  }

  const double bnorm = norm_v(b);
  const double target = cfg.rel_tolerance * bnorm;

  std::vector<double> r(n), z(n), p(n), Ap(n);
  spmv_into(A, res.x, r);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  res.residual = norm_v(r);
  if (bnorm == 0.0 || res.residual <= target) {
    if (bnorm == 0.0) res.x.assign(n, 0.0);
    return res;
  }

  auto apply_prec = [&](const std::vector<double>& in, std::vector<double>& out) {
    if (inv_diag.empty())
      out = in;
    else
      for (int i = 0; i < n; ++i) out[i] = inv_diag[i] * in[i];
  };

  apply_prec(r, z);
  p = z;
  double rz = dot_v(r, z);

  for (int it = 1; it <= max_it; ++it) {
    spmv_into(A, p, Ap);
    const double pAp = dot_v(p, Ap);
    if (pAp <= 0.0) throw CgFailure("cg_solve: matrix not positive definite", it, res.residual);
    const double alpha = rz / pAp;
    for (int i = 0; i < n; ++i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    res.iterations = it;
    res.residual = norm_v(r);
    if (res.residual <= target) return res;
    apply_prec(r, z);
    const double rz_new = dot_v(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw CgFailure("cg_solve: no convergence after " + std::to_string(max_it) +
                      " iterations, residual " + std::to_string(res.residual),
                  res.iterations, res.residual);
}

CsrPattern::CsrPattern(int n, const std::vector<std::vector<int>>& dof_tuples)
{
  std::vector<Triplet> trip;
  std::size_t nnz_guess = 0;
  for (const auto& t : dof_tuples) nnz_guess += t.size() * t.size();
  trip.reserve(nnz_guess);
  for (const auto& t : dof_tuples)
    for (int i : t)
      for (int j : t) trip.push_back({i, j, 0.0});
  mat_ = csr_from_triplets(n, n, std::move(trip));
}

int CsrPattern::slot(int i, int j) const
{
  const auto begin = mat_.col_indices.begin() + mat_.row_offsets[i];
  const auto end = mat_.col_indices.begin() + mat_.row_offsets[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) throw Error("CsrPattern::slot: entry not in pattern");
  return static_cast<int>(it - mat_.col_indices.begin());
}

void CsrPattern::zero_values() { std::fill(mat_.values.begin(), mat_.values.end(), 0.0); }

}  // namespace tvfem
