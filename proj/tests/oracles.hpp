#pragma once

// Test-only reference implementations: dense linear algebra, rank
// computations, and random mesh generation. Kept independent of the library
// code paths they are used to check.

#include <cmath>
#include <random>
#include <vector>

#include "tvfem/linalg.hpp"
#include "tvfem/mesh.hpp"
#include "tvfem/rof.hpp"

namespace oracles {

struct Dense {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Dense(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

inline Dense dense_from_csr(const tvfem::SparseMatrix& A)
{
  Dense D(A.n_rows, A.n_cols);
  for (int r = 0; r < A.n_rows; ++r)
    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k)
      D(r, A.col_indices[k]) += A.values[k];
  return D;
}

inline std::vector<double> dense_mul(const Dense& A, const std::vector<double>& x)
{
  std::vector<double> y(A.rows, 0.0);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) y[i] += A(i, j) * x[j];
  return y;
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Dense A, std::vector<double> b)
{
  const int n = A.rows;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(piv, k))) piv = i;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = A(i, k) / A(k, k);
      for (int j = k; j < n; ++j) A(i, j) -= f * A(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  return x;
}

inline int dense_rank(Dense A, double tol = 1e-10)
{
  int rank = 0;
  int row = 0;
  for (int col = 0; col < A.cols && row < A.rows; ++col) {
    int piv = row;
    for (int i = row + 1; i < A.rows; ++i)
      if (std::abs(A(i, col)) > std::abs(A(piv, col))) piv = i;
    if (std::abs(A(piv, col)) < tol) continue;
    for (int j = 0; j < A.cols; ++j) std::swap(A(row, j), A(piv, j));
    for (int i = 0; i < A.rows; ++i) {
      if (i == row) continue;
      const double f = A(i, col) / A(row, col);
      for (int j = 0; j < A.cols; ++j) A(i, j) -= f * A(row, j);
    }
    ++rank;
    ++row;
  }
  return rank;
}

// exact integral of a barycentric monomial over a simplex:
// int_T prod lambda_i^{b_i} = d! |T| prod(b_i!) / (|b| + d)!
inline double barycentric_monomial_integral(int dim, double volume, const std::vector<int>& b)
{
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  int total = 0;
  double num = 1.0;
  for (int bi : b) {
    total += bi;
    num *= fact(bi);
  }
  return fact(dim) * volume * num / fact(total + dim);
}

// High-accuracy minimizer of the regularized energy on tiny meshes: damped
// Newton with dense solves, independent of the gradient-flow code path.
// Returns the minimizer over the free (non-Dirichlet) dofs.
inline tvfem::CrFunction newton_minimize_reg(const tvfem::RofProblem& problem,
                                             double grad_tol = 1e-13, int max_iterations = 500)
{
  using namespace tvfem;
  const Triangulation& m = *problem.mesh;
  const int d = m.dim;
  std::vector<int> free;
  for (int s = 0; s < m.n_sides(); ++s)
    if (!(problem.dirichlet && m.boundary_tag[s] == SideTag::dirichlet)) free.push_back(s);
  const int nf = static_cast<int>(free.size());
  std::vector<int> fidx(m.n_sides(), -1);
  for (int k = 0; k < nf; ++k) fidx[free[k]] = k;

  CrFunction u(m);
  auto energy = [&](const CrFunction& v) { return energy_reg(problem, v); };

  for (int it = 0; it < max_iterations; ++it) {
    const P0Vector grad_u = cr_gradient(u);
    const P0Function pu = p0_project(u);
    std::vector<double> g(nf, 0.0);
    Dense H(nf, nf);
    for (int e = 0; e < m.n_elements(); ++e) {
      const Regularization reg(problem.eps_field.values[e]);
      const double t = norm(grad_u.values[e]);
      const double w = reg.weight(t);
      // f''(t) = (1-eps) eps^2 / (t^2+eps^2)^{3/2}
      const double s = reg.regularized_modulus(t);
      const double fpp = (1.0 - reg.eps) * reg.eps * reg.eps / (s * s * s);
      Vec dir{0, 0, 0};
      if (t > 0) dir = (1.0 / t) * grad_u.values[e];
      const double fid = problem.alpha * (pu.values[e] - problem.g_h.values[e]);
      for (int i = 0; i <= d; ++i) {
        const int fi = fidx[m.element_sides[e][i]];
        if (fi < 0) continue;
        const Vec gi = m.cr_basis_gradient(e, i);
        g[fi] += m.volume[e] * (w * dot(gi, grad_u.values[e]) + fid / (d + 1));
        for (int j = 0; j <= d; ++j) {
          const int fj = fidx[m.element_sides[e][j]];
          if (fj < 0) continue;
          const Vec gj = m.cr_basis_gradient(e, j);
          const double proj = dot(gi, dir) * dot(gj, dir);
          H(fi, fj) += m.volume[e] * (w * (dot(gi, gj) - proj) + fpp * proj +
                                      problem.alpha / ((d + 1) * (d + 1)));
        }
      }
    }
    double gnorm = 0.0;
    for (double gi : g) gnorm = std::max(gnorm, std::abs(gi));
    if (gnorm <= grad_tol) return u;

    std::vector<double> rhs(nf);
    for (int i = 0; i < nf; ++i) rhs[i] = -g[i];
    const std::vector<double> step = dense_solve(H, rhs);
    double t = 1.0;
    const double e0 = energy(u);
    bool moved = false;
    for (int back = 0; back < 60 && !moved; ++back) {
      CrFunction trial = u;
      for (int k = 0; k < nf; ++k) trial.dofs[free[k]] += t * step[k];
      if (energy(trial) <= e0 + 1e-14 * (1.0 + std::abs(e0))) {
        u = trial;
        moved = true;
      }
      t *= 0.5;
    }
    if (!moved) return u;  // at floating-point stagnation
  }
  return u;
}

// random conforming mesh: uniform box mesh plus a few random refinement rounds
inline tvfem::Triangulation random_mesh_2d(std::mt19937& rng, bool dirichlet, int max_elements = 200)
{
  std::uniform_int_distribution<int> subdiv(1, 4);
  std::uniform_real_distribution<double> span(0.5, 2.0);
  const double w = span(rng), h = span(rng);
  tvfem::Box box{tvfem::vec(-w / 2, -h / 2), tvfem::vec(w / 2, h / 2)};
  tvfem::Triangulation mesh = tvfem::uniform_triangulation(
      2, box, subdiv(rng), [dirichlet](const tvfem::Vec&) { return dirichlet; });
  std::uniform_int_distribution<int> rounds(0, 2);
  const int n_rounds = rounds(rng);
  for (int r = 0; r < n_rounds; ++r) {
    if (mesh.n_elements() * 4 > max_elements) break;
    std::vector<int> marked;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int e = 0; e < mesh.n_elements(); ++e)
      if (coin(rng) < 0.3) marked.push_back(e);
    mesh = tvfem::refine(mesh, marked).mesh;
  }
  return mesh;
}

}  // namespace oracles
