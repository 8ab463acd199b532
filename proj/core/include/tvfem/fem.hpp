#pragma once

#include <functional>
#include <vector>

#include "tvfem/linalg.hpp"
#include "tvfem/mesh.hpp"
#include "tvfem/quadrature.hpp"

namespace tvfem {

// Crouzeix-Raviart function: one value per side, taken at the side barycenter.
struct CrFunction {
  const Triangulation* mesh = nullptr;
  std::vector<double> dofs;

  CrFunction() = default;
  explicit CrFunction(const Triangulation& m, double fill = 0.0)
      : mesh(&m), dofs(m.n_sides(), fill)
  {
  }
};

// Raviart-Thomas (RT0) field: one constant normal flux per side, signed by
// the canonical side normal.
struct RtField {
  const Triangulation* mesh = nullptr;
  std::vector<double> dofs;

  RtField() = default;
  explicit RtField(const Triangulation& m, double fill = 0.0) : mesh(&m), dofs(m.n_sides(), fill)
  {
  }
};

struct P0Function {
  const Triangulation* mesh = nullptr;
  std::vector<double> values;

  P0Function() = default;
  explicit P0Function(const Triangulation& m, double fill = 0.0)
      : mesh(&m), values(m.n_elements(), fill)
  {
  }
};

struct P0Vector {
  const Triangulation* mesh = nullptr;
  std::vector<Vec> values;

  P0Vector() = default;
  explicit P0Vector(const Triangulation& m) : mesh(&m), values(m.n_elements(), Vec{0, 0, 0}) {}
};

// Element-wise gradient of the affine interpolant of the face values.
P0Vector cr_gradient(const CrFunction& v);

// Value of v on element e at point x.
double cr_value(const CrFunction& v, int e, const Vec& x);

// Sum over sides of the exact integral of |jump|; on boundary sides the jump
// is the trace of the adjacent element (included only when requested).
double cr_jump_l1(const CrFunction& v, bool include_dirichlet_boundary);

// Total variation of a CR function: ||grad_h v||_L1 plus the jump part.
double tv_cr(const CrFunction& v, bool include_dirichlet_boundary = true);

// Exact integral of |affine| over a side given its vertex values.
double side_abs_integral(const Triangulation& mesh, int s, const double* vertex_values);

P0Function p0_project(const CrFunction& v);
P0Vector p0_project(const RtField& y);
P0Function p0_project(const Triangulation& mesh, const ScalarField& f, int order = 3);

// Element means by subdivision quadrature; accurate for data with jumps.
P0Function p0_project_refined(const Triangulation& mesh, const ScalarField& f, int depth = 3);

P0Function rt_divergence(const RtField& y);

// Value of y on element e at x: Pi_h y + (div y / d)(x - x_T).
Vec rt_value(const RtField& y, int e, const Vec& x);

// max_T max_{vertices p of T} |y(p)|; exact because |y| is convex per element.
double rt_linf_norm(const RtField& y);

// Zeroes every dof whose side intersects the boundary (including sides that
// merely touch it at a vertex); the result vanishes identically on boundary
// elements and hence has zero trace.
CrFunction boundary_interpolant(const CrFunction& v);

// L2 mass matrix of the CR basis: diagonal in 2D, exactly integrated
// (non-diagonal) in 3D.
SparseMatrix assemble_cr_mass(const Triangulation& mesh);

// K[S,S'] = sum_T w_T |T| grad phi_S . grad phi_S'; requires w >= 0.
SparseMatrix assemble_weighted_stiffness(const Triangulation& mesh, const P0Function& w);

// Matrix of (Pi_h phi_S, Pi_h phi_S'): rank-one |T|/(d+1)^2 block per element.
SparseMatrix assemble_pi_mass(const Triangulation& mesh);

// Load vector (g, Pi_h phi_S) for element-wise constant g.
std::vector<double> assemble_pi_load(const Triangulation& mesh, const P0Function& g);

}  // namespace tvfem
