#include "tvfem/fem.hpp"

#include <algorithm>
#include <cmath>

namespace tvfem {

namespace {

void check_mesh(const void* mesh, const char* who)
{
  if (!mesh) throw Error(std::string(who) + ": unbound function");
}

// barycentric coordinate of local vertex i at x
double lambda_at(const Triangulation& m, int e, int i, const Vec& x)
{
  const int s = m.element_sides[e][i];
  const Vec grad = (-m.sigma[e][i] * m.side_measure[s] / (m.dim * m.volume[e])) * m.side_normal[s];
  return 1.0 / (m.dim + 1) + dot(grad, x - m.centroid[e]);
}

}  // namespace

P0Vector cr_gradient(const CrFunction& v)
{
  check_mesh(v.mesh, "cr_gradient");
  const Triangulation& m = *v.mesh;
  P0Vector g(m);
  for (int e = 0; e < m.n_elements(); ++e) {
    Vec s{0, 0, 0};
    for (int i = 0; i <= m.dim; ++i)
      s += v.dofs[m.element_sides[e][i]] * m.cr_basis_gradient(e, i);
    g.values[e] = s;
  }
  return g;
}

double cr_value(const CrFunction& v, int e, const Vec& x)
{
  const Triangulation& m = *v.mesh;
  double s = 0.0;
  for (int i = 0; i <= m.dim; ++i)
    s += v.dofs[m.element_sides[e][i]] * (1.0 - m.dim * lambda_at(m, e, i, x));
  return s;
}

double side_abs_integral(const Triangulation& mesh, int s, const double* w)
{
  const double measure = mesh.side_measure[s];
  if (mesh.dim == 2) {
    const double a = w[0], b = w[1];
    if (a * b >= 0.0) return measure * 0.5 * (std::abs(a) + std::abs(b));
    return measure * 0.5 * (a * a + b * b) / (std::abs(a) + std::abs(b));
  }
  // triangle side: integral of |affine| with vertex values w0,w1,w2
  int pos = 0, neg = 0;
  for (int i = 0; i < 3; ++i) {
    pos += w[i] > 0.0;
    neg += w[i] < 0.0;
  }
  const double mean = (w[0] + w[1] + w[2]) / 3.0;
  if (neg == 0) return measure * mean;
  if (pos == 0) return -measure * mean;
  if (pos == 1) {
    int k = 0;
    while (w[k] <= 0.0) ++k;
    const double a = w[k], b = w[(k + 1) % 3], c = w[(k + 2) % 3];
    return 2.0 * measure * a * a * a / (3.0 * (a - b) * (a - c)) - measure * mean;
  }
  int k = 0;
  while (w[k] >= 0.0) ++k;
  const double a = w[k], b = w[(k + 1) % 3], c = w[(k + 2) % 3];
  return measure * mean + 2.0 * measure * (-a) * (-a) * (-a) / (3.0 * (b - a) * (c - a));
}

double cr_jump_l1(const CrFunction& v, bool include_dirichlet_boundary)
{
  check_mesh(v.mesh, "cr_jump_l1");
  const Triangulation& m = *v.mesh;
  double total = 0.0;
  double w[3];
  for (int s = 0; s < m.n_sides(); ++s) {
    const int e0 = m.side_elements[s][0];
    const int e1 = m.side_elements[s][1];
    if (e1 < 0 && !include_dirichlet_boundary) continue;
    for (int i = 0; i < m.dim; ++i) {
      const Vec& p = m.vertices[m.sides[s][i]];
      w[i] = cr_value(v, e0, p);
      if (e1 >= 0) w[i] -= cr_value(v, e1, p);
    }
    total += side_abs_integral(m, s, w);
  }
  return total;
}

double tv_cr(const CrFunction& v, bool include_dirichlet_boundary)
{
  const Triangulation& m = *v.mesh;
  const P0Vector g = cr_gradient(v);
  double grad_l1 = 0.0;
  for (int e = 0; e < m.n_elements(); ++e) grad_l1 += m.volume[e] * norm(g.values[e]);
  return grad_l1 + cr_jump_l1(v, include_dirichlet_boundary);
}

P0Function p0_project(const CrFunction& v)
{
  check_mesh(v.mesh, "p0_project");
  const Triangulation& m = *v.mesh;
  P0Function p(m);
  for (int e = 0; e < m.n_elements(); ++e) {
    double s = 0.0;
    for (int i = 0; i <= m.dim; ++i) s += v.dofs[m.element_sides[e][i]];
    p.values[e] = s / (m.dim + 1);
  }
  return p;
}

P0Vector p0_project(const RtField& y)
{
  check_mesh(y.mesh, "p0_project");
  const Triangulation& m = *y.mesh;
  P0Vector p(m);
  for (int e = 0; e < m.n_elements(); ++e) {
    Vec s{0, 0, 0};
    for (int i = 0; i <= m.dim; ++i) {
      const int sd = m.element_sides[e][i];
      const double c = y.dofs[sd] * m.sigma[e][i] * m.side_measure[sd] / (m.dim * m.volume[e]);
      s += c * (m.centroid[e] - m.vertices[m.elements[e][i]]);
    }
    p.values[e] = s;
  }
  return p;
}

P0Function p0_project(const Triangulation& mesh, const ScalarField& f, int order)
{
  P0Function p(mesh);
  for (int e = 0; e < mesh.n_elements(); ++e)
    p.values[e] = integrate_element(mesh, e, f, order) / mesh.volume[e];
  return p;
}

P0Function p0_project_refined(const Triangulation& mesh, const ScalarField& f, int depth)
{
  P0Function p(mesh);
  for (int e = 0; e < mesh.n_elements(); ++e)
    p.values[e] = integrate_element_refined(mesh, e, f, depth) / mesh.volume[e];
  return p;
}

P0Function rt_divergence(const RtField& y)
{
  check_mesh(y.mesh, "rt_divergence");
  const Triangulation& m = *y.mesh;
  P0Function d(m);
  for (int e = 0; e < m.n_elements(); ++e) {
    double s = 0.0;
    for (int i = 0; i <= m.dim; ++i) {
      const int sd = m.element_sides[e][i];
      s += m.sigma[e][i] * m.side_measure[sd] * y.dofs[sd];
    }
    d.values[e] = s / m.volume[e];
  }
  return d;
}

Vec rt_value(const RtField& y, int e, const Vec& x)
{
  const Triangulation& m = *y.mesh;
  Vec s{0, 0, 0};
  for (int i = 0; i <= m.dim; ++i) {
    const int sd = m.element_sides[e][i];
    const double c = y.dofs[sd] * m.sigma[e][i] * m.side_measure[sd] / (m.dim * m.volume[e]);
    s += c * (x - m.vertices[m.elements[e][i]]);
  }
  return s;
}

double rt_linf_norm(const RtField& y)
{
  check_mesh(y.mesh, "rt_linf_norm");
  const Triangulation& m = *y.mesh;
  double best = 0.0;
  for (int e = 0; e < m.n_elements(); ++e)
    for (int i = 0; i <= m.dim; ++i)
      best = std::max(best, norm(rt_value(y, e, m.vertices[m.elements[e][i]])));
  return best;
}

CrFunction boundary_interpolant(const CrFunction& v)
{
  check_mesh(v.mesh, "boundary_interpolant");
  const Triangulation& m = *v.mesh;
  std::vector<char> on_boundary(m.n_vertices(), 0);
  for (int s = 0; s < m.n_sides(); ++s)
    if (m.side_on_boundary(s))
      for (int i = 0; i < m.dim; ++i) on_boundary[m.sides[s][i]] = 1;

  CrFunction out = v;
  for (int s = 0; s < m.n_sides(); ++s) {
    bool touches = m.side_on_boundary(s);
    for (int i = 0; i < m.dim && !touches; ++i) touches = on_boundary[m.sides[s][i]];
    if (touches) out.dofs[s] = 0.0;
  }
  return out;
}

SparseMatrix assemble_cr_mass(const Triangulation& mesh)
{
  std::vector<Triplet> trip;
  const int d = mesh.dim;
  if (d == 2) {
    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int i = 0; i <= d; ++i)
        trip.push_back({mesh.element_sides[e][i], mesh.element_sides[e][i], mesh.volume[e] / 3.0});
  } else {
    // exact integrals of (1-3*lambda_i)(1-3*lambda_j) on a tetrahedron
    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j)
          trip.push_back({mesh.element_sides[e][i], mesh.element_sides[e][j],
                          mesh.volume[e] * (i == j ? 0.4 : -0.05)});
  }
  return csr_from_triplets(mesh.n_sides(), mesh.n_sides(), std::move(trip));
}

SparseMatrix assemble_weighted_stiffness(const Triangulation& mesh, const P0Function& w)
{
  std::vector<Triplet> trip;
  const int d = mesh.dim;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (w.values[e] < 0.0) throw Error("assemble_weighted_stiffness: negative weight");
    for (int i = 0; i <= d; ++i) {
      const Vec gi = mesh.cr_basis_gradient(e, i);
      for (int j = 0; j <= d; ++j) {
        const Vec gj = mesh.cr_basis_gradient(e, j);
        trip.push_back({mesh.element_sides[e][i], mesh.element_sides[e][j],
                        w.values[e] * mesh.volume[e] * dot(gi, gj)});
      }
    }
  }
  return csr_from_triplets(mesh.n_sides(), mesh.n_sides(), std::move(trip));
}

SparseMatrix assemble_pi_mass(const Triangulation& mesh)
{
  std::vector<Triplet> trip;
  const int d = mesh.dim;
  const double c = 1.0 / ((d + 1) * (d + 1));
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j)
        trip.push_back({mesh.element_sides[e][i], mesh.element_sides[e][j], mesh.volume[e] * c});
  return csr_from_triplets(mesh.n_sides(), mesh.n_sides(), std::move(trip));
}

std::vector<double> assemble_pi_load(const Triangulation& mesh, const P0Function& g)
{
  std::vector<double> b(mesh.n_sides(), 0.0);
  const int d = mesh.dim;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double c = g.values[e] * mesh.volume[e] / (d + 1);
    for (int i = 0; i <= d; ++i) b[mesh.element_sides[e][i]] += c;
  }
  return b;
}

}  // namespace tvfem
