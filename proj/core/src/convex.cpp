#include "tvfem/convex.hpp"

#include <cmath>

namespace tvfem {

SmoothDensity quadratic_density()
{
  SmoothDensity d;
  d.value = [](const Vec& a) { return 0.5 * dot(a, a); };
  d.gradient = [](const Vec& a) { return a; };
  d.conjugate_value = [](const Vec& b) { return 0.5 * dot(b, b); };
  d.conjugate_gradient = [](const Vec& b) { return b; };
  return d;
}

SmoothDensity dirichlet_p_density(double p)
{
  if (!(p > 1.0)) throw Error("dirichlet_p_density: p must exceed 1");
  const double q = p / (p - 1.0);
  SmoothDensity d;
  d.value = [p](const Vec& a) { return std::pow(norm(a), p) / p; };
  d.gradient = [p](const Vec& a) {
    const double n = norm(a);
    if (n == 0.0) return Vec{0, 0, 0};
    return std::pow(n, p - 2.0) * a;
  };
  d.conjugate_value = [q](const Vec& b) { return std::pow(norm(b), q) / q; };
  d.conjugate_gradient = [q](const Vec& b) {
    const double n = norm(b);
    if (n == 0.0) return Vec{0, 0, 0};
    return std::pow(n, q - 2.0) * b;
  };
  return d;
}

SmoothDensity rof_regularized_density(double eps)
{
  const Regularization reg(eps);
  SmoothDensity d;
  d.value = [reg](const Vec& a) { return reg.value(norm(a)); };
  d.gradient = [reg](const Vec& a) { return reg.weight(norm(a)) * a; };
  d.conjugate_value = [reg](const Vec& b) { return reg.conjugate(norm(b)); };
  d.conjugate_gradient = [reg](const Vec& b) {
    const double n = norm(b);
    const double r = (1.0 - reg.eps) * (1.0 - reg.eps) - n * n;
    if (r <= 0.0) throw Error("rof_regularized_density: conjugate gradient outside domain");
    return (reg.eps / std::sqrt(r)) * b;
  };
  return d;
}

double bregman_distance(const SmoothDensity& density, const Vec& a, const Vec& b)
{
  return density.value(a) - density.value(b) - dot(density.gradient(b), a - b);
}

BrokenRtField marini_forward(const SmoothDensity& density, const P0Vector& grad_u,
                             const P0Function& dpsi)
{
  const Triangulation& m = *grad_u.mesh;
  BrokenRtField z;
  z.mesh = &m;
  z.const_part.resize(m.n_elements());
  z.div_part.resize(m.n_elements());
  for (int e = 0; e < m.n_elements(); ++e) {
    z.const_part[e] = density.gradient(grad_u.values[e]);
    z.div_part[e] = dpsi.values[e];
  }
  return z;
}

ConformResult average_to_conforming(const BrokenRtField& broken, bool zero_boundary_fluxes)
{
  const Triangulation& m = *broken.mesh;
  ConformResult out;
  out.field = RtField(m);
  std::vector<int> seen(m.n_sides(), 0);
  for (int e = 0; e < m.n_elements(); ++e) {
    for (int i = 0; i <= m.dim; ++i) {
      const int s = m.element_sides[e][i];
      out.field.dofs[s] += broken.flux(e, i);
      seen[s]++;
    }
  }
  for (int s = 0; s < m.n_sides(); ++s) {
    if (seen[s] == 2) out.field.dofs[s] *= 0.5;
  }
  // mismatch before averaging
  for (int e = 0; e < m.n_elements(); ++e)
    for (int i = 0; i <= m.dim; ++i) {
      const int s = m.element_sides[e][i];
      const double own = broken.flux(e, i);
      if (!m.side_on_boundary(s))
        out.max_mismatch = std::max(out.max_mismatch, 2.0 * std::abs(own - out.field.dofs[s]));
      else if (zero_boundary_fluxes)
        out.max_mismatch = std::max(out.max_mismatch, std::abs(own));
    }
  if (zero_boundary_fluxes)
    for (int s = 0; s < m.n_sides(); ++s)
      if (m.side_on_boundary(s)) out.field.dofs[s] = 0.0;
  return out;
}

MariniInverseResult marini_inverse(const SmoothDensity& density, const P0Vector& pi_z,
                                   const P0Function& dpsi_star, const Triangulation& mesh)
{
  MariniInverseResult out;
  out.u = CrFunction(mesh);
  std::vector<double> first(mesh.n_sides(), 0.0);
  std::vector<int> seen(mesh.n_sides(), 0);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const Vec slope = density.conjugate_gradient(pi_z.values[e]);
    for (int i = 0; i <= mesh.dim; ++i) {
      const int s = mesh.element_sides[e][i];
      const double val =
          dpsi_star.values[e] + dot(slope, mesh.side_center[s] - mesh.centroid[e]);
      if (seen[s] == 0) {
        first[s] = val;
        out.u.dofs[s] = val;
      } else {
        out.max_mismatch = std::max(out.max_mismatch, std::abs(val - first[s]));
        out.u.dofs[s] = 0.5 * (first[s] + val);
      }
      seen[s]++;
    }
  }
  return out;
}

}  // namespace tvfem
