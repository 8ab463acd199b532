#include "tvfem/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "tvfem/bench.hpp"

namespace tvfem {

BrokenRtField marini_rof_broken(const RofProblem& problem, const CrFunction& u)
{
  const Triangulation& m = *problem.mesh;
  const P0Vector grad = cr_gradient(u);
  const P0Function pu = p0_project(u);
  BrokenRtField z;
  z.mesh = &m;
  z.const_part.resize(m.n_elements());
  z.div_part.resize(m.n_elements());
  for (int e = 0; e < m.n_elements(); ++e) {
    const Regularization reg(problem.eps_field.values[e]);
    z.const_part[e] = reg.weight(norm(grad.values[e])) * grad.values[e];
    z.div_part[e] = problem.alpha * (pu.values[e] - problem.g_h.values[e]);
  }
  return z;
}

ConformResult marini_rof(const RofProblem& problem, const CrFunction& u)
{
  return average_to_conforming(marini_rof_broken(problem, u), !problem.dirichlet);
}

RtField scale_to_ball(const RtField& z)
{
  const double linf = rt_linf_norm(z);
  RtField out = z;
  if (linf > 1.0)
    for (double& d : out.dofs) d /= linf;
  return out;
}

double dual_energy_reg(const RofProblem& problem, const RtField& y)
{
  const Triangulation& m = *problem.mesh;
  const P0Vector piy = p0_project(y);
  const P0Function div = rt_divergence(y);
  double conj = 0.0, fid = 0.0, offset = 0.0;
  for (int e = 0; e < m.n_elements(); ++e) {
    const Regularization reg(problem.eps_field.values[e]);
    const double c = reg.conjugate(norm(piy.values[e]));
    if (c == infinity) return -infinity;
    conj += m.volume[e] * c;
    const double r = div.values[e] + problem.alpha * problem.g_h.values[e];
    fid += m.volume[e] * r * r;
    offset += m.volume[e] * problem.g_h.values[e] * problem.g_h.values[e];
  }
  return -conj - fid / (2.0 * problem.alpha) + 0.5 * problem.alpha * offset;
}

double dual_energy_unreg(const RofProblem& problem, const RtField& y)
{
  const Triangulation& m = *problem.mesh;
  const P0Vector piy = p0_project(y);
  const P0Function div = rt_divergence(y);
  double fid = 0.0, offset = 0.0;
  for (int e = 0; e < m.n_elements(); ++e) {
    if (norm(piy.values[e]) > 1.0) return -infinity;
    const double r = div.values[e] + problem.alpha * problem.g_h.values[e];
    fid += m.volume[e] * r * r;
    offset += m.volume[e] * problem.g_h.values[e] * problem.g_h.values[e];
  }
  return -fid / (2.0 * problem.alpha) + 0.5 * problem.alpha * offset;
}

DualReport build_dual_report(const RofProblem& problem, const CrFunction& u)
{
  DualReport rep;
  ConformResult conf = marini_rof(problem, u);
  rep.z_raw = std::move(conf.field);
  rep.flux_mismatch = conf.max_mismatch;
  rep.linf_raw = rt_linf_norm(rep.z_raw);
  rep.z_admissible = scale_to_ball(rep.z_raw);
  rep.primal_energy = energy_reg(problem, u);
  rep.dual_energy = dual_energy_reg(problem, rep.z_raw);
  rep.duality_gap = rep.primal_energy - rep.dual_energy;
  return rep;
}

EstimatorReport eta_cr(const RofProblem& problem, const CrFunction& v, const RtField& y)
{
  const Triangulation& m = *problem.mesh;
  const int d = m.dim;
  EstimatorReport rep;
  rep.eta_sq_local.assign(m.n_elements(), 0.0);

  const P0Vector grad = cr_gradient(v);
  const P0Vector piy = p0_project(y);
  const P0Function div = rt_divergence(y);

  double sup = 0.0;
  if (problem.admissibility == Admissibility::pointwise) {
    sup = rt_linf_norm(y);
  } else {
    for (const Vec& p : piy.values) sup = std::max(sup, norm(p));
  }
  if (sup > 1.0 + 1e-12) {
    rep.admissibility_violation = sup - 1.0;
    rep.eta_sq_global = infinity;
    return rep;
  }
  const QuadRule& rule = simplex_rule(d, problem.quad_order);

  // side jump integrals, interior halved between the adjacent elements; with
  // the midpoint rule only the side-barycenter value contributes (which is
  // the dof difference, zero for conforming traces)
  std::vector<double> jump(m.n_sides(), 0.0);
  double w[3];
  for (int s = 0; s < m.n_sides(); ++s) {
    const int e0 = m.side_elements[s][0];
    const int e1 = m.side_elements[s][1];
    if (e1 < 0 && !problem.dirichlet) continue;
    if (problem.jump_rule == JumpRule::midpoint) {
      double mid = cr_value(v, e0, m.side_center[s]);
      if (e1 >= 0) mid -= cr_value(v, e1, m.side_center[s]);
      jump[s] = m.side_measure[s] * std::abs(mid);
      continue;
    }
    for (int i = 0; i < d; ++i) {
      const Vec& p = m.vertices[m.sides[s][i]];
      w[i] = cr_value(v, e0, p);
      if (e1 >= 0) w[i] -= cr_value(v, e1, p);
    }
    jump[s] = side_abs_integral(m, s, w);
  }

  double tv_grad = 0.0, tv_jump = 0.0, coupling = 0.0, fidelity = 0.0;
  for (int e = 0; e < m.n_elements(); ++e) {
    const double grad_l1 = m.volume[e] * norm(grad.values[e]);
    double jmp = 0.0;
    for (int i = 0; i <= d; ++i) {
      const int s = m.element_sides[e][i];
      jmp += m.side_on_boundary(s) ? jump[s] : 0.5 * jump[s];
    }
    const double cpl = -m.volume[e] * dot(grad.values[e], piy.values[e]);

    double fid = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec x = barycentric_to_point(m, e, rule.points[q]);
      const double gx = problem.g_exact ? problem.g_exact(x) : problem.g_h.values[e];
      const double r = div.values[e] - problem.alpha * (cr_value(v, e, x) - gx);
      fid += rule.weights[q] * r * r;
    }
    fid *= m.volume[e] / (2.0 * problem.alpha);

    rep.eta_sq_local[e] = grad_l1 + jmp + cpl + fid;
    tv_grad += grad_l1;
    tv_jump += jmp;
    coupling += cpl;
    fidelity += fid;
  }
  rep.tv_term = tv_grad + tv_jump;
  rep.coupling_term = coupling;
  rep.fidelity_term = fidelity;
  double total = 0.0;
  for (double l : rep.eta_sq_local) total += l;
  rep.eta_sq_global = total;
  return rep;
}

double eta_w11(const RofProblem& problem, const ScalarField& v, const VectorField& grad_v,
               const RtField& y, int order)
{
  const Triangulation& m = *problem.mesh;
  if (rt_linf_norm(y) > 1.0 + 1e-12) return infinity;
  const P0Function div = rt_divergence(y);
  const QuadRule& rule = simplex_rule(m.dim, order);
  double total = 0.0;
  for (int e = 0; e < m.n_elements(); ++e) {
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec x = barycentric_to_point(m, e, rule.points[q]);
      const Vec gv = grad_v(x);
      const double gx = problem.g_exact ? problem.g_exact(x) : problem.g_h.values[e];
      const double r = div.values[e] - problem.alpha * (v(x) - gx);
      acc += rule.weights[q] *
             (norm(gv) - dot(gv, rt_value(y, e, x)) + r * r / (2.0 * problem.alpha));
    }
    total += m.volume[e] * acc;
  }
  return total;
}

double rho_tilde(const RofProblem& problem, const CrFunction& v, const RtField& y,
                 const ExactSolution& exact)
{
  const Triangulation& m = *problem.mesh;
  const P0Function div = rt_divergence(y);
  const QuadRule& rule = simplex_rule(m.dim, problem.quad_order);
  double err_u = 0.0, err_div = 0.0;
  for (int e = 0; e < m.n_elements(); ++e) {
    double au = 0.0, ad = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec x = barycentric_to_point(m, e, rule.points[q]);
      const double du = cr_value(v, e, x) - exact.u(x);
      const double dd = div.values[e] - exact.div_z(x);
      au += rule.weights[q] * du * du;
      ad += rule.weights[q] * dd * dd;
    }
    err_u += m.volume[e] * au;
    err_div += m.volume[e] * ad;
  }
  return 0.5 * problem.alpha * err_u + err_div / (2.0 * problem.alpha);
}

}  // namespace tvfem
