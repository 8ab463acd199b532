#include "tvfem/rof.hpp"

#include <algorithm>
#include <cmath>

namespace tvfem {

void RofProblem::validate() const
{
  if (!mesh) throw Error("RofProblem: no mesh");
  if (!(alpha > 0.0)) throw Error("RofProblem: alpha must be positive");
  for (double e : eps_field.values)
    if (!(e > 0.0 && e < 1.0)) throw Error("RofProblem: eps must lie in (0,1) element-wise");
}

RofProblem make_problem(const Triangulation& mesh, double alpha, const ScalarField& g, double eps,
                        bool dirichlet, int quad_order)
{
  RofProblem p;
  p.mesh = &mesh;
  p.alpha = alpha;
  p.g_exact = g;
  p.g_h = p0_project(mesh, g, quad_order);
  p.eps_field = P0Function(mesh, eps);
  p.dirichlet = dirichlet;
  p.quad_order = quad_order;
  p.validate();
  return p;
}

double energy_reg(const RofProblem& problem, const CrFunction& v)
{
  const Triangulation& m = *problem.mesh;
  const P0Vector grad = cr_gradient(v);
  const P0Function pv = p0_project(v);
  double tv = 0.0, fid = 0.0;
  for (int e = 0; e < m.n_elements(); ++e) {
    const Regularization reg(problem.eps_field.values[e]);
    tv += m.volume[e] * reg.value(norm(grad.values[e]));
    const double r = pv.values[e] - problem.g_h.values[e];
    fid += m.volume[e] * r * r;
  }
  return tv + 0.5 * problem.alpha * fid;
}

namespace {

// Mesh- and boundary-condition-bound scaffolding reused across flow steps.
// Members are initialized strictly in declaration order.
struct FlowWork {
  const RofProblem* problem;
  std::vector<int> side_of_free;
  std::vector<int> free_of_side;  // -1 for eliminated Dirichlet dofs
  int n_free = 0;

  CsrPattern pattern;           // sparsity of M/tau + K_w + alpha M_Pi
  std::vector<int> slots;       // per element, (d+1)^2 slot indices
  std::vector<double> mass_diag2d;  // reduced CR mass (2D)
  SparseMatrix mass3d;              // reduced CR mass (3D)
  std::vector<double> load;     // reduced alpha * (g_h, Pi phi_S)

  static std::vector<int> make_dofmap(const RofProblem& p, std::vector<int>& side_of_free)
  {
    const Triangulation& m = *p.mesh;
    std::vector<int> free_of_side(m.n_sides(), -1);
    for (int s = 0; s < m.n_sides(); ++s) {
      if (p.dirichlet && m.boundary_tag[s] == SideTag::dirichlet) continue;
      free_of_side[s] = static_cast<int>(side_of_free.size());
      side_of_free.push_back(s);
    }
    return free_of_side;
  }

  static std::vector<std::vector<int>> element_tuples(const RofProblem& p,
                                                      const std::vector<int>& free_of_side)
  {
    const Triangulation& m = *p.mesh;
    std::vector<std::vector<int>> tuples(m.n_elements());
    for (int e = 0; e < m.n_elements(); ++e)
      for (int i = 0; i <= m.dim; ++i) {
        const int f = free_of_side[m.element_sides[e][i]];
        if (f >= 0) tuples[e].push_back(f);
      }
    return tuples;
  }

  explicit FlowWork(const RofProblem& p)
      : problem(&p),
        free_of_side(make_dofmap(p, side_of_free)),
        n_free(static_cast<int>(side_of_free.size())),
        pattern(n_free, element_tuples(p, free_of_side))
  {
    const Triangulation& m = *p.mesh;
    const int d = m.dim;
    slots.reserve(m.n_elements() * (d + 1) * (d + 1));
    for (int e = 0; e < m.n_elements(); ++e)
      for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j) {
          const int fi = free_of_side[m.element_sides[e][i]];
          const int fj = free_of_side[m.element_sides[e][j]];
          slots.push_back(fi >= 0 && fj >= 0 ? pattern.slot(fi, fj) : -1);
        }

    if (d == 2) {
      mass_diag2d.assign(n_free, 0.0);
      for (int e = 0; e < m.n_elements(); ++e)
        for (int i = 0; i <= d; ++i) {
          const int f = free_of_side[m.element_sides[e][i]];
          if (f >= 0) mass_diag2d[f] += m.volume[e] / 3.0;
        }
    } else {
      std::vector<Triplet> trip;
      for (int e = 0; e < m.n_elements(); ++e)
        for (int i = 0; i <= d; ++i)
          for (int j = 0; j <= d; ++j) {
            const int fi = free_of_side[m.element_sides[e][i]];
            const int fj = free_of_side[m.element_sides[e][j]];
            if (fi >= 0 && fj >= 0)
              trip.push_back({fi, fj, m.volume[e] * (i == j ? 0.4 : -0.05)});
          }
      mass3d = csr_from_triplets(n_free, n_free, std::move(trip));
    }

    load.assign(n_free, 0.0);
    for (int e = 0; e < m.n_elements(); ++e) {
      const double c = p.alpha * p.g_h.values[e] * m.volume[e] / (d + 1);
      for (int i = 0; i <= d; ++i) {
        const int f = free_of_side[m.element_sides[e][i]];
        if (f >= 0) load[f] += c;
      }
    }
  }

  // A = M/tau + K_w + alpha*M_Pi with w from the previous iterate
  void fill_matrix(double tau, const CrFunction& u_prev)
  {
    const RofProblem& p = *problem;
    const Triangulation& m = *p.mesh;
    const int d = m.dim;
    pattern.zero_values();
    auto& vals = pattern.matrix().values;
    const P0Vector grad = cr_gradient(u_prev);
    std::size_t k = 0;
    for (int e = 0; e < m.n_elements(); ++e) {
      const Regularization reg(p.eps_field.values[e]);
      const double w = reg.weight(norm(grad.values[e]));
      const double pi = p.alpha * m.volume[e] / ((d + 1) * (d + 1));
      for (int i = 0; i <= d; ++i) {
        const Vec gi = m.cr_basis_gradient(e, i);
        for (int j = 0; j <= d; ++j, ++k) {
          const int slot = slots[k];
          if (slot < 0) continue;
          double a = w * m.volume[e] * dot(gi, m.cr_basis_gradient(e, j)) + pi;
          if (d == 2) {
            if (i == j) a += m.volume[e] / (3.0 * tau);
          } else {
            a += m.volume[e] * (i == j ? 0.4 : -0.05) / tau;
          }
          vals[slot] += a;
        }
      }
    }
  }

  std::vector<double> mass_times(const std::vector<double>& x) const
  {
    if (!mass_diag2d.empty()) {
      std::vector<double> y(n_free);
      for (int i = 0; i < n_free; ++i) y[i] = mass_diag2d[i] * x[i];
      return y;
    }
    return spmv(mass3d, x);
  }

  std::vector<double> mass_solve(const std::vector<double>& b, const CgConfig& cg) const
  {
    if (!mass_diag2d.empty()) {
      std::vector<double> y(n_free);
      for (int i = 0; i < n_free; ++i) y[i] = b[i] / mass_diag2d[i];
      return y;
    }
    return cg_solve(mass3d, b, cg).x;
  }

  std::vector<double> restrict_dofs(const CrFunction& u) const
  {
    std::vector<double> x(n_free);
    for (int i = 0; i < n_free; ++i) x[i] = u.dofs[side_of_free[i]];
    return x;
  }

  CrFunction expand(const std::vector<double>& x) const
  {
    CrFunction u(*problem->mesh);
    for (int i = 0; i < n_free; ++i) u.dofs[side_of_free[i]] = x[i];
    return u;
  }

  // K_w u + alpha (M_Pi u - b_g) in reduced coordinates, w evaluated at u
  std::vector<double> gradient_at(const CrFunction& u) const
  {
    const RofProblem& p = *problem;
    const Triangulation& m = *p.mesh;
    const int d = m.dim;
    const P0Vector grad = cr_gradient(u);
    const P0Function pu = p0_project(u);
    std::vector<double> out(n_free, 0.0);
    for (int e = 0; e < m.n_elements(); ++e) {
      const Regularization reg(p.eps_field.values[e]);
      const double w = reg.weight(norm(grad.values[e]));
      const double fid = p.alpha * (pu.values[e] - p.g_h.values[e]) * m.volume[e] / (d + 1);
      for (int i = 0; i <= d; ++i) {
        const int f = free_of_side[m.element_sides[e][i]];
        if (f < 0) continue;
        out[f] += w * m.volume[e] * dot(m.cr_basis_gradient(e, i), grad.values[e]) + fid;
      }
    }
    return out;
  }
};

double norm_l2(const FlowWork& work, const std::vector<double>& r)
{
  const std::vector<double> mr = work.mass_times(r);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r[i] * mr[i];
  return std::sqrt(std::max(0.0, s));
}

}  // namespace

CrFunction flow_step(const RofProblem& problem, const FlowConfig& cfg, const CrFunction& u_prev)
{
  problem.validate();
  FlowWork work(problem);
  work.fill_matrix(cfg.tau, u_prev);
  std::vector<double> rhs = work.mass_times(work.restrict_dofs(u_prev));
  for (int i = 0; i < work.n_free; ++i) rhs[i] = rhs[i] / cfg.tau + work.load[i];
  const std::vector<double> x0 = work.restrict_dofs(u_prev);
  return work.expand(cg_solve(work.pattern.matrix(), rhs, cfg.cg, x0).x);
}

std::pair<CrFunction, double> flow_residual(const RofProblem& problem, const CrFunction& u)
{
  problem.validate();
  FlowWork work(problem);
  const std::vector<double> g = work.gradient_at(u);
  const std::vector<double> r = work.mass_solve(g, CgConfig{});
  return {work.expand(r), norm_l2(work, r)};
}

FlowResult solve_rof(const RofProblem& problem, const FlowConfig& cfg, const CrFunction* initial)
{
  problem.validate();
  const Triangulation& m = *problem.mesh;
  FlowWork work(problem);

  double stop = cfg.stop_absolute;
  if (stop <= 0.0) stop = cfg.stop_factor * mesh_stats(m).avg_meshsize;

  FlowResult res;
  res.u = (cfg.warm_start && initial) ? *initial : CrFunction(m);
  if (problem.dirichlet)
    for (int s = 0; s < m.n_sides(); ++s)
      if (m.boundary_tag[s] == SideTag::dirichlet) res.u.dofs[s] = 0.0;
  res.energy_trace.push_back(energy_reg(problem, res.u));

  std::vector<double> x = work.restrict_dofs(res.u);
  for (int k = 1; k <= cfg.max_steps; ++k) {
    CrFunction u_prev = work.expand(x);
    work.fill_matrix(cfg.tau, u_prev);
    std::vector<double> rhs = work.mass_times(x);
    for (int i = 0; i < work.n_free; ++i) rhs[i] = rhs[i] / cfg.tau + work.load[i];
    x = cg_solve(work.pattern.matrix(), rhs, cfg.cg, x).x;

    CrFunction u = work.expand(x);
    res.energy_trace.push_back(energy_reg(problem, u));

    std::vector<double> dtau = work.restrict_dofs(u_prev);
    for (int i = 0; i < work.n_free; ++i) dtau[i] = (x[i] - dtau[i]) / cfg.tau;
    const double dn = norm_l2(work, dtau);
    res.sum_dtau_sq += dn * dn;

    const std::vector<double> r = work.mass_solve(work.gradient_at(u), cfg.cg);
    res.final_residual_norm = norm_l2(work, r);
    res.steps = k;
    if (res.final_residual_norm <= stop) {
      res.u = std::move(u);
      return res;
    }
  }
  throw Error("solve_rof: residual " + std::to_string(res.final_residual_norm) +
              " above tolerance " + std::to_string(stop) + " after " +
              std::to_string(cfg.max_steps) + " steps");
}

}  // namespace tvfem
