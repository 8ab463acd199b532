#include "tvfem/afem.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace tvfem {

std::vector<int> doerfler_mark(const std::vector<double>& indicators, double theta)
{
  if (!(theta > 0.0 && theta <= 1.0)) throw Error("doerfler_mark: theta must lie in (0,1]");
  double total = 0.0;
  for (double v : indicators) {
    if (v < 0.0) throw Error("doerfler_mark: negative indicator");
    total += v;
  }
  std::vector<int> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return indicators[a] != indicators[b] ? indicators[a] > indicators[b] : a < b;
  });
  const double target = theta * theta * total;
  std::vector<int> marked;
  double acc = 0.0;
  for (int e : order) {
    if (acc >= target || indicators[e] <= 0.0) break;
    marked.push_back(e);
    acc += indicators[e];
  }
  return marked;
}

P0Function update_epsilon(EpsStrategy strategy, const Triangulation& mesh_new,
                          const std::vector<int>& parent, const P0Function& pi_u_prev,
                          const P0Function& g_h_new, double alpha)
{
  const double h = mesh_stats(mesh_new).avg_meshsize;
  P0Function eps(mesh_new);
  for (int e = 0; e < mesh_new.n_elements(); ++e) {
    double value = h * h;
    if (strategy == EpsStrategy::local) {
      const double up = pi_u_prev.values[parent[e]];
      value = alpha / mesh_new.dim * std::abs(up - g_h_new.values[e]) * h * h + h * h * h;
    }
    eps.values[e] = std::clamp(value, 1e-14, 1.0 - 1e-8);
  }
  return eps;
}

namespace {

// prolongation onto the refined mesh: evaluate the affine restriction of the
// coarse function on the parent element at each new side barycenter
CrFunction prolong(const CrFunction& coarse, const Triangulation& fine,
                   const std::vector<int>& parent)
{
  CrFunction out(fine);
  for (int s = 0; s < fine.n_sides(); ++s) {
    const int child = fine.side_elements[s][0];
    out.dofs[s] = cr_value(coarse, parent[child], fine.side_center[s]);
  }
  return out;
}

}  // namespace

std::vector<AfemLevel> afem_run(const BenchmarkCase& bc, const AfemConfig& cfg)
{
  if (cfg.max_levels < 1) throw Error("afem_run: max_levels must be positive");
  std::vector<AfemLevel> levels;

  auto mesh = std::make_shared<Triangulation>(bc.initial_mesh());
  P0Function eps(*mesh);
  {
    const double h0 = mesh_stats(*mesh).avg_meshsize;
    eps = P0Function(*mesh, std::clamp(h0 * h0, 1e-14, 1.0 - 1e-8));
  }
  CrFunction warm;

  for (int level = 0; level < cfg.max_levels; ++level) {
    const auto t0 = std::chrono::steady_clock::now();

    RofProblem problem;
    problem.mesh = mesh.get();
    problem.alpha = bc.alpha;
    problem.g_exact = bc.g;
    problem.g_h = p0_project(*mesh, bc.g, cfg.quad_order);
    problem.eps_field = eps;
    problem.dirichlet = bc.dirichlet;
    problem.quad_order = cfg.quad_order;
    problem.jump_rule = cfg.jump_rule;
    problem.admissibility = cfg.admissibility;

    AfemLevel lv;
    lv.level = level;
    lv.mesh = mesh;
    const MeshStats st = mesh_stats(*mesh);
    lv.h = st.avg_meshsize;
    lv.n_vertices = st.n_vertices;

    const FlowResult flow =
        solve_rof(problem, cfg.flow, cfg.flow.warm_start && warm.mesh ? &warm : nullptr);
    lv.u = flow.u;
    lv.flow_steps = flow.steps;
    lv.u_bar = bc.dirichlet ? boundary_interpolant(flow.u) : flow.u;

    const BrokenRtField broken = marini_rof_broken(problem, flow.u);
    for (int e = 0; e < mesh->n_elements(); ++e)
      lv.pi_z_margin = std::max(
          lv.pi_z_margin, norm(broken.const_part[e]) - (1.0 - problem.eps_field.values[e]));

    const DualReport dual = build_dual_report(problem, flow.u);
    lv.z_bar = dual.z_admissible;
    lv.linf_raw = dual.linf_raw;
    lv.flux_mismatch = dual.flux_mismatch;
    lv.primal_energy = dual.primal_energy;
    lv.dual_energy = dual.dual_energy;
    lv.linf_zbar = rt_linf_norm(lv.z_bar);

    // the estimated pair: under the projected convention the Marini field is
    // admissible as is (|Pi z| <= 1 - eps); the pointwise convention takes
    // the scaled field
    const RtField& z_est =
        problem.admissibility == Admissibility::projected ? dual.z_raw : dual.z_admissible;
    RofProblem problem_est = problem;
    if (!cfg.estimator_exact_g) problem_est.g_exact = nullptr;
    const EstimatorReport est = eta_cr(problem_est, lv.u_bar, z_est);
    lv.eta_sq = est.eta_sq_global;
    lv.tv_term = est.tv_term;
    lv.coupling_term = est.coupling_term;
    lv.fidelity_term = est.fidelity_term;
    if (bc.exact) lv.rho_tilde_sq = rho_tilde(problem, lv.u_bar, z_est, *bc.exact);

    lv.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    levels.push_back(lv);

    if (lv.eta_sq <= cfg.eps_stop_global || level + 1 == cfg.max_levels) break;

    // local indicators of exactly-optimal elements cancel to rounding noise
    std::vector<double> indicators = est.eta_sq_local;
    for (double& v : indicators) v = std::max(0.0, v);
    const std::vector<int> marked = doerfler_mark(indicators, cfg.theta);
    if (marked.empty()) break;
    RefineResult ref = refine(*mesh, marked);
    auto next = std::make_shared<Triangulation>(std::move(ref.mesh));

    const P0Function g_h_next = p0_project(*next, bc.g, cfg.quad_order);
    eps = update_epsilon(cfg.eps_strategy, *next, ref.parent, p0_project(flow.u), g_h_next,
                         bc.alpha);
    if (cfg.flow.warm_start) warm = prolong(flow.u, *next, ref.parent);
    mesh = next;
  }
  return levels;
}

}  // namespace tvfem
