#pragma once

#include <memory>
#include <vector>

#include "tvfem/bench.hpp"

namespace tvfem {

enum class EpsStrategy { local, global };

struct AfemConfig {
  double theta = 0.5;            // Doerfler parameter in (0,1]
  EpsStrategy eps_strategy = EpsStrategy::global;
  double eps_stop_global = 0.0;  // stop when eta^2 drops below this
  int max_levels = 10;
  FlowConfig flow;
  int quad_order = 3;
  JumpRule jump_rule = JumpRule::midpoint;
  Admissibility admissibility = Admissibility::projected;
  bool estimator_exact_g = false;  // fidelity term against g_h (false) or the callback
};

struct AfemLevel {
  int level = 0;
  std::shared_ptr<const Triangulation> mesh;
  CrFunction u;      // gradient-flow output
  CrFunction u_bar;  // boundary post-processed
  RtField z_bar;     // scaled admissible dual field
  double eta_sq = 0.0;
  double rho_tilde_sq = -1.0;  // -1 when no exact solution is available
  double linf_zbar = 0.0;
  double linf_raw = 0.0;
  double flux_mismatch = 0.0;
  double pi_z_margin = 0.0;  // max_T (|Pi z| - (1-eps_T)) of the raw field, <= 0
  double primal_energy = 0.0;
  double dual_energy = 0.0;
  double tv_term = 0.0;
  double coupling_term = 0.0;
  double fidelity_term = 0.0;
  int n_vertices = 0;
  double h = 0.0;
  int flow_steps = 0;
  double wall_time = 0.0;
};

// Minimal-cardinality subset of elements whose indicator sum reaches
// theta^2 * total; greedy on the descending sort, ties by element index.
std::vector<int> doerfler_mark(const std::vector<double>& indicators, double theta);

// Element-wise regularization for the next level. The local rule evaluates
// the previous projected iterate on the parent element of each new cell.
P0Function update_epsilon(EpsStrategy strategy, const Triangulation& mesh_new,
                          const std::vector<int>& parent, const P0Function& pi_u_prev,
                          const P0Function& g_h_new, double alpha);

// Solve -> Estimate -> Mark -> Refine loop on a benchmark case.
std::vector<AfemLevel> afem_run(const BenchmarkCase& bc, const AfemConfig& cfg);

}  // namespace tvfem
