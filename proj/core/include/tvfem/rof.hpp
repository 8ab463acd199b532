#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "tvfem/convex.hpp"
#include "tvfem/fem.hpp"

namespace tvfem {

// Facet rule for the |[v]| terms of the estimator. CR jumps vanish at side
// barycenters, so the midpoint rule drops them identically; the exact rule
// integrates the affine jump including its vertex oscillation.
enum class JumpRule { midpoint, exact };

// Unit-ball constraint convention for the dual field in the estimator: the
// projected form tests the element means Pi_h y (the constraint of the
// discrete dual functional, automatic for the Marini field by the derivative
// bound), the pointwise form tests the vertex-exact sup norm.
enum class Admissibility { projected, pointwise };

// Regularized, discretized total-variation denoising problem
//   min_v ||f_eps(|grad_h v|)||_L1 + alpha/2 ||Pi_h v - g_h||^2
// over CR functions, with homogeneous Dirichlet values when dirichlet is set.
struct RofProblem {
  const Triangulation* mesh = nullptr;
  double alpha = 1.0;
  P0Function g_h;
  ScalarField g_exact;   // optional callback; empty -> estimator falls back to g_h
  P0Function eps_field;  // element-wise regularization, 0 < eps < 1
  bool dirichlet = true; // Gamma_D = boundary (true) or empty (false)
  int quad_order = 3;
  JumpRule jump_rule = JumpRule::midpoint;
  Admissibility admissibility = Admissibility::projected;

  void validate() const;
};

RofProblem make_problem(const Triangulation& mesh, double alpha, const ScalarField& g,
                        double eps, bool dirichlet, int quad_order = 3);

struct FlowConfig {
  double tau = 1.0;
  double stop_factor = 1.0 / std::sqrt(20.0);
  int max_steps = 10000;
  double stop_absolute = 0.0;  // >0 overrides stop_factor * h
  CgConfig cg;
  bool warm_start = false;     // start from the supplied iterate instead of zero
};

struct FlowResult {
  CrFunction u;
  int steps = 0;
  double final_residual_norm = 0.0;
  std::vector<double> energy_trace;  // I(u^0), I(u^1), ...
  double sum_dtau_sq = 0.0;          // sum_k ||d_tau u^k||^2
};

// I_{h,eps}(v): regularized TV plus fidelity against g_h.
double energy_reg(const RofProblem& problem, const CrFunction& v);

// One semi-implicit step: solves (M/tau + K_w + alpha M_Pi) u = M/tau u_prev + alpha b_g
// with the lagged weight w_T = (1-eps_T)/sqrt(|grad u_prev|^2 + eps_T^2).
CrFunction flow_step(const RofProblem& problem, const FlowConfig& cfg, const CrFunction& u_prev);

// Residual of the Euler-Lagrange equation at u: (r, v) = (w grad u, grad v)
// + alpha (Pi u - g_h, Pi v). Returns r and ||r||_{L2}.
std::pair<CrFunction, double> flow_residual(const RofProblem& problem, const CrFunction& u);

// Gradient flow with residual stopping ||r^k|| <= stop_factor * h.
FlowResult solve_rof(const RofProblem& problem, const FlowConfig& cfg,
                     const CrFunction* initial = nullptr);

}  // namespace tvfem
