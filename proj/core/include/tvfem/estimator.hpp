#pragma once

#include "tvfem/convex.hpp"
#include "tvfem/rof.hpp"

namespace tvfem {

// Dual reconstruction at a (possibly inexact) minimizer.
struct DualReport {
  RtField z_raw;         // Marini field, side fluxes averaged to conformity
  RtField z_admissible;  // z_raw scaled into the unit ball
  double linf_raw = 0.0;
  double flux_mismatch = 0.0;  // inter-element normal-flux gap before averaging
  double primal_energy = 0.0;
  double dual_energy = 0.0;   // at z_raw
  double duality_gap = 0.0;   // primal - dual
};

// Element-wise Marini field z|_T = w_T grad u + (alpha(Pi u - g_h)/d)(x - x_T);
// its element divergence equals alpha(Pi u - g_h) identically.
BrokenRtField marini_rof_broken(const RofProblem& problem, const CrFunction& u);

// Conforming version: interior side fluxes averaged; boundary fluxes zeroed
// when Gamma_N is the whole boundary (no Dirichlet condition).
ConformResult marini_rof(const RofProblem& problem, const CrFunction& u);

DualReport build_dual_report(const RofProblem& problem, const CrFunction& u);

// z / max{1, ||z||_Linf}
RtField scale_to_ball(const RtField& z);

// D_{h,eps}(y) with the conjugate f*_eps; -inf when |Pi y| exceeds 1-eps.
double dual_energy_reg(const RofProblem& problem, const RtField& y);

// Unregularized dual energy; -inf when |Pi y| exceeds 1.
double dual_energy_unreg(const RofProblem& problem, const RtField& y);

struct EstimatorReport {
  double eta_sq_global = 0.0;
  std::vector<double> eta_sq_local;
  double tv_term = 0.0;        // ||grad_h v||_L1 + jump part
  double coupling_term = 0.0;  // -(grad_h v, Pi_h y)
  double fidelity_term = 0.0;  // (1/2alpha)||div y - alpha(v-g)||^2
  double admissibility_violation = 0.0;  // max(0, ||y||_Linf - 1)
};

// Primal-dual estimator for CR/RT pairs. Interior jump contributions are
// halved between the two adjacent elements so the local indicators sum to the
// global value; boundary traces enter only for Gamma_D = boundary. The exact
// g callback is used in the fidelity term when available, g_h otherwise.
EstimatorReport eta_cr(const RofProblem& problem, const CrFunction& v, const RtField& y);

using VectorField = std::function<Vec(const Vec&)>;

// W^{1,1} representation of the estimator for a smooth v given by callbacks.
double eta_w11(const RofProblem& problem, const ScalarField& v, const VectorField& grad_v,
               const RtField& y, int order = 3);

struct ExactSolution;  // bench.hpp

// Error quantity (alpha/2)||v - u||^2 + (1/2alpha)||div y - div z||^2 against
// the exact solution pair; a lower bound for the optimal convexity measures.
double rho_tilde(const RofProblem& problem, const CrFunction& v, const RtField& y,
                 const ExactSolution& exact);

}  // namespace tvfem
