#pragma once

#include <functional>
#include <limits>
#include <utility>

#include "tvfem/fem.hpp"

namespace tvfem {

constexpr double infinity = std::numeric_limits<double>::infinity();

// Regularization of the modulus: f_eps(t) = (1-eps) sqrt(t^2 + eps^2).
// Its derivative is bounded by 1-eps, which keeps the reconstructed flux
// close to the unit ball.
struct Regularization {
  double eps;

  explicit Regularization(double e) : eps(e)
  {
    if (!(e > 0.0 && e < 1.0)) throw Error("Regularization: eps must lie in (0,1)");
  }

  double value(double t) const { return (1.0 - eps) * regularized_modulus(t); }

  // Bounded by 1-eps in exact arithmetic; evaluating the quotient first
  // (with the clamped denominator) keeps the bound under rounding as well.
  double derivative(double t) const { return (1.0 - eps) * (t / regularized_modulus(t)); }

  // w(t) = f'(t)/t, evaluated without the removable 0/0.
  double weight(double t) const { return (1.0 - eps) / regularized_modulus(t); }

  // sqrt(t^2 + eps^2), never below max(|t|, eps)
  double regularized_modulus(double t) const
  {
    return std::max({std::sqrt(t * t + eps * eps), std::abs(t), eps});
  }

  // Fenchel conjugate: -eps sqrt((1-eps)^2 - s^2) for |s| <= 1-eps, +inf else.
  double conjugate(double s) const
  {
    const double r = (1.0 - eps) * (1.0 - eps) - s * s;
    if (r < 0.0) return infinity;
    return -eps * std::sqrt(r);
  }

  // derivative of the conjugate on the interior of its domain
  double conjugate_derivative(double s) const
  {
    const double r = (1.0 - eps) * (1.0 - eps) - s * s;
    if (r <= 0.0) return infinity;
    return eps * s / std::sqrt(r);
  }
};

inline std::pair<double, double> feps_eval(const Regularization& reg, double t)
{
  return {reg.value(t), reg.derivative(t)};
}

inline double feps_conjugate(const Regularization& reg, double s) { return reg.conjugate(s); }

// Smooth convex energy density phi with conjugate, for the generic duality
// machinery. All callbacks take/return spatial vectors.
struct SmoothDensity {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<double(const Vec&)> conjugate_value;
  std::function<Vec(const Vec&)> conjugate_gradient;  // may be empty
};

SmoothDensity quadratic_density();                 // |a|^2/2, self-conjugate
SmoothDensity dirichlet_p_density(double p);       // |a|^p/p
SmoothDensity rof_regularized_density(double eps); // f_eps(|a|)

double bregman_distance(const SmoothDensity& density, const Vec& a, const Vec& b);

// Element-wise (broken) RT0-shaped field a_T + (c_T/d)(x - x_T). Its element
// divergence equals c_T exactly, for any input.
struct BrokenRtField {
  const Triangulation* mesh = nullptr;
  std::vector<Vec> const_part;   // a_T
  std::vector<double> div_part;  // c_T

  // normal flux of the restriction to element e across its local face i,
  // signed by the canonical side normal
  double flux(int e, int i) const
  {
    const Triangulation& m = *mesh;
    const int s = m.element_sides[e][i];
    return dot(const_part[e], m.side_normal[s]) +
           m.sigma[e][i] * div_part[e] * m.volume[e] / ((m.dim + 1) * m.side_measure[s]);
  }

  Vec value(int e, const Vec& x) const
  {
    return const_part[e] + (div_part[e] / mesh->dim) * (x - mesh->centroid[e]);
  }
};

// Generalized Marini reconstruction of the dual field:
// z|_T = Dphi(grad u|_T) + (dpsi_T / d)(id - Pi id).
BrokenRtField marini_forward(const SmoothDensity& density, const P0Vector& grad_u,
                             const P0Function& dpsi);

struct ConformResult {
  RtField field;
  double max_mismatch = 0.0;  // largest inter-element normal-flux gap
};

// Single-valued side fluxes by averaging the two element contributions;
// boundary fluxes are zeroed when the field must lie in RT0_N.
ConformResult average_to_conforming(const BrokenRtField& broken, bool zero_boundary_fluxes);

struct MariniInverseResult {
  CrFunction u;
  double max_mismatch = 0.0;  // largest side-value gap before averaging
};

// Inverse reconstruction of the primal: u|_T = dpsi_star_T + Dphi*(pi_z_T).(x - x_T),
// sampled at side barycenters and averaged across interior sides.
MariniInverseResult marini_inverse(const SmoothDensity& density, const P0Vector& pi_z,
                                   const P0Function& dpsi_star, const Triangulation& mesh);

}  // namespace tvfem
