#pragma once

#include <array>
#include <functional>
#include <vector>

#include "tvfem/mesh.hpp"

namespace tvfem {

// Quadrature rule on the reference simplex in barycentric coordinates;
// weights sum to one and scale with the element volume.
struct QuadRule {
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;
};

// Rule with polynomial exactness >= order, order in {1..5}.
const QuadRule& simplex_rule(int dim, int order);

using ScalarField = std::function<double(const Vec&)>;

// \int_T f dx by the rule of the requested exactness.
double integrate_element(const Triangulation& mesh, int e, const ScalarField& f, int order);

// \int_T f dx by midpoint rules on a uniform 4^depth (2D) / 8^depth (3D)
// red subdivision; robust for integrands with jumps inside the element.
double integrate_element_refined(const Triangulation& mesh, int e, const ScalarField& f,
                                 int depth);

inline Vec barycentric_to_point(const Triangulation& mesh, int e, const std::array<double, 4>& b)
{
  Vec x{0, 0, 0};
  for (int i = 0; i <= mesh.dim; ++i) x += b[i] * mesh.vertices[mesh.elements[e][i]];
  return x;
}

}  // namespace tvfem
