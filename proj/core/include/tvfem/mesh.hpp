#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "tvfem/vec.hpp"

namespace tvfem {

enum class SideTag : std::uint8_t { interior, dirichlet, neumann };

struct Box {
  Vec lo{0, 0, 0};
  Vec hi{1, 1, 0};
};

// Conforming simplicial triangulation. Sides are stored with sorted vertex
// indices; the canonical side normal points out of the lower-indexed adjacent
// element (outward on the boundary). Instances are immutable after
// construction; refinement produces a new mesh.
struct Triangulation {
  int dim = 2;
  std::vector<Vec> vertices;
  std::vector<std::array<int, 4>> elements;       // d+1 entries used, positive orientation
  std::vector<std::array<int, 3>> sides;          // d entries used, ascending
  std::vector<std::array<int, 4>> element_sides;  // [e][i] = side opposite local vertex i
  std::vector<std::array<int, 2>> side_elements;  // [lower, higher] (-1 when boundary)
  std::vector<SideTag> boundary_tag;              // per side
  std::vector<int> generation;                    // per element, refinement depth

  // geometry cache, filled by finalize()
  std::vector<double> volume;                  // per element
  std::vector<Vec> centroid;                   // per element
  std::vector<double> side_measure;            // per side
  std::vector<Vec> side_normal;                // canonical unit normal
  std::vector<Vec> side_center;                // side barycenter
  std::vector<std::array<double, 4>> sigma;    // [e][i]: +1 if n_S outward for e on face i
  double domain_volume = 0.0;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_sides() const { return static_cast<int>(sides.size()); }
  bool side_on_boundary(int s) const { return side_elements[s][1] < 0; }

  // Outward normal of element e on its local face i, as sigma * n_S.
  Vec outward_normal(int e, int i) const
  {
    return sigma[e][i] * side_normal[element_sides[e][i]];
  }

  // Gradient of the CR basis function of local face i on element e.
  Vec cr_basis_gradient(int e, int i) const
  {
    const int s = element_sides[e][i];
    return (sigma[e][i] * side_measure[s] / volume[e]) * side_normal[s];
  }
};

using BoundaryPredicate = std::function<bool(const Vec&)>;  // true -> Dirichlet

// Builds connectivity and geometry from raw cells. Throws on non-manifold
// side sets or degenerate elements. The predicate (evaluated at boundary side
// barycenters) selects Dirichlet sides; by default the whole boundary.
Triangulation make_triangulation(int dim, std::vector<Vec> vertices,
                                 std::vector<std::array<int, 4>> elements,
                                 const BoundaryPredicate& dirichlet = nullptr);

// Structured mesh of an axis-aligned box: squares halved by a uniform
// diagonal in 2D, cubes split into six Kuhn tetrahedra in 3D.
Triangulation uniform_triangulation(int dim, const Box& box, int subdivisions,
                                    const BoundaryPredicate& dirichlet = nullptr);

struct MeshStats {
  double avg_meshsize = 0.0;                // h
  std::vector<double> per_element_diameter; // h_T
  double chunkiness = 0.0;                  // max h_T / rho_T
  int n_vertices = 0;
};

MeshStats mesh_stats(const Triangulation& mesh);

struct RefineResult {
  Triangulation mesh;
  std::vector<int> parent;  // per new element, index in the old mesh
};

// Conforming refinement. In 2D: red-green-blue with longest-edge reference
// sides; every marked element is subdivided and the closure keeps the mesh
// conforming. In 3D the mesh is refined uniformly (every tetrahedron split
// into eight) whenever the marked set is nonempty.
RefineResult refine(const Triangulation& mesh, const std::vector<int>& marked);

RefineResult refine_uniform(const Triangulation& mesh);

// Conformity check used by tests and assertions: every side is a face of each
// adjacent element, interior sides have exactly two, boundary exactly one.
bool is_conforming(const Triangulation& mesh);

}  // namespace tvfem
