#include "tvfem/quadrature.hpp"

#include <cmath>

#include "tvfem/linalg.hpp"

namespace tvfem {

namespace {

QuadRule centroid_rule(int dim)
{
  QuadRule r;
  const double b = 1.0 / (dim + 1);
  r.points.push_back({b, b, b, dim == 3 ? b : 0.0});
  r.weights.push_back(1.0);
  return r;
}

void push_perms3(QuadRule& r, double a, double b, double w)
{
  r.points.push_back({a, b, b, 0});
  r.points.push_back({b, a, b, 0});
  r.points.push_back({b, b, a, 0});
  r.weights.insert(r.weights.end(), 3, w);
}

void push_perms4(QuadRule& r, double a, double b, double w)
{
  r.points.push_back({a, b, b, b});
  r.points.push_back({b, a, b, b});
  r.points.push_back({b, b, a, b});
  r.points.push_back({b, b, b, a});
  r.weights.insert(r.weights.end(), 4, w);
}

QuadRule tri_rule(int order)
{
  QuadRule r;
  switch (order) {
    case 1:
      return centroid_rule(2);
    case 2:
      push_perms3(r, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
      return r;
    case 3:
      r = centroid_rule(2);
      r.weights[0] = -27.0 / 48.0;
      push_perms3(r, 3.0 / 5.0, 1.0 / 5.0, 25.0 / 48.0);
      return r;
    default: {  // degree 5, 7 points
      r = centroid_rule(2);
      r.weights[0] = 9.0 / 40.0;
      const double s15 = std::sqrt(15.0);
      push_perms3(r, 1.0 - 2.0 * (6.0 - s15) / 21.0, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
      push_perms3(r, 1.0 - 2.0 * (6.0 + s15) / 21.0, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
      return r;
    }
  }
}

// Degree-5 tetrahedron rule via the collapsed (Duffy) Gauss product: with
// four Gauss points per axis the mapped integrand, Jacobian included, is
// integrated exactly for total degree <= 5.
QuadRule tet_duffy_rule()
{
  const double x1 = 0.3399810435848563, x2 = 0.8611363115940526;
  const double w1 = 0.6521451548625461, w2 = 0.3478548451374538;
  const double gp[4] = {0.5 * (1 - x2), 0.5 * (1 - x1), 0.5 * (1 + x1), 0.5 * (1 + x2)};
  const double gw[4] = {0.5 * w2, 0.5 * w1, 0.5 * w1, 0.5 * w2};

  QuadRule r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        const double u = gp[i], v = gp[j], w = gp[k];
        const double x = u;
        const double y = v * (1 - u);
        const double z = w * (1 - u) * (1 - v);
        const double jac = (1 - u) * (1 - u) * (1 - v);
        r.points.push_back({1 - x - y - z, x, y, z});
        // reference tet volume is 1/6; weights are normalised to sum to one
        r.weights.push_back(6.0 * jac * gw[i] * gw[j] * gw[k]);
      }
  return r;
}

QuadRule tet_rule(int order)
{
  QuadRule r;
  switch (order) {
    case 1:
      return centroid_rule(3);
    case 2: {
      const double a = (5.0 + 3.0 * std::sqrt(5.0)) / 20.0;
      const double b = (5.0 - std::sqrt(5.0)) / 20.0;
      push_perms4(r, a, b, 0.25);
      return r;
    }
    case 3:
      r = centroid_rule(3);
      r.weights[0] = -4.0 / 5.0;
      push_perms4(r, 0.5, 1.0 / 6.0, 9.0 / 20.0);
      return r;
    default:
      return tet_duffy_rule();
  }
}

}  // namespace

const QuadRule& simplex_rule(int dim, int order)
{
  if (order < 1 || order > 5) throw Error("simplex_rule: unsupported order");
  static const std::array<QuadRule, 5> tri = {tri_rule(1), tri_rule(2), tri_rule(3), tri_rule(4),
                                              tri_rule(5)};
  static const std::array<QuadRule, 5> tet = {tet_rule(1), tet_rule(2), tet_rule(3), tet_rule(4),
                                              tet_rule(5)};
  if (dim == 2) return tri[order - 1];
  if (dim == 3) return tet[order - 1];
  throw Error("simplex_rule: dim must be 2 or 3");
}

double integrate_element(const Triangulation& mesh, int e, const ScalarField& f, int order)
{
  const QuadRule& rule = simplex_rule(mesh.dim, order);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    s += rule.weights[q] * f(barycentric_to_point(mesh, e, rule.points[q]));
  return mesh.volume[e] * s;
}

namespace {

double refined_sum(const Vec* v, int n_verts, const ScalarField& f, int depth)
{
  if (depth == 0) {
    Vec c{0, 0, 0};
    for (int i = 0; i < n_verts; ++i) c += v[i];
    return f((1.0 / n_verts) * c);
  }
  double s = 0.0;
  if (n_verts == 3) {
    const Vec m01 = 0.5 * (v[0] + v[1]), m02 = 0.5 * (v[0] + v[2]), m12 = 0.5 * (v[1] + v[2]);
    const Vec kids[4][3] = {
        {v[0], m01, m02}, {v[1], m01, m12}, {v[2], m02, m12}, {m01, m12, m02}};
    for (const auto& k : kids) s += refined_sum(k, 3, f, depth - 1);
    return s / 4.0;
  }
  // tetrahedron: four corners plus the octahedron as four tetrahedra
  const Vec m01 = 0.5 * (v[0] + v[1]), m02 = 0.5 * (v[0] + v[2]), m03 = 0.5 * (v[0] + v[3]);
  const Vec m12 = 0.5 * (v[1] + v[2]), m13 = 0.5 * (v[1] + v[3]), m23 = 0.5 * (v[2] + v[3]);
  const Vec kids[8][4] = {{v[0], m01, m02, m03}, {v[1], m01, m12, m13}, {v[2], m02, m12, m23},
                          {v[3], m03, m13, m23}, {m01, m23, m02, m03}, {m01, m23, m03, m13},
                          {m01, m23, m13, m12}, {m01, m23, m12, m02}};
  for (const auto& k : kids) s += refined_sum(k, 4, f, depth - 1);
  return s / 8.0;
}

}  // namespace

double integrate_element_refined(const Triangulation& mesh, int e, const ScalarField& f,
                                 int depth)
{
  Vec v[4];
  for (int i = 0; i <= mesh.dim; ++i) v[i] = mesh.vertices[mesh.elements[e][i]];
  return mesh.volume[e] * refined_sum(v, mesh.dim + 1, f, std::max(0, depth));
}

}  // namespace tvfem
