#include "tvfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <unordered_map>

#include "tvfem/linalg.hpp"

namespace tvfem {

namespace {

double element_volume(int dim, const std::vector<Vec>& verts, const std::array<int, 4>& el)
{
  if (dim == 2) {
    const Vec a = verts[el[1]] - verts[el[0]];
    const Vec b = verts[el[2]] - verts[el[0]];
    return 0.5 * (a[0] * b[1] - a[1] * b[0]);
  }
  const Vec a = verts[el[1]] - verts[el[0]];
  const Vec b = verts[el[2]] - verts[el[0]];
  const Vec c = verts[el[3]] - verts[el[0]];
  return dot(cross(a, b), c) / 6.0;
}

std::array<int, 3> face_key(int dim, const std::array<int, 4>& el, int opposite)
{
  std::array<int, 3> key{-1, -1, -1};
  int k = 0;
  for (int j = 0; j <= dim; ++j)
    if (j != opposite) key[k++] = el[j];
  std::sort(key.begin(), key.begin() + dim);
  return key;
}

struct KeyHash {
  std::size_t operator()(const std::array<int, 3>& k) const
  {
    std::size_t h = 1469598103934665603ull;
    for (int v : k) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

Triangulation make_triangulation(int dim, std::vector<Vec> vertices,
                                 std::vector<std::array<int, 4>> elements,
                                 const BoundaryPredicate& dirichlet)
{
  if (dim != 2 && dim != 3) throw Error("make_triangulation: dim must be 2 or 3");

  Triangulation m;
  m.dim = dim;
  m.vertices = std::move(vertices);
  m.elements = std::move(elements);
  m.generation.assign(m.elements.size(), 0);

  // positive orientation
  for (auto& el : m.elements) {
    double vol = element_volume(dim, m.vertices, el);
    if (vol == 0.0) throw Error("make_triangulation: degenerate element");
    if (vol < 0.0) std::swap(el[0], el[1]);
  }

  // side extraction with canonical sorted keys
  std::unordered_map<std::array<int, 3>, int, KeyHash> side_of;
  side_of.reserve(m.elements.size() * (dim + 1));
  m.element_sides.assign(m.elements.size(), {-1, -1, -1, -1});
  for (int e = 0; e < m.n_elements(); ++e) {
    for (int i = 0; i <= dim; ++i) {
      const auto key = face_key(dim, m.elements[e], i);
      auto [it, inserted] = side_of.try_emplace(key, m.n_sides());
      if (inserted) {
        m.sides.push_back(key);
        m.side_elements.push_back({e, -1});
      } else {
        auto& adj = m.side_elements[it->second];
        if (adj[1] >= 0) throw Error("make_triangulation: side shared by more than two elements");
        adj[1] = e;
        if (adj[0] > adj[1]) std::swap(adj[0], adj[1]);
      }
      m.element_sides[e][i] = it->second;
    }
  }

  // geometry cache
  const int ne = m.n_elements();
  const int ns = m.n_sides();
  m.volume.resize(ne);
  m.centroid.resize(ne);
  m.domain_volume = 0.0;
  for (int e = 0; e < ne; ++e) {
    m.volume[e] = element_volume(dim, m.vertices, m.elements[e]);
    m.domain_volume += m.volume[e];
    Vec c{0, 0, 0};
    for (int i = 0; i <= dim; ++i) c += m.vertices[m.elements[e][i]];
    m.centroid[e] = (1.0 / (dim + 1)) * c;
  }
  m.side_measure.resize(ns);
  m.side_normal.resize(ns);
  m.side_center.resize(ns);
  for (int s = 0; s < ns; ++s) {
    const auto& sv = m.sides[s];
    Vec c{0, 0, 0};
    for (int i = 0; i < dim; ++i) c += m.vertices[sv[i]];
    m.side_center[s] = (1.0 / dim) * c;

    Vec n{0, 0, 0};
    if (dim == 2) {
      const Vec t = m.vertices[sv[1]] - m.vertices[sv[0]];
      m.side_measure[s] = norm(t);
      n = {t[1], -t[0], 0.0};
    } else {
      const Vec a = m.vertices[sv[1]] - m.vertices[sv[0]];
      const Vec b = m.vertices[sv[2]] - m.vertices[sv[0]];
      n = cross(a, b);
      m.side_measure[s] = 0.5 * norm(n);
    }
    // orient out of the lower-indexed adjacent element
    const int e0 = m.side_elements[s][0];
    int opp = -1;
    for (int i = 0; i <= dim; ++i)
      if (m.element_sides[e0][i] == s) opp = m.elements[e0][i];
    const Vec away = m.side_center[s] - m.vertices[opp];
    const double scale = 1.0 / norm(n);
    n = (dot(n, away) >= 0 ? scale : -scale) * n;
    m.side_normal[s] = n;
  }
  m.sigma.assign(ne, {0, 0, 0, 0});
  for (int e = 0; e < ne; ++e) {
    for (int i = 0; i <= dim; ++i) {
      const int s = m.element_sides[e][i];
      const Vec away = m.side_center[s] - m.vertices[m.elements[e][i]];
      m.sigma[e][i] = dot(m.side_normal[s], away) >= 0 ? 1.0 : -1.0;
    }
  }

  m.boundary_tag.assign(ns, SideTag::interior);
  for (int s = 0; s < ns; ++s) {
    if (!m.side_on_boundary(s)) continue;
    const bool dir = dirichlet ? dirichlet(m.side_center[s]) : true;
    m.boundary_tag[s] = dir ? SideTag::dirichlet : SideTag::neumann;
  }
  return m;
}

Triangulation uniform_triangulation(int dim, const Box& box, int subdivisions,
                                    const BoundaryPredicate& dirichlet)
{
  if (subdivisions < 1) throw Error("uniform_triangulation: subdivisions must be >= 1");
  const int n = subdivisions;
  for (int k = 0; k < dim; ++k)
    if (!(box.hi[k] > box.lo[k])) throw Error("uniform_triangulation: degenerate box");

  std::vector<Vec> verts;
  std::vector<std::array<int, 4>> cells;

  if (dim == 2) {
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        verts.push_back({box.lo[0] + (box.hi[0] - box.lo[0]) * i / n,
                         box.lo[1] + (box.hi[1] - box.lo[1]) * j / n, 0.0});
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        // uniform diagonal (i,j)-(i+1,j+1)
        cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), -1});
        cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1), -1});
      }
  } else {
    auto vid = [n](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
          verts.push_back({box.lo[0] + (box.hi[0] - box.lo[0]) * i / n,
                           box.lo[1] + (box.hi[1] - box.lo[1]) * j / n,
                           box.lo[2] + (box.hi[2] - box.lo[2]) * k / n});
    // Kuhn subdivision: one tetrahedron per permutation of the axes
    constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          for (const auto& p : perms) {
            int c[3] = {i, j, k};
            std::array<int, 4> tet{};
            tet[0] = vid(c[0], c[1], c[2]);
            c[p[0]]++;
            tet[1] = vid(c[0], c[1], c[2]);
            c[p[1]]++;
            tet[2] = vid(c[0], c[1], c[2]);
            c[p[2]]++;
            tet[3] = vid(c[0], c[1], c[2]);
            cells.push_back(tet);
          }
  }
  return make_triangulation(dim, std::move(verts), std::move(cells), dirichlet);
}

MeshStats mesh_stats(const Triangulation& mesh)
{
  MeshStats st;
  st.n_vertices = mesh.n_vertices();
  st.per_element_diameter.resize(mesh.n_elements());
  double hsum = 0.0;
  double worst = 0.0;
  const int d = mesh.dim;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& el = mesh.elements[e];
    double diam = 0.0;
    for (int i = 0; i <= d; ++i)
      for (int j = i + 1; j <= d; ++j)
        diam = std::max(diam, norm(mesh.vertices[el[i]] - mesh.vertices[el[j]]));
    st.per_element_diameter[e] = diam;
    hsum += diam;

    double boundary_measure = 0.0;
    for (int i = 0; i <= d; ++i) boundary_measure += mesh.side_measure[mesh.element_sides[e][i]];
    // inscribed-ball diameter: twice the inradius d*|T|/|boundary of T|
    const double rho = 2.0 * d * mesh.volume[e] / boundary_measure;
    worst = std::max(worst, diam / rho);
  }
  st.avg_meshsize = hsum / mesh.n_elements();
  st.chunkiness = worst;
  return st;
}

bool is_conforming(const Triangulation& mesh)
{
  const int d = mesh.dim;
  std::unordered_map<std::array<int, 3>, int, KeyHash> count;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (!(mesh.volume[e] > 0.0)) return false;
    for (int i = 0; i <= d; ++i) count[face_key(d, mesh.elements[e], i)]++;
  }
  if (static_cast<int>(count.size()) != mesh.n_sides()) return false;
  for (int s = 0; s < mesh.n_sides(); ++s) {
    auto it = count.find(mesh.sides[s]);
    if (it == count.end()) return false;
    const int expected = mesh.side_on_boundary(s) ? 1 : 2;
    if (it->second != expected) return false;
    if (mesh.side_on_boundary(s) != (mesh.boundary_tag[s] != SideTag::interior)) return false;
  }
  // hanging vertices: a once-counted side whose midpoint is an existing vertex
  struct CoordHash {
    std::size_t operator()(const Vec& v) const
    {
      std::size_t h = 0;
      for (double x : v) {
        std::size_t b;
        std::memcpy(&b, &x, sizeof(b));
        h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      }
      return h;
    }
  };
  std::unordered_map<Vec, int, CoordHash> vert_at;
  for (int v = 0; v < mesh.n_vertices(); ++v) vert_at.emplace(mesh.vertices[v], v);
  for (int s = 0; s < mesh.n_sides(); ++s) {
    if (!mesh.side_on_boundary(s)) continue;
    const auto& sv = mesh.sides[s];
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        const Vec mid = 0.5 * (mesh.vertices[sv[i]] + mesh.vertices[sv[j]]);
        if (vert_at.count(mid)) return false;
      }
  }
  return true;
}

}  // namespace tvfem
