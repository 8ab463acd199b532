#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <utility>

#include "tvfem/linalg.hpp"
#include "tvfem/mesh.hpp"

namespace tvfem {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

// Reference side of a 2D element: longest edge, ties broken by side index so
// that neighbours agree on shared edges.
int reference_side(const Triangulation& m, int e)
{
  int best = -1;
  for (int i = 0; i < 3; ++i) {
    const int s = m.element_sides[e][i];
    if (best < 0) {
      best = s;
      continue;
    }
    const double ds = m.side_measure[s] - m.side_measure[best];
    if (ds > 1e-14 || (ds > -1e-14 && s < best)) best = s;
  }
  return best;
}

struct TagMap {
  std::map<EdgeKey, SideTag> tags;  // boundary facet edges of the old mesh and their splits

  void split(int a, int b, int m)
  {
    auto it = tags.find(edge_key(a, b));
    if (it == tags.end()) return;
    const SideTag t = it->second;
    tags.emplace(edge_key(a, m), t);
    tags.emplace(edge_key(m, b), t);
  }
  SideTag lookup(int a, int b) const
  {
    auto it = tags.find(edge_key(a, b));
    return it == tags.end() ? SideTag::interior : it->second;
  }
};

RefineResult refine_2d(const Triangulation& mesh, const std::vector<int>& marked)
{
  const int ne = mesh.n_elements();
  std::vector<char> split(mesh.n_sides(), 0);

  for (int e : marked) {
    if (e < 0 || e >= ne) throw Error("refine: marked element out of range");
    for (int i = 0; i < 3; ++i) split[mesh.element_sides[e][i]] = 1;
  }

  // closure: any element with a split edge must have its reference edge split
  std::deque<int> work;
  for (int e = 0; e < ne; ++e) work.push_back(e);
  while (!work.empty()) {
    const int e = work.front();
    work.pop_front();
    bool any = false;
    for (int i = 0; i < 3; ++i) any = any || split[mesh.element_sides[e][i]];
    if (!any) continue;
    const int ref = reference_side(mesh, e);
    if (!split[ref]) {
      split[ref] = 1;
      for (int a : mesh.side_elements[ref])
        if (a >= 0) work.push_back(a);
    }
  }

  std::vector<Vec> verts = mesh.vertices;
  std::map<EdgeKey, int> midpoint;
  TagMap tagmap;
  for (int s = 0; s < mesh.n_sides(); ++s)
    if (mesh.side_on_boundary(s))
      tagmap.tags.emplace(edge_key(mesh.sides[s][0], mesh.sides[s][1]), mesh.boundary_tag[s]);
  for (int s = 0; s < mesh.n_sides(); ++s) {
    if (!split[s]) continue;
    const int a = mesh.sides[s][0];
    const int b = mesh.sides[s][1];
    const int m = static_cast<int>(verts.size());
    midpoint[edge_key(a, b)] = m;
    verts.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    tagmap.split(a, b, m);
  }
  auto mid = [&](int a, int b) { return midpoint.at(edge_key(a, b)); };
  auto is_split = [&](int a, int b) { return midpoint.count(edge_key(a, b)) > 0; };

  std::vector<std::array<int, 4>> cells;
  std::vector<int> parent;
  std::vector<int> gen;
  auto emit = [&](int p, int v0, int v1, int v2, bool refined) {
    cells.push_back({v0, v1, v2, -1});
    parent.push_back(p);
    gen.push_back(mesh.generation[p] + (refined ? 1 : 0));
  };

  for (int e = 0; e < ne; ++e) {
    const int ref = reference_side(mesh, e);
    int n_split = 0;
    for (int i = 0; i < 3; ++i) n_split += split[mesh.element_sides[e][i]] ? 1 : 0;

    // relabel so that (v0, v1) is the reference edge
    int li = -1;
    for (int i = 0; i < 3; ++i)
      if (mesh.element_sides[e][i] == ref) li = i;
    const auto& el = mesh.elements[e];
    const int v2 = el[li];
    const int v0 = el[(li + 1) % 3];
    const int v1 = el[(li + 2) % 3];

    if (n_split == 0) {
      emit(e, v0, v1, v2, false);
    } else if (n_split == 3) {  // red
      const int m01 = mid(v0, v1), m12 = mid(v1, v2), m02 = mid(v0, v2);
      emit(e, v0, m01, m02, true);
      emit(e, v1, m12, m01, true);
      emit(e, v2, m02, m12, true);
      emit(e, m01, m12, m02, true);
    } else if (n_split == 1) {  // green: bisect the reference edge
      const int m01 = mid(v0, v1);
      emit(e, v2, v0, m01, true);
      emit(e, v1, v2, m01, true);
    } else {  // blue: reference edge plus one other
      const int m01 = mid(v0, v1);
      if (is_split(v1, v2)) {
        const int m12 = mid(v1, v2);
        emit(e, v2, v0, m01, true);
        emit(e, m01, v1, m12, true);
        emit(e, m01, m12, v2, true);
      } else if (is_split(v0, v2)) {
        const int m02 = mid(v0, v2);
        emit(e, v1, v2, m01, true);
        emit(e, m01, v2, m02, true);
        emit(e, m01, m02, v0, true);
      } else {
        throw Error("refine: inconsistent split pattern");
      }
    }
  }

  RefineResult out;
  out.mesh = make_triangulation(2, std::move(verts), std::move(cells), nullptr);
  out.parent = std::move(parent);
  for (int c = 0; c < out.mesh.n_elements(); ++c) out.mesh.generation[c] = gen[c];
  for (int s = 0; s < out.mesh.n_sides(); ++s)
    if (out.mesh.side_on_boundary(s))
      out.mesh.boundary_tag[s] = tagmap.lookup(out.mesh.sides[s][0], out.mesh.sides[s][1]);
  return out;
}

// Uniform red refinement of tetrahedra: four corner children plus the inner
// octahedron cut along its shortest diagonal.
RefineResult refine_3d_uniform(const Triangulation& mesh)
{
  std::vector<Vec> verts = mesh.vertices;
  std::map<EdgeKey, int> midpoint;
  auto mid = [&](int a, int b) {
    const EdgeKey k = edge_key(a, b);
    auto it = midpoint.find(k);
    if (it != midpoint.end()) return it->second;
    const int m = static_cast<int>(verts.size());
    verts.push_back(0.5 * (mesh.vertices[k.first] + mesh.vertices[k.second]));
    midpoint.emplace(k, m);
    return m;
  };

  // boundary-face tags keyed by the (sorted) vertex triple
  std::map<std::array<int, 3>, SideTag> face_tags;
  for (int s = 0; s < mesh.n_sides(); ++s)
    if (mesh.side_on_boundary(s)) face_tags.emplace(mesh.sides[s], mesh.boundary_tag[s]);

  std::vector<std::array<int, 4>> cells;
  std::vector<int> parent;
  cells.reserve(mesh.n_elements() * 8);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& el = mesh.elements[e];
    const int v0 = el[0], v1 = el[1], v2 = el[2], v3 = el[3];
    const int m01 = mid(v0, v1), m02 = mid(v0, v2), m03 = mid(v0, v3);
    const int m12 = mid(v1, v2), m13 = mid(v1, v3), m23 = mid(v2, v3);

    auto emit = [&](int a, int b, int c, int d) {
      cells.push_back({a, b, c, d});
      parent.push_back(e);
    };
    emit(v0, m01, m02, m03);
    emit(v1, m01, m12, m13);
    emit(v2, m02, m12, m23);
    emit(v3, m03, m13, m23);

    const double d0 = norm(verts[m01] - verts[m23]);
    const double d1 = norm(verts[m02] - verts[m13]);
    const double d2 = norm(verts[m03] - verts[m12]);
    int p, q;
    std::array<int, 4> eq{};
    if (d1 <= d0 && d1 <= d2) {
      p = m02, q = m13, eq = {m01, m03, m23, m12};
    } else if (d2 <= d0 && d2 <= d1) {
      p = m03, q = m12, eq = {m01, m02, m23, m13};
    } else {
      p = m01, q = m23, eq = {m02, m03, m13, m12};
    }
    for (int i = 0; i < 4; ++i) emit(p, q, eq[i], eq[(i + 1) % 4]);
  }

  RefineResult out;
  out.mesh = make_triangulation(3, std::move(verts), std::move(cells), nullptr);
  out.parent = std::move(parent);
  for (int c = 0; c < out.mesh.n_elements(); ++c)
    out.mesh.generation[c] = mesh.generation[out.parent[c]] + 1;
  // a boundary face of a child lies inside exactly one boundary face of the parent
  for (int s = 0; s < out.mesh.n_sides(); ++s) {
    if (!out.mesh.side_on_boundary(s)) continue;
    const int e = out.mesh.side_elements[s][0];
    const int pe = out.parent[e];
    SideTag tag = SideTag::dirichlet;
    double best = -1.0;
    for (int i = 0; i < 4; ++i) {
      const int ps = mesh.element_sides[pe][i];
      if (!mesh.side_on_boundary(ps)) continue;
      const double align = std::abs(dot(mesh.side_normal[ps], out.mesh.side_normal[s]));
      const double dist = std::abs(dot(mesh.side_normal[ps], out.mesh.side_center[s] - mesh.side_center[ps]));
      if (align > 1.0 - 1e-10 && dist < 1e-12 && align > best) {
        best = align;
        tag = mesh.boundary_tag[ps];
      }
    }
    if (best < 0) throw Error("refine: could not inherit boundary tag");
    out.mesh.boundary_tag[s] = tag;
  }
  return out;
}

}  // namespace

RefineResult refine(const Triangulation& mesh, const std::vector<int>& marked)
{
  if (mesh.dim == 2) return refine_2d(mesh, marked);
  if (marked.empty()) {
    RefineResult out;
    out.mesh = mesh;
    out.parent.resize(mesh.n_elements());
    for (int e = 0; e < mesh.n_elements(); ++e) out.parent[e] = e;
    return out;
  }
  return refine_3d_uniform(mesh);
}

RefineResult refine_uniform(const Triangulation& mesh)
{
  if (mesh.dim == 3) return refine_3d_uniform(mesh);
  std::vector<int> all(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) all[e] = e;
  return refine_2d(mesh, all);
}

}  // namespace tvfem
