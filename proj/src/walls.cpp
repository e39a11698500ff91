#include "dobrushin/walls.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "dobrushin/error.hpp"
#include "json.hpp"

namespace dobrushin {

namespace {

constexpr int kUnset = -3;
constexpr int kVertex = -4;

ProjElement element_at(int X, int Y) {
  const bool xo = (X & 1) != 0;
  const bool yo = (Y & 1) != 0;
  if (xo && yo) return ProjElement::face((X - 1) / 2, (Y - 1) / 2);
  if (xo) return ProjElement::edge((X - 1) / 2, Y / 2, Axis::X);
  return ProjElement::edge(X / 2, (Y - 1) / 2, Axis::Y);
}

std::vector<ProjElement> project_all(const std::vector<Face>& faces) {
  std::vector<ProjElement> out;
  out.reserve(faces.size());
  for (const auto& f : faces) out.push_back(project(f));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint64_t column_key(int x, int y) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
         static_cast<std::uint32_t>(y);
}

// *-connected components of a face set, each sorted canonically.
std::vector<std::vector<Face>> star_components(const std::vector<Face>& faces) {
  std::unordered_map<std::uint64_t, int> idx;
  idx.reserve(faces.size() * 2);
  for (std::size_t i = 0; i < faces.size(); ++i) idx.emplace(faces[i].key(), static_cast<int>(i));
  std::vector<int> comp(faces.size(), -1);
  std::vector<std::vector<Face>> out;
  for (std::size_t s = 0; s < faces.size(); ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<std::size_t> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      out.back().push_back(faces[i]);
      for_each_star_neighbor(faces[i], [&](const Face& g) {
        auto it = idx.find(g.key());
        if (it == idx.end()) return;
        auto j = static_cast<std::size_t>(it->second);
        if (comp[j] < 0) {
          comp[j] = id;
          stack.push_back(j);
        }
      });
    }
    std::sort(out.back().begin(), out.back().end(), FaceKeyLess{});
  }
  return out;
}

// The four plane faces around a lattice vertex.
std::array<PlaneFace, 4> faces_at_vertex(int x, int y) {
  return {PlaneFace{x - 1, y - 1}, PlaneFace{x, y - 1}, PlaneFace{x - 1, y}, PlaneFace{x, y}};
}

std::set<std::pair<int, int>> vertex_set(const std::vector<ProjElement>& proj) {
  std::set<std::pair<int, int>> v;
  for (const auto& e : proj) {
    for (const auto& p : e.vertices()) v.insert(p);
  }
  return v;
}

// Does the closed projection contain edge e of a plane face?
bool closed_contains_edge(const std::vector<ProjElement>& proj, const ProjElement& e) {
  if (std::binary_search(proj.begin(), proj.end(), e)) return true;
  for (const auto& f : faces_of(e)) {
    if (std::binary_search(proj.begin(), proj.end(), ProjElement::face(f.x, f.y))) return true;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t Wall::projected_face_count() const {
  return static_cast<std::size_t>(
      std::count_if(projection.begin(), projection.end(), [](const ProjElement& e) { return e.is_face(); }));
}

Wall make_wall(std::vector<Face> faces, int supporting_height) {
  Wall w;
  std::sort(faces.begin(), faces.end(), FaceKeyLess{});
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
  w.projection = project_all(faces);
  w.faces = std::move(faces);
  w.supporting_height = supporting_height;
  return w;
}

std::vector<PlaneFace> Ceiling::columns() const {
  std::vector<PlaneFace> out;
  out.reserve(faces.size());
  for (const auto& f : faces) out.push_back(PlaneFace{f.anchor.x, f.anchor.y});
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

ComplementRegions::ComplementRegions(const std::vector<ProjElement>& projection) {
  if (projection.empty()) return;
  int xmin = std::numeric_limits<int>::max(), xmax = std::numeric_limits<int>::min();
  int ymin = xmin, ymax = xmax;
  for (const auto& e : projection) {
    const auto [X, Y] = e.midpoint2();
    xmin = std::min(xmin, X);
    xmax = std::max(xmax, X);
    ymin = std::min(ymin, Y);
    ymax = std::max(ymax, Y);
  }
  x0_ = xmin - 3;
  y0_ = ymin - 3;
  w_ = xmax - xmin + 7;
  h_ = ymax - ymin + 7;
  labels_.assign(static_cast<std::size_t>(w_) * static_cast<std::size_t>(h_), kUnset);
  for (int Y = y0_; Y < y0_ + h_; ++Y) {
    for (int X = x0_; X < x0_ + w_; ++X) {
      if ((X & 1) == 0 && (Y & 1) == 0) labels_[static_cast<std::size_t>(slot(X, Y))] = kVertex;
    }
  }
  for (const auto& e : projection) {
    const auto [X, Y] = e.midpoint2();
    labels_[static_cast<std::size_t>(slot(X, Y))] = kInProjection;
  }

  auto flood = [&](std::vector<std::pair<int, int>> stack, int id) {
    while (!stack.empty()) {
      const auto [X, Y] = stack.back();
      stack.pop_back();
      const std::pair<int, int> nb[4] = {{X - 1, Y}, {X + 1, Y}, {X, Y - 1}, {X, Y + 1}};
      for (const auto& [U, V] : nb) {
        if (U < x0_ || U >= x0_ + w_ || V < y0_ || V >= y0_ + h_) continue;
        auto& l = labels_[static_cast<std::size_t>(slot(U, V))];
        if (l != kUnset) continue;
        l = id;
        stack.emplace_back(U, V);
      }
    }
  };

  std::vector<std::pair<int, int>> border;
  for (int Y = y0_; Y < y0_ + h_; ++Y) {
    for (int X = x0_; X < x0_ + w_; ++X) {
      if (X != x0_ && X != x0_ + w_ - 1 && Y != y0_ && Y != y0_ + h_ - 1) continue;
      auto& l = labels_[static_cast<std::size_t>(slot(X, Y))];
      if (l != kUnset) continue;
      l = kInfinite;
      border.emplace_back(X, Y);
    }
  }
  flood(std::move(border), kInfinite);

  for (int Y = y0_; Y < y0_ + h_; ++Y) {
    for (int X = x0_; X < x0_ + w_; ++X) {
      auto& l = labels_[static_cast<std::size_t>(slot(X, Y))];
      if (l != kUnset) continue;
      l = finite_count_;
      flood({{X, Y}}, finite_count_);
      ++finite_count_;
    }
  }
}

int ComplementRegions::label(const ProjElement& e) const {
  const auto [X, Y] = e.midpoint2();
  if (labels_.empty() || X < x0_ || X >= x0_ + w_ || Y < y0_ || Y >= y0_ + h_) return kInfinite;
  return labels_[static_cast<std::size_t>(slot(X, Y))];
}

std::vector<ProjElement> ComplementRegions::finite_elements() const {
  std::vector<ProjElement> out;
  for (int Y = y0_; Y < y0_ + h_; ++Y) {
    for (int X = x0_; X < x0_ + w_; ++X) {
      if (labels_[static_cast<std::size_t>(slot(X, Y))] >= 0) out.push_back(element_at(X, Y));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PlaneFace> ComplementRegions::component_faces(int id) const {
  std::vector<PlaneFace> out;
  for (int Y = y0_; Y < y0_ + h_; ++Y) {
    for (int X = x0_; X < x0_ + w_; ++X) {
      if ((X & 1) == 0 || (Y & 1) == 0) continue;
      if (labels_[static_cast<std::size_t>(slot(X, Y))] == id) out.push_back(PlaneFace{(X - 1) / 2, (Y - 1) / 2});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool WallDecomposition::wall_nested_in(int inner, int outer) const {
  if (inner == outer) return false;
  return nests(outer, walls[static_cast<std::size_t>(inner)].projection.front());
}

// ---------------------------------------------------------------------------

FaceClasses classify_faces(const Interface& iface) {
  std::unordered_map<std::uint64_t, int> per_column;
  for (const auto& f : iface.faces()) {
    if (f.is_horizontal()) ++per_column[column_key(f.anchor.x, f.anchor.y)];
  }
  FaceClasses out;
  for (const auto& f : iface.faces()) {
    if (f.is_horizontal() && per_column[column_key(f.anchor.x, f.anchor.y)] == 1) {
      out.ceiling_faces.push_back(f);
    } else {
      out.wall_faces.push_back(f);
    }
  }
  return out;
}

namespace {

// Height of an exterior ceiling column touching the wall projection by a vertex.
// `column_height` returns nullopt for columns that are not usable.
template <class HeightOf>
std::optional<int> exterior_touch_height(const Wall& w, const ComplementRegions& reg,
                                         HeightOf&& column_height) {
  std::optional<int> found;
  for (const auto& [vx, vy] : vertex_set(w.projection)) {
    for (const auto& c : faces_at_vertex(vx, vy)) {
      if (reg.label(c) != ComplementRegions::kInfinite) continue;
      const auto h = column_height(c);
      if (!h) continue;
      if (found && *found != *h) {
        throw Error(ErrorCode::InvalidInterface, "wall touches exterior ceilings at different heights");
      }
      found = h;
    }
  }
  return found;
}

void compute_nesting(WallDecomposition& d) {
  const int nw = static_cast<int>(d.walls.size());
  d.wall_depth.assign(static_cast<std::size_t>(nw), 0);
  d.wall_parent.assign(static_cast<std::size_t>(nw), -1);
  std::vector<std::vector<int>> nesting(static_cast<std::size_t>(nw));
  for (int i = 0; i < nw; ++i) {
    for (int j = 0; j < nw; ++j) {
      if (d.wall_nested_in(i, j)) nesting[static_cast<std::size_t>(i)].push_back(j);
    }
    d.wall_depth[static_cast<std::size_t>(i)] = static_cast<int>(nesting[static_cast<std::size_t>(i)].size());
  }
  for (int i = 0; i < nw; ++i) {
    int best = -1;
    for (int j : nesting[static_cast<std::size_t>(i)]) {
      if (best < 0 || d.wall_depth[static_cast<std::size_t>(j)] > d.wall_depth[static_cast<std::size_t>(best)]) best = j;
    }
    d.wall_parent[static_cast<std::size_t>(i)] = best;
  }
}

}  // namespace

WallDecomposition decompose(const Interface& iface) {
  WallDecomposition d;
  d.dims = iface.dims();
  const auto classes = classify_faces(iface);

  for (auto& comp : star_components(classes.ceiling_faces)) {
    Ceiling c;
    c.height = column_and_height(comp.front()).height;
    c.faces = std::move(comp);
    d.ceilings.push_back(std::move(c));
  }
  for (auto& comp : star_components(classes.wall_faces)) d.walls.push_back(make_wall(std::move(comp)));
  std::sort(d.walls.begin(), d.walls.end(),
            [](const Wall& a, const Wall& b) { return FaceKeyLess{}(a.faces.front(), b.faces.front()); });
  std::sort(d.ceilings.begin(), d.ceilings.end(),
            [](const Ceiling& a, const Ceiling& b) { return FaceKeyLess{}(a.faces.front(), b.faces.front()); });

  d.regions.reserve(d.walls.size());
  for (const auto& w : d.walls) d.regions.emplace_back(w.projection);
  compute_nesting(d);

  std::unordered_map<std::uint64_t, int> ceiling_height;
  for (const auto& c : d.ceilings) {
    for (const auto& f : c.faces) ceiling_height[column_key(f.anchor.x, f.anchor.y)] = c.height;
  }
  const BoxDims dims = d.dims;
  for (std::size_t i = 0; i < d.walls.size(); ++i) {
    const auto s = exterior_touch_height(d.walls[i], d.regions[i], [&](const PlaneFace& c) -> std::optional<int> {
      if (!dims.contains_column(c.x, c.y)) return std::nullopt;
      auto it = ceiling_height.find(column_key(c.x, c.y));
      if (it == ceiling_height.end()) return std::nullopt;
      return it->second;
    });
    d.walls[i].supporting_height = s.value_or(0);
  }

  const int nw = static_cast<int>(d.walls.size());
  d.ceiling_parent.assign(d.ceilings.size(), -1);
  for (std::size_t c = 0; c < d.ceilings.size(); ++c) {
    const auto col = d.ceilings[c].columns().front();
    int best = -1;
    for (int j = 0; j < nw; ++j) {
      if (!d.regions[static_cast<std::size_t>(j)].interior(ProjElement::face(col.x, col.y))) continue;
      if (best < 0 || d.wall_depth[static_cast<std::size_t>(j)] > d.wall_depth[static_cast<std::size_t>(best)]) best = j;
    }
    d.ceiling_parent[c] = best;
  }

  // W_x: the innermost wall that nests x and shares an edge with x.
  d.index_map.assign(dims.column_count(), -1);
  for (int y = dims.y_lo(); y < dims.y_hi(); ++y) {
    for (int x = dims.x_lo(); x < dims.x_hi(); ++x) {
      const auto fx = ProjElement::face(x, y);
      int best = -1;
      for (int j = 0; j < nw; ++j) {
        const auto& reg = d.regions[static_cast<std::size_t>(j)];
        if (!reg.interior(fx)) continue;
        const auto& proj = d.walls[static_cast<std::size_t>(j)].projection;
        bool shares = std::binary_search(proj.begin(), proj.end(), fx);
        for (const auto& e : edges_of(PlaneFace{x, y})) shares = shares || closed_contains_edge(proj, e);
        if (!shares) continue;
        if (best < 0 || d.wall_depth[static_cast<std::size_t>(j)] > d.wall_depth[static_cast<std::size_t>(best)]) best = j;
      }
      d.index_map[dims.column_index(x, y)] = best;
    }
  }
  return d;
}

std::vector<PlaneFace> fill_holes(const std::vector<PlaneFace>& faces) {
  // Holes are the faces not reachable from infinity through the complement,
  // moving between faces that share a vertex: a ceiling pinched at a corner
  // does not enclose anything across that corner.
  std::set<PlaneFace> in(faces.begin(), faces.end());
  if (in.empty()) return {};
  int x0 = std::numeric_limits<int>::max(), x1 = std::numeric_limits<int>::min();
  int y0 = x0, y1 = x1;
  for (const auto& f : in) {
    x0 = std::min(x0, f.x);
    x1 = std::max(x1, f.x);
    y0 = std::min(y0, f.y);
    y1 = std::max(y1, f.y);
  }
  --x0, --y0, ++x1, ++y1;
  const int w = x1 - x0 + 1;
  const int h = y1 - y0 + 1;
  auto at = [&](int x, int y) { return static_cast<std::size_t>((y - y0) * w + (x - x0)); };
  std::vector<std::uint8_t> state(static_cast<std::size_t>(w * h), 0);  // 1 member, 2 outside
  for (const auto& f : in) state[at(f.x, f.y)] = 1;
  std::vector<std::pair<int, int>> stack;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if ((x == x0 || x == x1 || y == y0 || y == y1) && state[at(x, y)] == 0) {
        state[at(x, y)] = 2;
        stack.emplace_back(x, y);
      }
    }
  }
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int u = x + dx, v = y + dy;
        if (u < x0 || u > x1 || v < y0 || v > y1 || state[at(u, v)] != 0) continue;
        state[at(u, v)] = 2;
        stack.emplace_back(u, v);
      }
    }
  }
  std::vector<PlaneFace> out;
  for (int x = x0; x <= x1; ++x) {
    for (int y = y0; y <= y1; ++y) {
      if (state[at(x, y)] != 2) out.push_back(PlaneFace{x, y});
    }
  }
  return out;
}

std::vector<PlaneFace> hull(const Ceiling& c) { return fill_holes(c.columns()); }

std::vector<ProjElement> hull_wall(const WallDecomposition& deco, int wall) {
  const auto& w = deco.walls.at(static_cast<std::size_t>(wall));
  auto out = deco.regions.at(static_cast<std::size_t>(wall)).finite_elements();
  out.insert(out.end(), w.projection.begin(), w.projection.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Wall standardize(const WallDecomposition& deco, int wall) {
  const auto& w = deco.walls.at(static_cast<std::size_t>(wall));
  std::vector<Face> faces;
  faces.reserve(w.faces.size());
  for (const auto& f : w.faces) faces.push_back(f.shifted_up(-w.supporting_height));
  return make_wall(std::move(faces), 0);
}

void StandardWallCollection::canonicalize() {
  std::sort(walls.begin(), walls.end(),
            [](const Wall& a, const Wall& b) { return FaceKeyLess{}(a.faces.front(), b.faces.front()); });
}

StandardWallCollection standard_representation(const WallDecomposition& deco) {
  StandardWallCollection out;
  out.dims = deco.dims;
  for (std::size_t i = 0; i < deco.walls.size(); ++i) out.walls.push_back(standardize(deco, static_cast<int>(i)));
  out.canonicalize();
  return out;
}

StandardWallCollection standard_representation(const Interface& iface) {
  return standard_representation(decompose(iface));
}

bool is_admissible(const StandardWallCollection& coll) {
  std::set<std::pair<int, int>> seen;
  for (const auto& w : coll.walls) {
    if (w.faces.empty()) return false;
    for (const auto& v : vertex_set(w.projection)) {
      if (!seen.insert(v).second) return false;
    }
  }
  return true;
}

namespace {

// Interior ceiling heights of a placed wall, one per finite complementary
// component, from the spins of the columns around it.
std::vector<int> interior_heights(const Wall& w, const ComplementRegions& reg, int s) {
  std::unordered_set<std::uint64_t> keys;
  for (const auto& f : w.faces) keys.insert(f.key());

  int zlo = s - 1, zhi = s + 1;  // cells [zlo, zhi)
  int cx0 = std::numeric_limits<int>::max(), cx1 = std::numeric_limits<int>::min();
  int cy0 = cx0, cy1 = cx1;
  for (const auto& f : w.faces) {
    zlo = std::min(zlo, f.min_z() - 1);
    zhi = std::max(zhi, f.max_z() + 1);
  }
  for (const auto& e : w.projection) {
    for (const auto& [vx, vy] : e.vertices()) {
      cx0 = std::min(cx0, vx - 1);
      cx1 = std::max(cx1, vx);
      cy0 = std::min(cy0, vy - 1);
      cy1 = std::max(cy1, vy);
    }
  }
  --cx0, ++cx1, --cy0, ++cy1;
  const int cw = cx1 - cx0 + 1;
  const int ch = cy1 - cy0 + 1;
  const int nz = zhi - zlo;
  auto cidx = [&](int x, int y) { return static_cast<std::size_t>((y - cy0) * cw + (x - cx0)); };

  std::vector<std::vector<std::int8_t>> prof(static_cast<std::size_t>(cw * ch));
  std::vector<std::uint8_t> known(static_cast<std::size_t>(cw * ch), 0);
  std::deque<std::pair<int, int>> queue;

  std::unordered_map<std::uint64_t, std::vector<int>> wall_cols;  // column -> anchors of horizontal faces
  for (const auto& f : w.faces) {
    if (f.is_horizontal()) wall_cols[column_key(f.anchor.x, f.anchor.y)].push_back(f.anchor.z);
  }
  for (int y = cy0; y <= cy1; ++y) {
    for (int x = cx0; x <= cx1; ++x) {
      auto& p = prof[cidx(x, y)];
      auto it = wall_cols.find(column_key(x, y));
      if (it != wall_cols.end()) {
        p.resize(static_cast<std::size_t>(nz));
        for (int z = zlo; z < zhi; ++z) {
          int below = 0;
          for (int a : it->second) below += a < z ? 1 : 0;
          p[static_cast<std::size_t>(z - zlo)] = (below & 1) ? -1 : 1;
        }
      } else if (reg.label(PlaneFace{x, y}) == ComplementRegions::kInfinite) {
        p.resize(static_cast<std::size_t>(nz));
        for (int z = zlo; z < zhi; ++z) p[static_cast<std::size_t>(z - zlo)] = z < s ? 1 : -1;
      } else {
        continue;
      }
      known[cidx(x, y)] = 1;
      queue.emplace_back(x, y);
    }
  }

  std::vector<std::optional<int>> heights(static_cast<std::size_t>(reg.finite_count()));
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    const std::pair<int, int> nb[4] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
    for (const auto& [u, v] : nb) {
      if (u < cx0 || u > cx1 || v < cy0 || v > cy1 || known[cidx(u, v)] != 0) continue;
      const int label = reg.label(PlaneFace{u, v});
      if (label < 0) continue;
      auto& p = prof[cidx(u, v)];
      p.resize(static_cast<std::size_t>(nz));
      const auto& q = prof[cidx(x, y)];
      for (int z = zlo; z < zhi; ++z) {
        Face between = u != x ? Face{Cell{std::min(u, x), y, z}, Axis::X} : Face{Cell{x, std::min(v, y), z}, Axis::Y};
        const bool cross = keys.count(between.key()) != 0;
        const auto k = static_cast<std::size_t>(z - zlo);
        p[k] = static_cast<std::int8_t>(cross ? -q[k] : q[k]);
      }
      int t = zhi;
      for (int z = zlo; z < zhi; ++z) {
        if (p[static_cast<std::size_t>(z - zlo)] < 0) {
          t = z;
          break;
        }
      }
      for (int z = zlo; z < zhi; ++z) {
        if (p[static_cast<std::size_t>(z - zlo)] != (z < t ? 1 : -1) || t == zlo || t == zhi) {
          throw Error(ErrorCode::InvalidInterface, "wall does not bound a ceiling of constant height");
        }
      }
      auto& slot = heights[static_cast<std::size_t>(label)];
      if (slot && *slot != t) {
        throw Error(ErrorCode::InvalidInterface, "inconsistent interior ceiling height");
      }
      slot = t;
      known[cidx(u, v)] = 1;
      queue.emplace_back(u, v);
    }
  }
  // Components made only of edges carry no ceiling.
  std::vector<int> out;
  for (int id = 0; id < reg.finite_count(); ++id) {
    const auto& h = heights[static_cast<std::size_t>(id)];
    if (!h && !reg.component_faces(id).empty()) {
      throw Error(ErrorCode::InvalidInterface, "interior component without ceiling");
    }
    out.push_back(h.value_or(s));
  }
  return out;
}

}  // namespace

Interface reconstruct(const StandardWallCollection& coll) {
  if (!is_admissible(coll)) {
    throw Error(ErrorCode::Inadmissible, "wall projections share a vertex");
  }
  const BoxDims dims = coll.dims;
  const BoxFaces box(dims);
  WallDecomposition d;
  d.dims = dims;
  d.walls = coll.walls;
  for (const auto& w : d.walls) {
    for (const auto& e : w.projection) {
      for (const auto& [vx, vy] : e.vertices()) {
        if (vx < dims.x_lo() || vx > dims.x_hi() || vy < dims.y_lo() || vy > dims.y_hi()) {
          throw Error(ErrorCode::Inadmissible, "wall projects outside the base");
        }
      }
    }
    d.regions.emplace_back(w.projection);
  }
  compute_nesting(d);

  std::vector<int> order(d.walls.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return d.wall_depth[static_cast<std::size_t>(a)] < d.wall_depth[static_cast<std::size_t>(b)];
  });

  std::vector<int> colh(dims.column_count(), 0);
  std::vector<std::uint8_t> wall_col(dims.column_count(), 0);
  std::vector<Face> faces;
  for (int wi : order) {
    const auto& w = d.walls[static_cast<std::size_t>(wi)];
    const auto& reg = d.regions[static_cast<std::size_t>(wi)];
    const auto s = exterior_touch_height(w, reg, [&](const PlaneFace& c) -> std::optional<int> {
      if (!dims.contains_column(c.x, c.y)) return std::nullopt;
      return colh[dims.column_index(c.x, c.y)];
    });
    if (!s && d.wall_depth[static_cast<std::size_t>(wi)] > 0) {
      throw Error(ErrorCode::Inadmissible, "nested wall without a supporting ceiling");
    }
    const int sh = s.value_or(0);
    std::vector<Face> placed;
    for (const auto& f : w.faces) placed.push_back(f.shifted_up(sh));
    const Wall pw = make_wall(placed, sh);
    for (const auto& e : pw.projection) {
      if (e.is_face()) wall_col[dims.column_index(e.x, e.y)] = 1;
    }
    const auto t = interior_heights(pw, reg, sh);
    for (int id = 0; id < reg.finite_count(); ++id) {
      for (const auto& c : reg.component_faces(id)) colh[dims.column_index(c.x, c.y)] = t[static_cast<std::size_t>(id)];
    }
    faces.insert(faces.end(), placed.begin(), placed.end());
  }
  for (int y = dims.y_lo(); y < dims.y_hi(); ++y) {
    for (int x = dims.x_lo(); x < dims.x_hi(); ++x) {
      const auto ci = dims.column_index(x, y);
      if (wall_col[ci] == 0) faces.push_back(Face{Cell{x, y, colh[ci] - 1}, Axis::Z});
    }
  }
  for (const auto& f : faces) {
    if (!box.contains(f)) throw Error(ErrorCode::Inadmissible, "reconstructed interface does not fit the box");
  }
  Interface out(dims, std::move(faces));
  try {
    (void)spin_from_interface(out);
  } catch (const Error& e) {
    throw Error(ErrorCode::Inadmissible, std::string("collection does not reconstruct: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------

std::int64_t excess_energy(const Wall& w) {
  return static_cast<std::int64_t>(w.faces.size()) - static_cast<std::int64_t>(w.projected_face_count());
}

std::int64_t excess_rel(const Interface& i, const Interface& j) {
  return static_cast<std::int64_t>(i.size()) - static_cast<std::int64_t>(j.size());
}

std::int64_t total_excess(const WallDecomposition& deco) {
  std::int64_t s = 0;
  for (const auto& w : deco.walls) s += excess_energy(w);
  return s;
}

double projection_distance(const Wall& a, const Wall& b) {
  long best = std::numeric_limits<long>::max();
  for (const auto& e : a.projection) {
    const auto [ax, ay] = e.midpoint2();
    for (const auto& f : b.projection) {
      const auto [bx, by] = f.midpoint2();
      const long dx = ax - bx;
      const long dy = ay - by;
      best = std::min(best, dx * dx + dy * dy);
    }
  }
  return std::sqrt(static_cast<double>(best)) / 2.0;
}

std::vector<int> wall_cluster(const WallDecomposition& deco, int root) {
  const int nw = static_cast<int>(deco.walls.size());
  if (root < 0 || root >= nw) throw std::out_of_range("wall_cluster: bad root");
  std::vector<std::uint8_t> in(static_cast<std::size_t>(nw), 0);
  in[static_cast<std::size_t>(root)] = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int j = 0; j < nw; ++j) {
      if (in[static_cast<std::size_t>(j)] != 0) continue;
      const double mj = static_cast<double>(excess_energy(deco.walls[static_cast<std::size_t>(j)]));
      for (int i = 0; i < nw; ++i) {
        if (in[static_cast<std::size_t>(i)] == 0 || !deco.wall_nested_in(j, i)) continue;
        if (projection_distance(deco.walls[static_cast<std::size_t>(i)], deco.walls[static_cast<std::size_t>(j)]) <= mj) {
          in[static_cast<std::size_t>(j)] = 1;
          grew = true;
          break;
        }
      }
    }
  }
  std::vector<int> out;
  for (int j = 0; j < nw; ++j) {
    if (in[static_cast<std::size_t>(j)] != 0) out.push_back(j);
  }
  return out;
}

std::vector<int> nested_walls_at(const WallDecomposition& deco, const PlaneFace& x) {
  std::vector<int> out;
  for (std::size_t j = 0; j < deco.walls.size(); ++j) {
    if (deco.regions[j].interior(ProjElement::face(x.x, x.y))) out.push_back(static_cast<int>(j));
  }
  std::stable_sort(out.begin(), out.end(), [&](int a, int b) {
    return deco.wall_depth[static_cast<std::size_t>(a)] < deco.wall_depth[static_cast<std::size_t>(b)];
  });
  return out;
}

namespace {

// a^e as an exact 128-bit integer, or nullopt on overflow.
std::optional<unsigned __int128> ipow(std::uint64_t a, int e) {
  unsigned __int128 r = 1;
  const unsigned __int128 limit = ~static_cast<unsigned __int128>(0) >> 1;
  for (int i = 0; i < e; ++i) {
    if (a != 0 && r > limit / a) return std::nullopt;
    r *= a;
  }
  return r;
}

}  // namespace

bool isodim_at_most(const std::vector<PlaneFace>& s, double d) {
  if (!(d > 0)) throw std::invalid_argument("isodim_at_most: d must be positive");
  std::set<PlaneFace> set(s.begin(), s.end());
  if (set.empty()) throw std::invalid_argument("isodim_at_most: empty set");
  std::set<PlaneFace> seen{*set.begin()};
  std::vector<PlaneFace> stack{*set.begin()};
  while (!stack.empty()) {
    const auto f = stack.back();
    stack.pop_back();
    const PlaneFace nb[4] = {{f.x - 1, f.y}, {f.x + 1, f.y}, {f.x, f.y - 1}, {f.x, f.y + 1}};
    for (const auto& g : nb) {
      if (set.count(g) != 0 && seen.insert(g).second) stack.push_back(g);
    }
  }
  if (seen.size() != set.size()) throw std::invalid_argument("isodim_at_most: set is not connected");
  const std::vector<PlaneFace> uniq(set.begin(), set.end());
  if (fill_holes(uniq).size() != uniq.size()) throw std::invalid_argument("isodim_at_most: set has holes");

  const std::uint64_t area = uniq.size();
  const std::uint64_t perim = boundary_edge_count(uniq);
  // Integral d: compare perim^d <= area^(d-1) exactly when it fits.
  if (d == std::floor(d) && d <= 64) {
    const int di = static_cast<int>(d);
    const auto lhs = ipow(perim, di);
    const auto rhs = ipow(area, di - 1);
    if (lhs && rhs) return *lhs <= *rhs;
  }
  const long double lhs = std::log(static_cast<long double>(perim));
  const long double rhs = (static_cast<long double>(d) - 1) / static_cast<long double>(d) *
                          std::log(static_cast<long double>(area));
  return lhs <= rhs;
}

std::vector<Face> boundary_band(const BoxDims& dims, int k) {
  std::vector<Face> out;
  for (int z = 0; z < k; ++z) {
    for (int y = dims.y_lo(); y < dims.y_hi(); ++y) {
      out.push_back(Face{Cell{dims.x_lo() - 1, y, z}, Axis::X});
      out.push_back(Face{Cell{dims.x_hi() - 1, y, z}, Axis::X});
    }
    for (int x = dims.x_lo(); x < dims.x_hi(); ++x) {
      out.push_back(Face{Cell{x, dims.y_lo() - 1, z}, Axis::Y});
      out.push_back(Face{Cell{x, dims.y_hi() - 1, z}, Axis::Y});
    }
  }
  return out;
}

Interface shift_up(const Interface& iface, int k) {
  if (k < 0) throw std::invalid_argument("shift_up: k must be non-negative");
  if (k == 0) return iface;
  BoxDims dims = iface.dims();
  std::unordered_set<std::uint64_t> keys;
  int top = std::numeric_limits<int>::min();
  for (const auto& f : iface.faces()) {
    const Face g = f.shifted_up(k);
    keys.insert(g.key());
    top = std::max(top, g.anchor.z);
  }
  for (const auto& b : boundary_band(dims, k)) {
    const auto key = b.key();
    if (!keys.erase(key)) keys.insert(key);
    top = std::max(top, b.anchor.z);
  }
  while (top > dims.z_hi() - 1) dims.h += 2;
  return Interface(dims, anchored_component(keys, dims));
}

// ---------------------------------------------------------------------------

namespace {

template <class Fn>
bool guard(const WallDecomposition& deco, const std::vector<PlaneFace>& sites,
           const std::vector<PlaneFace>& region, Fn&& measure) {
  const std::set<PlaneFace> reg(region.begin(), region.end());
  std::vector<int> inside(deco.walls.size(), -1);
  auto within = [&](int j) {
    auto& v = inside[static_cast<std::size_t>(j)];
    if (v < 0) {
      v = 1;
      for (const auto& e : hull_wall(deco, j)) {
        if (e.is_face() && reg.count(PlaneFace{e.x, e.y}) == 0) {
          v = 0;
          break;
        }
      }
    }
    return v == 1;
  };
  for (const auto& x : sites) {
    std::vector<int> seq;
    for (int j : nested_walls_at(deco, x)) {
      if (within(j)) seq.push_back(j);
    }
    if (!measure(seq)) return false;
  }
  return true;
}

}  // namespace

bool guard_excess(const WallDecomposition& deco, const std::vector<PlaneFace>& sites,
                  const std::vector<PlaneFace>& region, double r) {
  return guard(deco, sites, region, [&](const std::vector<int>& seq) {
    std::int64_t m = 0;
    for (int j : seq) m += excess_energy(deco.walls[static_cast<std::size_t>(j)]);
    return static_cast<double>(m) < r;
  });
}

bool guard_diameter(const WallDecomposition& deco, const std::vector<PlaneFace>& sites,
                    const std::vector<PlaneFace>& region, double r) {
  return guard(deco, sites, region, [&](const std::vector<int>& seq) {
    std::vector<std::pair<int, int>> pts;
    for (int j : seq) {
      for (const auto& e : deco.walls[static_cast<std::size_t>(j)].projection) pts.push_back(e.midpoint2());
    }
    long best = 0;
    for (std::size_t a = 0; a < pts.size(); ++a) {
      for (std::size_t b = a + 1; b < pts.size(); ++b) {
        const long dx = pts[a].first - pts[b].first;
        const long dy = pts[a].second - pts[b].second;
        best = std::max(best, dx * dx + dy * dy);
      }
    }
    return std::sqrt(static_cast<double>(best)) / 2.0 < r;
  });
}

std::string walls_json(const WallDecomposition& deco) {
  using nlohmann::json;
  static const char* axis_names[] = {"X", "Y", "Z"};
  const int nw = static_cast<int>(deco.walls.size());
  std::vector<int> order(static_cast<std::size_t>(nw));
  for (int i = 0; i < nw; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return deco.wall_depth[static_cast<std::size_t>(a)] < deco.wall_depth[static_cast<std::size_t>(b)];
  });
  std::vector<int> cluster(static_cast<std::size_t>(nw), -1);
  for (int w : order) {
    if (cluster[static_cast<std::size_t>(w)] >= 0) continue;
    for (int m : wall_cluster(deco, w)) {
      if (cluster[static_cast<std::size_t>(m)] < 0) cluster[static_cast<std::size_t>(m)] = w;
    }
  }

  json walls = json::array();
  for (int i = 0; i < nw; ++i) {
    const auto& w = deco.walls[static_cast<std::size_t>(i)];
    json faces = json::array();
    for (const auto& f : w.faces) {
      faces.push_back({f.anchor.x, f.anchor.y, f.anchor.z, axis_names[static_cast<int>(f.axis)]});
    }
    json proj = json::array();
    for (const auto& e : w.projection) {
      if (e.is_face()) {
        proj.push_back({"F", e.x, e.y});
      } else {
        proj.push_back({"E", e.x, e.y, axis_names[static_cast<int>(e.dir)]});
      }
    }
    walls.push_back({{"id", i},
                     {"faces", faces},
                     {"excess", excess_energy(w)},
                     {"projection", proj},
                     {"supporting_height", w.supporting_height},
                     {"parent", deco.wall_parent[static_cast<std::size_t>(i)]},
                     {"cluster", cluster[static_cast<std::size_t>(i)]}});
  }
  json ceilings = json::array();
  for (std::size_t c = 0; c < deco.ceilings.size(); ++c) {
    ceilings.push_back({{"height", deco.ceilings[c].height},
                        {"area", deco.ceilings[c].faces.size()},
                        {"parent", deco.ceiling_parent[c]}});
  }
  json out = {{"dims", {{"n", deco.dims.n}, {"m", deco.dims.m}, {"h", deco.dims.h}}},
              {"walls", walls},
              {"ceilings", ceilings}};
  return out.dump();
}

}  // namespace dobrushin
