#include "dobrushin/geometry.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

namespace dobrushin {

namespace {

constexpr int kKeyBias = 1 << 19;
constexpr std::uint64_t kKeyMask = (1u << 20) - 1;

std::uint64_t pack(int v) {
  if (v < -kKeyBias || v >= kKeyBias) throw std::out_of_range("coordinate outside key range");
  return static_cast<std::uint64_t>(v + kKeyBias) & kKeyMask;
}

int unpack(std::uint64_t v) { return static_cast<int>(v & kKeyMask) - kKeyBias; }

std::vector<FaceOffset> build_offsets(Axis axis) {
  const Face origin{Cell{0, 0, 0}, axis};
  const auto ov = origin.vertices();
  std::vector<FaceOffset> out;
  for (int a = 0; a < 3; ++a) {
    for (int dz = -2; dz <= 2; ++dz) {
      for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
          const Face g{Cell{dx, dy, dz}, static_cast<Axis>(a)};
          if (g == origin) continue;
          const auto gv = g.vertices();
          bool shared = false;
          for (const auto& v : ov) {
            shared = shared || std::find(gv.begin(), gv.end(), v) != gv.end();
          }
          if (shared) out.push_back({dx, dy, dz, g.axis});
        }
      }
    }
  }
  return out;
}

}  // namespace

std::array<Vertex, 4> Face::vertices() const {
  const auto [x, y, z] = std::tuple{anchor.x, anchor.y, anchor.z};
  switch (axis) {
    case Axis::X:
      return {Vertex{x + 1, y, z}, Vertex{x + 1, y + 1, z}, Vertex{x + 1, y, z + 1},
              Vertex{x + 1, y + 1, z + 1}};
    case Axis::Y:
      return {Vertex{x, y + 1, z}, Vertex{x + 1, y + 1, z}, Vertex{x, y + 1, z + 1},
              Vertex{x + 1, y + 1, z + 1}};
    case Axis::Z:
    default:
      return {Vertex{x, y, z + 1}, Vertex{x + 1, y, z + 1}, Vertex{x, y + 1, z + 1},
              Vertex{x + 1, y + 1, z + 1}};
  }
}

// Layout (most significant first): z | y | x | axis, so sorting by key orders
// faces bottom-up, which keeps JSON dumps readable.
std::uint64_t Face::key() const {
  return (pack(anchor.z) << 42) | (pack(anchor.y) << 22) | (pack(anchor.x) << 2) |
         static_cast<std::uint64_t>(axis);
}

Face Face::from_key(std::uint64_t key) {
  const auto axis = static_cast<Axis>(key & 3u);
  if (axis != Axis::X && axis != Axis::Y && axis != Axis::Z) {
    throw std::invalid_argument("invalid face key");
  }
  return Face{Cell{unpack(key >> 2), unpack(key >> 22), unpack(key >> 42)}, axis};
}

Cell BoxDims::cell_at(std::size_t idx) const {
  const auto nn = static_cast<std::size_t>(n);
  const auto mm = static_cast<std::size_t>(m);
  const int x = static_cast<int>(idx % nn) + x_lo();
  const int y = static_cast<int>((idx / nn) % mm) + y_lo();
  const int z = static_cast<int>(idx / (nn * mm)) + z_lo();
  return Cell{x, y, z};
}

void BoxDims::validate() const {
  if (n < 1 || m < 1) throw std::invalid_argument("box side lengths must be >= 1");
  if (h < 2 || h % 2 != 0) throw std::invalid_argument("box height must be even and >= 2");
  if (n > 4096 || m > 4096 || h > 4096) throw std::invalid_argument("box too large");
}

BoxFaces::BoxFaces(const BoxDims& dims) : dims_(dims) {
  dims.validate();
  // X faces: anchors x in [x_lo - 1, x_hi), and so on.
  blocks_[0] = {dims.x_lo() - 1, dims.y_lo(), dims.z_lo(), dims.n + 1, dims.m, dims.h, 0};
  blocks_[1] = {dims.x_lo(), dims.y_lo() - 1, dims.z_lo(), dims.n, dims.m + 1, dims.h, 0};
  blocks_[2] = {dims.x_lo(), dims.y_lo(), dims.z_lo() - 1, dims.n, dims.m, dims.h + 1, 0};
  std::size_t off = 0;
  for (auto& b : blocks_) {
    b.offset = off;
    off += static_cast<std::size_t>(b.nx) * static_cast<std::size_t>(b.ny) *
           static_cast<std::size_t>(b.nz);
  }
  total_ = off;
}

bool BoxFaces::contains(const Face& f) const {
  const auto& b = blocks_[static_cast<int>(f.axis)];
  return f.anchor.x >= b.x0 && f.anchor.x < b.x0 + b.nx && f.anchor.y >= b.y0 &&
         f.anchor.y < b.y0 + b.ny && f.anchor.z >= b.z0 && f.anchor.z < b.z0 + b.nz;
}

std::size_t BoxFaces::index(const Face& f) const {
  const auto& b = blocks_[static_cast<int>(f.axis)];
  return b.offset + (static_cast<std::size_t>(f.anchor.z - b.z0) * static_cast<std::size_t>(b.ny) +
                     static_cast<std::size_t>(f.anchor.y - b.y0)) *
                        static_cast<std::size_t>(b.nx) +
         static_cast<std::size_t>(f.anchor.x - b.x0);
}

Face BoxFaces::face(std::size_t idx) const {
  int a = 2;
  while (a > 0 && idx < blocks_[a].offset) --a;
  const auto& b = blocks_[a];
  std::size_t r = idx - b.offset;
  const int x = static_cast<int>(r % static_cast<std::size_t>(b.nx)) + b.x0;
  r /= static_cast<std::size_t>(b.nx);
  const int y = static_cast<int>(r % static_cast<std::size_t>(b.ny)) + b.y0;
  const int z = static_cast<int>(r / static_cast<std::size_t>(b.ny)) + b.z0;
  return Face{Cell{x, y, z}, static_cast<Axis>(a)};
}

std::vector<Cell> cells_of_box(const BoxDims& dims) {
  dims.validate();
  std::vector<Cell> out;
  out.reserve(dims.cell_count());
  for (std::size_t i = 0; i < dims.cell_count(); ++i) out.push_back(dims.cell_at(i));
  return out;
}

bool star_adjacent(const Face& a, const Face& b) {
  if (a == b) throw std::invalid_argument("star_adjacent: a face is not compared with itself");
  const auto va = a.vertices();
  const auto vb = b.vertices();
  for (const auto& v : va) {
    if (std::find(vb.begin(), vb.end(), v) != vb.end()) return true;
  }
  return false;
}

const std::vector<FaceOffset>& star_neighbor_offsets(Axis axis) {
  static const std::array<std::vector<FaceOffset>, 3> table{
      build_offsets(Axis::X), build_offsets(Axis::Y), build_offsets(Axis::Z)};
  return table[static_cast<int>(axis)];
}

std::pair<int, int> ProjElement::midpoint2() const {
  if (kind == Kind::Face) return {2 * x + 1, 2 * y + 1};
  return dir == Axis::X ? std::pair{2 * x + 1, 2 * y} : std::pair{2 * x, 2 * y + 1};
}

std::vector<std::pair<int, int>> ProjElement::vertices() const {
  if (kind == Kind::Face) return {{x, y}, {x + 1, y}, {x, y + 1}, {x + 1, y + 1}};
  return dir == Axis::X ? std::vector<std::pair<int, int>>{{x, y}, {x + 1, y}}
                        : std::vector<std::pair<int, int>>{{x, y}, {x, y + 1}};
}

std::uint64_t ProjElement::key() const {
  const std::uint64_t tag = kind == Kind::Face ? 2u : (dir == Axis::X ? 0u : 1u);
  return (pack(y) << 22) | (pack(x) << 2) | tag;
}

ProjElement project(const Face& f) {
  switch (f.axis) {
    case Axis::X:
      return ProjElement::edge(f.anchor.x + 1, f.anchor.y, Axis::Y);
    case Axis::Y:
      return ProjElement::edge(f.anchor.x, f.anchor.y + 1, Axis::X);
    case Axis::Z:
    default:
      return ProjElement::face(f.anchor.x, f.anchor.y);
  }
}

ColumnHeight column_and_height(const Face& f) {
  if (!f.is_horizontal()) throw std::invalid_argument("column_and_height: vertical face");
  return {PlaneFace{f.anchor.x, f.anchor.y}, f.anchor.z + 1};
}

std::array<ProjElement, 4> edges_of(const PlaneFace& f) {
  return {ProjElement::edge(f.x, f.y, Axis::X), ProjElement::edge(f.x, f.y + 1, Axis::X),
          ProjElement::edge(f.x, f.y, Axis::Y), ProjElement::edge(f.x + 1, f.y, Axis::Y)};
}

std::array<PlaneFace, 2> faces_of(const ProjElement& e) {
  if (e.is_face()) throw std::invalid_argument("faces_of: expected an edge");
  if (e.dir == Axis::X) return {PlaneFace{e.x, e.y - 1}, PlaneFace{e.x, e.y}};
  return {PlaneFace{e.x - 1, e.y}, PlaneFace{e.x, e.y}};
}

std::size_t boundary_edge_count(const std::vector<PlaneFace>& faces) {
  const std::set<PlaneFace> s(faces.begin(), faces.end());
  std::size_t count = 0;
  for (const auto& f : s) {
    const PlaneFace nb[4] = {{f.x - 1, f.y}, {f.x + 1, f.y}, {f.x, f.y - 1}, {f.x, f.y + 1}};
    for (const auto& g : nb) count += s.count(g) == 0 ? 1 : 0;
  }
  return count;
}

std::string to_string(const Face& f) {
  static const char* names[] = {"X", "Y", "Z"};
  return "(" + std::to_string(f.anchor.x) + "," + std::to_string(f.anchor.y) + "," +
         std::to_string(f.anchor.z) + ")" + names[static_cast<int>(f.axis)];
}

std::string to_string(const ProjElement& e) {
  if (e.is_face()) return "face(" + std::to_string(e.x) + "," + std::to_string(e.y) + ")";
  return std::string("edge") + (e.dir == Axis::X ? "X" : "Y") + "(" + std::to_string(e.x) + "," +
         std::to_string(e.y) + ")";
}

}  // namespace dobrushin
