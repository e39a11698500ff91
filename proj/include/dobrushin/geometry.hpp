#pragma once

// Integer-lattice geometry for Z^3 and its height-0 plane.
//
// Conventions used throughout the library:
//   * A cell is named by its lower corner ("anchor") (x, y, z); its midpoint is
//     (x + 1/2, y + 1/2, z + 1/2), so its height is z + 1/2.
//   * A face is named by (anchor cell, axis) and is the unit square between
//     `anchor` and `anchor + e_axis`. Every geometric face has exactly one name.
//   * Heights are carried doubled (`height2`) so half-integers stay exact.
//   * A box of n x m x h cells occupies x in [-floor(n/2), -floor(n/2) + n),
//     likewise for y, and z in [-h/2, h/2) with h even. For even n this is the
//     centred convention {ceil(-n/2), ..., floor(n/2)} on vertices; for odd n the
//     base is shifted by half a cell towards +x (n cells, n + 1 vertex columns).

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dobrushin {

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

struct Cell {
  int x = 0;
  int y = 0;
  int z = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;

  [[nodiscard]] constexpr int height2() const { return 2 * z + 1; }
  [[nodiscard]] constexpr Cell shifted(Axis a, int d = 1) const {
    Cell c = *this;
    (a == Axis::X ? c.x : a == Axis::Y ? c.y : c.z) += d;
    return c;
  }
};

struct Vertex {
  int x = 0;
  int y = 0;
  int z = 0;
  friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
};

struct Face {
  Cell anchor;
  Axis axis = Axis::Z;

  friend constexpr bool operator==(const Face&, const Face&) = default;

  [[nodiscard]] constexpr bool is_horizontal() const { return axis == Axis::Z; }

  /// Doubled height of the face midpoint (even for horizontal faces).
  [[nodiscard]] constexpr int height2() const {
    return axis == Axis::Z ? 2 * (anchor.z + 1) : 2 * anchor.z + 1;
  }
  /// Lowest z-coordinate of any point of the closed face.
  [[nodiscard]] constexpr int min_z() const { return axis == Axis::Z ? anchor.z + 1 : anchor.z; }
  [[nodiscard]] constexpr int max_z() const { return anchor.z + 1; }

  /// The two cells separated by this face (lower/left one first).
  [[nodiscard]] constexpr Cell low_cell() const { return anchor; }
  [[nodiscard]] constexpr Cell high_cell() const { return anchor.shifted(axis); }

  [[nodiscard]] constexpr Face shifted_up(int k) const { return Face{anchor.shifted(Axis::Z, k), axis}; }

  [[nodiscard]] std::array<Vertex, 4> vertices() const;

  /// Injective 64-bit key; ordering by key is the canonical face order.
  [[nodiscard]] std::uint64_t key() const;
  static Face from_key(std::uint64_t key);
};

struct FaceKeyLess {
  bool operator()(const Face& a, const Face& b) const { return a.key() < b.key(); }
};

struct FaceHash {
  std::size_t operator()(const Face& f) const { return std::hash<std::uint64_t>{}(f.key()); }
};

struct BoxDims {
  int n = 1;  // cells along x
  int m = 1;  // cells along y
  int h = 2;  // cells along z (even)

  friend constexpr bool operator==(const BoxDims&, const BoxDims&) = default;

  [[nodiscard]] constexpr int x_lo() const { return -(n / 2); }
  [[nodiscard]] constexpr int y_lo() const { return -(m / 2); }
  [[nodiscard]] constexpr int z_lo() const { return -(h / 2); }
  [[nodiscard]] constexpr int x_hi() const { return x_lo() + n; }  // exclusive, cells
  [[nodiscard]] constexpr int y_hi() const { return y_lo() + m; }
  [[nodiscard]] constexpr int z_hi() const { return z_lo() + h; }
  [[nodiscard]] constexpr std::size_t cell_count() const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(m) * static_cast<std::size_t>(h);
  }
  [[nodiscard]] constexpr std::size_t column_count() const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
  }

  [[nodiscard]] constexpr bool contains(const Cell& c) const {
    return c.x >= x_lo() && c.x < x_hi() && c.y >= y_lo() && c.y < y_hi() && c.z >= z_lo() &&
           c.z < z_hi();
  }
  [[nodiscard]] constexpr bool contains_column(int x, int y) const {
    return x >= x_lo() && x < x_hi() && y >= y_lo() && y < y_hi();
  }
  /// Dense row-major cell index (x fastest, then y, then z).
  [[nodiscard]] constexpr std::size_t index(const Cell& c) const {
    return (static_cast<std::size_t>(c.z - z_lo()) * static_cast<std::size_t>(m) +
            static_cast<std::size_t>(c.y - y_lo())) *
               static_cast<std::size_t>(n) +
           static_cast<std::size_t>(c.x - x_lo());
  }
  [[nodiscard]] Cell cell_at(std::size_t idx) const;
  [[nodiscard]] constexpr std::size_t column_index(int x, int y) const {
    return static_cast<std::size_t>(y - y_lo()) * static_cast<std::size_t>(n) +
           static_cast<std::size_t>(x - x_lo());
  }

  /// Throws std::invalid_argument unless n, m >= 1 and h >= 2 is even.
  void validate() const;
};

/// Dense numbering of the faces of a box: every face with at least one in-box
/// neighbouring cell (including faces on the box surface).
class BoxFaces {
 public:
  explicit BoxFaces(const BoxDims& dims);

  [[nodiscard]] std::size_t size() const { return total_; }
  [[nodiscard]] bool contains(const Face& f) const;
  [[nodiscard]] std::size_t index(const Face& f) const;  // requires contains(f)
  [[nodiscard]] Face face(std::size_t idx) const;
  [[nodiscard]] const BoxDims& dims() const { return dims_; }

 private:
  struct Block {
    int x0, y0, z0;
    int nx, ny, nz;
    std::size_t offset;
  };
  BoxDims dims_;
  std::array<Block, 3> blocks_{};
  std::size_t total_ = 0;
};

/// All in-box cells in dense-index order.
std::vector<Cell> cells_of_box(const BoxDims& dims);

/// True iff the closed faces share at least one lattice vertex. Throws for a == b.
bool star_adjacent(const Face& a, const Face& b);

/// Offsets (relative anchor + axis) of every face *-adjacent to a face of the given axis.
struct FaceOffset {
  int dx, dy, dz;
  Axis axis;
};
const std::vector<FaceOffset>& star_neighbor_offsets(Axis axis);

template <class Fn>
void for_each_star_neighbor(const Face& f, Fn&& fn) {
  for (const auto& o : star_neighbor_offsets(f.axis)) {
    fn(Face{Cell{f.anchor.x + o.dx, f.anchor.y + o.dy, f.anchor.z + o.dz}, o.axis});
  }
}

// ---------------------------------------------------------------------------
// The height-0 plane L_0.

/// A face of L_0: the unit square [x, x+1] x [y, y+1].
struct PlaneFace {
  int x = 0;
  int y = 0;
  friend constexpr auto operator<=>(const PlaneFace&, const PlaneFace&) = default;
};

/// An edge of L_0 from (x, y) to (x, y) + e_dir, dir in {X, Y}.
struct PlaneEdge {
  int x = 0;
  int y = 0;
  Axis dir = Axis::X;
  friend constexpr auto operator<=>(const PlaneEdge&, const PlaneEdge&) = default;
};

/// Face or edge of L_0.
struct ProjElement {
  enum class Kind : std::uint8_t { Edge = 0, Face = 1 };
  Kind kind = Kind::Face;
  int x = 0;
  int y = 0;
  Axis dir = Axis::Z;  // Z for faces

  friend constexpr auto operator<=>(const ProjElement&, const ProjElement&) = default;

  static constexpr ProjElement face(int x, int y) { return {Kind::Face, x, y, Axis::Z}; }
  static constexpr ProjElement edge(int x, int y, Axis dir) { return {Kind::Edge, x, y, dir}; }
  [[nodiscard]] constexpr bool is_face() const { return kind == Kind::Face; }

  /// Doubled midpoint coordinates.
  [[nodiscard]] std::pair<int, int> midpoint2() const;
  [[nodiscard]] std::vector<std::pair<int, int>> vertices() const;
  [[nodiscard]] std::uint64_t key() const;
};

ProjElement project(const Face& f);

struct ColumnHeight {
  PlaneFace column;
  int height = 0;
};
/// Column and integer height of a horizontal face. Throws for vertical faces.
ColumnHeight column_and_height(const Face& f);

/// The four boundary edges of a plane face.
std::array<ProjElement, 4> edges_of(const PlaneFace& f);
/// The (up to) two plane faces bounded by an edge.
std::array<PlaneFace, 2> faces_of(const ProjElement& edge);

/// Number of unit edges separating a face set from its complement.
std::size_t boundary_edge_count(const std::vector<PlaneFace>& faces);

std::string to_string(const Face& f);
std::string to_string(const ProjElement& e);

}  // namespace dobrushin
