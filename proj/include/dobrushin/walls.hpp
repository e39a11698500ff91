#pragma once

// Walls and ceilings of an interface, their nesting, hulls, the standard wall
// representation and its inverse, excess energies, wall clusters, and the
// vertical shift map.
//
// Boundary convention for face sets S of L_0: |dS| is the number of unit edges
// separating S from its complement.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dobrushin/geometry.hpp"
#include "dobrushin/interface.hpp"

namespace dobrushin {

struct Wall {
  std::vector<Face> faces;               // canonical order
  std::vector<ProjElement> projection;   // sorted, unique
  int supporting_height = 0;             // height of the supporting ceiling

  [[nodiscard]] std::size_t projected_face_count() const;
  friend bool operator==(const Wall& a, const Wall& b) { return a.faces == b.faces; }
};

Wall make_wall(std::vector<Face> faces, int supporting_height = 0);

struct Ceiling {
  std::vector<Face> faces;  // canonical order
  int height = 0;

  [[nodiscard]] std::vector<PlaneFace> columns() const;
};

/// Labels the complement of a projection: elements of the projection, the
/// infinite complementary component, and the finite ones.
class ComplementRegions {
 public:
  static constexpr int kInProjection = -2;
  static constexpr int kInfinite = -1;

  explicit ComplementRegions(const std::vector<ProjElement>& projection);

  /// kInProjection, kInfinite, or a finite component id in [0, finite_count()).
  [[nodiscard]] int label(const ProjElement& e) const;
  [[nodiscard]] int label(const PlaneFace& f) const { return label(ProjElement::face(f.x, f.y)); }
  [[nodiscard]] int finite_count() const { return finite_count_; }
  /// Interior in the nesting sense: not in the infinite component.
  [[nodiscard]] bool interior(const ProjElement& e) const { return label(e) != kInfinite; }
  /// All elements (faces and edges) of finite components.
  [[nodiscard]] std::vector<ProjElement> finite_elements() const;
  /// Faces of finite component `id`.
  [[nodiscard]] std::vector<PlaneFace> component_faces(int id) const;

 private:
  int x0_ = 0, y0_ = 0, w_ = 0, h_ = 0;  // doubled-coordinate window
  std::vector<int> labels_;
  int finite_count_ = 0;
  [[nodiscard]] int slot(int X, int Y) const { return (Y - y0_) * w_ + (X - x0_); }
};

struct WallDecomposition {
  BoxDims dims;
  std::vector<Wall> walls;
  std::vector<Ceiling> ceilings;
  std::vector<int> wall_parent;      // innermost wall strictly nesting wall i, or -1
  std::vector<int> wall_depth;       // number of walls nesting wall i
  std::vector<int> ceiling_parent;   // innermost wall nesting ceiling i, or -1
  std::vector<int> index_map;        // per base column (BoxDims::column_index): W_x or -1
  std::vector<ComplementRegions> regions;  // per wall

  /// Does wall `outer` nest element e?
  [[nodiscard]] bool nests(int outer, const ProjElement& e) const {
    return regions[static_cast<std::size_t>(outer)].interior(e);
  }
  [[nodiscard]] bool wall_nested_in(int inner, int outer) const;
};

struct FaceClasses {
  std::vector<Face> ceiling_faces;
  std::vector<Face> wall_faces;
};

FaceClasses classify_faces(const Interface& iface);

WallDecomposition decompose(const Interface& iface);

/// Hull of a ceiling: its columns plus every finite hole of their complement.
std::vector<PlaneFace> hull(const Ceiling& c);
/// Fill of a set of plane faces (the face set together with its finite holes).
std::vector<PlaneFace> fill_holes(const std::vector<PlaneFace>& faces);

/// rho(hull W): projection of the wall together with its finite complementary components.
std::vector<ProjElement> hull_wall(const WallDecomposition& deco, int wall);

/// Translate wall `wall` down by the height of its supporting ceiling.
Wall standardize(const WallDecomposition& deco, int wall);

struct StandardWallCollection {
  BoxDims dims;
  std::vector<Wall> walls;  // canonical order (by first face key)

  void canonicalize();
  friend bool operator==(const StandardWallCollection& a, const StandardWallCollection& b) {
    return a.dims == b.dims && a.walls == b.walls;
  }
};

StandardWallCollection standard_representation(const Interface& iface);
StandardWallCollection standard_representation(const WallDecomposition& deco);

/// True iff the wall projections are pairwise vertex-disjoint.
bool is_admissible(const StandardWallCollection& coll);

/// Inverse of standard_representation. Throws Error(Inadmissible) when the
/// projections share a vertex or the result does not fit in the box, and
/// Error(InvalidInterface) when a wall is not a standard wall.
Interface reconstruct(const StandardWallCollection& coll);

/// m(W) = |W| - |F(rho(W))|.
std::int64_t excess_energy(const Wall& w);
/// m(I; J) = |I| - |J|.
std::int64_t excess_rel(const Interface& i, const Interface& j);
std::int64_t total_excess(const WallDecomposition& deco);

/// Euclidean distance between projections, measured between element midpoints.
double projection_distance(const Wall& a, const Wall& b);

/// Indices of the walls in Clust(root).
std::vector<int> wall_cluster(const WallDecomposition& deco, int root);

/// All walls nesting the plane face x, outermost first.
std::vector<int> nested_walls_at(const WallDecomposition& deco, const PlaneFace& x);

/// |dS| <= |S|^((d-1)/d). Throws std::invalid_argument unless S is non-empty,
/// edge-connected and without holes.
bool isodim_at_most(const std::vector<PlaneFace>& s, double d);

/// Lift the interface by k, toggle the boundary band B_k and drop finite
/// components. The box grows vertically if the result would not fit.
Interface shift_up(const Interface& iface, int k);
/// The band of vertical faces on the lateral box boundary between heights 0 and k.
std::vector<Face> boundary_band(const BoxDims& dims, int k);

/// Guard events over a region S of base columns, evaluated for the sites in A:
/// every nested-wall sequence of a site (restricted to walls whose hull lies in S)
/// has total excess < r, respectively diameter < r.
bool guard_excess(const WallDecomposition& deco, const std::vector<PlaneFace>& sites,
                  const std::vector<PlaneFace>& region, double r);
bool guard_diameter(const WallDecomposition& deco, const std::vector<PlaneFace>& sites,
                    const std::vector<PlaneFace>& region, double r);

/// JSON dump: per wall faces, excess, projection, nesting parent and cluster id.
/// A wall's cluster id is the index of the first wall, in order of increasing
/// depth, whose cluster contains it.
std::string walls_json(const WallDecomposition& deco);

}  // namespace dobrushin
