#pragma once

// Per-sample interface statistics: height histograms, column traces, the
// repelled/nonzero site counts, ceiling areas, wall budgets and oscillations.

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "dobrushin/interface.hpp"
#include "dobrushin/walls.hpp"

namespace dobrushin {

/// Which interface faces make up the trace of a column {x} x R.
///   Closed:     horizontal faces above x plus the vertical faces on the four
///               sides of the column (the closed prism).
///   Horizontal: horizontal faces above x only (the line through the midpoint).
enum class ColumnTrace { Closed, Horizontal };

enum class ColumnClass : std::uint8_t { SingletonAtZero, SingletonElsewhere, NonSingleton };

/// Faces of `iface` in each column trace, indexed by BoxDims::column_index.
std::vector<std::vector<Face>> column_traces(const Interface& iface, ColumnTrace trace = ColumnTrace::Closed);

struct HeightHistogram {
  std::map<int, std::int64_t> counts;  // height -> horizontal interface faces
  std::vector<ColumnClass> columns;    // column_index order
  std::int64_t horizontal_faces = 0;
  std::int64_t singleton_at_zero = 0;
  std::int64_t singleton_elsewhere = 0;
  std::int64_t non_singleton = 0;

  [[nodiscard]] double mean_height() const;
  [[nodiscard]] int max_height() const { return counts.empty() ? 0 : counts.rbegin()->first; }
  [[nodiscard]] int min_height() const { return counts.empty() ? 0 : counts.begin()->first; }
  [[nodiscard]] double zero_fraction() const;  // singleton_at_zero / columns
};

HeightHistogram height_histogram(const Interface& iface, ColumnTrace trace = ColumnTrace::Closed);

/// Interface faces whose midpoint lies strictly below height h_star - floor_h - 1.
std::int64_t half_space_count(const Interface& iface, int h_star, int floor_h);

/// Columns whose trace meets a face with midpoint below h_star - floor_h - k,
/// or is not a single face.
std::int64_t repelled_sites(const Interface& iface, int h_star, int floor_h, int k,
                            ColumnTrace trace = ColumnTrace::Closed);

/// Columns whose trace is anything other than the single face at height 0.
std::int64_t nonzero_sites(const Interface& iface, ColumnTrace trace = ColumnTrace::Closed);

struct CeilingEntry {
  int height = 0;
  std::int64_t area = 0;
  std::int64_t hull_area = 0;
  bool flagged = false;  // area >= threshold and hull projection not within the isodim bound
};

struct CeilingProfile {
  std::map<int, std::int64_t> area_by_height;
  std::vector<CeilingEntry> ceilings;  // decomposition order
};

/// Hulls that are not edge-connected count as irregular when flagged.
CeilingProfile ceiling_area_profile(const WallDecomposition& deco, std::int64_t area_threshold = 0,
                                    double isodim_d = std::numeric_limits<double>::infinity());

/// Total excess energy over all walls.
std::int64_t wall_face_budget(const WallDecomposition& deco);
/// The e^{-2 beta} n^2 reference line.
double wall_face_budget_line(double beta, int n);

struct OscillationStats {
  int up = 0;            // highest horizontal face over S
  int down = 0;          // lowest horizontal face over S
  int centered_up = 0;   // up - reference
  int centered_down = 0; // reference - down
};

/// Throws Error(InvalidArgument) if `region` is empty or leaves the base.
OscillationStats oscillations(const Interface& iface, const std::vector<PlaneFace>& region, int reference_height);

}  // namespace dobrushin
