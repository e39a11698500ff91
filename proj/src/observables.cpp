#include "dobrushin/observables.hpp"

#include <cmath>

#include "dobrushin/error.hpp"

namespace dobrushin {

std::vector<std::vector<Face>> column_traces(const Interface& iface, ColumnTrace trace) {
  const BoxDims& d = iface.dims();
  std::vector<std::vector<Face>> cols(d.column_count());
  auto add = [&](int x, int y, const Face& f) {
    if (d.contains_column(x, y)) cols[d.column_index(x, y)].push_back(f);
  };
  for (const Face& f : iface.faces()) {
    const Cell& a = f.anchor;
    switch (f.axis) {
      case Axis::Z:
        add(a.x, a.y, f);
        break;
      case Axis::X:  // the plane x = a.x + 1 bounds columns a.x and a.x + 1
        if (trace == ColumnTrace::Closed) {
          add(a.x, a.y, f);
          add(a.x + 1, a.y, f);
        }
        break;
      case Axis::Y:
        if (trace == ColumnTrace::Closed) {
          add(a.x, a.y, f);
          add(a.x, a.y + 1, f);
        }
        break;
    }
  }
  return cols;
}

double HeightHistogram::mean_height() const {
  if (horizontal_faces == 0) return 0.0;
  double s = 0;
  for (const auto& [h, c] : counts) s += static_cast<double>(h) * static_cast<double>(c);
  return s / static_cast<double>(horizontal_faces);
}

double HeightHistogram::zero_fraction() const {
  return columns.empty() ? 0.0 : static_cast<double>(singleton_at_zero) / static_cast<double>(columns.size());
}

HeightHistogram height_histogram(const Interface& iface, ColumnTrace trace) {
  HeightHistogram hist;
  for (const Face& f : iface.faces()) {
    if (!f.is_horizontal()) continue;
    ++hist.counts[f.height2() / 2];
    ++hist.horizontal_faces;
  }
  for (const auto& col : column_traces(iface, trace)) {
    ColumnClass c = ColumnClass::NonSingleton;
    if (col.size() == 1) c = col.front().height2() == 0 ? ColumnClass::SingletonAtZero : ColumnClass::SingletonElsewhere;
    hist.columns.push_back(c);
    switch (c) {
      case ColumnClass::SingletonAtZero: ++hist.singleton_at_zero; break;
      case ColumnClass::SingletonElsewhere: ++hist.singleton_elsewhere; break;
      case ColumnClass::NonSingleton: ++hist.non_singleton; break;
    }
  }
  return hist;
}

std::int64_t half_space_count(const Interface& iface, int h_star, int floor_h) {
  const int t2 = 2 * (h_star - floor_h - 1);
  std::int64_t n = 0;
  for (const Face& f : iface.faces()) n += f.height2() < t2;
  return n;
}

std::int64_t repelled_sites(const Interface& iface, int h_star, int floor_h, int k, ColumnTrace trace) {
  const int t2 = 2 * (h_star - floor_h - k);
  std::int64_t n = 0;
  for (const auto& col : column_traces(iface, trace)) {
    bool hit = col.size() != 1;
    for (const Face& f : col) hit = hit || f.height2() < t2;
    n += hit;
  }
  return n;
}

std::int64_t nonzero_sites(const Interface& iface, ColumnTrace trace) {
  std::int64_t n = 0;
  for (const auto& col : column_traces(iface, trace)) n += !(col.size() == 1 && col.front().height2() == 0);
  return n;
}

CeilingProfile ceiling_area_profile(const WallDecomposition& deco, std::int64_t area_threshold, double isodim_d) {
  CeilingProfile p;
  for (const Ceiling& c : deco.ceilings) {
    CeilingEntry e;
    e.height = c.height;
    e.area = static_cast<std::int64_t>(c.faces.size());
    const auto h = hull(c);
    e.hull_area = static_cast<std::int64_t>(h.size());
    if (e.area >= area_threshold && std::isfinite(isodim_d)) {
      try {
        e.flagged = !isodim_at_most(h, isodim_d);
      } catch (const Error&) {
        e.flagged = true;
      }
    }
    p.area_by_height[c.height] += e.area;
    p.ceilings.push_back(e);
  }
  return p;
}

std::int64_t wall_face_budget(const WallDecomposition& deco) {
  std::int64_t total = 0;
  for (const Wall& w : deco.walls) total += excess_energy(w);
  return total;
}

double wall_face_budget_line(double beta, int n) {
  return std::exp(-2.0 * beta) * static_cast<double>(n) * static_cast<double>(n);
}

OscillationStats oscillations(const Interface& iface, const std::vector<PlaneFace>& region, int reference_height) {
  if (region.empty()) throw Error(ErrorCode::InvalidArgument, "oscillation region is empty");
  const BoxDims& d = iface.dims();
  std::vector<std::uint8_t> in(d.column_count(), 0);
  for (const PlaneFace& x : region) {
    if (!d.contains_column(x.x, x.y)) throw Error(ErrorCode::InvalidArgument, "oscillation region leaves the base");
    in[d.column_index(x.x, x.y)] = 1;
  }
  bool any = false;
  OscillationStats s;
  for (const Face& f : iface.faces()) {
    if (!f.is_horizontal() || in[d.column_index(f.anchor.x, f.anchor.y)] == 0) continue;
    const int h = f.height2() / 2;
    s.up = any ? std::max(s.up, h) : h;
    s.down = any ? std::min(s.down, h) : h;
    any = true;
  }
  s.centered_up = s.up - reference_height;
  s.centered_down = reference_height - s.down;
  return s;
}

}  // namespace dobrushin
