#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "dobrushin/error.hpp"
#include "dobrushin/observables.hpp"

using namespace dobrushin;

namespace {

SpinConfig with_plus(const BoxDims& d, std::initializer_list<Cell> cells) {
  auto s = SpinConfig::ground_state(d);
  for (const Cell& c : cells) s.set(c, 1);
  return s;
}

Interface random_interface(const BoxDims& d, std::mt19937_64& rng, int flips) {
  auto s = SpinConfig::ground_state(d);
  for (int t = 0; t < flips; ++t) {
    const int x = d.x_lo() + static_cast<int>(rng() % static_cast<unsigned>(d.n));
    const int y = d.y_lo() + static_cast<int>(rng() % static_cast<unsigned>(d.m));
    const int z = -2 + static_cast<int>(rng() % 4U);
    s.flip(Cell{x, y, z});
  }
  return extract_interface(s);
}

// Geometric reference: does the closed face meet the column [cx,cx+1]x[cy,cy+1]xR
// in a set of positive area (Closed), or contain the column's axis (Horizontal)?
bool in_column(const Face& f, int cx, int cy, ColumnTrace trace) {
  const auto v = f.vertices();
  int x0 = v[0].x, x1 = v[0].x, y0 = v[0].y, y1 = v[0].y;
  for (const auto& p : v) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  if (f.is_horizontal()) return x0 == cx && y0 == cy;
  if (trace == ColumnTrace::Horizontal) return false;
  // vertical: projection is a segment; it counts when it is a side of the square
  const bool inside = x0 >= cx && x1 <= cx + 1 && y0 >= cy && y1 <= cy + 1;
  return inside && (x0 == x1 || y0 == y1);
}

SpinConfig mirror_x(const SpinConfig& s) {
  const BoxDims& d = s.dims();
  SpinConfig out(d);
  for (std::size_t i = 0; i < d.cell_count(); ++i) {
    const Cell c = d.cell_at(i);
    out.set(Cell{-1 - c.x, c.y, c.z}, s.at(c));
  }
  return out;
}

SpinConfig transpose(const SpinConfig& s) {
  const BoxDims& d = s.dims();
  SpinConfig out(d);
  for (std::size_t i = 0; i < d.cell_count(); ++i) {
    const Cell c = d.cell_at(i);
    out.set(Cell{c.y, c.x, c.z}, s.at(c));
  }
  return out;
}

}  // namespace

TEST_CASE("histogram of the flat interface") {
  const auto h = height_histogram(Interface::flat(BoxDims{6, 6, 4}));
  CHECK(h.counts == std::map<int, std::int64_t>{{0, 36}});
  CHECK(h.singleton_at_zero == 36);
  CHECK(h.zero_fraction() == 1.0);
  CHECK(h.mean_height() == 0.0);
  CHECK(nonzero_sites(Interface::flat(BoxDims{6, 6, 4})) == 0);
}

TEST_CASE("unit bump") {
  const BoxDims d{5, 5, 4};
  const auto iface = extract_interface(with_plus(d, {Cell{0, 0, 0}}));
  const auto h = height_histogram(iface);
  CHECK(h.counts == std::map<int, std::int64_t>{{0, 24}, {1, 1}});
  // the bump column and its four edge neighbours see a vertical face
  CHECK(h.non_singleton == 5);
  CHECK(h.singleton_at_zero == 20);
  CHECK(nonzero_sites(iface) == 5);
  CHECK(nonzero_sites(iface, ColumnTrace::Horizontal) == 1);
  CHECK(repelled_sites(iface, 0, 0, 0) == 5);
  CHECK(repelled_sites(iface, 0, 0, 0, ColumnTrace::Horizontal) == 0);
  const auto hh = height_histogram(iface, ColumnTrace::Horizontal);
  CHECK(hh.singleton_elsewhere == 1);
  CHECK(hh.singleton_at_zero == 24);
}

TEST_CASE("shifted flat interface") {
  const BoxDims d{4, 4, 8};
  const auto two = shift_up(Interface::flat(d), 2);
  CHECK(height_histogram(two).counts == std::map<int, std::int64_t>{{2, 16}});
  const auto one = shift_up(Interface::flat(d), 1);
  CHECK(nonzero_sites(one) == 16);
  CHECK(nonzero_sites(one, ColumnTrace::Horizontal) == 16);
  CHECK(height_histogram(one).mean_height() == 1.0);
}

TEST_CASE("repelled sites on flat interfaces") {
  const auto flat = Interface::flat(BoxDims{6, 6, 4});
  CHECK(repelled_sites(flat, 3, 1, 2) == 0);
  CHECK(repelled_sites(flat, 3, 1, 3) == 0);
  CHECK(repelled_sites(flat, 4, 1, 2) == 36);
  CHECK(half_space_count(flat, 2, 0) == 36);
  CHECK(half_space_count(flat, 1, 0) == 0);
}

TEST_CASE("column traces match the geometric predicate") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const BoxDims d{6, 6, 8};
    const auto iface = random_interface(d, rng, 12);
    for (auto trace : {ColumnTrace::Closed, ColumnTrace::Horizontal}) {
      const auto cols = column_traces(iface, trace);
      for (int x = d.x_lo(); x < d.x_hi(); ++x) {
        for (int y = d.y_lo(); y < d.y_hi(); ++y) {
          std::vector<std::uint64_t> ref;
          for (const Face& f : iface.faces())
            if (in_column(f, x, y, trace)) ref.push_back(f.key());
          std::vector<std::uint64_t> got;
          for (const Face& f : cols[d.column_index(x, y)]) got.push_back(f.key());
          std::sort(ref.begin(), ref.end());
          std::sort(got.begin(), got.end());
          CHECK(got == ref);
        }
      }
    }
  }
}

TEST_CASE("histogram invariants on random interfaces") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 40; ++t) {
    const BoxDims d{8, 8, 8};
    const auto s = [&] {
      auto c = SpinConfig::ground_state(d);
      for (int k = 0; k < 20; ++k) {
        const int x = d.x_lo() + static_cast<int>(rng() % 8U);
        const int y = d.y_lo() + static_cast<int>(rng() % 8U);
        c.flip(Cell{x, y, -2 + static_cast<int>(rng() % 4U)});
      }
      return c;
    }();
    const auto iface = extract_interface(s);
    const auto h = height_histogram(iface);
    std::int64_t total = 0;
    for (const auto& [k, v] : h.counts) total += v;
    CHECK(total == h.horizontal_faces);
    CHECK(h.singleton_at_zero + h.singleton_elsewhere + h.non_singleton == 64);
    const auto deco = decompose(iface);
    std::int64_t ceil_total = 0;
    for (const auto& [k, v] : ceiling_area_profile(deco).area_by_height) ceil_total += v;
    CHECK(ceil_total <= h.horizontal_faces);

    const auto nz = nonzero_sites(iface);
    CHECK(nonzero_sites(extract_interface(mirror_x(s))) == nz);
    CHECK(nonzero_sites(extract_interface(transpose(s))) == nz);

    // a threshold at or below every face leaves only the non-singleton columns
    const int lowest = h.min_height() - 1;
    CHECK(repelled_sites(iface, lowest, 0, 0) == h.non_singleton);
  }
}

TEST_CASE("ceiling area profile") {
  const BoxDims d{7, 7, 8};
  CHECK(ceiling_area_profile(decompose(Interface::flat(d))).area_by_height == std::map<int, std::int64_t>{{0, 49}});
  const auto bump = extract_interface(with_plus(d, {Cell{0, 0, 0}}));
  CHECK(ceiling_area_profile(decompose(bump)).area_by_height == std::map<int, std::int64_t>{{0, 48}, {1, 1}});

  // 3x3 plateau at height 1 with a unit bump at its centre
  auto s = SpinConfig::ground_state(d);
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y) s.set(Cell{x, y, 0}, 1);
  s.set(Cell{0, 0, 1}, 1);
  const auto prof = ceiling_area_profile(decompose(extract_interface(s)));
  CHECK(prof.area_by_height == std::map<int, std::int64_t>{{0, 40}, {1, 8}, {2, 1}});
  for (const auto& c : prof.ceilings) CHECK_FALSE(c.flagged);

  // isodim flags: the 8-face ring around the bump has a hull of 9 and fails d = 1.5
  const auto flagged = ceiling_area_profile(decompose(extract_interface(s)), 5, 1.5);
  int n_flagged = 0;
  for (const auto& c : flagged.ceilings) {
    n_flagged += c.flagged;
    if (c.height == 1) CHECK(c.hull_area == 9);
  }
  CHECK(n_flagged == 2);
}

TEST_CASE("wall face budget") {
  const BoxDims d{9, 9, 4};
  CHECK(wall_face_budget(decompose(Interface::flat(d))) == 0);
  CHECK(wall_face_budget(decompose(extract_interface(with_plus(d, {Cell{0, 0, 0}})))) == 4);
  CHECK(wall_face_budget(decompose(extract_interface(with_plus(d, {Cell{-3, -3, 0}, Cell{3, 3, 0}})))) == 8);
  CHECK(wall_face_budget_line(1.0, 10) == doctest::Approx(100 * std::exp(-2.0)));
}

TEST_CASE("oscillations") {
  const BoxDims d{5, 5, 6};
  auto s = SpinConfig::ground_state(d);
  s.set(Cell{0, 0, 0}, 1);
  s.set(Cell{0, 0, 1}, 1);
  s.set(Cell{1, 1, -1}, -1);
  const auto iface = extract_interface(s);
  std::vector<PlaneFace> all;
  for (int x = d.x_lo(); x < d.x_hi(); ++x)
    for (int y = d.y_lo(); y < d.y_hi(); ++y) all.push_back({x, y});
  const auto o = oscillations(iface, all, 0);
  CHECK(o.up == 2);
  CHECK(o.down == -1);
  CHECK(o.centered_up == 2);
  CHECK(o.centered_down == 1);
  const auto corner = oscillations(iface, {{-2, -2}}, 1);
  CHECK(corner.up == 0);
  CHECK(corner.centered_down == 1);
  CHECK(corner.centered_up == -1);
  CHECK_THROWS_AS(oscillations(iface, {}, 0), Error);
  CHECK_THROWS_AS(oscillations(iface, {{9, 9}}, 0), Error);
}
