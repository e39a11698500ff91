#include <random>

#include "doctest.h"
#include "dobrushin/error.hpp"
#include "dobrushin/interface.hpp"

using namespace dobrushin;

TEST_CASE("extract: ground state is flat") {
  for (int n : {1, 2, 5}) {
    const BoxDims d{n, n, 4};
    const auto i = extract_interface(SpinConfig::ground_state(d));
    CHECK(i.size() == static_cast<std::size_t>(n * n));
    CHECK(i == Interface::flat(d));
  }
}

TEST_CASE("extract: unit bump") {
  const BoxDims d{2, 2, 2};
  auto s = SpinConfig::ground_state(d);
  s.flip(Cell{0, 0, 0});
  const auto i = extract_interface(s);
  REQUIRE(i.size() == 8);
  int flat0 = 0, vertical = 0, top = 0;
  for (const auto& f : i.faces()) {
    if (!f.is_horizontal()) {
      ++vertical;
    } else if (f.height2() == 0) {
      ++flat0;
    } else if (f.height2() == 2) {
      ++top;
    }
  }
  CHECK(flat0 == 3);
  CHECK(vertical == 4);
  CHECK(top == 1);
}

TEST_CASE("extract: detached bubble is excluded") {
  const BoxDims d{4, 4, 8};
  auto s = SpinConfig::ground_state(d);
  s.flip(Cell{0, 0, -3});  // minus cell deep in the plus phase
  s.flip(Cell{-1, 1, 2});  // plus cell high in the minus phase
  const auto i = extract_interface(s);
  CHECK(i == Interface::flat(d));
  CHECK(hamiltonian(s) == static_cast<std::int64_t>(i.size()) + 12);
}

TEST_CASE("spin_from_interface inverts extraction") {
  const BoxDims d{2, 2, 2};
  CHECK(spin_from_interface(Interface::flat(d)) == SpinConfig::ground_state(d));
  auto s = SpinConfig::ground_state(d);
  s.flip(Cell{0, 0, 0});
  CHECK(spin_from_interface(extract_interface(s)) == s);

  // Removing a face from a valid interface breaks it.
  auto faces = extract_interface(s).faces();
  faces.pop_back();
  CHECK_THROWS_AS(spin_from_interface(Interface(d, faces)), Error);
}

TEST_CASE("exhaustive round trip and energy bound on 2x2x4") {
  const BoxDims d{2, 2, 4};
  for (std::uint64_t code = 0; code < (1u << 16); ++code) {
    const auto s = SpinConfig::from_code(d, code);
    const auto i = extract_interface(s);
    const auto sigma = spin_from_interface(i);
    REQUIRE(extract_interface(sigma) == i);
    const auto h = hamiltonian(s);
    REQUIRE(static_cast<std::int64_t>(i.size()) <= h);
    // Equality exactly when s is already the canonical (bubble-free) field.
    REQUIRE((static_cast<std::int64_t>(i.size()) == h) == (sigma == s));
  }
}

TEST_CASE("reflection covariance") {
  std::mt19937_64 rng(17);
  const BoxDims d{3, 3, 6};
  for (int t = 0; t < 500; ++t) {
    SpinConfig s(d);
    for (std::size_t k = 0; k < d.cell_count(); ++k) {
      const Cell c = d.cell_at(k);
      const Spin g = dobrushin_spin(c);
      s.set_index(k, (rng() % 5 == 0) ? static_cast<Spin>(-g) : g);
    }
    REQUIRE(extract_interface(reflect(s)) == reflect(extract_interface(s)));
  }
}

TEST_CASE("floor predicate") {
  const BoxDims d{3, 3, 4};
  CHECK(satisfies_floor(Interface::flat(d), 0));
  CHECK(satisfies_floor(Interface::flat(d), 5));
  auto s = SpinConfig::ground_state(d);
  s.flip(Cell{0, 0, -1});  // downward bump
  const auto i = extract_interface(s);
  CHECK_FALSE(satisfies_floor(i, 0));
  CHECK(satisfies_floor(i, 1));
}

TEST_CASE("interface json round trip") {
  const BoxDims d{3, 3, 4};
  auto s = SpinConfig::ground_state(d);
  s.flip(Cell{0, 0, 0});
  const auto i = extract_interface(s);
  const auto text = interface_json(i);
  CHECK(interface_from_json(d, text) == i);
  CHECK_THROWS(interface_from_json(d, "[[0,0,0,\"Q\"]]"));
}
