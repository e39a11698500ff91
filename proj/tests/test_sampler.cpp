#include <cmath>
#include <map>
#include <unordered_map>

#include "doctest.h"
#include "dobrushin/error.hpp"
#include "dobrushin/oracle.hpp"
#include "dobrushin/sampler.hpp"

using namespace dobrushin;

namespace {

ModelParams params(int n, int h, double beta) {
  ModelParams p;
  p.beta = beta;
  p.dims = BoxDims{n, n, h};
  return p;
}

// Interface marginal of a chain, visiting every step after burn-in.
std::map<std::string, double> empirical_marginal(const ModelParams& p, const FloorConstraint& c, std::uint64_t steps,
                                                 std::uint64_t seed, Acceptance acc = Acceptance::Metropolis) {
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  ChainState chain(p, c, SpinConfig::ground_state(p.dims), seed, ChainOptions{acc, 0});
  chain.run(1000);
  for (std::uint64_t t = 0; t < steps; ++t) {
    chain.step();
    ++counts[chain.code()];
  }
  std::map<std::string, double> out;
  for (auto [code, k] : counts) {
    out[extract_interface(SpinConfig::from_code(p.dims, code)).canonical_key()] +=
        static_cast<double>(k) / static_cast<double>(steps);
  }
  return out;
}

}  // namespace

TEST_CASE("floor constraint parsing") {
  CHECK(parse_floor_constraint("none") == FloorConstraint::none());
  CHECK(parse_floor_constraint("interface:3") == FloorConstraint::interface_conditioned(3));
  CHECK(parse_floor_constraint("plus:0") == FloorConstraint::plus_below(0));
  for (auto c : {FloorConstraint::none(), FloorConstraint::interface_conditioned(2), FloorConstraint::plus_below(5)})
    CHECK(parse_floor_constraint(to_string(c)) == c);
  CHECK_THROWS_AS(parse_floor_constraint("plus:-1"), Error);
  CHECK_THROWS_AS(parse_floor_constraint("floor"), Error);
  CHECK_THROWS_AS(parse_floor_constraint("interface:"), Error);
}

TEST_CASE("rng stays in range and is reproducible") {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(10);
    CHECK(x < 10);
    CHECK(x == b.below(10));
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    b.uniform();
  }
}

TEST_CASE("beta 0 accepts everything and is uniform") {
  const auto p = params(2, 2, 0.0);
  ChainState chain(p, FloorConstraint::none(), SpinConfig::ground_state(p.dims), 11);
  std::vector<std::uint64_t> hist(256, 0);
  const std::uint64_t samples = 100000;
  for (std::uint64_t s = 0; s < samples; ++s) {
    chain.run(37);  // odd thinning visits both parity classes
    ++hist[chain.code()];
  }
  CHECK(chain.accepted() == chain.steps());
  const double expect = static_cast<double>(samples) / 256.0;
  double chi2 = 0;
  for (auto k : hist) chi2 += (static_cast<double>(k) - expect) * (static_cast<double>(k) - expect) / expect;
  // 255 degrees of freedom: mean 255, sd 22.6
  CHECK(chi2 < 370.0);
}

TEST_CASE("beta 3 returns to the ground state") {
  const auto p = params(2, 2, 3.0);
  const auto ground = SpinConfig::ground_state(p.dims);
  const auto exact = enumerate_configs(p.dims, 3.0, FloorConstraint::none());
  double exact_mass = 0;
  for (std::size_t i = 0; i < exact.size(); ++i)
    if (exact.codes[i] == ground.code()) exact_mass = exact.weights[i];
  CHECK(exact_mass >= 0.95);
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ChainState chain(p, FloorConstraint::none(), ground, seed);
    chain.run(10000);
    hits += chain.config() == ground;
  }
  CHECK(hits >= 95);
}

TEST_CASE("interface floor rejects a downward bump and allows detached bubbles") {
  const auto p = params(4, 12, 1.0);
  ChainState chain(p, FloorConstraint::interface_conditioned(0), SpinConfig::ground_state(p.dims), 1);
  const auto& d = p.dims;
  CHECK_FALSE(chain.floor_check(d.index(Cell{0, 0, -1})));
  CHECK(chain.floor_check(d.index(Cell{0, 0, -5})));
  for (int z = 0; z < 6; ++z) CHECK(chain.floor_check(d.index(Cell{1, -1, z})));

  // A bubble below the floor is fine, but it must not grow into the interface.
  auto s = SpinConfig::ground_state(d);
  s.set(Cell{0, 0, -3}, -1);
  ChainState bubbly(p, FloorConstraint::interface_conditioned(0), s, 1);
  CHECK(bubbly.floor_check(d.index(Cell{0, 0, -2})));
  s.set(Cell{0, 0, -2}, -1);
  ChainState column(p, FloorConstraint::interface_conditioned(0), s, 1);
  CHECK_FALSE(column.floor_check(d.index(Cell{0, 0, -1})));
  // With the floor at -1 a bump at (1,1) is allowed on its own, but it touches
  // the bubble at a corner and so drags it into the interface.
  ChainState loose(p, FloorConstraint::interface_conditioned(1), s, 1);
  CHECK_FALSE(loose.floor_check(d.index(Cell{1, 1, -1})));
  CHECK(loose.floor_check(d.index(Cell{-2, -2, -1})));
}

TEST_CASE("interface floor at depth h") {
  const auto p = params(4, 12, 1.0);
  const auto& d = p.dims;
  ChainState chain(p, FloorConstraint::interface_conditioned(2), SpinConfig::ground_state(d), 1);
  CHECK(chain.floor_check(d.index(Cell{0, 0, -1})));
  auto s = SpinConfig::ground_state(d);
  s.set(Cell{0, 0, -1}, -1);
  s.set(Cell{0, 0, -2}, -1);
  ChainState deep(p, FloorConstraint::interface_conditioned(2), s, 1);
  CHECK_FALSE(deep.floor_check(d.index(Cell{0, 0, -3})));
  CHECK(deep.floor_check(d.index(Cell{0, 0, -2})));
}

TEST_CASE("plus-below floor") {
  const auto p = params(4, 8, 1.0);
  const auto& d = p.dims;
  ChainState chain(p, FloorConstraint::plus_below(0), SpinConfig::ground_state(d), 1);
  CHECK_FALSE(chain.floor_check(d.index(Cell{0, 0, -2})));
  CHECK_FALSE(chain.floor_check(d.index(Cell{0, 0, -1})));
  CHECK(chain.floor_check(d.index(Cell{0, 0, 0})));
  CHECK(chain.floor_check(d.index(Cell{0, 0, 2})));
  ChainState h1(p, FloorConstraint::plus_below(1), SpinConfig::ground_state(d), 1);
  CHECK(h1.floor_check(d.index(Cell{0, 0, -1})));
  CHECK_FALSE(h1.floor_check(d.index(Cell{0, 0, -2})));
}

TEST_CASE("infeasible start is refused") {
  const auto p = params(4, 8, 1.0);
  auto s = SpinConfig::ground_state(p.dims);
  s.set(Cell{0, 0, -1}, -1);
  CHECK_THROWS_AS(ChainState(p, FloorConstraint::plus_below(0), s, 1), Error);
  CHECK_THROWS_AS(ChainState(p, FloorConstraint::interface_conditioned(0), s, 1), Error);
  CHECK_NOTHROW(ChainState(p, FloorConstraint::interface_conditioned(1), s, 1));
  try {
    ChainState(p, FloorConstraint::plus_below(0), s, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Infeasible);
  }
}

TEST_CASE("caches survive audits in every mode") {
  const auto p = params(4, 6, 0.8);
  for (auto c : {FloorConstraint::none(), FloorConstraint::plus_below(0), FloorConstraint::interface_conditioned(0),
                 FloorConstraint::interface_conditioned(1)}) {
    for (auto acc : {Acceptance::Metropolis, Acceptance::HeatBath}) {
      ChainState chain(p, c, SpinConfig::ground_state(p.dims), 5, ChainOptions{acc, 997});
      CHECK_NOTHROW(chain.run(100000));
      CHECK_NOTHROW(chain.audit());
      CHECK(chain.accepted() > 0);
      if (c.mode != FloorMode::None) CHECK(chain.floor_rejections() > 0);
    }
  }
}

TEST_CASE("plus-below samples keep the interface above the floor") {
  const auto p = params(6, 10, 0.6);
  int checked = 0;
  run_chain(p, FloorConstraint::plus_below(1), 200000, 10000, 500, 3, [&](const ChainState& s, const ChainRecord&) {
    CHECK(satisfies_floor(extract_interface(s.config()), 1));
    ++checked;
  });
  CHECK(checked == 380);
}

TEST_CASE("run_chain determinism") {
  const auto p = params(4, 6, 0.9);
  auto stream = [&](std::uint64_t seed) {
    std::vector<std::int64_t> e;
    run_chain(p, FloorConstraint::interface_conditioned(0), 50000, 1000, 100, seed,
              [&](const ChainState&, const ChainRecord& r) { e.push_back(r.energy); });
    return e;
  };
  const auto a = stream(42);
  CHECK(a.size() == 490);
  CHECK(a == stream(42));
  CHECK(a != stream(43));
  CHECK_THROWS_AS(run_chain(p, FloorConstraint::none(), 10, 10, 1, 1, nullptr), std::invalid_argument);
  CHECK_THROWS_AS(run_chain(p, FloorConstraint::none(), 10, 0, 0, 1, nullptr), std::invalid_argument);
}

TEST_CASE("interface marginal agrees with the exact oracle") {
  const auto p = params(2, 2, 0.5);
  for (auto c : {FloorConstraint::none(), FloorConstraint::interface_conditioned(0), FloorConstraint::plus_below(0)}) {
    const auto exact = interface_marginal(enumerate_configs(p.dims, p.beta, c));
    CHECK(total_variation(empirical_marginal(p, c, 2000000, 17), exact) < 0.02);
    CHECK(total_variation(empirical_marginal(p, c, 2000000, 18, Acceptance::HeatBath), exact) < 0.02);
  }
}

TEST_CASE("near_box_edge") {
  const BoxDims d{4, 4, 8};
  CHECK_FALSE(near_box_edge(Interface::flat(d)));
  CHECK(near_box_edge(Interface::flat(d), 5));
  auto s = SpinConfig::ground_state(d);
  for (int z = 0; z < 3; ++z) s.set(Cell{0, 0, z}, 1);
  CHECK(near_box_edge(extract_interface(s)));
}
