#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dobrushin/error.hpp"
#include "dobrushin/experiment.hpp"

using namespace dobrushin;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dobrushin-test-" + name);
  fs::remove_all(p);
  return p;
}

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.n = 4;
  s.h = 6;
  s.beta = 0.8;
  s.steps = 20000;
  s.burn_in = 2000;
  s.thin = 500;
  s.seeds = {3, 4};
  s.floors = {FloorConstraint::none(), FloorConstraint::interface_conditioned(1)};
  return s;
}

}  // namespace

TEST_CASE("experiment spec parsing") {
  const auto s = parse_experiment_spec(
      R"({"n": 6, "h": 8, "beta": 1.1, "floors": ["none", "plus:2"], "steps": 1000, "burn_in": 10,
          "thin": 5, "seeds": [1, 2, 3], "acceptance": "heat-bath", "trace": "horizontal"})");
  CHECK(s.n == 6);
  CHECK(s.floors.size() == 2);
  CHECK(s.floors[1] == FloorConstraint::plus_below(2));
  CHECK(s.acceptance == Acceptance::HeatBath);
  CHECK(s.trace == ColumnTrace::Horizontal);
  CHECK(parse_experiment_spec(experiment_spec_json(s)).seeds == s.seeds);
  CHECK(spec_hash(s) == spec_hash(parse_experiment_spec(experiment_spec_json(s))));

  auto code_of = [](const std::string& text) {
    try {
      parse_experiment_spec(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Ok;
  };
  CHECK(code_of("{not json") == ErrorCode::Parse);
  CHECK(code_of(R"({"n": "six"})") == ErrorCode::Parse);
  CHECK(code_of(R"({"acceptance": "gibbs"})") == ErrorCode::Parse);
  CHECK(code_of(R"({"h": 7})") == ErrorCode::InvalidArgument);
  CHECK(code_of(R"({"steps": 10, "burn_in": 10})") == ErrorCode::InvalidArgument);
}

TEST_CASE("simulate writes one directory per floor and reruns are byte-identical") {
  const auto spec = small_spec();
  const auto a = scratch("sim-a");
  const auto b = scratch("sim-b");
  cmd_simulate(spec, a.string());
  setenv("DOBRUSHIN_WORKERS", "1", 1);
  CHECK(worker_count_from_env() == 1);
  cmd_simulate(spec, b.string());
  unsetenv("DOBRUSHIN_WORKERS");

  CHECK(fs::is_directory(a / "none"));
  CHECK(fs::is_directory(a / "interface-1"));
  for (const auto* floor : {"none", "interface-1"}) {
    for (const auto* seed : {"3", "4"}) {
      const auto csv = fs::path(floor) / (std::string("seed-") + seed + ".csv");
      const auto fin = fs::path(floor) / (std::string("final-") + seed + ".json");
      REQUIRE(fs::exists(a / csv));
      CHECK(slurp(a / csv) == slurp(b / csv));
      CHECK(slurp(a / fin) == slurp(b / fin));
    }
  }
  CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
  CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));

  // 36 rows after burn-in, plus the hash line and the header
  const auto text = slurp(a / "none" / "seed-3.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 38);
  const std::string tag = "spec_hash=" + spec_hash(spec);
  CHECK(text.rfind("# " + tag, 0) == 0);
  CHECK(slurp(a / "summary.csv").rfind("# " + tag, 0) == 0);
  CHECK(slurp(a / "manifest.json").find(spec_hash(spec)) != std::string::npos);
  CHECK(slurp(a / "none" / "final-3.json").find(spec_hash(spec)) != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("reducer is idempotent and uses seed means") {
  const auto spec = small_spec();
  const auto dir = scratch("reduce");
  cmd_simulate(spec, dir.string());
  const auto first = slurp(dir / "summary.csv");
  const auto rows = reduce_run(dir.string());
  CHECK(slurp(dir / "summary.csv") == first);
  CHECK(rows.size() == 2 * observable_columns().size());
  for (const auto& r : rows) {
    CHECK(r.seeds == 2);
    CHECK(r.samples == 72);
    CHECK(r.se >= 0);
  }
  // interface floor at 1: the lowest height never goes under -1
  for (const auto& r : rows)
    if (r.floor == "interface-1" && r.column == "min_height") CHECK(r.mean >= -1.0);
  fs::remove(dir / "interface-1" / "seed-4.csv");
  CHECK_THROWS_AS(reduce_run(dir.string()), Error);
  fs::remove_all(dir);
}

TEST_CASE("worker pool") {
  std::vector<int> out(50, 0);
  std::vector<std::function<void()>> tasks;
  for (int i = 0; i < 50; ++i) tasks.emplace_back([&out, i] { out[static_cast<std::size_t>(i)] = i * i; });
  run_parallel(tasks, 4);
  for (int i = 0; i < 50; ++i) CHECK(out[static_cast<std::size_t>(i)] == i * i);
  tasks.emplace_back([] { throw Error(ErrorCode::Io, "boom"); });
  CHECK_THROWS_AS(run_parallel(tasks, 3), Error);

  setenv("DOBRUSHIN_WORKERS", "3", 1);
  CHECK(worker_count_from_env() == 3);
  setenv("DOBRUSHIN_WORKERS", "zero", 1);
  CHECK(worker_count_from_env() >= 1);
  unsetenv("DOBRUSHIN_WORKERS");
}

TEST_CASE("repulsion sweep") {
  AlphaTable t;
  t.beta = 0.8;
  for (int h = 1; h <= 4; ++h) {
    AlphaEntry e;
    e.h = h;
    e.alpha = 3.0 * h;
    t.entries.push_back(e);
  }
  SweepOptions o;
  o.base = small_spec();
  o.base.seeds = {1};
  o.floors = {0, 1};
  const auto dir = scratch("sweep");
  const auto csv = repulsion_sweep(t, o, dir.string());
  // log 4 - 1.6 = -0.21 so h* = 1
  CHECK(csv.find("interface-0,0,1,-1,") != std::string::npos);
  CHECK(csv.find("interface-1,1,1,0,") != std::string::npos);
  CHECK(csv.rfind("# spec_hash=", 0) == 0);
  CHECK(csv.find("\nnone,,1,,") != std::string::npos);
  CHECK(fs::exists(dir / "sweep.csv"));
  fs::remove_all(dir);

  AlphaTable low = t;
  for (auto& e : low.entries) e.alpha = -5;
  try {
    repulsion_sweep(low, o, scratch("sweep-low").string());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ThresholdNotCrossed);
  }
}

TEST_CASE("fast validation passes and a corrupted reconstruction is caught") {
  ValidateOptions o;
  const auto good = run_validation(o);
  REQUIRE(good.size() == 6);
  for (const auto& r : good) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.passed);
    CHECK(r.checked > 0);
  }
  o.mutate_reconstruct = true;
  const auto bad = run_validation(o);
  bool bijection_failed = false;
  for (const auto& r : bad)
    if (r.name == "bijection") bijection_failed = !r.passed && r.failures > 0;
  CHECK(bijection_failed);
  CHECK(validation_json(bad, o).find("\"passed\": false") != std::string::npos);
}
