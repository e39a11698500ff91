#include "dobrushin/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dobrushin/error.hpp"
#include "dobrushin/oracle.hpp"
#include "dobrushin/version.hpp"
#include "dobrushin/walls.hpp"

namespace dobrushin {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void make_dirs(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + p.string() + ": " + ec.message());
}

std::string acceptance_name(Acceptance a) { return a == Acceptance::Metropolis ? "metropolis" : "heat-bath"; }

std::string trace_name(ColumnTrace t) { return t == ColumnTrace::Closed ? "closed" : "horizontal"; }

}  // namespace

void ExperimentSpec::validate() const {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "n must be >= 2");
  if (h < 2 || h % 2 != 0) throw Error(ErrorCode::InvalidArgument, "box height must be even and >= 2");
  if (!(beta >= 0) || !std::isfinite(beta)) throw Error(ErrorCode::InvalidArgument, "beta must be finite and >= 0");
  if (floors.empty()) throw Error(ErrorCode::InvalidArgument, "at least one floor is required");
  for (const auto& f : floors) f.validate();
  if (steps <= burn_in) throw Error(ErrorCode::InvalidArgument, "steps must exceed burn_in");
  if (thin == 0) throw Error(ErrorCode::InvalidArgument, "thin must be positive");
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "at least one seed is required");
  if (init_lift < 0 || init_lift >= h / 2) throw Error(ErrorCode::InvalidArgument, "init_lift must be in [0, h/2)");
}

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  ExperimentSpec s;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw Error(ErrorCode::Parse, "experiment spec must be a JSON object");
    s.name = j.value("name", s.name);
    s.n = j.value("n", s.n);
    s.h = j.value("h", s.h);
    s.beta = j.value("beta", s.beta);
    if (j.contains("floors")) {
      s.floors.clear();
      for (const auto& f : j.at("floors")) s.floors.push_back(parse_floor_constraint(f.get<std::string>()));
    }
    s.steps = j.value("steps", s.steps);
    s.burn_in = j.value("burn_in", s.burn_in);
    s.thin = j.value("thin", s.thin);
    if (j.contains("seeds")) s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    const std::string acc = j.value("acceptance", std::string("metropolis"));
    if (acc == "metropolis") {
      s.acceptance = Acceptance::Metropolis;
    } else if (acc == "heat-bath") {
      s.acceptance = Acceptance::HeatBath;
    } else {
      throw Error(ErrorCode::Parse, "unknown acceptance rule '" + acc + "'");
    }
    s.init_lift = j.value("init_lift", s.init_lift);
    s.h_star = j.value("h_star", s.h_star);
    s.k = j.value("k", s.k);
    const std::string trace = j.value("trace", std::string("closed"));
    if (trace == "closed") {
      s.trace = ColumnTrace::Closed;
    } else if (trace == "horizontal") {
      s.trace = ColumnTrace::Horizontal;
    } else {
      throw Error(ErrorCode::Parse, "unknown column trace '" + trace + "'");
    }
    s.audit_interval = j.value("audit_interval", s.audit_interval);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad experiment spec: ") + e.what());
  }
  s.validate();
  return s;
}

std::string experiment_spec_json(const ExperimentSpec& s) {
  json j;
  j["name"] = s.name;
  j["n"] = s.n;
  j["h"] = s.h;
  j["beta"] = s.beta;
  j["floors"] = json::array();
  for (const auto& f : s.floors) j["floors"].push_back(to_string(f));
  j["steps"] = s.steps;
  j["burn_in"] = s.burn_in;
  j["thin"] = s.thin;
  j["seeds"] = s.seeds;
  j["acceptance"] = acceptance_name(s.acceptance);
  j["init_lift"] = s.init_lift;
  j["h_star"] = s.h_star;
  j["k"] = s.k;
  j["trace"] = trace_name(s.trace);
  j["audit_interval"] = s.audit_interval;
  return j.dump();
}

std::string spec_hash(const ExperimentSpec& spec) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : experiment_spec_json(spec) + "|" + kVersion) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const std::vector<std::string>& observable_columns() {
  static const std::vector<std::string> cols{
      "energy",        "zero_fraction",  "mean_height", "max_height",   "min_height",
      "nonzero_sites", "repelled_sites", "half_space",  "wall_budget",  "walls",
      "near_edge"};
  return cols;
}

std::vector<double> observe(const SpinConfig& config, std::int64_t energy, const ExperimentSpec& spec) {
  const Interface iface = extract_interface(config);
  const HeightHistogram hist = height_histogram(iface, spec.trace);
  const WallDecomposition deco = decompose(iface);
  const int floor_h = [&] {
    for (const auto& f : spec.floors)
      if (f.mode != FloorMode::None) return f.h;
    return 0;
  }();
  return {static_cast<double>(energy),
          hist.zero_fraction(),
          hist.mean_height(),
          static_cast<double>(hist.max_height()),
          static_cast<double>(hist.min_height()),
          static_cast<double>(nonzero_sites(iface, spec.trace)),
          static_cast<double>(repelled_sites(iface, spec.h_star, floor_h, spec.k, spec.trace)),
          static_cast<double>(half_space_count(iface, spec.h_star, floor_h)),
          static_cast<double>(wall_face_budget(deco)),
          static_cast<double>(deco.walls.size()),
          near_box_edge(iface) ? 1.0 : 0.0};
}

unsigned worker_count_from_env() {
  if (const char* v = std::getenv("DOBRUSHIN_WORKERS")) {
    char* end = nullptr;
    const long k = std::strtol(v, &end, 10);
    if (end != v && *end == '\0' && k >= 1 && k <= 1024) return static_cast<unsigned>(k);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

void run_parallel(const std::vector<std::function<void()>>& tasks, unsigned workers) {
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(tasks.size())));
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  // first failure in task order, so error reporting is deterministic too
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string floor_label(const FloorConstraint& c) {
  switch (c.mode) {
    case FloorMode::None: return "none";
    case FloorMode::InterfaceConditioned: return "interface-" + std::to_string(c.h);
    case FloorMode::PlusBelow: return "plus-" + std::to_string(c.h);
  }
  return "none";
}

namespace {

std::string csv_header() {
  std::string h = "step";
  for (const auto& c : observable_columns()) h += "," + c;
  return h + "\n";
}

std::string with_hash(const std::string& snapshot, const ExperimentSpec& spec) {
  json j = json::parse(snapshot);
  j["spec_hash"] = spec_hash(spec);
  return j.dump();
}

void run_one(const ExperimentSpec& spec, const FloorConstraint& floor, std::uint64_t seed, const fs::path& dir) {
  ModelParams params;
  params.beta = spec.beta;
  params.dims = BoxDims{spec.n, spec.n, spec.h};
  const SpinConfig init = SpinConfig::lifted(params.dims, spec.init_lift);
  ExperimentSpec local = spec;
  local.floors = {floor};
  std::string csv = "# spec_hash=" + spec_hash(spec) + "\n" + csv_header();
  const ChainState final_state = run_chain(
      params, floor, spec.steps, spec.burn_in, spec.thin, seed,
      [&](const ChainState& s, const ChainRecord& r) {
        csv += std::to_string(r.step);
        for (double v : observe(s.config(), r.energy, local)) csv += "," + fmt(v);
        csv += "\n";
      },
      ChainOptions{spec.acceptance, spec.audit_interval}, &init);
  write_file(dir / ("seed-" + std::to_string(seed) + ".csv"), csv);
  write_file(dir / ("final-" + std::to_string(seed) + ".json"), with_hash(snapshot_json(final_state.config(), spec.beta), spec));
}

struct Stream {
  std::vector<std::vector<double>> rows;  // observable values, no step column
};

Stream read_stream(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line) && !line.empty() && line[0] == '#') {
  }
  if (line + "\n" != csv_header()) {
    throw Error(ErrorCode::Parse, "unexpected header in " + path.string());
  }
  Stream s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    bool first = true;
    while (std::getline(ls, cell, ',')) {
      if (first) {
        first = false;
        continue;
      }
      row.push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (row.size() != observable_columns().size()) throw Error(ErrorCode::Parse, "ragged row in " + path.string());
    s.rows.push_back(std::move(row));
  }
  return s;
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double se_of_mean(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

void cmd_simulate(const ExperimentSpec& spec, const std::string& out_dir) {
  spec.validate();
  const fs::path root(out_dir);
  make_dirs(root);
  std::vector<std::function<void()>> tasks;
  for (const auto& floor : spec.floors) {
    const fs::path dir = root / floor_label(floor);
    make_dirs(dir);
    for (std::uint64_t seed : spec.seeds) tasks.emplace_back([&spec, floor, seed, dir] { run_one(spec, floor, seed, dir); });
  }
  json manifest;
  manifest["name"] = spec.name;
  manifest["spec"] = json::parse(experiment_spec_json(spec));
  manifest["spec_hash"] = spec_hash(spec);
  manifest["version"] = kVersion;
  manifest["floors"] = json::array();
  for (const auto& f : spec.floors) manifest["floors"].push_back(floor_label(f));
  manifest["seeds"] = spec.seeds;
  manifest["columns"] = observable_columns();
  write_file(root / "manifest.json", manifest.dump(2) + "\n");

  run_parallel(tasks, worker_count_from_env());
  reduce_run(out_dir);
}

std::vector<SummaryRow> reduce_run(const std::string& out_dir) {
  const fs::path root(out_dir);
  json manifest;
  try {
    manifest = json::parse(read_file(root / "manifest.json"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad manifest: ") + e.what());
  }
  const auto floors = manifest.at("floors").get<std::vector<std::string>>();
  const auto seeds = manifest.at("seeds").get<std::vector<std::uint64_t>>();
  const auto& cols = observable_columns();

  std::vector<SummaryRow> rows;
  std::string csv = "# spec_hash=" + manifest.at("spec_hash").get<std::string>() + "\n" +
                    "floor,column,mean,se,seeds,samples\n";
  for (const auto& floor : floors) {
    std::vector<Stream> streams;
    for (std::uint64_t seed : seeds) streams.push_back(read_stream(root / floor / ("seed-" + std::to_string(seed) + ".csv")));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      SummaryRow r;
      r.floor = floor;
      r.column = cols[c];
      r.seeds = streams.size();
      std::vector<double> seed_means;
      for (const auto& s : streams) {
        std::vector<double> v;
        for (const auto& row : s.rows) v.push_back(row[c]);
        r.samples += v.size();
        seed_means.push_back(mean_of(v));
      }
      r.mean = mean_of(seed_means);
      if (seed_means.size() >= 2) {
        r.se = se_of_mean(seed_means);
      } else if (!streams.empty()) {
        // one seed: batch means over 10 consecutive blocks
        const auto& rs = streams.front().rows;
        std::vector<double> batch;
        const std::size_t b = 10;
        if (rs.size() >= b) {
          for (std::size_t k = 0; k < b; ++k) {
            std::vector<double> v;
            for (std::size_t i = k * rs.size() / b; i < (k + 1) * rs.size() / b; ++i) v.push_back(rs[i][c]);
            batch.push_back(mean_of(v));
          }
        }
        r.se = se_of_mean(batch);
      }
      csv += r.floor + "," + r.column + "," + fmt(r.mean) + "," + fmt(r.se) + "," + std::to_string(r.seeds) + "," +
             std::to_string(r.samples) + "\n";
      rows.push_back(r);
    }
  }
  write_file(root / "summary.csv", csv);
  return rows;
}

std::string repulsion_sweep(const AlphaTable& table, const SweepOptions& options, const std::string& out_dir) {
  ExperimentSpec spec = options.base;
  const HStarResult hs = compute_h_star(table, spec.n, spec.beta);
  spec.h_star = hs.h_star;
  spec.floors = {FloorConstraint::none()};
  for (int f : options.floors) {
    spec.floors.push_back(options.plus_floor ? FloorConstraint::plus_below(f) : FloorConstraint::interface_conditioned(f));
  }
  spec.validate();
  cmd_simulate(spec, out_dir);
  const auto rows = reduce_run(out_dir);

  const std::vector<std::string> wanted{"zero_fraction", "mean_height", "max_height", "nonzero_sites", "repelled_sites"};
  std::string csv = "# spec_hash=" + spec_hash(spec) + "\n" + "floor,h,h_star,h_minus_h_star";
  for (const auto& w : wanted) csv += "," + w + "," + w + "_se";
  csv += "\n";
  for (std::size_t i = 0; i < spec.floors.size(); ++i) {
    const auto& f = spec.floors[i];
    const std::string label = floor_label(f);
    csv += label + ",";
    csv += f.mode == FloorMode::None ? std::string() : std::to_string(f.h);
    csv += "," + std::to_string(hs.h_star) + ",";
    csv += f.mode == FloorMode::None ? std::string() : std::to_string(f.h - hs.h_star);
    for (const auto& w : wanted) {
      for (const auto& r : rows) {
        if (r.floor == label && r.column == w) csv += "," + fmt(r.mean) + "," + fmt(r.se);
      }
    }
    csv += "\n";
  }
  write_file(fs::path(out_dir) / "sweep.csv", csv);
  return csv;
}

namespace {

// Diverse interfaces: snapshots of short unconditioned chains.
std::vector<Interface> sampled_interfaces(const BoxDims& d, double beta, int count, std::uint64_t seed) {
  ModelParams params;
  params.beta = beta;
  params.dims = d;
  ChainState chain(params, FloorConstraint::none(), SpinConfig::ground_state(d), seed);
  std::vector<Interface> out;
  const std::uint64_t sweep = d.cell_count();
  for (int t = 0; t < count; ++t) {
    chain.run(3 * sweep);
    out.push_back(extract_interface(chain.config()));
  }
  return out;
}

void record(SuiteResult& r, bool ok, const std::string& what) {
  ++r.checked;
  if (ok) return;
  ++r.failures;
  r.passed = false;
  if (r.detail.empty()) r.detail = what;
}

SuiteResult suite_oracle(const ValidateOptions& o) {
  SuiteResult r;
  r.name = "oracle-equivalence";
  const std::uint64_t steps = o.full ? 10000000 : 1000000;
  const double tol = o.full ? 0.02 : 0.03;
  ModelParams params;
  params.dims = BoxDims{2, 2, 2};
  int idx = 0;
  for (double beta : {0.3, 0.5, 1.0}) {
    params.beta = beta;
    for (const auto& c : {FloorConstraint::none(), FloorConstraint::interface_conditioned(0), FloorConstraint::plus_below(0)}) {
      const auto exact = interface_marginal(enumerate_configs(params.dims, beta, c));
      ChainState chain(params, c, SpinConfig::ground_state(params.dims), o.seed + static_cast<std::uint64_t>(idx++));
      chain.run(1000);
      std::vector<std::uint64_t> counts(std::uint64_t{1} << params.dims.cell_count(), 0);
      for (std::uint64_t t = 0; t < steps; ++t) {
        chain.step();
        ++counts[chain.code()];
      }
      std::map<std::string, double> emp;
      for (std::uint64_t code = 0; code < counts.size(); ++code) {
        if (counts[code] == 0) continue;
        emp[extract_interface(SpinConfig::from_code(params.dims, code)).canonical_key()] +=
            static_cast<double>(counts[code]) / static_cast<double>(steps);
      }
      const double tv = total_variation(emp, exact);
      record(r, tv < tol, "beta " + fmt(beta) + " " + to_string(c) + ": TV " + fmt(tv));
    }
  }
  return r;
}

std::string describe(const Interface& i) {
  std::string out = "interface {";
  for (std::size_t k = 0; k < i.faces().size() && k < 6; ++k) out += (k ? " " : "") + to_string(i.faces()[k]);
  return out + (i.faces().size() > 6 ? " ...}" : "}");
}

Interface maybe_mutate(Interface i, bool mutate) {
  if (!mutate || i.faces().empty()) return i;
  auto faces = i.faces();
  faces.pop_back();
  return Interface(i.dims(), std::move(faces));
}

void check_round_trip(SuiteResult& r, const Interface& i, bool mutate) {
  StandardWallCollection rep;
  try {
    rep = standard_representation(i);
  } catch (const Error& e) {
    record(r, false, std::string("standard representation threw: ") + e.what());
    return;
  }
  record(r, is_admissible(rep), "inadmissible representation for " + describe(i));
  try {
    const Interface back = maybe_mutate(reconstruct(rep), mutate);
    record(r, back == i, "reconstruction differs for " + describe(i));
  } catch (const Error& e) {
    record(r, false, std::string("reconstruct threw: ") + e.what());
  }
}

SuiteResult suite_bijection(const ValidateOptions& o) {
  SuiteResult r;
  r.name = "bijection";
  struct Box {
    BoxDims d;
    std::uint64_t stride;
  };
  std::vector<Box> boxes{{BoxDims{2, 2, 4}, o.full ? 1U : 7U}};
  if (o.full) boxes.push_back({BoxDims{3, 3, 2}, 1});
  for (const auto& b : boxes) {
    std::set<std::string> seen;
    const std::uint64_t total = std::uint64_t{1} << b.d.cell_count();
    for (std::uint64_t code = 0; code < total; code += b.stride) {
      const Interface i = extract_interface(SpinConfig::from_code(b.d, code));
      if (!seen.insert(i.canonical_key()).second) continue;
      check_round_trip(r, i, o.mutate_reconstruct);
    }
  }
  for (const auto& i : sampled_interfaces(BoxDims{6, 6, 8}, 0.6, o.full ? 400 : 60, o.seed)) {
    check_round_trip(r, i, o.mutate_reconstruct);
  }
  return r;
}

SuiteResult suite_excess(const ValidateOptions& o) {
  SuiteResult r;
  r.name = "excess-identities";
  for (const auto& i : sampled_interfaces(BoxDims{6, 6, 8}, 0.5, o.full ? 400 : 80, o.seed + 11)) {
    const auto deco = decompose(i);
    record(r, excess_rel(i, Interface::flat(i.dims())) == total_excess(deco), "total excess mismatch");
    for (const auto& w : deco.walls) {
      const auto m = excess_energy(w);
      record(r, 2 * m >= static_cast<std::int64_t>(w.faces.size()), "m(W) < |W|/2");
      record(r, m >= static_cast<std::int64_t>(w.projection.size()), "m(W) < |rho(W)|");
    }
  }
  return r;
}

SuiteResult suite_collections(const ValidateOptions& o) {
  SuiteResult r;
  r.name = "wall-collections";
  struct Base {
    int n, m, cap;
  };
  std::vector<Base> bases{{2, 2, 4}, {3, 2, 4}};
  if (o.full) bases.push_back({3, 3, 6});
  for (const auto& b : bases) {
    for (int cap = 0; cap <= b.cap; ++cap) {
      const auto colls = enumerate_standard_wall_collections(b.n, b.m, cap);
      const auto ifaces = enumerate_interfaces(b.n, b.m, cap);
      const std::string where = std::to_string(b.n) + "x" + std::to_string(b.m) + " cap " + std::to_string(cap);
      record(r, colls.size() == ifaces.size(), where + ": " + std::to_string(colls.size()) + " collections vs " +
                                                   std::to_string(ifaces.size()) + " interfaces");
      std::set<std::string> keys;
      for (const auto& i : ifaces) keys.insert(i.canonical_key());
      for (const auto& c : colls) {
        try {
          record(r, keys.count(maybe_mutate(reconstruct(c), o.mutate_reconstruct).canonical_key()) == 1,
                 where + ": collection reconstructs outside the interface set");
        } catch (const Error& e) {
          record(r, false, where + ": " + e.what());
        }
      }
    }
  }
  return r;
}

SuiteResult suite_shift(const ValidateOptions& o) {
  SuiteResult r;
  r.name = "shift-map";
  for (int n : {4, 6}) {
    const auto ifaces = sampled_interfaces(BoxDims{n, n, 6}, 0.6, o.full ? 120 : 20, o.seed + static_cast<std::uint64_t>(n));
    for (int k : {1, 2, 3}) {
      for (const auto& i : ifaces) {
        const Interface phi = shift_up(i, k);
        try {
          (void)spin_from_interface(phi);
          record(r, true, "");
        } catch (const Error& e) {
          record(r, false, std::string("shifted interface invalid: ") + e.what());
          continue;
        }
        record(r, excess_rel(phi, i) <= 4 * k * n, "excess bound 4kn violated");
        int lowest = 0;
        for (const auto& f : i.faces()) lowest = std::min(lowest, f.min_z());
        std::set<std::uint64_t> band;
        for (const auto& f : boundary_band(i.dims(), k)) band.insert(f.key());
        bool lifted = true;
        for (const auto& f : phi.faces())
          if (band.count(f.key()) == 0 && f.min_z() < k + lowest) lifted = false;
        record(r, lifted, "floor not lifted by k");
      }
    }
  }
  return r;
}

SuiteResult suite_clusters(const ValidateOptions& o) {
  SuiteResult r;
  r.name = "cluster-containment";
  for (const auto& i : sampled_interfaces(BoxDims{8, 8, 6}, 0.5, o.full ? 300 : 50, o.seed + 23)) {
    const auto d = decompose(i);
    for (std::size_t w = 0; w < d.walls.size(); ++w) {
      const auto h = hull_wall(d, static_cast<int>(w));
      bool inside = true;
      for (int m : wall_cluster(d, static_cast<int>(w)))
        for (const auto& e : d.walls[static_cast<std::size_t>(m)].projection)
          if (!std::binary_search(h.begin(), h.end(), e)) inside = false;
      record(r, inside, "cluster leaves the root hull");
    }
  }
  return r;
}

}  // namespace

std::vector<SuiteResult> run_validation(const ValidateOptions& options) {
  std::vector<SuiteResult> results(6);
  const std::vector<std::function<void()>> tasks{
      [&] { results[0] = suite_oracle(options); },      [&] { results[1] = suite_bijection(options); },
      [&] { results[2] = suite_excess(options); },      [&] { results[3] = suite_collections(options); },
      [&] { results[4] = suite_shift(options); },       [&] { results[5] = suite_clusters(options); }};
  run_parallel(tasks, worker_count_from_env());
  return results;
}

std::string validation_json(const std::vector<SuiteResult>& results, const ValidateOptions& options) {
  json j;
  j["mode"] = options.full ? "full" : "fast";
  j["mutate_reconstruct"] = options.mutate_reconstruct;
  j["seed"] = options.seed;
  bool all = true;
  j["suites"] = json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    j["suites"].push_back(
        {{"name", r.name}, {"passed", r.passed}, {"checked", r.checked}, {"failures", r.failures}, {"detail", r.detail}});
  }
  j["passed"] = all;
  return j.dump(2);
}

}  // namespace dobrushin
