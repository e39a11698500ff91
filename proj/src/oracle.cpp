#include "dobrushin/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "dobrushin/error.hpp"
#include "dobrushin/version.hpp"

namespace dobrushin {

namespace {

using nlohmann::json;

// Bit-parallel Hamiltonian for boxes of at most 64 cells.
struct FastEnergy {
  std::uint64_t pair_mask[3] = {0, 0, 0};
  int stride[3] = {1, 1, 1};
  // plus_bnd[t]: cells with at least t+1 plus boundary neighbours (cost when minus)
  std::uint64_t plus_bnd[6] = {};
  std::uint64_t minus_bnd[6] = {};
  std::uint64_t all = 0;

  explicit FastEnergy(const BoxDims& d) {
    const std::size_t cells = d.cell_count();
    all = cells == 64 ? ~0ULL : ((1ULL << cells) - 1);
    stride[0] = 1;
    stride[1] = d.n;
    stride[2] = d.n * d.m;
    for (std::size_t i = 0; i < cells; ++i) {
      const Cell c = d.cell_at(i);
      int np = 0;
      int nm = 0;
      for (int a = 0; a < 3; ++a) {
        const auto axis = static_cast<Axis>(a);
        const Cell up = c.shifted(axis, 1);
        if (d.contains(up)) {
          pair_mask[a] |= 1ULL << i;
        } else {
          (dobrushin_spin(up) > 0 ? np : nm) += 1;
        }
        const Cell down = c.shifted(axis, -1);
        if (!d.contains(down)) (dobrushin_spin(down) > 0 ? np : nm) += 1;
      }
      for (int t = 0; t < np; ++t) plus_bnd[t] |= 1ULL << i;
      for (int t = 0; t < nm; ++t) minus_bnd[t] |= 1ULL << i;
    }
  }

  [[nodiscard]] int operator()(std::uint64_t code) const {
    int e = 0;
    for (int a = 0; a < 3; ++a) e += std::popcount((code ^ (code >> stride[a])) & pair_mask[a]);
    const std::uint64_t minus = ~code & all;
    for (int t = 0; t < 6; ++t) {
      e += std::popcount(minus & plus_bnd[t]);
      e += std::popcount(code & minus_bnd[t]);
    }
    return e;
  }
};

std::uint64_t plus_below_mask(const BoxDims& d, int h) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < d.cell_count(); ++i) {
    if (d.cell_at(i).z <= -h - 1) mask |= 1ULL << i;
  }
  return mask;
}

void check_enumerable(const BoxDims& dims) {
  dims.validate();
  if (dims.cell_count() > kMaxEnumeratedCells) {
    throw Error(ErrorCode::TooLarge, "box has " + std::to_string(dims.cell_count()) +
                                         " cells; exhaustive enumeration is limited to " +
                                         std::to_string(kMaxEnumeratedCells));
  }
}

// Feasibility predicate for one code.
class Feasible {
 public:
  Feasible(const BoxDims& dims, const FloorConstraint& c)
      : dims_(dims), c_(c), plus_mask_(c.mode == FloorMode::PlusBelow ? plus_below_mask(dims, c.h) : 0) {}

  bool operator()(std::uint64_t code) const {
    switch (c_.mode) {
      case FloorMode::None:
        return true;
      case FloorMode::PlusBelow:
        return (code & plus_mask_) == plus_mask_;
      case FloorMode::InterfaceConditioned:
        return satisfies_floor(extract_interface(SpinConfig::from_code(dims_, code)), c_.h);
    }
    return false;
  }

 private:
  BoxDims dims_;
  FloorConstraint c_;
  std::uint64_t plus_mask_;
};

unsigned worker_count(std::uint64_t total) {
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  return total < (1U << 12) ? 1U : std::min(hw, 16U);
}

}  // namespace

ExactDistribution enumerate_configs(const BoxDims& dims, double beta, const FloorConstraint& constraint) {
  check_enumerable(dims);
  constraint.validate();
  if (!(beta >= 0) || !std::isfinite(beta)) throw Error(ErrorCode::InvalidArgument, "beta must be finite and >= 0");

  const FastEnergy energy(dims);
  const Feasible feasible(dims, constraint);
  const std::uint64_t total = 1ULL << dims.cell_count();
  const unsigned workers = worker_count(total);

  struct Part {
    std::vector<std::uint64_t> codes;
    std::vector<int> energies;
  };
  std::vector<Part> parts(workers);
  auto work = [&](unsigned w) {
    const std::uint64_t lo = total * w / workers;
    const std::uint64_t hi = total * (w + 1) / workers;
    for (std::uint64_t code = lo; code < hi; ++code) {
      if (!feasible(code)) continue;
      parts[w].codes.push_back(code);
      parts[w].energies.push_back(energy(code));
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }

  ExactDistribution dist;
  dist.dims = dims;
  dist.beta = beta;
  dist.constraint = constraint;
  std::vector<int> energies;
  for (auto& p : parts) {
    dist.codes.insert(dist.codes.end(), p.codes.begin(), p.codes.end());
    energies.insert(energies.end(), p.energies.begin(), p.energies.end());
  }
  if (dist.codes.empty()) throw Error(ErrorCode::Infeasible, "no configuration satisfies the constraint");

  const int emin = *std::min_element(energies.begin(), energies.end());
  dist.weights.resize(energies.size());
  long double z = 0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    dist.weights[i] = std::exp(-beta * (energies[i] - emin));
    z += dist.weights[i];
  }
  for (auto& w : dist.weights) w = static_cast<double>(w / z);
  dist.log_partition = static_cast<double>(std::log(z)) - beta * emin;
  return dist;
}

double exact_event_probability(const ExactDistribution& dist,
                               const std::function<bool(const SpinConfig&)>& event) {
  long double p = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (event(SpinConfig::from_code(dist.dims, dist.codes[i]))) p += dist.weights[i];
  }
  return static_cast<double>(p);
}

std::map<std::string, double> interface_marginal(const ExactDistribution& dist) {
  std::map<std::string, long double> acc;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc[extract_interface(SpinConfig::from_code(dist.dims, dist.codes[i])).canonical_key()] += dist.weights[i];
  }
  std::map<std::string, double> out;
  for (auto& [k, v] : acc) out.emplace(k, static_cast<double>(v));
  return out;
}

double total_variation(const std::map<std::string, double>& p, const std::map<std::string, double>& q) {
  long double sum = 0;
  auto a = p.begin();
  auto b = q.begin();
  while (a != p.end() || b != q.end()) {
    if (b == q.end() || (a != p.end() && a->first < b->first)) {
      sum += std::fabs(a->second);
      ++a;
    } else if (a == p.end() || b->first < a->first) {
      sum += std::fabs(b->second);
      ++b;
    } else {
      sum += std::fabs(a->second - b->second);
      ++a;
      ++b;
    }
  }
  return static_cast<double>(sum / 2);
}

// Branch and bound over spins, cells in dense order (bottom layer first). A
// column whose highest assigned spin is plus still owes one horizontal face.
std::vector<Interface> enumerate_interfaces(int n, int m, int excess_cap) {
  if (excess_cap < 0) throw Error(ErrorCode::InvalidArgument, "excess cap must be >= 0");
  const int half = excess_cap / 4 + 1;
  const BoxDims dims{n, m, 2 * half};
  dims.validate();
  const std::size_t cells = dims.cell_count();
  const std::size_t cols = dims.column_count();
  const int budget = n * m + excess_cap;

  std::vector<Spin> spin(cells, 0);
  std::vector<std::uint8_t> col_plus(cols, 1);  // bottom boundary is plus
  int plus_cols = static_cast<int>(cols);
  std::set<std::string> seen;
  std::vector<Interface> out;

  // Energy added by assigning cell i: faces to already-fixed neighbours
  // (lower, left, front cells and boundary cells in every direction except
  // not-yet-assigned in-box cells).
  auto local_cost = [&](std::size_t i, Spin s) {
    const Cell c = dims.cell_at(i);
    int e = 0;
    for (int a = 0; a < 3; ++a) {
      const auto axis = static_cast<Axis>(a);
      for (int d : {-1, 1}) {
        const Cell nb = c.shifted(axis, d);
        if (dims.contains(nb)) {
          if (dims.index(nb) < i && spin[dims.index(nb)] != s) ++e;
        } else if (dobrushin_spin(nb) != s) {
          ++e;
        }
      }
    }
    return e;
  };

  std::function<void(std::size_t, int)> dfs = [&](std::size_t i, int energy) {
    if (energy + plus_cols > budget) return;
    if (i == cells) {
      SpinConfig cfg(dims);
      for (std::size_t k = 0; k < cells; ++k) cfg.set_index(k, spin[k]);
      Interface iface = extract_interface(cfg);
      if (static_cast<int>(iface.size()) > budget) return;
      if (seen.insert(iface.canonical_key()).second) out.push_back(std::move(iface));
      return;
    }
    const Cell c = dims.cell_at(i);
    const std::size_t col = dims.column_index(c.x, c.y);
    for (Spin s : {Spin{1}, Spin{-1}}) {
      spin[i] = s;
      const std::uint8_t before = col_plus[col];
      // the top layer pays its boundary face in local_cost already
      col_plus[col] = s > 0 && c.z + 1 < dims.z_hi();
      plus_cols += static_cast<int>(col_plus[col]) - static_cast<int>(before);
      dfs(i + 1, energy + local_cost(i, s));
      plus_cols -= static_cast<int>(col_plus[col]) - static_cast<int>(before);
      col_plus[col] = before;
    }
    spin[i] = 0;
  };
  dfs(0, 0);
  return out;
}

std::vector<StandardWallCollection> enumerate_standard_wall_collections(int n, int m, int excess_cap) {
  if (n < 1 || m < 1) throw Error(ErrorCode::InvalidArgument, "base dimensions must be >= 1");
  if (excess_cap > 12 || n * m > 36) {
    throw Error(ErrorCode::TooLarge, "wall-collection enumeration is limited to cap <= 12 and 36 columns");
  }
  std::vector<StandardWallCollection> out;
  for (const Interface& iface : enumerate_interfaces(n, m, excess_cap)) {
    StandardWallCollection coll = standard_representation(iface);
    coll.canonicalize();
    out.push_back(std::move(coll));
  }
  return out;
}

double peierls_constant(const ExactDistribution& dist) {
  std::map<std::string, double> marginal = interface_marginal(dist);
  const std::string flat_key = Interface::flat(dist.dims).canonical_key();
  const auto flat = marginal.find(flat_key);
  if (flat == marginal.end()) throw Error(ErrorCode::Infeasible, "flat interface has zero probability");
  // Recover each interface from one representative configuration.
  std::map<std::string, std::size_t> excess;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    Interface iface = extract_interface(SpinConfig::from_code(dist.dims, dist.codes[i]));
    excess.emplace(iface.canonical_key(), iface.size() - dist.dims.column_count());
  }
  double k = 0;
  for (const auto& [key, p] : marginal) {
    const double mm = static_cast<double>(excess.at(key));
    if (mm <= 0) continue;
    k = std::max(k, std::fabs(std::log(p / flat->second) + dist.beta * mm) / mm);
  }
  return k;
}

Reachability single_flip_reachability(const BoxDims& dims, const FloorConstraint& constraint) {
  check_enumerable(dims);
  constraint.validate();
  const Feasible feasible(dims, constraint);
  const std::size_t cells = dims.cell_count();
  const std::uint64_t total = 1ULL << cells;
  std::vector<std::uint8_t> ok(total, 0);
  Reachability r;
  for (std::uint64_t code = 0; code < total; ++code) {
    ok[code] = feasible(code) ? 1 : 0;
    r.feasible += ok[code];
  }
  std::vector<std::uint8_t> seen(total, 0);
  const std::uint64_t start = SpinConfig::ground_state(dims).code();
  if (!ok[start]) return r;
  std::vector<std::uint64_t> queue{start};
  seen[start] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint64_t code = queue[head];
    for (std::size_t i = 0; i < cells; ++i) {
      const std::uint64_t next = code ^ (1ULL << i);
      if (ok[next] && !seen[next]) {
        seen[next] = 1;
        queue.push_back(next);
      }
    }
  }
  r.reachable = queue.size();
  return r;
}

std::string distribution_json(const ExactDistribution& dist) {
  json j;
  j["dims"] = {{"n", dist.dims.n}, {"m", dist.dims.m}, {"h", dist.dims.h}};
  j["beta"] = dist.beta;
  j["constraint"] = to_string(dist.constraint);
  j["log_partition"] = dist.log_partition;
  j["version"] = kVersion;
  j["codes"] = dist.codes;
  j["weights"] = dist.weights;
  return j.dump();
}

ExactDistribution distribution_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ExactDistribution d;
    d.dims = BoxDims{j.at("dims").at("n").get<int>(), j.at("dims").at("m").get<int>(),
                     j.at("dims").at("h").get<int>()};
    d.beta = j.at("beta").get<double>();
    d.constraint = parse_floor_constraint(j.at("constraint").get<std::string>());
    d.log_partition = j.at("log_partition").get<double>();
    d.codes = j.at("codes").get<std::vector<std::uint64_t>>();
    d.weights = j.at("weights").get<std::vector<double>>();
    if (d.codes.size() != d.weights.size()) throw Error(ErrorCode::Parse, "codes/weights length mismatch");
    return d;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad distribution JSON: ") + e.what());
  }
}

ExactDistribution cached_enumerate(const std::string& cache_dir, const BoxDims& dims, double beta,
                                   const FloorConstraint& constraint) {
  std::ostringstream key;
  key.precision(17);
  key << dims.n << 'x' << dims.m << 'x' << dims.h << '|' << beta << '|' << to_string(constraint) << '|'
      << kVersion;
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char ch : key.str()) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  char name[40];
  std::snprintf(name, sizeof name, "oracle-%016llx.json", static_cast<unsigned long long>(hash));
  const std::filesystem::path path = std::filesystem::path(cache_dir) / name;

  if (std::ifstream in{path}; in) {
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      ExactDistribution d = distribution_from_json(buf.str());
      if (d.dims == dims && d.beta == beta && d.constraint == constraint) return d;
    } catch (const Error&) {
      // stale or corrupt entry: recompute and overwrite
    }
  }
  ExactDistribution d = enumerate_configs(dims, beta, constraint);
  std::error_code ec;
  std::filesystem::create_directories(cache_dir, ec);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out{tmp};
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << distribution_json(d);
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot rename cache entry: " + ec.message());
  return d;
}

}  // namespace dobrushin
