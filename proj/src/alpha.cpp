#include "dobrushin/alpha.hpp"

#include <cmath>
#include <numeric>

#include <json.hpp>

#include "dobrushin/error.hpp"

namespace dobrushin {

bool plus_connection_event(const SpinConfig& config, int h, const std::size_t* removed) {
  const BoxDims& d = config.dims();
  const Cell origin{0, 0, 0};
  if (h < 1) throw Error(ErrorCode::InvalidArgument, "connection height must be >= 1");
  if (!d.contains(origin)) throw Error(ErrorCode::InvalidArgument, "box does not contain the cell (0,0,0)");
  if (h - 1 >= d.z_hi()) {
    throw Error(ErrorCode::InvalidArgument, "connection height " + std::to_string(h) + " exceeds the box");
  }
  auto plus = [&](std::size_t i) { return config.at_index(i) > 0 && !(removed && *removed == i); };
  const std::size_t start = d.index(origin);
  if (!plus(start)) return false;
  if (h == 1) return true;

  std::vector<std::uint8_t> seen(d.cell_count(), 0);
  std::vector<std::size_t> queue{start};
  seen[start] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Cell c = d.cell_at(queue[head]);
    for (int dz = -1; dz <= 1; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const Cell nb{c.x + dx, c.y + dy, c.z + dz};
          if (nb.z < 0 || !d.contains(nb)) continue;
          const std::size_t j = d.index(nb);
          if (seen[j] || !plus(j)) continue;
          if (nb.z == h - 1) return true;
          seen[j] = 1;
          queue.push_back(j);
        }
      }
    }
  }
  return false;
}

namespace {

struct StageResult {
  std::uint64_t samples = 0;
  std::uint64_t successes = 0;
  double p = 0;
  double se_log = 0;
  bool censored = false;
};

std::uint64_t stage_seed(std::uint64_t seed, int stage) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(stage + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void check_options(const AlphaOptions& o) {
  if (o.box < 2 || o.box % 2 != 0) throw Error(ErrorCode::InvalidArgument, "alpha box side must be even and >= 2");
  if (o.samples == 0 || o.thin_sweeps == 0 || o.batches == 0 || o.samples < o.batches) {
    throw Error(ErrorCode::InvalidArgument, "alpha sampling schedule is degenerate");
  }
}

// Fractions of observations satisfying E_target for each target in `targets`,
// from a chain restricted to E_{condition} (condition 0: unrestricted).
std::vector<StageResult> run_stage(double beta, const AlphaOptions& o, int condition,
                                   const std::vector<int>& targets, std::uint64_t seed) {
  ModelParams params;
  params.beta = beta;
  params.dims = BoxDims{o.box, o.box, o.box};
  const BoxDims& d = params.dims;
  if (targets.back() - 1 >= d.z_hi()) {
    throw Error(ErrorCode::InvalidArgument, "alpha box too short for h = " + std::to_string(targets.back()));
  }
  auto init = SpinConfig::ground_state(d);
  for (int z = 0; z < condition; ++z) init.set(Cell{0, 0, z}, 1);

  ChainState chain(params, FloorConstraint::none(), init, seed);
  if (condition > 0) {
    chain.set_veto([condition, &d](const SpinConfig& s, std::size_t i) {
      if (s.at_index(i) < 0 || d.cell_at(i).z < 0) return false;
      return !plus_connection_event(s, condition, &i);
    });
  }
  const std::uint64_t sweep = d.cell_count();
  chain.run(o.burn_in_sweeps * sweep);

  const std::size_t nt = targets.size();
  std::vector<std::vector<std::uint64_t>> batch(nt, std::vector<std::uint64_t>(o.batches, 0));
  std::vector<std::uint64_t> batch_n(o.batches, 0);
  for (std::uint64_t s = 0; s < o.samples; ++s) {
    chain.run(o.thin_sweeps * sweep);
    const std::uint64_t b = s * o.batches / o.samples;
    ++batch_n[b];
    for (std::size_t t = 0; t < nt; ++t) {
      // E_h implies E_{h'} for h' < h, so stop at the first failure
      if (!plus_connection_event(chain.config(), targets[t])) break;
      ++batch[t][b];
    }
  }

  std::vector<StageResult> out(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    StageResult& r = out[t];
    r.samples = o.samples;
    r.successes = std::accumulate(batch[t].begin(), batch[t].end(), std::uint64_t{0});
    const double n = static_cast<double>(r.samples);
    if (r.successes == 0) {
      r.censored = true;
      r.p = 1.0 / n;
      r.se_log = 0;
      continue;
    }
    r.p = static_cast<double>(r.successes) / n;
    double var = 0;
    if (o.batches > 1) {
      for (std::uint64_t b = 0; b < o.batches; ++b) {
        const double pb = static_cast<double>(batch[t][b]) / static_cast<double>(batch_n[b]);
        var += (pb - r.p) * (pb - r.p);
      }
      var /= static_cast<double>(o.batches - 1) * static_cast<double>(o.batches);
    }
    const double binom = r.p * (1 - r.p) / n;
    const double se_p = std::sqrt(std::max(var, binom));
    r.se_log = se_p / r.p;
  }
  return out;
}

AlphaEntry make_entry(int h, const AlphaOptions& o) {
  AlphaEntry e;
  e.h = h;
  e.box = o.box;
  e.seed = o.seed;
  return e;
}

}  // namespace

AlphaTable estimate_alpha_table(int h_max, double beta, const AlphaOptions& o) {
  if (h_max < 1) throw Error(ErrorCode::InvalidArgument, "h_max must be >= 1");
  if (!(beta > 0) || !std::isfinite(beta)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  check_options(o);
  AlphaTable table;
  table.beta = beta;
  if (o.telescoping) {
    double alpha = 0;
    double var = 0;
    bool censored = false;
    std::vector<double> stages;
    for (int h = 1; h <= h_max; ++h) {
      const StageResult r = run_stage(beta, o, h - 1, {h}, stage_seed(o.seed, h))[0];
      alpha += -std::log(r.p);
      var += r.se_log * r.se_log;
      censored = censored || r.censored;
      stages.push_back(-std::log(r.p));
      AlphaEntry e = make_entry(h, o);
      e.alpha = alpha;
      e.se = std::sqrt(var);
      e.samples = r.samples;
      e.successes = r.successes;
      e.censored = censored;
      e.stage_alpha = stages;
      table.entries.push_back(e);
    }
  } else {
    std::vector<int> targets(static_cast<std::size_t>(h_max));
    std::iota(targets.begin(), targets.end(), 1);
    const auto rs = run_stage(beta, o, 0, targets, stage_seed(o.seed, 0));
    for (int h = 1; h <= h_max; ++h) {
      const StageResult& r = rs[static_cast<std::size_t>(h - 1)];
      AlphaEntry e = make_entry(h, o);
      e.alpha = -std::log(r.p);
      e.se = r.se_log;
      e.samples = r.samples;
      e.successes = r.successes;
      e.censored = r.censored;
      e.stage_alpha = {e.alpha};
      table.entries.push_back(e);
    }
  }
  return table;
}

AlphaEntry estimate_alpha(int h, double beta, const AlphaOptions& options) {
  return estimate_alpha_table(h, beta, options).entries.back();
}

const AlphaEntry* AlphaTable::find(int h) const {
  for (const auto& e : entries)
    if (e.h == h) return &e;
  return nullptr;
}

HStarResult compute_h_star(const AlphaTable& table, int n, double beta, double eps) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  HStarResult r;
  r.threshold = std::log(static_cast<double>(n)) - 2.0 * beta;
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    if (table.entries[i].h != static_cast<int>(i) + 1) {
      throw Error(ErrorCode::InvalidArgument, "alpha table must list h = 1, 2, ... consecutively");
    }
  }
  for (const AlphaEntry& e : table.entries) {
    if (e.alpha > r.threshold) {
      r.h_star = e.h;
      r.lambda = std::log(static_cast<double>(n)) - e.alpha;
      r.gamma = static_cast<double>(n) * std::exp(-e.alpha);
      r.gamma_in_band = r.gamma >= std::exp(-2.0 * beta - eps) && r.gamma < std::exp(2.0 * beta);
      return r;
    }
  }
  throw Error(ErrorCode::ThresholdNotCrossed,
              "no alpha_h in the table exceeds log n - 2 beta = " + std::to_string(r.threshold));
}

RateFit fit_alpha_rate(const AlphaTable& table) {
  const std::size_t k = table.entries.size();
  if (k < 3) throw Error(ErrorCode::InvalidArgument, "rate fit needs at least 3 table entries");
  double mx = 0;
  double my = 0;
  for (const auto& e : table.entries) {
    mx += e.h;
    my += e.alpha;
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0;
  double sxy = 0;
  for (const auto& e : table.entries) {
    sxx += (e.h - mx) * (e.h - mx);
    sxy += (e.h - mx) * (e.alpha - my);
  }
  if (sxx == 0) throw Error(ErrorCode::InvalidArgument, "rate fit needs distinct heights");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (const auto& e : table.entries) {
    const double res = e.alpha - f.intercept - f.slope * e.h;
    rss += res * res;
  }
  f.slope_se = std::sqrt(rss / static_cast<double>(k - 2) / sxx);
  f.ci_low = f.slope - 1.96 * f.slope_se;
  f.ci_high = f.slope + 1.96 * f.slope_se;
  f.within_25pct_of_4beta = std::fabs(f.slope - 4.0 * table.beta) <= table.beta;
  return f;
}

std::string alpha_table_json(const AlphaTable& table) {
  nlohmann::json j;
  j["beta"] = table.beta;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : table.entries) {
    j["entries"].push_back({{"h", e.h},
                            {"alpha", e.alpha},
                            {"se", e.se},
                            {"samples", e.samples},
                            {"successes", e.successes},
                            {"box", e.box},
                            {"seed", e.seed},
                            {"censored", e.censored},
                            {"stage_alpha", e.stage_alpha}});
  }
  return j.dump(2);
}

AlphaTable alpha_table_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    AlphaTable t;
    t.beta = j.at("beta").get<double>();
    for (const auto& je : j.at("entries")) {
      AlphaEntry e;
      e.h = je.at("h").get<int>();
      e.alpha = je.at("alpha").get<double>();
      e.se = je.value("se", 0.0);
      e.samples = je.value("samples", std::uint64_t{0});
      e.successes = je.value("successes", std::uint64_t{0});
      e.box = je.value("box", 0);
      e.seed = je.value("seed", std::uint64_t{0});
      e.censored = je.value("censored", false);
      e.stage_alpha = je.value("stage_alpha", std::vector<double>{});
      t.entries.push_back(std::move(e));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad alpha table JSON: ") + e.what());
  }
}

}  // namespace dobrushin
