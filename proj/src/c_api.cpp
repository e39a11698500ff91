#include "dobrushin/c_api.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>

#include <json.hpp>

#include "dobrushin/alpha.hpp"
#include "dobrushin/error.hpp"
#include "dobrushin/experiment.hpp"
#include "dobrushin/oracle.hpp"
#include "dobrushin/version.hpp"
#include "dobrushin/walls.hpp"

using namespace dobrushin;
using nlohmann::json;

struct dob_chain {
  ChainState state;
};

namespace {

thread_local std::string g_last_error;

int fail(ErrorCode code, const std::string& msg) {
  g_last_error = msg;
  return static_cast<int>(code);
}

// Runs f, mapping exceptions to status codes.
template <class F>
int guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return DOB_OK;
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ErrorCode::TooLarge, "out of memory");
  } catch (const std::invalid_argument& e) {
    return fail(ErrorCode::InvalidArgument, e.what());
  } catch (const std::exception& e) {
    return fail(ErrorCode::Internal, e.what());
  } catch (...) {
    return fail(ErrorCode::Internal, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

Acceptance parse_acceptance(const char* s) {
  if (!s || std::strcmp(s, "metropolis") == 0) return Acceptance::Metropolis;
  if (std::strcmp(s, "heat-bath") == 0) return Acceptance::HeatBath;
  throw Error(ErrorCode::InvalidArgument, std::string("unknown acceptance rule '") + s + "'");
}

FloorConstraint parse_floor(const char* s) { return s ? parse_floor_constraint(s) : FloorConstraint::none(); }

}  // namespace

extern "C" {

const char* dob_version(void) { return kVersion; }

const char* dob_last_error(void) { return g_last_error.c_str(); }

void dob_free(char* p) { std::free(p); }

int dob_chain_new(int n, int m, int h, double beta, const char* floor, const char* acceptance, uint64_t seed,
                  dob_chain** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    ModelParams params;
    params.beta = beta;
    params.dims = BoxDims{n, m, h};
    params.validate();
    const FloorConstraint c = parse_floor(floor);
    *out = new dob_chain{ChainState(params, c, SpinConfig::ground_state(params.dims), seed,
                                    ChainOptions{parse_acceptance(acceptance), 0})};
  });
}

int dob_chain_run(dob_chain* chain, uint64_t steps) {
  return guarded([&] {
    need(chain, "chain");
    chain->state.run(steps);
  });
}

int dob_chain_energy(const dob_chain* chain, int64_t* out) {
  return guarded([&] {
    need(chain, "chain");
    need(out, "out");
    *out = chain->state.energy();
  });
}

int dob_chain_snapshot(const dob_chain* chain, char** out_json) {
  return guarded([&] {
    need(chain, "chain");
    need(out_json, "out_json");
    *out_json = dup(snapshot_json(chain->state.config(), chain->state.params().beta));
  });
}

void dob_chain_free(dob_chain* chain) { delete chain; }

int dob_simulate(const char* spec_json, const char* out_dir) {
  return guarded([&] {
    need(spec_json, "spec_json");
    need(out_dir, "out_dir");
    cmd_simulate(parse_experiment_spec(spec_json), out_dir);
  });
}

int dob_reduce(const char* out_dir) {
  return guarded([&] {
    need(out_dir, "out_dir");
    reduce_run(out_dir);
  });
}

int dob_enumerate(int n, int m, int h, double beta, const char* floor, const char* cache_dir, char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    const BoxDims dims{n, m, h};
    ModelParams{beta, dims}.validate();
    const FloorConstraint c = parse_floor(floor);
    const ExactDistribution dist =
        cache_dir ? cached_enumerate(cache_dir, dims, beta, c) : enumerate_configs(dims, beta, c);
    *out_json = dup(distribution_json(dist));
  });
}

int dob_enumerate_walls(int n, int m, int cap, char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    const auto colls = enumerate_standard_wall_collections(n, m, cap);
    json j;
    j["n"] = n;
    j["m"] = m;
    j["cap"] = cap;
    j["count"] = colls.size();
    j["collections"] = json::array();
    for (const auto& c : colls) {
      json jc;
      std::int64_t excess = 0;
      jc["walls"] = json::array();
      for (const auto& w : c.walls) {
        excess += excess_energy(w);
        jc["walls"].push_back({{"excess", excess_energy(w)}, {"faces", json::parse(interface_json(Interface(c.dims, w.faces)))}});
      }
      jc["excess"] = excess;
      jc["interface"] = json::parse(interface_json(reconstruct(c)));
      j["collections"].push_back(jc);
    }
    *out_json = dup(j.dump(2));
  });
}

int dob_dump_interface(const char* snapshot, char** out_json) {
  return guarded([&] {
    need(snapshot, "snapshot_json");
    need(out_json, "out_json");
    *out_json = dup(interface_json(extract_interface(snapshot_from_json(snapshot))));
  });
}

int dob_dump_walls(const char* snapshot, char** out_json) {
  return guarded([&] {
    need(snapshot, "snapshot_json");
    need(out_json, "out_json");
    *out_json = dup(walls_json(decompose(extract_interface(snapshot_from_json(snapshot)))));
  });
}

dob_alpha_options dob_alpha_defaults(void) {
  const AlphaOptions o;
  return dob_alpha_options{o.box, o.burn_in_sweeps, o.samples, o.thin_sweeps, o.batches, o.seed, o.telescoping ? 1 : 0};
}

int dob_alpha(int h_max, double beta, const dob_alpha_options* options, char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    const dob_alpha_options c = options ? *options : dob_alpha_defaults();
    AlphaOptions o;
    o.box = c.box;
    o.burn_in_sweeps = c.burn_in_sweeps;
    o.samples = c.samples;
    o.thin_sweeps = c.thin_sweeps;
    o.batches = c.batches;
    o.seed = c.seed;
    o.telescoping = c.telescoping != 0;
    *out_json = dup(alpha_table_json(estimate_alpha_table(h_max, beta, o)));
  });
}

int dob_hstar(const char* table_json, int n, double beta, double eps, char** out_json) {
  return guarded([&] {
    need(table_json, "table_json");
    need(out_json, "out_json");
    const AlphaTable t = alpha_table_from_json(table_json);
    if (std::isnan(beta)) beta = t.beta;
    const HStarResult r = compute_h_star(t, n, beta, eps);
    json j{{"n", n},
           {"beta", beta},
           {"h_star", r.h_star},
           {"threshold", r.threshold},
           {"lambda", r.lambda},
           {"gamma", r.gamma},
           {"gamma_in_band", r.gamma_in_band}};
    if (t.entries.size() >= 3) {
      const RateFit f = fit_alpha_rate(t);
      j["rate_fit"] = {{"slope", f.slope},     {"intercept", f.intercept}, {"slope_se", f.slope_se},
                       {"ci_low", f.ci_low},   {"ci_high", f.ci_high},
                       {"within_25pct_of_4beta", f.within_25pct_of_4beta}};
    }
    *out_json = dup(j.dump(2));
  });
}

int dob_repulsion_sweep(const char* table_json, const char* spec_json, const int* floors, size_t floor_count,
                        int plus_floor, const char* out_dir, char** out_csv) {
  return guarded([&] {
    need(table_json, "table_json");
    need(spec_json, "spec_json");
    need(out_dir, "out_dir");
    if (floor_count > 0) need(floors, "floors");
    SweepOptions o;
    o.base = parse_experiment_spec(spec_json);
    o.floors.assign(floors, floors + floor_count);
    o.plus_floor = plus_floor != 0;
    const std::string csv = repulsion_sweep(alpha_table_from_json(table_json), o, out_dir);
    if (out_csv) *out_csv = dup(csv);
  });
}

int dob_validate(int full, int mutate_reconstruct, uint64_t seed, char** out_json) {
  bool passed = true;
  const int rc = guarded([&] {
    need(out_json, "out_json");
    ValidateOptions o;
    o.full = full != 0;
    o.mutate_reconstruct = mutate_reconstruct != 0;
    o.seed = seed;
    const auto results = run_validation(o);
    for (const auto& r : results) passed = passed && r.passed;
    *out_json = dup(validation_json(results, o));
  });
  if (rc != DOB_OK) return rc;
  if (!passed) return fail(ErrorCode::ValidationFailed, "validation failed");
  return DOB_OK;
}

}  // extern "C"
