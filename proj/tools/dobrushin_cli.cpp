// Command-line front end over the C API.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dobrushin/c_api.h"

namespace {

struct Failure {
  int code;
  std::string message;
};

void check(int rc) {
  if (rc != DOB_OK) throw Failure{rc, dob_last_error()};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{DOB_EIO, "cannot read " + path};
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{DOB_EIO, "cannot write " + path};
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) throw Failure{DOB_EIO, "write failed for " + path};
}

// Takes ownership of a string returned through the C API.
std::string take(char* p) {
  std::string s = p ? p : "";
  dob_free(p);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ising interface simulator and walls-and-ceilings toolkit"};
  app.set_version_flag("--version", std::string(dob_version()));
  app.require_subcommand(1);
  app.footer("Environment: DOBRUSHIN_WORKERS sets the worker pool size (default: hardware threads).");

  // simulate
  std::string spec_path, out_dir;
  bool reduce_only = false;
  auto* sim = app.add_subcommand("simulate", "Run an experiment spec into a run directory");
  sim->add_option("--spec", spec_path, "Experiment spec (JSON)")->required();
  sim->add_option("--out", out_dir, "Run directory")->required();
  sim->add_flag("--reduce-only", reduce_only, "Only recompute summary.csv from the per-seed streams");

  // enumerate
  int n = 2, m = 2, h = 2, cap = -1;
  double beta = 1.0;
  std::string floor = "none", cache_dir, out_path;
  auto* en = app.add_subcommand("enumerate", "Exact distribution of a tiny box, or standard wall collections");
  en->add_option("--n", n, "Base side x")->capture_default_str();
  en->add_option("--m", m, "Base side y")->capture_default_str();
  en->add_option("--height", h, "Box height (even)")->capture_default_str();
  en->add_option("--beta", beta, "Inverse temperature")->capture_default_str();
  en->add_option("--floor", floor, "none | interface:<h> | plus:<h>")->capture_default_str();
  en->add_option("--cache", cache_dir, "Cache directory for exact distributions");
  en->add_option("--walls-cap", cap, "Enumerate standard wall collections with excess <= cap instead");
  en->add_option("--out", out_path, "Output file (default stdout)");

  // dump-interface / dump-walls
  std::string snapshot_path;
  auto* di = app.add_subcommand("dump-interface", "Interface faces of a snapshot as JSON");
  di->add_option("--snapshot", snapshot_path, "Snapshot JSON")->required();
  di->add_option("--out", out_path, "Output file (default stdout)");
  auto* dw = app.add_subcommand("dump-walls", "Wall decomposition of a snapshot as JSON");
  dw->add_option("--snapshot", snapshot_path, "Snapshot JSON")->required();
  dw->add_option("--out", out_path, "Output file (default stdout)");

  // alpha
  dob_alpha_options ao = dob_alpha_defaults();
  int h_max = 3;
  bool direct = false;
  auto* al = app.add_subcommand("alpha", "Estimate the table alpha_1 .. alpha_hmax");
  al->add_option("--h-max", h_max, "Largest h")->capture_default_str();
  al->add_option("--beta", beta, "Inverse temperature")->required();
  al->add_option("--box", ao.box, "Side of the cubic box (even)")->capture_default_str();
  al->add_option("--samples", ao.samples, "Observations per stage")->capture_default_str();
  al->add_option("--burn-in", ao.burn_in_sweeps, "Burn-in sweeps per stage")->capture_default_str();
  al->add_option("--thin", ao.thin_sweeps, "Sweeps between observations")->capture_default_str();
  al->add_option("--batches", ao.batches, "Batches for the standard error")->capture_default_str();
  al->add_option("--seed", ao.seed, "Seed")->capture_default_str();
  al->add_flag("--direct", direct, "One unconditioned chain instead of the telescoping product");
  al->add_option("--out", out_path, "Output file (default stdout)");

  // hstar
  std::string table_path;
  double eps = 0.0;
  auto* hs = app.add_subcommand("hstar", "Critical floor height from an alpha table");
  hs->add_option("--table", table_path, "Alpha table JSON")->required();
  hs->add_option("--n", n, "Base side")->required();
  hs->add_option("--beta", beta, "Inverse temperature (default: the table's)");
  hs->add_option("--eps", eps, "Slack for the gamma band")->capture_default_str();
  hs->add_option("--out", out_path, "Output file (default stdout)");

  // repulsion-sweep
  std::vector<int> floors;
  bool plus_floor = false;
  auto* rs = app.add_subcommand("repulsion-sweep", "Baseline plus one run per floor height, with h* annotated");
  rs->add_option("--table", table_path, "Alpha table JSON")->required();
  rs->add_option("--spec", spec_path, "Base experiment spec (its floors are replaced)")->required();
  rs->add_option("--floors", floors, "Floor heights")->required()->delimiter(',');
  rs->add_flag("--plus", plus_floor, "Plus-below floors instead of interface-conditioned ones");
  rs->add_option("--out", out_dir, "Run directory")->required();

  // validate
  std::string level = "fast";
  bool mutate = false;
  std::uint64_t seed = 1;
  auto* va = app.add_subcommand("validate", "Oracle-equivalence, bijection and invariant suites");
  va->add_option("--level", level, "fast | full")->check(CLI::IsMember({"fast", "full"}))->capture_default_str();
  va->add_flag("--mutate-reconstruct", mutate, "Corrupt reconstructions (the bijection suite must fail)");
  va->add_option("--seed", seed, "Seed")->capture_default_str();
  va->add_option("--out", out_path, "Report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : DOB_EINVALID;
  }

  try {
    if (*sim) {
      if (reduce_only) {
        check(dob_reduce(out_dir.c_str()));
      } else {
        check(dob_simulate(read_text(spec_path).c_str(), out_dir.c_str()));
      }
    } else if (*en) {
      char* out = nullptr;
      if (cap >= 0) {
        check(dob_enumerate_walls(n, m, cap, &out));
      } else {
        check(dob_enumerate(n, m, h, beta, floor.c_str(), cache_dir.empty() ? nullptr : cache_dir.c_str(), &out));
      }
      emit(out_path, take(out));
    } else if (*di || *dw) {
      char* out = nullptr;
      const std::string snap = read_text(snapshot_path);
      check(*di ? dob_dump_interface(snap.c_str(), &out) : dob_dump_walls(snap.c_str(), &out));
      emit(out_path, take(out));
    } else if (*al) {
      ao.telescoping = direct ? 0 : 1;
      char* out = nullptr;
      check(dob_alpha(h_max, beta, &ao, &out));
      emit(out_path, take(out));
    } else if (*hs) {
      const std::string table = read_text(table_path);
      if (hs->count("--beta") == 0) beta = std::nan("");
      char* out = nullptr;
      check(dob_hstar(table.c_str(), n, beta, eps, &out));
      emit(out_path, take(out));
    } else if (*rs) {
      char* out = nullptr;
      check(dob_repulsion_sweep(read_text(table_path).c_str(), read_text(spec_path).c_str(), floors.data(),
                                floors.size(), plus_floor ? 1 : 0, out_dir.c_str(), &out));
      emit("", take(out));
    } else if (*va) {
      char* out = nullptr;
      const int rc = dob_validate(level == "full", mutate ? 1 : 0, seed, &out);
      if (out) emit(out_path, take(out));
      check(rc);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  return 0;
}
