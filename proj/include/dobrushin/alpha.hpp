#pragma once

// Large-deviation rates alpha_h for a plus *-connection of height h above the
// origin, the critical floor height h*, and the linear rate alpha.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dobrushin/sampler.hpp"
#include "dobrushin/spin_system.hpp"

namespace dobrushin {

/// True iff plus cells, *-adjacent (sharing at least a vertex) and all at
/// z >= 0, join the cell (0,0,0) to some cell with z = h - 1. If `removed` is
/// given that cell is treated as minus. Throws Error(InvalidArgument) if the
/// box lacks (0,0,0) or the layer z = h - 1.
bool plus_connection_event(const SpinConfig& config, int h, const std::size_t* removed = nullptr);

struct AlphaOptions {
  int box = 8;                      // B x B x B
  std::uint64_t burn_in_sweeps = 200;
  std::uint64_t samples = 20000;    // observations per stage
  std::uint64_t thin_sweeps = 1;    // sweeps between observations
  std::uint64_t batches = 20;       // batch means for the standard error
  std::uint64_t seed = 1;
  /// Estimate P(E_h) as P(E_1) * prod P(E_{j+1} | E_j), each factor from a
  /// chain restricted to E_j. Without it a single unconditioned chain is used.
  bool telescoping = true;
};

struct AlphaEntry {
  int h = 0;
  double alpha = 0;
  double se = 0;
  std::uint64_t samples = 0;    // observations in the last stage
  std::uint64_t successes = 0;  // successes in the last stage
  int box = 0;
  std::uint64_t seed = 0;
  /// No success was seen in some stage: `alpha` is then only a lower bound,
  /// computed as if one success had been observed.
  bool censored = false;
  std::vector<double> stage_alpha;  // -log of each telescoping factor
};

struct AlphaTable {
  double beta = 0;
  std::vector<AlphaEntry> entries;  // increasing h

  [[nodiscard]] const AlphaEntry* find(int h) const;
};

/// alpha_1 .. alpha_{h_max} from one telescoping run (stage j restricted to E_{j-1}).
AlphaTable estimate_alpha_table(int h_max, double beta, const AlphaOptions& options);
AlphaEntry estimate_alpha(int h, double beta, const AlphaOptions& options);

struct HStarResult {
  int h_star = 0;
  double threshold = 0;  // log n - 2 beta
  double lambda = 0;     // log n - alpha_{h*}
  double gamma = 0;      // n exp(-alpha_{h*})
  bool gamma_in_band = false;  // exp(-2 beta - eps) <= gamma < exp(2 beta)
};

/// h* = min{h >= 1 : alpha_h > log n - 2 beta} over the table, which must
/// start at h = 1 with consecutive heights. Throws Error(ThresholdNotCrossed).
HStarResult compute_h_star(const AlphaTable& table, int n, double beta, double eps = 0.0);

struct RateFit {
  double slope = 0;
  double intercept = 0;
  double slope_se = 0;
  double ci_low = 0;   // slope +- 1.96 se
  double ci_high = 0;
  bool within_25pct_of_4beta = false;
};

/// Least squares of alpha_h against h. Throws Error(InvalidArgument) for fewer
/// than 3 entries or a single distinct h.
RateFit fit_alpha_rate(const AlphaTable& table);

std::string alpha_table_json(const AlphaTable& table);
AlphaTable alpha_table_from_json(const std::string& text);

}  // namespace dobrushin
