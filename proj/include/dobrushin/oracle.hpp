#pragma once

// Exhaustive ground truth on tiny boxes: exact Gibbs weights of every spin
// configuration, interface marginals, and the admissible standard wall
// collections of small bases.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dobrushin/sampler.hpp"
#include "dobrushin/walls.hpp"

namespace dobrushin {

inline constexpr std::size_t kMaxEnumeratedCells = 24;

struct ExactDistribution {
  BoxDims dims;
  double beta = 0;
  FloorConstraint constraint;
  std::vector<std::uint64_t> codes;  // feasible configurations, increasing
  std::vector<double> weights;       // normalised
  double log_partition = 0;          // log of the constrained partition function

  [[nodiscard]] std::size_t size() const { return codes.size(); }
};

/// Throws Error(TooLarge) above kMaxEnumeratedCells cells.
ExactDistribution enumerate_configs(const BoxDims& dims, double beta, const FloorConstraint& constraint);

double exact_event_probability(const ExactDistribution& dist,
                               const std::function<bool(const SpinConfig&)>& event);

/// Interface marginal keyed by Interface::canonical_key().
std::map<std::string, double> interface_marginal(const ExactDistribution& dist);

/// Total-variation distance between two distributions over the same key space.
double total_variation(const std::map<std::string, double>& p, const std::map<std::string, double>& q);

/// Interfaces whose bubble-free configuration has energy at most n*m + cap,
/// i.e. all interfaces of excess at most cap, in a box just tall enough to hold them.
std::vector<Interface> enumerate_interfaces(int n, int m, int excess_cap);

/// Every admissible standard wall collection with total excess at most cap on
/// an n x m base. Throws Error(TooLarge) for cap > 12 or bases over 36 columns.
std::vector<StandardWallCollection> enumerate_standard_wall_collections(int n, int m, int excess_cap);

/// Smallest K with |log(P(I)/P(flat)) + beta*m(I)| <= K*m(I) over the support
/// of the interface marginal (interfaces with m(I) = 0 are skipped).
double peierls_constant(const ExactDistribution& dist);

/// Number of configurations reachable from the ground state by single flips
/// that keep the constraint, versus the number of feasible configurations.
struct Reachability {
  std::size_t reachable = 0;
  std::size_t feasible = 0;
};
Reachability single_flip_reachability(const BoxDims& dims, const FloorConstraint& constraint);

std::string distribution_json(const ExactDistribution& dist);
ExactDistribution distribution_from_json(const std::string& text);

/// Enumerates or loads from `cache_dir`, keyed by (dims, beta, constraint, version).
ExactDistribution cached_enumerate(const std::string& cache_dir, const BoxDims& dims, double beta,
                                   const FloorConstraint& constraint);

}  // namespace dobrushin
