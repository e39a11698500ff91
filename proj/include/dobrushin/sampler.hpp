#pragma once

// Single-spin-flip Glauber dynamics for the Dobrushin measure, optionally
// conditioned on a floor.
//
// Floor modes:
//   InterfaceConditioned(h)  the interface stays at height >= -h; bubbles are free
//   PlusBelow(h)             every cell strictly below height -h is plus

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dobrushin/geometry.hpp"
#include "dobrushin/interface.hpp"
#include "dobrushin/spin_system.hpp"

namespace dobrushin {

enum class FloorMode { None, InterfaceConditioned, PlusBelow };

struct FloorConstraint {
  FloorMode mode = FloorMode::None;
  int h = 0;

  static FloorConstraint none() { return {}; }
  static FloorConstraint interface_conditioned(int h) { return {FloorMode::InterfaceConditioned, h}; }
  static FloorConstraint plus_below(int h) { return {FloorMode::PlusBelow, h}; }

  void validate() const;
  friend bool operator==(const FloorConstraint&, const FloorConstraint&) = default;
};

std::string to_string(const FloorConstraint& c);
/// Parses "none", "interface:<h>" or "plus:<h>".
FloorConstraint parse_floor_constraint(const std::string& text);

/// Full (non-incremental) check of a constraint on a configuration.
bool satisfies_constraint(const SpinConfig& config, const FloorConstraint& c);

enum class Acceptance { Metropolis, HeatBath };

/// 64-bit Mersenne Twister with fixed integer and real conversions, so streams
/// are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  /// Uniform integer in [0, n), n > 0 (rejection, unbiased).
  std::uint64_t below(std::uint64_t n);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

struct ChainOptions {
  Acceptance acceptance = Acceptance::Metropolis;
  /// Full recomputation of the cached state every this many steps; 0 disables.
  std::uint64_t audit_interval = 0;
};

class ChainState {
 public:
  /// Throws Error(Infeasible) if `init` violates the constraint.
  ChainState(const ModelParams& params, const FloorConstraint& constraint, SpinConfig init,
             std::uint64_t seed, ChainOptions options = {});

  /// One proposal. Returns true when the flip was accepted.
  bool step();
  void run(std::uint64_t steps);

  [[nodiscard]] const SpinConfig& config() const { return config_; }
  [[nodiscard]] const ModelParams& params() const { return params_; }
  [[nodiscard]] const FloorConstraint& constraint() const { return constraint_; }
  [[nodiscard]] std::int64_t energy() const { return energy_; }
  [[nodiscard]] std::uint64_t steps() const { return steps_; }
  [[nodiscard]] std::uint64_t accepted() const { return accepted_; }
  [[nodiscard]] std::uint64_t floor_rejections() const { return floor_rejections_; }
  /// Separating box faces tallied by the lowest z-coordinate of the face,
  /// indexed from z_lo().
  [[nodiscard]] const std::vector<std::int64_t>& slab_counts() const { return slab_counts_; }
  /// Current configuration code (boxes of at most 64 cells).
  [[nodiscard]] std::uint64_t code() const { return code_; }

  /// Recomputes energy, slab counts and the constraint from scratch and throws
  /// Error(AuditMismatch) on any disagreement with the cached values.
  void audit() const;

  /// Test hook: would flipping this cell keep the constraint satisfied?
  [[nodiscard]] bool floor_check(std::size_t cell_index);

  /// Extra hard constraint: called with the current configuration and a cell
  /// whose flip passed every other test; returning true rejects the flip.
  using Veto = std::function<bool(const SpinConfig&, std::size_t)>;
  void set_veto(Veto veto) { veto_ = std::move(veto); }

 private:
  ModelParams params_;
  FloorConstraint constraint_;
  SpinConfig config_;
  Rng rng_;
  ChainOptions options_;
  BoxFaces box_;
  std::vector<Face> faces_;
  std::int64_t energy_ = 0;
  std::uint64_t steps_ = 0;
  std::uint64_t accepted_ = 0;
  std::uint64_t floor_rejections_ = 0;
  std::uint64_t code_ = 0;
  bool track_code_ = false;
  std::vector<std::int64_t> slab_counts_;
  double accept_[7] = {};

  // Per cell: 6 neighbour indices (negative: boundary spin -1 or +1 encoded as
  // -1 / -2) and the 6 corresponding face indices.
  std::vector<std::int64_t> nbr_;
  std::vector<std::uint32_t> face_of_;

  // InterfaceConditioned bookkeeping: separating faces whose lowest point is
  // below -h, held as a dense set.
  std::vector<std::uint32_t> low_faces_;
  std::vector<std::int64_t> low_pos_;
  std::vector<std::uint8_t> is_low_face_;
  std::vector<std::uint8_t> anchors_;  // faces touching the outer height-0 plane
  std::vector<std::uint32_t> stamp_;
  std::uint32_t stamp_id_ = 0;
  std::vector<std::uint32_t> bfs_;

  int plus_below_zmax_ = 0;  // PlusBelow: cells with z <= this must stay plus
  Veto veto_;

  [[nodiscard]] bool face_separating(std::size_t face_index) const;
  void apply_flip(std::size_t cell_index);
  [[nodiscard]] bool low_face_attached();
  void rebuild_caches();
};

/// Interface comes within `margin` cells of the top or bottom of the box.
bool near_box_edge(const Interface& iface, int margin = 2);

struct ChainRecord {
  std::uint64_t step = 0;
  std::int64_t energy = 0;
};

using ChainObserver = std::function<void(const ChainState&, const ChainRecord&)>;

/// Runs `steps` proposals and calls `observer` after every `thin`-th step past
/// `burn_in`. The starting configuration is the ground state unless `init` is given.
/// Throws std::invalid_argument unless steps > burn_in and thin >= 1.
ChainState run_chain(const ModelParams& params, const FloorConstraint& constraint,
                     std::uint64_t steps, std::uint64_t burn_in, std::uint64_t thin,
                     std::uint64_t seed, const ChainObserver& observer,
                     ChainOptions options = {}, const SpinConfig* init = nullptr);

}  // namespace dobrushin
