#pragma once

// Ising configurations on a box with Dobrushin boundary conditions.
//
// Energy convention: H(sigma) counts disagreeing nearest-neighbour pairs, so
// beta here is twice the coupling J of the +-1 Hamiltonian -J sum s_v s_w
// (1{s != s'} = (1 - s s') / 2). The 3D critical point therefore sits near
// beta ~ 0.443 and "low temperature" means beta >= 0.9.

#include <cstdint>
#include <string>
#include <vector>

#include "dobrushin/geometry.hpp"

namespace dobrushin {

using Spin = std::int8_t;

/// -1 above height 0, +1 below.
constexpr Spin dobrushin_spin(const Cell& c) { return c.z >= 0 ? Spin{-1} : Spin{1}; }

struct ModelParams {
  double beta = 1.0;
  BoxDims dims;

  void validate() const;
};

class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(const BoxDims& dims);  // ground state

  static SpinConfig ground_state(const BoxDims& dims);
  /// Plus strictly below height k, minus above (flat interface at height k).
  static SpinConfig lifted(const BoxDims& dims, int k);
  static SpinConfig all(const BoxDims& dims, Spin s);

  [[nodiscard]] const BoxDims& dims() const { return dims_; }
  [[nodiscard]] const std::vector<Spin>& spins() const { return spins_; }

  /// In-box spin, or the boundary spin for cells outside the box.
  [[nodiscard]] Spin at(const Cell& c) const {
    return dims_.contains(c) ? spins_[dims_.index(c)] : dobrushin_spin(c);
  }
  [[nodiscard]] Spin at_index(std::size_t i) const { return spins_[i]; }
  void set(const Cell& c, Spin s);
  void set_index(std::size_t i, Spin s) { spins_[i] = s; }
  void flip(const Cell& c);
  void flip_index(std::size_t i) { spins_[i] = static_cast<Spin>(-spins_[i]); }

  /// Bit i set iff cell i is plus. Only for boxes with <= 64 cells.
  [[nodiscard]] std::uint64_t code() const;
  static SpinConfig from_code(const BoxDims& dims, std::uint64_t code);

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

 private:
  BoxDims dims_;
  std::vector<Spin> spins_;
};

/// True iff the face separates cells of differing spin (boundary spins virtual).
inline bool is_separating(const SpinConfig& s, const Face& f) {
  return s.at(f.low_cell()) != s.at(f.high_cell());
}

std::int64_t hamiltonian(const SpinConfig& config);

/// H(flip(config, cell)) - H(config) from the six neighbours. Throws for out-of-box cells.
int delta_energy(const SpinConfig& config, const Cell& cell);
int delta_energy_index(const SpinConfig& config, std::size_t cell_index);

/// All separating faces with at least one in-box neighbour cell, canonical order.
std::vector<Face> separating_faces(const SpinConfig& config);

/// Global spin flip composed with the reflection z -> -z.
SpinConfig reflect(const SpinConfig& config);

// Snapshot: {"dims": {...}, "beta": b, "spins": "<rle>"} with the run-length
// string made of "<count>+" / "<count>-" tokens in dense cell order.
std::string encode_rle(const SpinConfig& config);
SpinConfig decode_rle(const BoxDims& dims, const std::string& rle);
std::string snapshot_json(const SpinConfig& config, double beta);
SpinConfig snapshot_from_json(const std::string& text, double* beta_out = nullptr);

}  // namespace dobrushin
