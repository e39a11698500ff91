#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "dobrushin/geometry.hpp"
#include "dobrushin/spin_system.hpp"

namespace dobrushin {

/// The Dobrushin interface: the *-connected component of separating faces that
/// contains the height-0 plane outside the box, restricted to the box.
class Interface {
 public:
  Interface() = default;
  /// Sorts and deduplicates `faces`.
  Interface(const BoxDims& dims, std::vector<Face> faces);

  static Interface flat(const BoxDims& dims);

  [[nodiscard]] const BoxDims& dims() const { return dims_; }
  [[nodiscard]] const std::vector<Face>& faces() const { return faces_; }
  [[nodiscard]] std::size_t size() const { return faces_.size(); }
  [[nodiscard]] bool contains(const Face& f) const;

  [[nodiscard]] std::vector<std::uint64_t> keys() const;
  [[nodiscard]] std::unordered_set<std::uint64_t> key_set() const;

  /// Canonical string key (sorted face keys), usable for hashing interfaces.
  [[nodiscard]] std::string canonical_key() const;

  friend bool operator==(const Interface& a, const Interface& b) {
    return a.dims_ == b.dims_ && a.faces_ == b.faces_;
  }

 private:
  BoxDims dims_;
  std::vector<Face> faces_;
};

/// True iff the closed face contains a vertex of the base perimeter at height 0,
/// i.e. it is *-adjacent to the height-0 plane outside the box.
bool touches_outer_plane(const Face& f, const BoxDims& dims);

/// Component of `faces` *-connected to the outer height-0 plane.
std::vector<Face> anchored_component(const std::unordered_set<std::uint64_t>& faces,
                                     const BoxDims& dims);

Interface extract_interface(const SpinConfig& config);

/// The bubble-free configuration of an interface. Throws Error(InvalidInterface)
/// when the face set is not realisable as an interface in its box.
SpinConfig spin_from_interface(const Interface& iface);

/// True iff every point of every face has height >= -floor_h.
bool satisfies_floor(const Interface& iface, int floor_h);

/// Reflection z -> -z of every face.
Interface reflect(const Interface& iface);

/// Sorted JSON list of face keys: [[x, y, z, "X"|"Y"|"Z"], ...].
std::string interface_json(const Interface& iface);
Interface interface_from_json(const BoxDims& dims, const std::string& text);

}  // namespace dobrushin
