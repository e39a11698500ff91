#include "dobrushin/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dobrushin/error.hpp"

namespace dobrushin {

void FloorConstraint::validate() const {
  if (h < 0) throw Error(ErrorCode::InvalidArgument, "floor height must be non-negative");
}

std::string to_string(const FloorConstraint& c) {
  switch (c.mode) {
    case FloorMode::InterfaceConditioned:
      return "interface:" + std::to_string(c.h);
    case FloorMode::PlusBelow:
      return "plus:" + std::to_string(c.h);
    case FloorMode::None:
    default:
      return "none";
  }
}

FloorConstraint parse_floor_constraint(const std::string& text) {
  if (text == "none") return FloorConstraint::none();
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::Parse, "bad floor constraint: " + text);
  const std::string kind = text.substr(0, colon);
  int h = 0;
  try {
    std::size_t used = 0;
    h = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "bad floor height: " + text);
  }
  FloorConstraint c;
  if (kind == "interface") {
    c = FloorConstraint::interface_conditioned(h);
  } else if (kind == "plus") {
    c = FloorConstraint::plus_below(h);
  } else {
    throw Error(ErrorCode::Parse, "bad floor mode: " + kind);
  }
  c.validate();
  return c;
}

bool satisfies_constraint(const SpinConfig& config, const FloorConstraint& c) {
  switch (c.mode) {
    case FloorMode::PlusBelow: {
      const auto& d = config.dims();
      for (std::size_t i = 0; i < d.cell_count(); ++i) {
        if (d.cell_at(i).z <= -c.h - 1 && config.at_index(i) < 0) return false;
      }
      return true;
    }
    case FloorMode::InterfaceConditioned:
      return satisfies_floor(extract_interface(config), c.h);
    case FloorMode::None:
    default:
      return true;
  }
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return x % n;
}

ChainState::ChainState(const ModelParams& params, const FloorConstraint& constraint, SpinConfig init,
                       std::uint64_t seed, ChainOptions options)
    : params_(params),
      constraint_(constraint),
      config_(std::move(init)),
      rng_(seed),
      options_(options),
      box_(params.dims) {
  params_.validate();
  constraint_.validate();
  if (!(config_.dims() == params_.dims)) {
    throw Error(ErrorCode::InvalidArgument, "initial configuration does not match the box");
  }
  if (!satisfies_constraint(config_, constraint_)) {
    throw Error(ErrorCode::Infeasible, "initial configuration violates " + to_string(constraint_));
  }
  const auto& d = params_.dims;
  faces_.reserve(box_.size());
  for (std::size_t j = 0; j < box_.size(); ++j) faces_.push_back(box_.face(j));

  nbr_.resize(d.cell_count() * 6);
  face_of_.resize(d.cell_count() * 6);
  for (std::size_t i = 0; i < d.cell_count(); ++i) {
    const Cell c = d.cell_at(i);
    int k = 0;
    for (int a = 0; a < 3; ++a) {
      for (int dir : {-1, 1}) {
        const Cell nb = c.shifted(static_cast<Axis>(a), dir);
        const Face f = dir > 0 ? Face{c, static_cast<Axis>(a)} : Face{nb, static_cast<Axis>(a)};
        nbr_[6 * i + static_cast<std::size_t>(k)] =
            d.contains(nb) ? static_cast<std::int64_t>(d.index(nb)) : (dobrushin_spin(nb) < 0 ? -1 : -2);
        face_of_[6 * i + static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(box_.index(f));
        ++k;
      }
    }
  }
  for (int agree = 0; agree <= 6; ++agree) {
    const double de = 2.0 * agree - 6.0;
    accept_[agree] = options_.acceptance == Acceptance::Metropolis
                         ? std::min(1.0, std::exp(-params_.beta * de))
                         : 1.0 / (1.0 + std::exp(params_.beta * de));
  }
  plus_below_zmax_ = -constraint_.h - 1;
  track_code_ = d.cell_count() <= 64;
  anchors_.assign(box_.size(), 0);
  for (std::size_t j = 0; j < box_.size(); ++j) anchors_[j] = touches_outer_plane(faces_[j], d) ? 1 : 0;
  stamp_.assign(box_.size(), 0);
  rebuild_caches();
}

bool ChainState::face_separating(std::size_t j) const {
  const Face& f = faces_[j];
  return config_.at(f.low_cell()) != config_.at(f.high_cell());
}

void ChainState::rebuild_caches() {
  const auto& d = params_.dims;
  energy_ = hamiltonian(config_);
  slab_counts_.assign(static_cast<std::size_t>(d.h + 1), 0);
  low_faces_.clear();
  low_pos_.assign(box_.size(), -1);
  is_low_face_.assign(box_.size(), 0);
  for (std::size_t j = 0; j < box_.size(); ++j) {
    const int mz = faces_[j].min_z();
    is_low_face_[j] = mz < -constraint_.h ? 1 : 0;
    if (!face_separating(j)) continue;
    ++slab_counts_[static_cast<std::size_t>(mz - d.z_lo())];
    if (is_low_face_[j] != 0) {
      low_pos_[j] = static_cast<std::int64_t>(low_faces_.size());
      low_faces_.push_back(static_cast<std::uint32_t>(j));
    }
  }
  code_ = track_code_ ? config_.code() : 0;
}

void ChainState::apply_flip(std::size_t i) {
  const auto& d = params_.dims;
  for (int k = 0; k < 6; ++k) {
    const std::size_t j = face_of_[6 * i + static_cast<std::size_t>(k)];
    const bool was = face_separating(j);
    const auto slab = static_cast<std::size_t>(faces_[j].min_z() - d.z_lo());
    // Flipping a cell toggles every one of its faces.
    if (was) {
      --energy_;
      --slab_counts_[slab];
      if (is_low_face_[j] != 0) {
        const auto pos = static_cast<std::size_t>(low_pos_[j]);
        const auto last = low_faces_.back();
        low_faces_[pos] = last;
        low_pos_[last] = static_cast<std::int64_t>(pos);
        low_faces_.pop_back();
        low_pos_[j] = -1;
      }
    } else {
      ++energy_;
      ++slab_counts_[slab];
      if (is_low_face_[j] != 0) {
        low_pos_[j] = static_cast<std::int64_t>(low_faces_.size());
        low_faces_.push_back(static_cast<std::uint32_t>(j));
      }
    }
  }
  config_.flip_index(i);
  if (track_code_) code_ ^= std::uint64_t{1} << i;
}

bool ChainState::low_face_attached() {
  if (++stamp_id_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    stamp_id_ = 1;
  }
  bfs_.clear();
  for (const auto j : low_faces_) {
    if (stamp_[j] == stamp_id_) continue;
    stamp_[j] = stamp_id_;
    bfs_.push_back(j);
  }
  for (std::size_t head = 0; head < bfs_.size(); ++head) {
    const std::uint32_t j = bfs_[head];
    if (anchors_[j] != 0) return true;
    bool hit = false;
    for_each_star_neighbor(faces_[j], [&](const Face& g) {
      if (hit || !box_.contains(g)) return;
      const auto k = static_cast<std::uint32_t>(box_.index(g));
      if (stamp_[k] == stamp_id_ || !face_separating(k)) return;
      stamp_[k] = stamp_id_;
      if (anchors_[k] != 0) hit = true;
      bfs_.push_back(k);
    });
    if (hit) return true;
  }
  return false;
}

bool ChainState::floor_check(std::size_t i) {
  switch (constraint_.mode) {
    case FloorMode::PlusBelow:
      return !(params_.dims.cell_at(i).z <= plus_below_zmax_ && config_.at_index(i) > 0);
    case FloorMode::InterfaceConditioned: {
      apply_flip(i);
      const bool ok = low_faces_.empty() || !low_face_attached();
      apply_flip(i);
      return ok;
    }
    case FloorMode::None:
    default:
      return true;
  }
}

bool ChainState::step() {
  ++steps_;
  const auto& d = params_.dims;
  const std::size_t i = rng_.below(d.cell_count());
  const Spin s = config_.at_index(i);
  int agree = 0;
  for (int k = 0; k < 6; ++k) {
    const std::int64_t nb = nbr_[6 * i + static_cast<std::size_t>(k)];
    const Spin t = nb >= 0 ? config_.at_index(static_cast<std::size_t>(nb)) : (nb == -1 ? Spin{-1} : Spin{1});
    agree += t == s ? 1 : 0;
  }
  const double p = accept_[agree];
  bool ok = p >= 1.0 || rng_.uniform() < p;
  if (ok && veto_ && veto_(config_, i)) ok = false;
  if (ok) {
    switch (constraint_.mode) {
      case FloorMode::PlusBelow:
        if (s > 0 && d.cell_at(i).z <= plus_below_zmax_) ok = false;
        if (ok) apply_flip(i);
        break;
      case FloorMode::InterfaceConditioned:
        apply_flip(i);
        if (!low_faces_.empty() && low_face_attached()) {
          apply_flip(i);
          ok = false;
        }
        break;
      case FloorMode::None:
      default:
        apply_flip(i);
        break;
    }
    if (!ok) ++floor_rejections_;
  }
  if (ok) ++accepted_;
  if (options_.audit_interval != 0 && steps_ % options_.audit_interval == 0) audit();
  return ok;
}

void ChainState::run(std::uint64_t steps) {
  for (std::uint64_t t = 0; t < steps; ++t) step();
}

void ChainState::audit() const {
  const auto& d = params_.dims;
  if (hamiltonian(config_) != energy_) {
    throw Error(ErrorCode::AuditMismatch, "cached energy drifted at step " + std::to_string(steps_));
  }
  std::vector<std::int64_t> slabs(static_cast<std::size_t>(d.h + 1), 0);
  std::size_t low = 0;
  for (std::size_t j = 0; j < box_.size(); ++j) {
    if (!face_separating(j)) continue;
    ++slabs[static_cast<std::size_t>(faces_[j].min_z() - d.z_lo())];
    low += is_low_face_[j];
  }
  if (slabs != slab_counts_ || low != low_faces_.size()) {
    throw Error(ErrorCode::AuditMismatch, "slab counts drifted at step " + std::to_string(steps_));
  }
  if (track_code_ && code_ != config_.code()) {
    throw Error(ErrorCode::AuditMismatch, "configuration code drifted at step " + std::to_string(steps_));
  }
  if (!satisfies_constraint(config_, constraint_)) {
    throw Error(ErrorCode::AuditMismatch, "constraint violated at step " + std::to_string(steps_));
  }
}

bool near_box_edge(const Interface& iface, int margin) {
  const auto& d = iface.dims();
  for (const auto& f : iface.faces()) {
    if (f.min_z() - d.z_lo() < margin || d.z_hi() - f.max_z() < margin) return true;
  }
  return false;
}

ChainState run_chain(const ModelParams& params, const FloorConstraint& constraint, std::uint64_t steps,
                     std::uint64_t burn_in, std::uint64_t thin, std::uint64_t seed,
                     const ChainObserver& observer, ChainOptions options, const SpinConfig* init) {
  if (steps <= burn_in) throw std::invalid_argument("run_chain: steps must exceed burn_in");
  if (thin == 0) throw std::invalid_argument("run_chain: thin must be positive");
  ChainState state(params, constraint, init ? *init : SpinConfig::ground_state(params.dims), seed, options);
  for (std::uint64_t s = 1; s <= steps; ++s) {
    state.step();
    if (s > burn_in && (s - burn_in) % thin == 0 && observer) observer(state, ChainRecord{s, state.energy()});
  }
  return state;
}

}  // namespace dobrushin
