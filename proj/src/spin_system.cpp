#include "dobrushin/spin_system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dobrushin/error.hpp"
#include "json.hpp"

namespace dobrushin {

using nlohmann::json;

void ModelParams::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be finite and non-negative");
  }
  dims.validate();
}

SpinConfig::SpinConfig(const BoxDims& dims) : dims_(dims) {
  dims.validate();
  spins_.resize(dims.cell_count());
  for (std::size_t i = 0; i < spins_.size(); ++i) spins_[i] = dobrushin_spin(dims.cell_at(i));
}

SpinConfig SpinConfig::ground_state(const BoxDims& dims) { return SpinConfig(dims); }

SpinConfig SpinConfig::lifted(const BoxDims& dims, int k) {
  SpinConfig s(dims);
  for (std::size_t i = 0; i < s.spins_.size(); ++i) {
    s.spins_[i] = dims.cell_at(i).z < k ? Spin{1} : Spin{-1};
  }
  return s;
}

SpinConfig SpinConfig::all(const BoxDims& dims, Spin v) {
  SpinConfig s(dims);
  std::fill(s.spins_.begin(), s.spins_.end(), v);
  return s;
}

void SpinConfig::set(const Cell& c, Spin s) {
  if (!dims_.contains(c)) throw std::out_of_range("set: cell outside box");
  spins_[dims_.index(c)] = s;
}

void SpinConfig::flip(const Cell& c) {
  if (!dims_.contains(c)) throw std::out_of_range("flip: cell outside box");
  flip_index(dims_.index(c));
}

std::uint64_t SpinConfig::code() const {
  if (spins_.size() > 64) throw std::length_error("code: box has more than 64 cells");
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < spins_.size(); ++i) {
    if (spins_[i] > 0) c |= std::uint64_t{1} << i;
  }
  return c;
}

SpinConfig SpinConfig::from_code(const BoxDims& dims, std::uint64_t code) {
  SpinConfig s(dims);
  if (s.spins_.size() > 64) throw std::length_error("from_code: box has more than 64 cells");
  for (std::size_t i = 0; i < s.spins_.size(); ++i) {
    s.spins_[i] = ((code >> i) & 1u) != 0 ? Spin{1} : Spin{-1};
  }
  return s;
}

std::int64_t hamiltonian(const SpinConfig& config) {
  const BoxFaces faces(config.dims());
  std::int64_t h = 0;
  for (std::size_t i = 0; i < faces.size(); ++i) h += is_separating(config, faces.face(i)) ? 1 : 0;
  return h;
}

int delta_energy_index(const SpinConfig& config, std::size_t idx) {
  const Cell c = config.dims().cell_at(idx);
  const Spin s = config.at_index(idx);
  int agree = 0;
  for (int a = 0; a < 3; ++a) {
    const auto axis = static_cast<Axis>(a);
    agree += config.at(c.shifted(axis, 1)) == s ? 1 : 0;
    agree += config.at(c.shifted(axis, -1)) == s ? 1 : 0;
  }
  // Flipping turns every agreement into a disagreement and vice versa.
  return 2 * agree - 6;
}

int delta_energy(const SpinConfig& config, const Cell& cell) {
  if (!config.dims().contains(cell)) {
    throw Error(ErrorCode::InvalidArgument, "delta_energy: cell outside box");
  }
  return delta_energy_index(config, config.dims().index(cell));
}

std::vector<Face> separating_faces(const SpinConfig& config) {
  const BoxFaces faces(config.dims());
  std::vector<Face> out;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const Face f = faces.face(i);
    if (is_separating(config, f)) out.push_back(f);
  }
  std::sort(out.begin(), out.end(), FaceKeyLess{});
  return out;
}

SpinConfig reflect(const SpinConfig& config) {
  const auto& d = config.dims();
  SpinConfig out(d);
  for (std::size_t i = 0; i < d.cell_count(); ++i) {
    const Cell c = d.cell_at(i);
    const Cell mirrored{c.x, c.y, -c.z - 1};
    out.set(mirrored, static_cast<Spin>(-config.at_index(i)));
  }
  return out;
}

std::string encode_rle(const SpinConfig& config) {
  std::string out;
  const auto& s = config.spins();
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    out += std::to_string(j - i);
    out += s[i] > 0 ? '+' : '-';
    i = j;
  }
  return out;
}

SpinConfig decode_rle(const BoxDims& dims, const std::string& rle) {
  SpinConfig out(dims);
  std::size_t pos = 0;
  std::size_t cell = 0;
  while (pos < rle.size()) {
    std::size_t count = 0;
    std::size_t digits = 0;
    while (pos < rle.size() && rle[pos] >= '0' && rle[pos] <= '9') {
      count = count * 10 + static_cast<std::size_t>(rle[pos] - '0');
      ++pos;
      if (++digits > 12) throw Error(ErrorCode::Parse, "rle: run length too long");
    }
    if (digits == 0 || pos >= rle.size() || (rle[pos] != '+' && rle[pos] != '-') || count == 0) {
      throw Error(ErrorCode::Parse, "rle: malformed token");
    }
    const Spin v = rle[pos] == '+' ? Spin{1} : Spin{-1};
    ++pos;
    if (cell + count > dims.cell_count()) throw Error(ErrorCode::Parse, "rle: too many cells");
    for (std::size_t k = 0; k < count; ++k) out.set_index(cell++, v);
  }
  if (cell != dims.cell_count()) throw Error(ErrorCode::Parse, "rle: too few cells");
  return out;
}

std::string snapshot_json(const SpinConfig& config, double beta) {
  json j;
  j["dims"] = {{"n", config.dims().n}, {"m", config.dims().m}, {"h", config.dims().h}};
  j["beta"] = beta;
  j["spins"] = encode_rle(config);
  return j.dump();
}

SpinConfig snapshot_from_json(const std::string& text, double* beta_out) {
  try {
    const json j = json::parse(text);
    BoxDims d{j.at("dims").at("n").get<int>(), j.at("dims").at("m").get<int>(),
              j.at("dims").at("h").get<int>()};
    d.validate();
    if (beta_out != nullptr) *beta_out = j.at("beta").get<double>();
    return decode_rle(d, j.at("spins").get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("snapshot: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::Parse, std::string("snapshot: ") + e.what());
  }
}

}  // namespace dobrushin
