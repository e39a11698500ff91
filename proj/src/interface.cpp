#include "dobrushin/interface.hpp"

#include <algorithm>
#include <deque>

#include "dobrushin/error.hpp"
#include "json.hpp"

namespace dobrushin {

using nlohmann::json;

Interface::Interface(const BoxDims& dims, std::vector<Face> faces)
    : dims_(dims), faces_(std::move(faces)) {
  std::sort(faces_.begin(), faces_.end(), FaceKeyLess{});
  faces_.erase(std::unique(faces_.begin(), faces_.end()), faces_.end());
}

Interface Interface::flat(const BoxDims& dims) {
  std::vector<Face> faces;
  for (int y = dims.y_lo(); y < dims.y_hi(); ++y) {
    for (int x = dims.x_lo(); x < dims.x_hi(); ++x) faces.push_back(Face{Cell{x, y, -1}, Axis::Z});
  }
  return Interface(dims, std::move(faces));
}

bool Interface::contains(const Face& f) const {
  return std::binary_search(faces_.begin(), faces_.end(), f, FaceKeyLess{});
}

std::vector<std::uint64_t> Interface::keys() const {
  std::vector<std::uint64_t> k;
  k.reserve(faces_.size());
  for (const auto& f : faces_) k.push_back(f.key());
  return k;
}

std::unordered_set<std::uint64_t> Interface::key_set() const {
  std::unordered_set<std::uint64_t> s;
  s.reserve(faces_.size() * 2);
  for (const auto& f : faces_) s.insert(f.key());
  return s;
}

std::string Interface::canonical_key() const {
  std::string out;
  out.reserve(faces_.size() * 8);
  for (const auto& f : faces_) {
    const std::uint64_t k = f.key();
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((k >> (8 * b)) & 0xffu));
  }
  return out;
}

bool touches_outer_plane(const Face& f, const BoxDims& d) {
  for (const auto& v : f.vertices()) {
    if (v.z != 0) continue;
    if (v.x < d.x_lo() || v.x > d.x_hi() || v.y < d.y_lo() || v.y > d.y_hi()) continue;
    if (v.x == d.x_lo() || v.x == d.x_hi() || v.y == d.y_lo() || v.y == d.y_hi()) return true;
  }
  return false;
}

std::vector<Face> anchored_component(const std::unordered_set<std::uint64_t>& faces,
                                     const BoxDims& dims) {
  std::unordered_set<std::uint64_t> seen;
  std::deque<Face> queue;
  for (const auto k : faces) {
    const Face f = Face::from_key(k);
    if (touches_outer_plane(f, dims) && seen.insert(k).second) queue.push_back(f);
  }
  std::vector<Face> out;
  while (!queue.empty()) {
    const Face f = queue.front();
    queue.pop_front();
    out.push_back(f);
    for_each_star_neighbor(f, [&](const Face& g) {
      const auto k = g.key();
      if (faces.count(k) != 0 && seen.insert(k).second) queue.push_back(g);
    });
  }
  return out;
}

Interface extract_interface(const SpinConfig& config) {
  const auto& dims = config.dims();
  const BoxFaces box(dims);
  // 0 = not separating, 1 = separating, 2 = reached.
  std::vector<std::uint8_t> state(box.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Face f = box.face(i);
    if (!is_separating(config, f)) continue;
    state[i] = 1;
  }
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (state[i] == 1 && touches_outer_plane(box.face(i), dims)) {
      state[i] = 2;
      stack.push_back(i);
    }
  }
  std::vector<Face> out;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const Face f = box.face(i);
    out.push_back(f);
    for_each_star_neighbor(f, [&](const Face& g) {
      if (!box.contains(g)) return;
      const std::size_t j = box.index(g);
      if (state[j] == 1) {
        state[j] = 2;
        stack.push_back(j);
      }
    });
  }
  return Interface(dims, std::move(out));
}

SpinConfig spin_from_interface(const Interface& iface) {
  const auto& dims = iface.dims();
  const BoxFaces box(dims);
  std::vector<std::uint8_t> in_iface(box.size(), 0);
  for (const auto& f : iface.faces()) {
    if (!box.contains(f)) {
      throw Error(ErrorCode::InvalidInterface, "interface face outside box: " + to_string(f));
    }
    in_iface[box.index(f)] = 1;
  }
  auto crosses = [&](const Face& f) { return in_iface[box.index(f)] != 0; };

  SpinConfig out(dims);
  std::vector<std::uint8_t> assigned(dims.cell_count(), 0);
  std::deque<std::size_t> queue;
  auto assign = [&](const Cell& c, Spin s) {
    const std::size_t i = dims.index(c);
    if (assigned[i] != 0) {
      if (out.at_index(i) != s) {
        throw Error(ErrorCode::InvalidInterface, "interface faces are not consistent with a spin field");
      }
      return;
    }
    assigned[i] = 1;
    out.set_index(i, s);
    queue.push_back(i);
  };

  // Seed from the boundary, inwards.
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Face f = box.face(i);
    const Cell lo = f.low_cell();
    const Cell hi = f.high_cell();
    const bool lo_in = dims.contains(lo);
    const bool hi_in = dims.contains(hi);
    if (lo_in == hi_in) continue;
    const Cell outside = lo_in ? hi : lo;
    const Cell inside = lo_in ? lo : hi;
    const Spin eta = dobrushin_spin(outside);
    assign(inside, crosses(f) ? static_cast<Spin>(-eta) : eta);
  }
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const Cell c = dims.cell_at(i);
    const Spin s = out.at_index(i);
    for (int a = 0; a < 3; ++a) {
      for (int d : {-1, 1}) {
        const Cell nb = c.shifted(static_cast<Axis>(a), d);
        if (!dims.contains(nb)) continue;
        const Face f = d > 0 ? Face{c, static_cast<Axis>(a)} : Face{nb, static_cast<Axis>(a)};
        assign(nb, crosses(f) ? static_cast<Spin>(-s) : s);
      }
    }
  }
  if (!(extract_interface(out) == iface)) {
    throw Error(ErrorCode::InvalidInterface, "face set is not the interface of its spin field");
  }
  return out;
}

bool satisfies_floor(const Interface& iface, int floor_h) {
  return std::all_of(iface.faces().begin(), iface.faces().end(),
                     [&](const Face& f) { return f.min_z() >= -floor_h; });
}

Interface reflect(const Interface& iface) {
  std::vector<Face> out;
  out.reserve(iface.size());
  for (const auto& f : iface.faces()) {
    if (f.is_horizontal()) {
      // Horizontal face at height t maps to height -t.
      out.push_back(Face{Cell{f.anchor.x, f.anchor.y, -f.anchor.z - 2}, Axis::Z});
    } else {
      out.push_back(Face{Cell{f.anchor.x, f.anchor.y, -f.anchor.z - 1}, f.axis});
    }
  }
  return Interface(iface.dims(), std::move(out));
}

std::string interface_json(const Interface& iface) {
  static const char* names[] = {"X", "Y", "Z"};
  json arr = json::array();
  for (const auto& f : iface.faces()) {
    arr.push_back({f.anchor.x, f.anchor.y, f.anchor.z, names[static_cast<int>(f.axis)]});
  }
  return arr.dump();
}

Interface interface_from_json(const BoxDims& dims, const std::string& text) {
  try {
    const json arr = json::parse(text);
    std::vector<Face> faces;
    for (const auto& e : arr) {
      const auto axis_name = e.at(3).get<std::string>();
      Axis a = Axis::Z;
      if (axis_name == "X") {
        a = Axis::X;
      } else if (axis_name == "Y") {
        a = Axis::Y;
      } else if (axis_name != "Z") {
        throw Error(ErrorCode::Parse, "interface json: bad axis " + axis_name);
      }
      faces.push_back(Face{Cell{e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()}, a});
    }
    return Interface(dims, std::move(faces));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("interface json: ") + e.what());
  }
}

}  // namespace dobrushin
