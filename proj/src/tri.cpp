#include "curvex/surface.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace curvex {

Tri::Tri(std::vector<std::array<int, 3>> triangle_edges, int genus_hint)
    : tri_(std::move(triangle_edges)) {
  (void)genus_hint;
  validate();
}

void Tri::validate() {
  const int F = faces();
  if (F == 0) throw ConfigError("empty triangulation");
  std::map<int, std::vector<int>> occ;  // edge -> side ids
  for (int t = 0; t < F; ++t)
    for (int k = 0; k < 3; ++k) {
      int e = tri_[t][k];
      if (e < 0) throw ConfigError("negative edge id");
      occ[e].push_back(3 * t + k);
    }
  num_edges_ = static_cast<int>(occ.size());
  int next = 0;
  for (auto& [e, sides] : occ) {
    if (e != next++) throw ConfigError("edge ids must be 0..E-1 without gaps");
    if (sides.size() != 2) throw ConfigError("edge " + std::to_string(e) + " used " +
                                             std::to_string(sides.size()) + " times, need 2");
  }
  mate_.assign(3 * F, -1);
  principal_.assign(3 * F, false);
  edge_side_.assign(num_edges_, -1);
  for (auto& [e, sides] : occ) {
    mate_[sides[0]] = sides[1];
    mate_[sides[1]] = sides[0];
    principal_[sides[0]] = true;
    edge_side_[e] = sides[0];
  }
  for (int s = 0; s < 3 * F; ++s)
    if (mate_[s] == s) throw ConfigError("self-glued side");

  // Euler characteristic with a single vertex: 1 - E + F = 2 - 2g.
  int chi = 1 - num_edges_ + F;
  if ((2 - chi) % 2 != 0 || chi > 0) throw ConfigError("bad Euler characteristic");
  genus_ = (2 - chi) / 2;
  if (genus_ < 2) throw ConfigError("genus must be >= 2");

  // Walk the link of the vertex; it must visit every corner once.
  link_.clear();
  link_pos_.assign(3 * F, -1);
  int t = 0, k = 0;
  for (int i = 0; i < 3 * F; ++i) {
    if (link_pos_[3 * t + k] != -1) throw ConfigError("link closed early: more than one vertex");
    link_pos_[3 * t + k] = i;
    link_.push_back({t, k});
    int s = 3 * t + k;           // exit side (starts at corner k)
    int m = mate_[s];            // same edge, other triangle
    t = tri_of(m);
    k = (idx_of(m) + 1) % 3;     // start of s = end of mate = corner idx+1
  }
  if (link_pos_[0] != 0) throw ConfigError("internal link walk error");
  // closure check
  int s = 3 * t + k;
  (void)s;
  if (!(t == 0 && k == 0)) throw ConfigError("link does not close up: more than one vertex");
}

Tri Tri::genus2_octagon() {
  // Fan triangulation of the octagon with identification a b a' b' c d c' d'.
  // Edges: a=0 b=1 c=2 d=3, diagonals from the base vertex: 4..8.
  return Tri({{0, 1, 4},
              {4, 0, 5},
              {5, 1, 6},
              {6, 2, 7},
              {7, 3, 8},
              {8, 2, 3}});
}

Tri Tri::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open triangulation file: " + path);
  nlohmann::json j;
  in >> j;
  if (!j.contains("triangles")) throw ConfigError("triangulation json missing 'triangles'");
  std::vector<std::array<int, 3>> tris;
  for (auto& row : j["triangles"]) {
    if (row.size() != 3) throw ConfigError("triangle must have 3 edges");
    tris.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<int>()});
  }
  return Tri(std::move(tris));
}

std::string Tri::digest() const {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  for (auto& t : tri_)
    for (int e : t) mix(static_cast<uint64_t>(e) + 1);
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace curvex
