#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Curves on a triangulated surface with one vertex, which doubles as the
// marked point z.  Curves are stored in normal coordinates: one non-negative
// integer per edge of the triangulation.  With the vertex treated as a
// marked point, normal coordinates are canonical: two essential curves are
// isotopic on the marked surface iff their coordinate vectors agree.

namespace curvex {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MatchingViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyAfterReduction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SurfaceSpec {
  int genus = 2;
  bool marked = true;  // true = S^z, false = S
  int complexity() const { return marked ? 3 * genus - 2 : 3 * genus - 3; }
};

// side ids are 3*t + k for triangle t, side k.  Side k of a triangle runs
// from corner k to corner (k+1)%3; corner k sits between sides k-1 and k.
class Tri {
 public:
  Tri(std::vector<std::array<int, 3>> triangle_edges, int genus_hint = -1);

  static Tri genus2_octagon();           // fan triangulation of the a b a' b' c d c' d' octagon
  static Tri from_json_file(const std::string& path);

  int faces() const { return static_cast<int>(tri_.size()); }
  int edges() const { return num_edges_; }
  int genus() const { return genus_; }

  int edge_of_side(int side) const { return tri_[side / 3][side % 3]; }
  int mate(int side) const { return mate_[side]; }
  static int tri_of(int side) { return side / 3; }
  static int idx_of(int side) { return side % 3; }

  // true if `side` is the lexicographically первый of its edge pair; global
  // port order along an edge follows its principal side.
  bool principal(int side) const { return principal_[side]; }
  int principal_side(int edge) const { return edge_side_[edge]; }

  // Link of the vertex: cyclic list of corners (t,k); corner i exits through
  // side (t_i, k_i) and the next corner is across that edge end.
  int link_length() const { return 3 * faces(); }
  std::pair<int, int> link_corner(int i) const { return link_[i]; }
  int link_pos(int t, int k) const { return link_pos_[3 * t + k]; }

  std::string digest() const;

 private:
  std::vector<std::array<int, 3>> tri_;
  std::vector<int> mate_;        // side -> side involution
  std::vector<bool> principal_;  // side -> is principal occurrence
  std::vector<int> edge_side_;   // edge -> principal side
  int num_edges_ = 0;
  int genus_ = 0;
  std::vector<std::pair<int, int>> link_;  // cyclic corner order around z
  std::vector<int> link_pos_;              // 3*t+k -> index in link_
  void validate();
};

using Coords = std::vector<int>;

// Per-triangle corner counts; throws MatchingViolation if the vector does not
// satisfy the matching conditions.
std::array<int, 3> corner_counts(const Tri& T, const Coords& w, int t);
bool satisfies_matching(const Tri& T, const Coords& w);

struct Curve {
  Coords w;
  bool operator==(const Curve& o) const { return w == o.w; }
  bool operator<(const Curve& o) const;
  int weight() const;
  int max_coord() const;
  std::string digest() const;
};

struct CurveHash {
  size_t operator()(const Curve& c) const;
};

struct Multicurve {
  std::vector<Curve> comp;  // sorted, unique
  Multicurve() = default;
  explicit Multicurve(std::vector<Curve> cs);
  bool operator==(const Multicurve& o) const { return comp == o.comp; }
  bool operator<(const Multicurve& o) const { return comp < o.comp; }
  bool empty() const { return comp.empty(); }
  size_t size() const { return comp.size(); }
  bool contains(const Curve& c) const;
  Coords total(const Tri& T) const;
  Multicurve with(const Curve& c) const;
  Multicurve without(const Curve& c) const;
  Multicurve merged(const Multicurve& o) const;
};

// A traced normal curve system: the combinatorial layout of the system with
// explicit port assignments along every edge.
struct Traced {
  struct Step {
    int enter_side;   // side instance through which the strand enters the triangle
    int enter_local;  // local port index on that side, counted from the side's start corner
    int corner;       // corner (0..2) of the triangle holding this arc
    int depth;        // arc depth within the corner (0 = innermost)
  };
  struct Component {
    std::vector<Step> steps;  // cyclic
    Coords w;
    bool vertex_linking = false;
  };
  std::vector<Component> comps;
};

Traced trace(const Tri& T, const Coords& w);

// Canonical form: decompose, drop vertex-linking components, dedupe.
// Throws MatchingViolation / EmptyAfterReduction.
Multicurve normalize(const Tri& T, const Coords& raw);

// Edge-word of a traced component: sequence of sides entered.  The word is
// enough to reconstruct the isotopy class.
std::vector<int> word_of(const Traced::Component& c);

// Cyclic word of side-instances -> canonical coords.  Removes arcs that
// backtrack through the side they entered, then reads off crossing counts.
// Returns empty coords if the word reduces to nothing (null-homotopic or
// vertex-linking after reduction is NOT detected here; trace the result).
Coords word_to_coords(const Tri& T, std::vector<int> word);

// Canonical curve from a door word: bounce-reduce, trace, expect a single
// essential component; empty optional if the word dies or is vertex linking.
std::optional<Curve> curve_from_word(const Tri& T, const std::vector<int>& word);

std::vector<int> reversed_word(const Tri& T, const std::vector<int>& word);

// All canonical essential curves with every coordinate <= bound, in
// deterministic (lexicographic) order.
std::vector<Curve> enumerate_curves(const Tri& T, int bound,
                                    const std::function<bool(const Curve&)>& pred = nullptr);

// Lightweight deterministic RNG (splitmix64) for sampling.
struct Rng {
  uint64_t s;
  explicit Rng(uint64_t seed) : s(seed) {}
  uint64_t next() {
    uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  size_t below(size_t n) { return n ? static_cast<size_t>(next() % n) : 0; }
};

}  // namespace curvex
