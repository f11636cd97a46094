#include "curvex/surface.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <set>
#include <sstream>

namespace curvex {

std::array<int, 3> corner_counts(const Tri& T, const Coords& w, int t) {
  int n0 = w[T.edge_of_side(3 * t + 0)];
  int n1 = w[T.edge_of_side(3 * t + 1)];
  int n2 = w[T.edge_of_side(3 * t + 2)];
  if ((n0 + n1 + n2) % 2 != 0) throw MatchingViolation("odd triangle total");
  // corner k is flanked by sides k-1 and k, opposite side k+1
  std::array<int, 3> x;
  x[0] = (n2 + n0 - n1) / 2;
  x[1] = (n0 + n1 - n2) / 2;
  x[2] = (n1 + n2 - n0) / 2;
  for (int v : x)
    if (v < 0) throw MatchingViolation("triangle inequality fails");
  return x;
}

bool satisfies_matching(const Tri& T, const Coords& w) {
  if (static_cast<int>(w.size()) != T.edges()) return false;
  for (int v : w)
    if (v < 0) return false;
  try {
    for (int t = 0; t < T.faces(); ++t) corner_counts(T, w, t);
  } catch (const MatchingViolation&) {
    return false;
  }
  return true;
}

bool Curve::operator<(const Curve& o) const {
  int a = weight(), b = o.weight();
  if (a != b) return a < b;
  return w < o.w;
}
int Curve::weight() const { return std::accumulate(w.begin(), w.end(), 0); }
int Curve::max_coord() const { return w.empty() ? 0 : *std::max_element(w.begin(), w.end()); }

std::string Curve::digest() const {
  std::ostringstream os;
  os << "c";
  for (size_t i = 0; i < w.size(); ++i) os << (i ? "." : "") << w[i];
  return os.str();
}

size_t CurveHash::operator()(const Curve& c) const {
  uint64_t h = 1469598103934665603ULL;
  for (int v : c.w) {
    h ^= static_cast<uint64_t>(v) + 0x9e37;
    h *= 1099511628211ULL;
  }
  return static_cast<size_t>(h);
}

Multicurve::Multicurve(std::vector<Curve> cs) : comp(std::move(cs)) {
  std::sort(comp.begin(), comp.end());
  comp.erase(std::unique(comp.begin(), comp.end()), comp.end());
}
bool Multicurve::contains(const Curve& c) const {
  return std::binary_search(comp.begin(), comp.end(), c);
}
Coords Multicurve::total(const Tri& T) const {
  Coords t(T.edges(), 0);
  for (auto& c : comp)
    for (int e = 0; e < T.edges(); ++e) t[e] += c.w[e];
  return t;
}
Multicurve Multicurve::with(const Curve& c) const {
  auto v = comp;
  v.push_back(c);
  return Multicurve(std::move(v));
}
Multicurve Multicurve::without(const Curve& c) const {
  std::vector<Curve> v;
  for (auto& x : comp)
    if (!(x == c)) v.push_back(x);
  return Multicurve(std::move(v));
}
Multicurve Multicurve::merged(const Multicurve& o) const {
  auto v = comp;
  v.insert(v.end(), o.comp.begin(), o.comp.end());
  return Multicurve(std::move(v));
}

namespace {
// port slot = (side, local index). Arc lookup inside a triangle.
struct PortArc {
  int corner, depth;
  int other_side, other_local;
};

PortArc arc_at(const Tri& T, const Coords& w, int side, int local) {
  int t = Tri::tri_of(side), k = Tri::idx_of(side);
  auto x = corner_counts(T, w, t);
  int n = w[T.edge_of_side(side)];
  (void)n;
  if (local < x[k]) {
    // corner k arc, depth = local; other endpoint on side k-1 at n_{k-1}-1-depth
    int ks = (k + 2) % 3;
    int os = 3 * t + ks;
    int on = w[T.edge_of_side(os)];
    return {k, local, os, on - 1 - local};
  }
  // corner k+1 arc, depth = n-1-local; other endpoint on side k+1 at depth
  int kc = (k + 1) % 3;
  int os = 3 * t + kc;
  int depth = w[T.edge_of_side(side)] - 1 - local;
  return {kc, depth, os, depth};
}
}  // namespace

Traced trace(const Tri& T, const Coords& w) {
  if (static_cast<int>(w.size()) != T.edges()) throw MatchingViolation("coords size mismatch");
  for (int t = 0; t < T.faces(); ++t) corner_counts(T, w, t);  // throws if bad

  Traced out;
  // visited per (side, local)
  std::vector<std::vector<char>> seen(3 * T.faces());
  for (int s = 0; s < 3 * T.faces(); ++s) seen[s].assign(w[T.edge_of_side(s)], 0);

  for (int s0 = 0; s0 < 3 * T.faces(); ++s0) {
    for (int p0 = 0; p0 < static_cast<int>(seen[s0].size()); ++p0) {
      if (seen[s0][p0]) continue;
      Traced::Component comp;
      comp.w.assign(T.edges(), 0);
      int s = s0, p = p0;
      while (!seen[s][p]) {
        seen[s][p] = 1;
        PortArc a = arc_at(T, w, s, p);
        comp.steps.push_back({s, p, a.corner, a.depth});
        comp.w[T.edge_of_side(s)]++;
        // exit through a.other_side, cross to its mate
        int ms = T.mate(a.other_side);
        int n = w[T.edge_of_side(a.other_side)];
        int mp = n - 1 - a.other_local;
        seen[a.other_side][a.other_local] = 1;  // same crossing, seen from the exit side
        s = ms;
        p = mp;
      }
      // every edge crossing was counted once at entry; mark linking components
      bool link = true;
      for (int e = 0; e < T.edges(); ++e)
        if (comp.w[e] != 2) link = false;
      if (link) {
        // all corner counts 1 <=> the vertex link
        comp.vertex_linking = true;
      }
      out.comps.push_back(std::move(comp));
    }
  }
  return out;
}

Multicurve normalize(const Tri& T, const Coords& raw) {
  if (static_cast<int>(raw.size()) != T.edges()) throw MatchingViolation("coords size mismatch");
  for (int v : raw)
    if (v < 0) throw MatchingViolation("negative coordinate");
  Traced tr = trace(T, raw);
  std::vector<Curve> out;
  for (auto& c : tr.comps) {
    if (c.vertex_linking) continue;
    out.push_back(Curve{c.w});
  }
  if (out.empty()) throw EmptyAfterReduction("no essential component");
  return Multicurve(std::move(out));
}

std::vector<int> word_of(const Traced::Component& c) {
  std::vector<int> w;
  w.reserve(c.steps.size());
  for (auto& s : c.steps) w.push_back(s.enter_side);
  return w;
}

Coords word_to_coords(const Tri& T, std::vector<int> word) {
  // Remove backtracks: entering a triangle and leaving through the same side.
  // word[i] = side entered; exit side of step i is mate(word[i+1]).
  bool changed = true;
  while (changed && word.size() >= 2) {
    changed = false;
    const int n = static_cast<int>(word.size());
    for (int i = 0; i < n; ++i) {
      int j = (i + 1) % n;
      if (T.mate(word[j]) == word[i]) {
        // drop i and j (cyclically)
        std::vector<int> nw;
        nw.reserve(n - 2);
        for (int k = 0; k < n; ++k)
          if (k != i && k != j) nw.push_back(word[k]);
        word.swap(nw);
        changed = true;
        break;
      }
    }
  }
  if (word.size() == 2 && T.mate(word[1]) == word[0]) word.clear();
  Coords w(T.edges(), 0);
  for (int s : word) w[T.edge_of_side(s)]++;
  return w;
}

std::optional<Curve> curve_from_word(const Tri& T, const std::vector<int>& word) {
  Coords w = word_to_coords(T, word);
  int tot = std::accumulate(w.begin(), w.end(), 0);
  if (tot == 0) return std::nullopt;
  Traced tr = trace(T, w);
  if (tr.comps.size() != 1) throw std::runtime_error("word traced to several components");
  if (tr.comps[0].vertex_linking) return std::nullopt;
  return Curve{tr.comps[0].w};
}

std::vector<int> reversed_word(const Tri& T, const std::vector<int>& word) {
  // forward: enter d_i, exit mate(d_{i+1}); reverse doors are the forward exits
  const int n = static_cast<int>(word.size());
  std::vector<int> rev;
  rev.reserve(n);
  for (int i = n - 1; i >= 0; --i) rev.push_back(T.mate(word[(i + 1) % n]));
  return rev;
}

std::vector<Curve> enumerate_curves(const Tri& T, int bound,
                                    const std::function<bool(const Curve&)>& pred) {
  std::vector<Curve> out;
  const int E = T.edges();
  Coords w(E, 0);
  // triangles fully determined once their last edge is assigned
  std::vector<std::vector<int>> tri_by_last(E);
  for (int t = 0; t < T.faces(); ++t) {
    int last = std::max({T.edge_of_side(3 * t), T.edge_of_side(3 * t + 1), T.edge_of_side(3 * t + 2)});
    tri_by_last[last].push_back(t);
  }
  std::function<void(int)> rec = [&](int e) {
    if (e == E) {
      int tot = std::accumulate(w.begin(), w.end(), 0);
      if (tot == 0) return;
      Traced tr = trace(T, w);
      if (tr.comps.size() != 1 || tr.comps[0].vertex_linking) return;
      Curve c{w};
      if (!pred || pred(c)) out.push_back(c);
      return;
    }
    for (int v = 0; v <= bound; ++v) {
      w[e] = v;
      bool ok = true;
      for (int t : tri_by_last[e]) {
        int a = w[T.edge_of_side(3 * t)], b = w[T.edge_of_side(3 * t + 1)],
            c = w[T.edge_of_side(3 * t + 2)];
        if ((a + b + c) % 2 || a > b + c || b > a + c || c > a + b) {
          ok = false;
          break;
        }
      }
      if (ok) rec(e + 1);
    }
    w[e] = 0;
  };
  rec(0);
  return out;
}

}  // namespace curvex
