#include "curvex/engine.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <queue>
#include <set>

namespace curvex {

namespace {

// door word of a class in an overlay, canonicalized back to a curve
Curve extract_class(const Tri& T, const Overlay& ov, int cls) {
  auto c = curve_from_word(T, ov.doors(cls));
  if (!c) throw std::runtime_error("extracted class died under reduction");
  return *c;
}

}  // namespace

long intersection(Ctx& ctx, const Curve& a, const Curve& b) {
  if (a == b) return 0;
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto it = ctx.cache_isect.find(key);
  if (it != ctx.cache_isect.end()) return it->second;
  Overlay ov(ctx.T, {Multicurve({key.first}), Multicurve({key.second})});
  ov.reduce({false, true});
  long n = ov.crossings(0, 1);
  ctx.cache_isect[key] = n;
  return n;
}

bool disjoint(Ctx& ctx, const Curve& a, const Curve& b) {
  return !(a == b) && intersection(ctx, a, b) == 0;
}
bool disjoint(Ctx& ctx, const Curve& a, const Multicurve& m) {
  for (auto& c : m.comp)
    if (!disjoint(ctx, a, c)) return false;
  return true;
}
bool is_multicurve(Ctx& ctx, const std::vector<Curve>& cs) {
  for (size_t i = 0; i < cs.size(); ++i)
    for (size_t j = i + 1; j < cs.size(); ++j)
      if (cs[i] == cs[j] || intersection(ctx, cs[i], cs[j]) != 0) return false;
  return true;
}

PiReduced pi_reduce(Ctx& ctx, const Curve& a, const Multicurve& rel) {
  Curve cur = a;
  for (;;) {
    if (rel.contains(cur)) return {cur, 0};
    Overlay ov(ctx.T, {rel, Multicurve({cur})});
    int k = ov.num_classes() - 1;
    std::vector<bool> movable(k + 1, false);
    movable[k] = true;
    ov.reduce(movable);
    const auto& zr = ov.z_region();
    bool surgered = false;
    if (zr.is_bigon()) {
      int c1 = zr.circuits[0].legs[0].cls, c2 = zr.circuits[0].legs[1].cls;
      if (c1 == k || c2 == k) {
        Overlay::Region bg = zr;
        ov.remove_bigon(bg, k);
        cur = extract_class(ctx.T, ov, k);
        surgered = true;
      }
    }
    if (!surgered) {
      long total = 0;
      for (int i = 0; i < k; ++i) total += ov.crossings(i, k);
      return {extract_class(ctx.T, ov, k), total};
    }
  }
}

long intersection_s(Ctx& ctx, const Curve& a, const Curve& b) {
  if (a == b) return 0;
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto it = ctx.cache_isect_s.find(key);
  if (it != ctx.cache_isect_s.end()) return it->second;
  long n = pi_reduce(ctx, key.first, Multicurve({key.second})).crossings;
  ctx.cache_isect_s[key] = n;
  return n;
}

bool pi_equal(Ctx& ctx, const Curve& a, const Curve& b) {
  if (a == b) return true;
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto it = ctx.cache_pi_equal.find(key);
  if (it != ctx.cache_pi_equal.end()) return it->second;
  auto red = pi_reduce(ctx, key.first, Multicurve({key.second}));
  bool eq = false;
  if (red.crossings == 0) {
    if (red.curve == key.second) {
      eq = true;
    } else {
      Overlay ov = disjoint_overlay(ctx.T, Multicurve({red.curve, key.second}));
      for (auto& r : ov.regions()) {
        if (!r.marked || r.chi != 0 || r.nbound != 2) continue;
        std::set<int> cls;
        bool pure = true;
        for (auto& cir : r.circuits) {
          if (cir.legs.size() != 1) pure = false;
          for (auto& l : cir.legs) cls.insert(l.cls);
        }
        if (pure && cls.size() == 2) eq = true;
      }
    }
  }
  ctx.cache_pi_equal[key] = eq;
  return eq;
}

Curve bigon_surgery(Ctx& ctx, const Curve& a, const Curve& rel) {
  if (a == rel) throw NoMarkedBigon("equal curves");
  Overlay ov(ctx.T, {Multicurve({rel}), Multicurve({a})});
  ov.reduce({false, true});
  const auto& zr = ov.z_region();
  if (!zr.is_bigon()) throw NoMarkedBigon("marked region is not a bigon");
  int c1 = zr.circuits[0].legs[0].cls, c2 = zr.circuits[0].legs[1].cls;
  if (c1 != 1 && c2 != 1) throw NoMarkedBigon("marked bigon does not involve the curve");
  Overlay::Region bg = zr;
  ov.remove_bigon(bg, 1);
  return extract_class(ctx.T, ov, 1);
}

// ---- forgetting the marked point ----------------------------------------

namespace {

// Fan rewrites of a door word: a run of k consecutive corner arcs around the
// vertex is pushed to the other side, replacing k+1 doors by L-1-k doors
// (L = link length).  Only runs with k >= min_len are rewritten.
std::vector<Curve> fan_moves(const Tri& T, const std::vector<int>& w, int min_len) {
  std::vector<Curve> out;
  const int L = T.link_length();
  const int n = static_cast<int>(w.size());
  if (n == 0) return out;
  auto door_forward = [&](int p) {
    auto [t, k] = T.link_corner(((p % L) + L) % L);
    return T.mate(3 * t + k);
  };
  auto door_backward = [&](int p) {
    auto [t, k] = T.link_corner((((p - 1) % L) + L) % L);
    return 3 * t + k;
  };
  // arc i is a forward corner arc at link position p iff its entry door is
  // door_forward(p-1) and the next door continues the link walk
  std::map<int, int> fw_lookup;
  for (int p = 0; p < L; ++p) fw_lookup[door_forward(p - 1)] = p;
  std::vector<int> fpos(n, -1);
  for (int i = 0; i < n; ++i) {
    auto it = fw_lookup.find(w[i]);
    if (it == fw_lookup.end()) continue;
    if (w[(i + 1) % n] == door_forward(it->second)) fpos[i] = it->second;
  }
  for (int i = 0; i < n; ++i) {
    if (fpos[i] < 0) continue;
    int prev = (i - 1 + n) % n;
    if (n > 1 && fpos[prev] >= 0 && fpos[i] == (fpos[prev] + 1) % L) continue;
    int len = 1;
    while (len < n && fpos[(i + len) % n] == (fpos[i] + len) % L) len++;
    for (int off = 0; off < len; ++off)
      for (int sub = std::max(1, min_len); sub <= len - off && sub < L - 1; ++sub) {
        int s0 = (i + off) % n;
        int q = fpos[s0];
        std::vector<int> nw;
        for (int t2 = (s0 + sub + 1) % n; t2 != s0; t2 = (t2 + 1) % n) nw.push_back(w[t2]);
        for (int p = q - 1, cnt = 0; cnt < L - 1 - sub; p--, cnt++)
          nw.push_back(door_backward(((p % L) + L) % L));
        auto cv = curve_from_word(T, nw);
        if (!cv) throw std::runtime_error("across-z move killed the curve");
        out.push_back(*cv);
      }
    i += len - 1;
  }
  return out;
}

std::vector<Curve> across_z_neighbors(const Tri& T, const Curve& c, int min_len) {
  Traced tr = trace(T, c.w);
  if (tr.comps.size() != 1) throw std::runtime_error("across_z: not a single curve");
  std::vector<int> w = word_of(tr.comps[0]);
  std::vector<Curve> out = fan_moves(T, w, min_len);
  auto more = fan_moves(T, reversed_word(T, w), min_len);
  out.insert(out.end(), more.begin(), more.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

SCurve forget_marked(Ctx& ctx, const Curve& c) {
  auto it = ctx.cache_forget.find(c);
  if (it != ctx.cache_forget.end()) return {it->second};
  // Weight-monotone search over isotopies across the marked point.  A fan of
  // k consecutive corner arcs rewrites to L-2-k arcs, so pushing changes the
  // weight by 16-2k on this triangulation; only fans long enough to not
  // exceed the slack are explored.
  const int L = ctx.T.link_length();
  int min_len = std::max(1, ((L - 2) - ctx.forget_slack) / 2);
  std::set<Curve> seen;
  std::priority_queue<Curve, std::vector<Curve>, std::greater<Curve>> pq;
  pq.push(c);
  seen.insert(c);
  int best_weight = c.weight();
  Curve best = c;
  long states = 0;
  while (!pq.empty()) {
    Curve cur = pq.top();
    pq.pop();
    if (cur.weight() > best_weight + ctx.forget_slack) break;
    if (cur.weight() < best_weight || (cur.weight() == best_weight && cur.w < best.w)) {
      best = cur;
      best_weight = std::min(best_weight, cur.weight());
    }
    if (++states > ctx.forget_state_cap) throw std::runtime_error("forget_marked: state cap hit");
    for (auto& nb : across_z_neighbors(ctx.T, cur, min_len)) {
      if (nb.weight() > best_weight + ctx.forget_slack) continue;
      if (seen.insert(nb).second) pq.push(nb);
    }
  }
  ctx.cache_forget[c] = best;
  return {best};
}

// ---- twists ---------------------------------------------------------------

Curve apply_twist(Ctx& ctx, const Curve& about, int power, const Curve& target) {
  if (power == 0 || about == target) return target;
  Overlay ov(ctx.T, {Multicurve({about}), Multicurve({target})});
  ov.reduce({false, true});
  if (ov.crossings(0, 1) == 0) return target;
  auto alongs = ov.crossings_along(1);  // crossings on the target, traversal order
  const auto& tw = ov.doors(1);
  const auto& aw = ov.doors(0);
  int na = static_cast<int>(aw.size());
  std::vector<int> nw;
  size_t qi = 0;
  for (size_t i = 0; i < tw.size(); ++i) {
    nw.push_back(tw[i]);
    while (qi < alongs.size() && alongs[qi].step == static_cast<int>(i)) {
      bool fwd = (alongs[qi].sign > 0) == (power > 0);
      int j = alongs[qi].other_step;
      for (int rep = 0; rep < std::abs(power); ++rep) {
        if (fwd) {
          for (int t2 = (j + 1) % na;; t2 = (t2 + 1) % na) {
            nw.push_back(aw[t2]);
            if (t2 == j) break;
          }
        } else {
          for (int t2 = j;; t2 = (t2 - 1 + na) % na) {
            nw.push_back(ctx.T.mate(aw[t2]));
            if (t2 == (j + 1) % na) break;
          }
        }
      }
      ++qi;
    }
  }
  if (qi != alongs.size()) throw std::runtime_error("twist: crossing bookkeeping");
  auto cv = curve_from_word(ctx.T, nw);
  if (!cv) throw std::runtime_error("twist killed the curve");
  return *cv;
}

Curve apply(Ctx& ctx, const MappingClass& mc, const Curve& target) {
  Curve cur = target;
  for (auto it = mc.word.rbegin(); it != mc.word.rend(); ++it)
    cur = apply_twist(ctx, it->first, it->second, cur);
  return cur;
}

Multicurve apply(Ctx& ctx, const MappingClass& mc, const Multicurve& m) {
  std::vector<Curve> out;
  for (auto& c : m.comp) out.push_back(apply(ctx, mc, c));
  return Multicurve(std::move(out));
}

Curve framing_curve(Ctx& ctx, const Curve& core) {
  auto it = ctx.cache_frame.find(core);
  if (it != ctx.cache_frame.end()) return it->second;
  for (int bound = 1; bound <= 6; ++bound) {
    for (auto& f : enumerate_curves(ctx.T, bound)) {
      if (f == core) continue;
      if (intersection(ctx, core, f) > 0) {
        ctx.cache_frame[core] = f;
        return f;
      }
    }
  }
  throw std::runtime_error("no framing curve found");
}

int twist_coord(Ctx& ctx, const Curve& core, const Curve& of) {
  if (intersection(ctx, core, of) == 0)
    throw PreconditionViolation("twist coordinate of a disjoint curve");
  auto key = std::make_pair(core, of);
  auto it = ctx.cache_twist.find(key);
  if (it != ctx.cache_twist.end()) return it->second;
  Curve f = framing_curve(ctx, core);
  std::map<int, long> val;
  auto eval = [&](int k) {
    auto vit = val.find(k);
    if (vit != val.end()) return vit->second;
    long v = intersection(ctx, apply_twist(ctx, core, -k, of), f);
    val[k] = v;
    return v;
  };
  for (int K = 4; K <= 256; K *= 2) {
    long best = eval(0);
    int argmin = 0;
    for (int k = -K; k <= K; ++k) {
      long v = eval(k);
      if (v < best || (v == best && k < argmin)) {
        best = v;
        argmin = k;
      }
    }
    if (eval(-K) > best && eval(K) > best && std::abs(argmin) < K) {
      ctx.cache_twist[key] = argmin;
      return argmin;
    }
  }
  throw std::runtime_error("twist coordinate did not converge");
}

Curve push_across_z(Ctx& ctx, const Curve& a, const Multicurve& avoid) {
  if (!disjoint(ctx, a, avoid)) throw PreconditionViolation("push: curve meets the avoid set");
  Multicurve all = avoid.with(a);
  Overlay ov = disjoint_overlay(ctx.T, all);
  int cls = ov.find_class(a);
  bool adj = false;
  for (auto& cir : ov.z_region().circuits)
    for (auto& l : cir.legs)
      if (l.cls == cls) adj = true;
  if (!adj) throw PreconditionViolation("push: curve not on the marked region");
  auto [step0, tau] = ov.z_arc(cls);
  const int L = ctx.T.link_length();
  // triangle where tau ends (or the chord's triangle if tau is empty)
  int t_end;
  if (tau.empty()) {
    t_end = Tri::tri_of(ov.doors(cls)[step0]);
  } else {
    t_end = Tri::tri_of(tau.back());
  }
  int p0 = -1;
  for (int p = 0; p < L; ++p)
    if (ctx.T.link_corner(p).first == t_end) p0 = p;
  if (p0 < 0) throw std::runtime_error("push: no link corner in triangle");
  std::vector<int> loop;
  for (int q = 0; q < L; ++q) {
    auto [t, k] = ctx.T.link_corner((p0 + q) % L);
    loop.push_back(ctx.T.mate(3 * t + k));
  }
  std::vector<int> tau_rev;
  for (auto itd = tau.rbegin(); itd != tau.rend(); ++itd) tau_rev.push_back(ctx.T.mate(*itd));
  const auto& w = ov.doors(cls);
  std::vector<int> nw;
  for (size_t i = 0; i < w.size(); ++i) {
    nw.push_back(w[i]);
    if (static_cast<int>(i) == step0) {
      for (int d : tau) nw.push_back(d);
      for (int d : loop) nw.push_back(d);
      for (int d : tau_rev) nw.push_back(d);
    }
  }
  auto cv = curve_from_word(ctx.T, nw);
  if (!cv) throw std::runtime_error("push produced a trivial curve");
  if (!pi_equal(ctx, *cv, a) || intersection(ctx, *cv, a) != 0 || *cv == a ||
      !disjoint(ctx, *cv, avoid))
    throw std::runtime_error("push postcondition failed");
  return *cv;
}

}  // namespace curvex
