#pragma once

#include <map>

#include "curvex/drawing.hpp"

// Curve engine: geometric intersection numbers, Dehn twists, the
// marked-point-forgetting map, and the bigon surgeries that drive it.

namespace curvex {

struct NoMarkedBigon : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A curve on the unmarked surface S, represented by a canonical reduced
// representative on S^z (deterministic minimizer over isotopies across z).
struct SCurve {
  Curve rep;
  bool operator==(const SCurve& o) const { return rep == o.rep; }
  bool operator<(const SCurve& o) const { return rep < o.rep; }
  std::string digest() const { return "s" + rep.digest(); }
};

// Signed Dehn twist word; apply() composes right-to-left.  A point push along
// an embedded loop is the pair of twists about the two boundary curves of an
// annular neighborhood of the loop (one positive, one negative).
struct MappingClass {
  std::vector<std::pair<Curve, int>> word;
  MappingClass inverse() const {
    MappingClass inv;
    for (auto it = word.rbegin(); it != word.rend(); ++it) inv.word.push_back({it->first, -it->second});
    return inv;
  }
  MappingClass then(const MappingClass& prior) const {  // this ∘ prior
    MappingClass out = *this;
    out.word.insert(out.word.end(), prior.word.begin(), prior.word.end());
    return out;
  }
};

class Ctx {
 public:
  explicit Ctx(const Tri& tri) : T(tri) {}
  const Tri& T;

  // tunables
  int forget_slack = 2;
  long forget_state_cap = 200000;

  std::map<std::pair<Curve, Curve>, long> cache_isect;
  std::map<std::pair<Curve, Curve>, long> cache_isect_s;
  std::map<std::pair<Curve, Curve>, bool> cache_pi_equal;
  std::map<Curve, Curve> cache_forget;
  std::map<Curve, Curve> cache_frame;
  std::map<std::pair<Curve, Curve>, int> cache_twist;
};

// Geometric intersection number on S^z.
long intersection(Ctx& ctx, const Curve& a, const Curve& b);
bool disjoint(Ctx& ctx, const Curve& a, const Curve& b);
bool disjoint(Ctx& ctx, const Curve& a, const Multicurve& m);
bool is_multicurve(Ctx& ctx, const std::vector<Curve>& cs);

// Intersection number of the images on the unmarked surface S.
long intersection_s(Ctx& ctx, const Curve& a, const Curve& b);

// Do a and b become isotopic once the marked point is forgotten?
bool pi_equal(Ctx& ctx, const Curve& a, const Curve& b);

// One surgery of `a` across an innermost bigon with `rel` containing the
// marked point.  Decreases i(a, rel), preserves the image on S, and the
// result is disjoint from `a`.
Curve bigon_surgery(Ctx& ctx, const Curve& a, const Curve& rel);

// Reduce a against the multicurve rel by bigon surgeries across the marked
// point until none remain; returns the reduced curve and its total crossing
// count with rel (= intersection number on S).
struct PiReduced {
  Curve curve;
  long crossings;
};
PiReduced pi_reduce(Ctx& ctx, const Curve& a, const Multicurve& rel);

// Canonical representative of the image of c on S.
SCurve forget_marked(Ctx& ctx, const Curve& c);

Curve apply_twist(Ctx& ctx, const Curve& about, int power, const Curve& target);
Curve apply(Ctx& ctx, const MappingClass& mc, const Curve& target);
Multicurve apply(Ctx& ctx, const MappingClass& mc, const Multicurve& m);

// Fixed framing curve for the annulus around `core` (first enumerated curve
// meeting it), and the integer twist coordinate of `of` around `core`.
Curve framing_curve(Ctx& ctx, const Curve& core);
int twist_coord(Ctx& ctx, const Curve& core, const Curve& of);

// The curve obtained from `a` by pushing it across the marked point through
// the complement of `avoid`; requires a to bound the marked region together
// with avoid (i.e. z's region in the drawing of {a} ∪ avoid touches a).
Curve push_across_z(Ctx& ctx, const Curve& a, const Multicurve& avoid);

}  // namespace curvex
