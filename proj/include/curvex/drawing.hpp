#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>

#include "curvex/surface.hpp"

// Exact arrangements of curve systems on the triangulated surface.  An
// Overlay draws a small number of multicurves together (each multicurve
// internally disjoint), removes inessential bigons between components by
// combinatorial re-routing, and exposes the complementary regions with their
// topology (Euler characteristic, genus, boundary circuits, marked point).

namespace curvex {

struct StuckOverlay : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Overlay {
 public:
  Overlay(const Tri& T, const std::vector<Multicurve>& groups);

  int num_classes() const { return static_cast<int>(classes_.size()); }
  const Curve& cls(int c) const { return classes_[c]; }
  int group_of(int c) const { return group_[c]; }
  const std::vector<int>& doors(int c) const { return doors_[c]; }
  int find_class(const Curve& c) const;

  // Remove every unmarked bigon region having a movable leg.  Movable classes
  // get re-routed; fixed classes keep their canonical layout.
  void reduce(const std::vector<bool>& movable);
  void reduce_movable_group(int movable_group);

  long crossings(int c1, int c2) const;
  long total_crossings() const;
  struct Cross {
    int step1, step2;
    int sign;  // sign of det(dir1, dir2) at the crossing
  };
  std::vector<Cross> crossing_list(int c1, int c2) const;

  // All crossings on the given class, in traversal order (by chord, then
  // position along the chord).
  struct AlongCross {
    int step;
    int other_cls, other_step;
    int sign;  // det(own dir, other dir)
  };
  std::vector<AlongCross> crossings_along(int cls) const;

  // A dual arc from the marked point to the given class through the marked
  // region: returns the chord step it lands on and the door word from that
  // chord's triangle to a triangle at the marked point.
  std::pair<int, std::vector<int>> z_arc(int cls) const;

  struct Leg {  // maximal run of one class along a region boundary
    int cls = -1;
    std::vector<int> steps;  // chord indices in walk order
    bool forward = true;     // walk direction agrees with the class traversal
  };
  struct Circuit {
    std::vector<int> doors;  // edge word of this boundary component as drawn
    std::vector<Leg> legs;
  };
  struct Region {
    int id = 0;
    long faces = 0;
    int chi = 0;
    int nbound = 0;
    int genus = 0;
    bool marked = false;
    std::vector<Circuit> circuits;
    bool is_disk() const { return chi == 1; }
    bool is_bigon() const {
      return chi == 1 && circuits.size() == 1 && circuits[0].legs.size() == 2;
    }
  };

  const std::vector<Region>& regions() const { return regions_; }
  const Region& z_region() const { return regions_[z_region_id_]; }
  int z_region_id() const { return z_region_id_; }

  std::set<int> touching_regions(int c) const;

  // Re-route the leg of `movable_cls` around the given bigon region.
  void remove_bigon(const Region& r, int movable_cls);

  // Classes crossed by a shortest dual path from the marked point to a face of
  // `target_region` (multiplicities and order preserved).
  std::vector<int> dual_path(int target_region) const;

 private:
  const Tri& T_;
  std::vector<Curve> classes_;
  std::vector<int> group_;
  std::vector<std::vector<int>> doors_;   // per class, cyclic door word
  std::vector<std::vector<long>> steps_;  // per class, stable port tokens
  std::vector<std::vector<long>> order_;  // per edge: tokens along principal side
  int salt_ = 0;

  struct Pic;
  std::shared_ptr<Pic> pic_;
  std::vector<Region> regions_;
  int z_region_id_ = -1;

  void build_initial_layout();
  void rebuild();
};

// Canonical crossing-free drawing of a single multicurve.
Overlay disjoint_overlay(const Tri& T, const Multicurve& m);

}  // namespace curvex
