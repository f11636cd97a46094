#include "curvex/drawing.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

namespace curvex {

using Rat = boost::multiprecision::cpp_rational;

namespace {

struct Pt {
  Rat x, y;
};
Pt operator-(const Pt& a, const Pt& b) { return {a.x - b.x, a.y - b.y}; }
Rat cross(const Pt& a, const Pt& b) { return a.x * b.y - a.y * b.x; }
int sgn(const Rat& r) { return r == 0 ? 0 : (r < 0 ? -1 : 1); }
int orient(const Pt& a, const Pt& b, const Pt& c) { return sgn(cross(b - a, c - a)); }

bool angle_less(const Pt& a, const Pt& b) {
  auto half = [](const Pt& p) { return (p.y < 0 || (p.y == 0 && p.x < 0)) ? 1 : 0; };
  int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  return sgn(cross(a, b)) > 0;
}

uint64_t mix64(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

struct Degenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const Pt kCorner[3] = {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}};

Pt lerp(const Pt& a, const Pt& b, const Rat& t) {
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

}  // namespace

struct Overlay::Pic {
  struct Vtx {
    Pt p;
    int tri;
    int kind;                            // 0 corner, 1 port, 2 crossing, 3 bend
    int a = -1, b = -1, c = -1, d = -1;  // port: (cls,step); crossing: (cls1,step1,cls2,step2)
    int sgn = 0;                         // crossing: det(dir1, dir2)
  };
  struct Seg {
    int v0, v1;
    int tri;
    bool seam;
    int side = -1, segidx = -1;  // seam
    int cls = -1, step = -1;     // chord
  };
  std::vector<Vtx> vtx;
  std::vector<Seg> seg;
  std::vector<int> cyc_next;              // halfedge -> face-cycle successor
  std::vector<int> he_face;               // halfedge -> face id (-1 = outer)
  std::vector<std::vector<int>> face_he;  // face -> its halfedge cycle
  std::vector<int> face_region;
  std::map<std::pair<int, int>, std::vector<Overlay::Cross>> crossings;
  std::map<int, std::vector<Overlay::AlongCross>> along;  // cls -> ordered crossings
  std::map<std::pair<int, int>, int> seam_lookup;  // (side, segidx) -> seg id
  std::map<int, int> seam_mate;                    // seg id -> glued seg id
  int nfaces = 0;

  int head(int he) const { return (he & 1) ? seg[he >> 1].v0 : seg[he >> 1].v1; }
  int tail(int he) const { return (he & 1) ? seg[he >> 1].v1 : seg[he >> 1].v0; }
  int real_he_of_seam(int segid) const {
    int h0 = 2 * segid, h1 = 2 * segid + 1;
    bool r0 = he_face[h0] >= 0, r1 = he_face[h1] >= 0;
    if (r0 == r1) throw ConfigError("seam segment without unique real side");
    return r0 ? h0 : h1;
  }
  int interval_region(int side, int iv) const {
    int segid = seam_lookup.at({side, iv});
    return face_region[he_face[real_he_of_seam(segid)]];
  }
};

Overlay::Overlay(const Tri& T, const std::vector<Multicurve>& groups) : T_(T) {
  for (size_t g = 0; g < groups.size(); ++g)
    for (auto& c : groups[g].comp) {
      classes_.push_back(c);
      group_.push_back(static_cast<int>(g));
    }
  auto sorted = classes_;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1]) throw ConfigError("overlay: duplicate class");
  build_initial_layout();
  rebuild();
}

int Overlay::find_class(const Curve& c) const {
  for (int i = 0; i < num_classes(); ++i)
    if (classes_[i] == c) return i;
  throw ConfigError("overlay: class not present");
}

void Overlay::build_initial_layout() {
  const int E = T_.edges();
  doors_.assign(classes_.size(), {});
  steps_.assign(classes_.size(), {});
  long next_token = 0;
  struct Slot {
    long tok;
    Rat frac;
  };
  std::vector<std::vector<Slot>> slots(E);

  std::map<int, std::vector<int>> by_group;
  for (int c = 0; c < num_classes(); ++c) by_group[group_[c]].push_back(c);
  const int G = static_cast<int>(by_group.size());

  // total ports per edge over everything (for tie-break denominators)
  std::vector<long> m_all(E, 0);
  for (auto& c : classes_)
    for (int e = 0; e < E; ++e) m_all[e] += c.w[e];

  for (auto& [g, members] : by_group) {
    Coords total(E, 0);
    for (int c : members)
      for (int e = 0; e < E; ++e) total[e] += classes_[c].w[e];
    if (std::accumulate(total.begin(), total.end(), 0) == 0) continue;
    Traced tr = trace(T_, total);
    std::vector<int> comp_cls(tr.comps.size(), -1);
    for (size_t i = 0; i < tr.comps.size(); ++i) {
      for (int c : members)
        if (classes_[c].w == tr.comps[i].w && comp_cls[i] < 0) comp_cls[i] = c;
      if (comp_cls[i] < 0) throw ConfigError("overlay: group is not a disjoint multicurve");
    }
    for (size_t i = 0; i < tr.comps.size(); ++i) {
      int c = comp_cls[i];
      auto& comp = tr.comps[i];
      for (auto& st : comp.steps) {
        doors_[c].push_back(st.enter_side);
        long tok = next_token++;
        steps_[c].push_back(tok);
        int e = T_.edge_of_side(st.enter_side);
        int rank = T_.principal(st.enter_side) ? st.enter_local : total[e] - 1 - st.enter_local;
        Rat frac = Rat(2 * rank + 1, 2 * total[e]);
        frac += Rat(g + 1, 16 * (m_all[e] + 2) * (m_all[e] + 2) * (G + 2));
        slots[e].push_back({tok, frac});
      }
    }
  }
  order_.assign(E, {});
  for (int e = 0; e < E; ++e) {
    std::stable_sort(slots[e].begin(), slots[e].end(),
                     [](const Slot& a, const Slot& b) { return a.frac < b.frac; });
    for (auto& s : slots[e]) order_[e].push_back(s.tok);
  }
}

long Overlay::crossings(int c1, int c2) const {
  if (c1 == c2) return 0;
  auto key = std::minmax(c1, c2);
  auto it = pic_->crossings.find({key.first, key.second});
  return it == pic_->crossings.end() ? 0 : static_cast<long>(it->second.size());
}

long Overlay::total_crossings() const {
  long t = 0;
  for (auto& [k, v] : pic_->crossings) t += static_cast<long>(v.size());
  return t;
}

std::vector<Overlay::Cross> Overlay::crossing_list(int c1, int c2) const {
  auto key = std::minmax(c1, c2);
  auto it = pic_->crossings.find({key.first, key.second});
  if (it == pic_->crossings.end()) return {};
  if (c1 <= c2) return it->second;
  std::vector<Cross> out;
  for (auto& c : it->second) out.push_back({c.step2, c.step1, -c.sign});
  return out;
}

void Overlay::rebuild() {
  for (int attempt = 0;; ++attempt) {
    if (attempt > 40) throw StuckOverlay("could not draw without degeneracies");
    salt_ = attempt;
    try {
      auto pic = std::make_shared<Pic>();
      const int E = T_.edges();
      std::map<long, std::pair<int, int>> tokmap;
      for (int c = 0; c < num_classes(); ++c)
        for (size_t i = 0; i < steps_[c].size(); ++i)
          tokmap[steps_[c][i]] = {c, static_cast<int>(i)};

      std::map<long, Rat> port_param;  // along principal side
      for (int e = 0; e < E; ++e) {
        long m = static_cast<long>(order_[e].size());
        for (long i = 0; i < m; ++i) {
          long tok = order_[e][i];
          long jit =
              static_cast<long>(mix64(static_cast<uint64_t>(e) * 131071ULL +
                                      static_cast<uint64_t>(i) * 257ULL +
                                      static_cast<uint64_t>(salt_) * 7919ULL + 13) %
                                2001) -
              1000;
          port_param[tok] = Rat(i + 1, m + 1) + Rat(jit, (m + 1) * 1000000);
        }
      }
      auto side_param = [&](int side, long tok) {
        Rat t = port_param.at(tok);
        return T_.principal(side) ? t : Rat(1) - t;
      };
      auto side_point = [&](int side, long tok) -> Pt {
        int k = Tri::idx_of(side);
        return lerp(kCorner[k], kCorner[(k + 1) % 3], side_param(side, tok));
      };

      std::map<std::pair<int, int>, int> corner_vid;
      std::map<std::pair<int, long>, int> port_vid;
      auto add_vtx = [&](Pt p, int tri, int kind) {
        pic->vtx.push_back({std::move(p), tri, kind});
        return static_cast<int>(pic->vtx.size()) - 1;
      };
      for (int t = 0; t < T_.faces(); ++t)
        for (int k = 0; k < 3; ++k) corner_vid[{t, k}] = add_vtx(kCorner[k], t, 0);
      for (int s = 0; s < 3 * T_.faces(); ++s) {
        int e = T_.edge_of_side(s);
        for (long tok : order_[e]) {
          int v = add_vtx(side_point(s, tok), Tri::tri_of(s), 1);
          auto [c, i] = tokmap.at(tok);
          pic->vtx[v].a = c;
          pic->vtx[v].b = i;
          port_vid[{s, tok}] = v;
        }
      }

      // chords as polylines (bent inward when both ends are on one side)
      struct Chord {
        int cls, step, tri;
        std::vector<int> vids;  // entry port, optional bend, exit port
        std::vector<Pt> pts;
      };
      std::vector<Chord> chords;
      for (int c = 0; c < num_classes(); ++c) {
        int n = static_cast<int>(doors_[c].size());
        for (int i = 0; i < n; ++i) {
          int s_in = doors_[c][i];
          int s_out = T_.mate(doors_[c][(i + 1) % n]);
          if (Tri::tri_of(s_in) != Tri::tri_of(s_out))
            throw ConfigError("overlay: inconsistent door word");
          Chord ch;
          ch.cls = c;
          ch.step = i;
          ch.tri = Tri::tri_of(s_in);
          int v0 = port_vid.at({s_in, steps_[c][i]});
          int v1 = port_vid.at({s_out, steps_[c][(i + 1) % n]});
          ch.vids = {v0, v1};
          ch.pts = {pic->vtx[v0].p, pic->vtx[v1].p};
          if (s_in == s_out) {
            // bounce arc: bend toward the interior, height ~ span so that
            // bent arcs over one side are parallel-sided hats
            int k = Tri::idx_of(s_in);
            Rat t0 = side_param(s_in, steps_[c][i]);
            Rat t1 = side_param(s_out, steps_[c][(i + 1) % n]);
            Rat span = t1 > t0 ? t1 - t0 : t0 - t1;
            Pt a = kCorner[k], b = kCorner[(k + 1) % 3], opp = kCorner[(k + 2) % 3];
            Pt mid = lerp(ch.pts[0], ch.pts[1], Rat(1, 2));
            Pt base_mid = lerp(a, b, Rat(1, 2));
            Pt inward{opp.x - base_mid.x, opp.y - base_mid.y};
            Rat h = span / 6;
            Pt bendp{mid.x + h * inward.x, mid.y + h * inward.y};
            int bv = add_vtx(bendp, ch.tri, 3);
            ch.vids = {v0, bv, v1};
            ch.pts = {pic->vtx[v0].p, bendp, pic->vtx[v1].p};
          }
          chords.push_back(std::move(ch));
        }
      }

      // crossings between chord polylines
      struct Cut {
        Rat key;  // (segment index + param) as a single rational
        int vid;
      };
      std::vector<std::vector<Cut>> chord_cuts(chords.size());
      for (size_t i = 0; i < chords.size(); ++i)
        for (size_t j = i + 1; j < chords.size(); ++j) {
          auto& A = chords[i];
          auto& B = chords[j];
          if (A.tri != B.tri) continue;
          int found = 0;
          for (size_t si = 0; si + 1 < A.pts.size(); ++si)
            for (size_t sj = 0; sj + 1 < B.pts.size(); ++sj) {
              const Pt &a0 = A.pts[si], &a1 = A.pts[si + 1];
              const Pt &b0 = B.pts[sj], &b1 = B.pts[sj + 1];
              int o1 = orient(a0, a1, b0), o2 = orient(a0, a1, b1);
              int o3 = orient(b0, b1, a0), o4 = orient(b0, b1, a1);
              bool shared_vtx = A.vids[si] == B.vids[sj] || A.vids[si] == B.vids[sj + 1] ||
                                A.vids[si + 1] == B.vids[sj] || A.vids[si + 1] == B.vids[sj + 1];
              if (shared_vtx) continue;  // polylines never share vertices across chords
              if (o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0) {
                if ((o1 == 0 && o2 == 0) && A.cls == B.cls) continue;  // collinear, disjoint ranges
                throw Degenerate("touching segments");
              }
              if (o1 * o2 < 0 && o3 * o4 < 0) {
                if (A.cls == B.cls) throw ConfigError("overlay: class self-crossing");
                Pt d1 = a1 - a0, d2 = b1 - b0, w = b0 - a0;
                Rat den = cross(d1, d2);
                Rat t = cross(w, d2) / den;
                Rat u = cross(w, d1) / den;
                Pt p{a0.x + t * d1.x, a0.y + t * d1.y};
                int v = add_vtx(p, A.tri, 2);
                pic->vtx[v].a = A.cls;
                pic->vtx[v].b = A.step;
                pic->vtx[v].c = B.cls;
                pic->vtx[v].d = B.step;
                pic->vtx[v].sgn = sgn(cross(d1, d2));
                chord_cuts[i].push_back({Rat(static_cast<long>(si)) + t, v});
                chord_cuts[j].push_back({Rat(static_cast<long>(sj)) + u, v});
                int sign = sgn(cross(d1, d2));
                auto key = std::minmax(A.cls, B.cls);
                Cross rec = (A.cls <= B.cls) ? Cross{A.step, B.step, sign}
                                             : Cross{B.step, A.step, -sign};
                pic->crossings[{key.first, key.second}].push_back(rec);
                found++;
              }
            }
          (void)found;
        }

      // seam segments
      for (int s = 0; s < 3 * T_.faces(); ++s) {
        int e = T_.edge_of_side(s);
        int t = Tri::tri_of(s), k = Tri::idx_of(s);
        std::vector<std::pair<Rat, int>> along;
        for (long tok : order_[e]) along.push_back({side_param(s, tok), port_vid.at({s, tok})});
        std::sort(along.begin(), along.end(),
                  [](auto& a, auto& b) { return a.first < b.first; });
        std::vector<int> pts;
        pts.push_back(corner_vid[{t, k}]);
        for (auto& [tt, v] : along) pts.push_back(v);
        pts.push_back(corner_vid[{t, (k + 1) % 3}]);
        for (size_t i = 0; i + 1 < pts.size(); ++i) {
          pic->seg.push_back({pts[i], pts[i + 1], t, true, s, static_cast<int>(i)});
          pic->seam_lookup[{s, static_cast<int>(i)}] = static_cast<int>(pic->seg.size()) - 1;
        }
      }
      // chord segments split at bends and crossings
      for (size_t i = 0; i < chords.size(); ++i) {
        auto& ch = chords[i];
        auto& cuts = chord_cuts[i];
        std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.key < b.key; });
        for (size_t q = 1; q < cuts.size(); ++q)
          if (cuts[q].key == cuts[q - 1].key) throw Degenerate("coincident crossings");
        for (auto& cut : cuts) {
          auto& v = pic->vtx[cut.vid];
          AlongCross ac;
          ac.step = ch.step;
          if (v.a == ch.cls && v.b == ch.step) {
            ac.other_cls = v.c;
            ac.other_step = v.d;
            ac.sign = v.sgn;
          } else {
            ac.other_cls = v.a;
            ac.other_step = v.b;
            ac.sign = -v.sgn;
          }
          pic->along[ch.cls].push_back(ac);
        }
        size_t qi = 0;
        for (size_t si = 0; si + 1 < ch.vids.size(); ++si) {
          int prev = ch.vids[si];
          while (qi < cuts.size() && cuts[qi].key < Rat(static_cast<long>(si) + 1)) {
            pic->seg.push_back({prev, cuts[qi].vid, ch.tri, false, -1, -1, ch.cls, ch.step});
            prev = cuts[qi].vid;
            ++qi;
          }
          pic->seg.push_back({prev, ch.vids[si + 1], ch.tri, false, -1, -1, ch.cls, ch.step});
        }
      }

      // rotations and face cycles
      int nseg = static_cast<int>(pic->seg.size());
      std::vector<std::vector<int>> out_he(pic->vtx.size());
      for (int s = 0; s < nseg; ++s) {
        out_he[pic->seg[s].v0].push_back(2 * s);
        out_he[pic->seg[s].v1].push_back(2 * s + 1);
      }
      auto he_dir = [&](int he) -> Pt {
        auto& sg = pic->seg[he >> 1];
        const Pt &a = pic->vtx[sg.v0].p, &b = pic->vtx[sg.v1].p;
        return (he & 1) ? Pt{a.x - b.x, a.y - b.y} : Pt{b.x - a.x, b.y - a.y};
      };
      std::vector<int> rot_index(2 * nseg, -1);
      for (size_t v = 0; v < pic->vtx.size(); ++v) {
        auto& lst = out_he[v];
        std::sort(lst.begin(), lst.end(), [&](int h1, int h2) {
          Pt d1 = he_dir(h1), d2 = he_dir(h2);
          if (sgn(cross(d1, d2)) == 0 && sgn(d1.x * d2.x + d1.y * d2.y) > 0)
            throw Degenerate("equal directions at vertex");
          return angle_less(d1, d2);
        });
        for (size_t i = 0; i < lst.size(); ++i) rot_index[lst[i]] = static_cast<int>(i);
      }
      pic->cyc_next.assign(2 * nseg, -1);
      for (int he = 0; he < 2 * nseg; ++he) {
        int v = pic->head(he);
        auto& lst = out_he[v];
        int idx = rot_index[he ^ 1];
        pic->cyc_next[he] = lst[(idx - 1 + static_cast<int>(lst.size())) % lst.size()];
      }
      pic->he_face.assign(2 * nseg, -2);
      std::vector<char> tri_outer(T_.faces(), 0);
      for (int he0 = 0; he0 < 2 * nseg; ++he0) {
        if (pic->he_face[he0] != -2) continue;
        std::vector<int> cyc;
        int h = he0;
        do {
          cyc.push_back(h);
          h = pic->cyc_next[h];
        } while (h != he0);
        Rat area = 0;
        for (int hh : cyc) {
          const Pt &a = pic->vtx[pic->tail(hh)].p, &b = pic->vtx[pic->head(hh)].p;
          area += cross(a, b);
        }
        int tri = pic->seg[he0 >> 1].tri;
        if (area < 0) {
          if (tri_outer[tri]) throw Degenerate("two outer faces in a triangle");
          tri_outer[tri] = 1;
          for (int hh : cyc) pic->he_face[hh] = -1;
        } else if (area == 0) {
          throw Degenerate("flat face");
        } else {
          int f = pic->nfaces++;
          pic->face_he.push_back(cyc);
          for (int hh : cyc) pic->he_face[hh] = f;
        }
      }
      for (int t = 0; t < T_.faces(); ++t)
        if (!tri_outer[t]) throw Degenerate("triangle without outer face");

      // glue across seams
      std::vector<int> uf(pic->nfaces);
      std::iota(uf.begin(), uf.end(), 0);
      std::function<int(int)> find = [&](int x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
      };
      for (int s = 0; s < 3 * T_.faces(); ++s) {
        int e = T_.edge_of_side(s);
        int cnt = static_cast<int>(order_[e].size()) + 1;
        for (int j = 0; j < cnt; ++j) {
          int a = pic->seam_lookup.at({s, j});
          int b = pic->seam_lookup.at({T_.mate(s), cnt - 1 - j});
          pic->seam_mate[a] = b;
          int fa = pic->he_face[pic->real_he_of_seam(a)];
          int fb = pic->he_face[pic->real_he_of_seam(b)];
          uf[find(fa)] = find(fb);
        }
      }
      pic->face_region.assign(pic->nfaces, -1);
      std::map<int, int> rid;
      for (int f = 0; f < pic->nfaces; ++f) {
        int r = find(f);
        auto it = rid.find(r);
        if (it == rid.end()) it = rid.insert({r, static_cast<int>(rid.size())}).first;
        pic->face_region[f] = it->second;
      }
      int nreg = static_cast<int>(rid.size());

      std::vector<Region> regions(nreg);
      for (int r = 0; r < nreg; ++r) regions[r].id = r;
      for (int f = 0; f < pic->nfaces; ++f) regions[pic->face_region[f]].faces++;
      std::vector<long> seam_pairs(nreg, 0);
      for (auto& [a, b] : pic->seam_mate) {
        if (a > b) continue;
        int ra = pic->face_region[pic->he_face[pic->real_he_of_seam(a)]];
        int rb = pic->face_region[pic->he_face[pic->real_he_of_seam(b)]];
        if (ra != rb) throw ConfigError("glued faces in different regions");
        seam_pairs[ra]++;
      }
      int zreg = -1;
      for (auto& [key, vid] : corner_vid) {
        for (int he : out_he[vid]) {
          int f = pic->he_face[he];
          if (f < 0) f = pic->he_face[he ^ 1];
          if (f < 0) continue;
          int r = pic->face_region[f];
          if (zreg == -1) zreg = r;
          if (zreg != r) throw ConfigError("marked point in two regions");
        }
      }
      if (zreg < 0) throw ConfigError("no marked region");
      for (int r = 0; r < nreg; ++r) {
        regions[r].marked = (r == zreg);
        regions[r].chi =
            (r == zreg ? 1 : 0) - static_cast<int>(seam_pairs[r]) + static_cast<int>(regions[r].faces);
      }

      // boundary circuits
      std::vector<char> he_seen(2 * nseg, 0);
      auto next_boundary = [&](int he, std::vector<int>* doors_out) -> int {
        int g = pic->cyc_next[he];
        while (pic->seg[g >> 1].seam) {
          int mate = pic->seam_mate.at(g >> 1);
          if (doors_out) doors_out->push_back(pic->seg[mate].side);
          g = pic->cyc_next[pic->real_he_of_seam(mate)];
        }
        return g;
      };
      for (int he0 = 0; he0 < 2 * nseg; ++he0) {
        if (pic->seg[he0 >> 1].seam || he_seen[he0] || pic->he_face[he0] < 0) continue;
        int r = pic->face_region[pic->he_face[he0]];
        std::vector<int> hes;
        std::vector<std::vector<int>> doors_after;
        int h = he0;
        do {
          he_seen[h] = 1;
          hes.push_back(h);
          std::vector<int> d;
          h = next_boundary(h, &d);
          doors_after.push_back(std::move(d));
        } while (h != he0);
        int n = static_cast<int>(hes.size());
        int start = 0;
        for (int i = 0; i < n; ++i) {
          if (pic->seg[hes[(i - 1 + n) % n] >> 1].cls != pic->seg[hes[i] >> 1].cls) {
            start = i;
            break;
          }
        }
        Circuit cir;
        for (int q = 0; q < n; ++q)
          for (int x : doors_after[(start + q) % n]) cir.doors.push_back(x);
        Leg leg;
        for (int q = 0; q < n; ++q) {
          int h2 = hes[(start + q) % n];
          auto& sg = pic->seg[h2 >> 1];
          bool fwd = !(h2 & 1);
          if (leg.cls != sg.cls) {
            if (leg.cls != -1) cir.legs.push_back(leg);
            leg = Leg{sg.cls, {}, fwd};
          }
          if (leg.steps.empty() || leg.steps.back() != sg.step) leg.steps.push_back(sg.step);
          if (leg.forward != fwd) throw ConfigError("leg direction flip");
        }
        if (leg.cls != -1) cir.legs.push_back(leg);
        regions[r].circuits.push_back(std::move(cir));
      }
      for (auto& r : regions) {
        r.nbound = static_cast<int>(r.circuits.size());
        int twice_g = 2 - r.nbound - r.chi;
        if (twice_g < 0 || twice_g % 2) throw ConfigError("bad region genus");
        r.genus = twice_g / 2;
      }

      pic_ = pic;
      regions_ = std::move(regions);
      z_region_id_ = zreg;
      return;
    } catch (const Degenerate&) {
      continue;
    }
  }
}

std::set<int> Overlay::touching_regions(int c) const {
  std::set<int> out;
  for (size_t s = 0; s < pic_->seg.size(); ++s) {
    if (pic_->seg[s].seam || pic_->seg[s].cls != c) continue;
    for (int d = 0; d < 2; ++d) {
      int f = pic_->he_face[2 * static_cast<int>(s) + d];
      if (f >= 0) out.insert(pic_->face_region[f]);
    }
  }
  return out;
}

void Overlay::remove_bigon(const Region& r, int movable_cls) {
  if (!r.is_bigon()) throw ConfigError("remove_bigon: not a bigon");
  const Circuit& cir = r.circuits[0];
  const Leg* Lm = nullptr;
  const Leg* Lo = nullptr;
  for (auto& l : cir.legs) {
    if (l.cls == movable_cls)
      Lm = &l;
    else
      Lo = &l;
  }
  if (!Lm || !Lo) throw ConfigError("remove_bigon: bad legs");
  int c = movable_cls, b = Lo->cls;
  int nc = static_cast<int>(doors_[c].size());
  int nb = static_cast<int>(doors_[b].size());

  int c_first = Lm->forward ? Lm->steps.front() : Lm->steps.back();
  int c_last = Lm->forward ? Lm->steps.back() : Lm->steps.front();
  bool b_path_with_walk = !Lm->forward;
  bool b_path_forward = (b_path_with_walk == Lo->forward);
  int b_from = b_path_with_walk ? Lo->steps.front() : Lo->steps.back();
  int b_to = b_path_with_walk ? Lo->steps.back() : Lo->steps.front();

  std::vector<int> new_doors;
  std::vector<int> par_step;  // the b port each new crossing runs along
  if (b_path_forward) {
    for (int j = b_from; j != b_to; j = (j + 1) % nb) {
      new_doors.push_back(doors_[b][(j + 1) % nb]);
      par_step.push_back((j + 1) % nb);
    }
  } else {
    for (int j = b_from; j != b_to; j = (j - 1 + nb) % nb) {
      new_doors.push_back(T_.mate(doors_[b][j]));
      par_step.push_back(j);
    }
  }

  // plan insertions against the current picture (before any mutation)
  struct Ins {
    int edge;
    long anchor;
    bool after;
    long tok;
  };
  long next_token = 0;
  for (auto& sv : steps_)
    for (long t : sv) next_token = std::max(next_token, t + 1);
  std::vector<Ins> plan;
  for (size_t q = 0; q < new_doors.size(); ++q) {
    int e = T_.edge_of_side(new_doors[q]);
    long btok = steps_[b][par_step[q]];
    auto& ord = order_[e];
    auto it = std::find(ord.begin(), ord.end(), btok);
    if (it == ord.end()) throw ConfigError("remove_bigon: lost anchor port");
    int pos = static_cast<int>(it - ord.begin());
    int ps = T_.principal_side(e);
    bool below_bigon = pic_->interval_region(ps, pos) == r.id;
    bool above_bigon = pic_->interval_region(ps, pos + 1) == r.id;
    if (below_bigon == above_bigon) throw ConfigError("remove_bigon: ambiguous side");
    plan.push_back({e, btok, below_bigon, next_token++});
  }

  // delete the movable run's interior ports
  std::set<long> del;
  for (int i = (c_first + 1) % nc; i != (c_last + 1) % nc; i = (i + 1) % nc)
    del.insert(steps_[c][i]);
  for (auto& ord : order_)
    ord.erase(std::remove_if(ord.begin(), ord.end(), [&](long t) { return del.count(t) > 0; }),
              ord.end());

  // apply insertions
  for (auto& ins : plan) {
    auto& ord = order_[ins.edge];
    auto it = std::find(ord.begin(), ord.end(), ins.anchor);
    if (it == ord.end()) throw ConfigError("remove_bigon: anchor vanished");
    ord.insert(ins.after ? it + 1 : it, ins.tok);
  }

  // rebuild the movable door word
  std::vector<int> nd;
  std::vector<long> ns;
  for (int i = (c_last + 1) % nc;; i = (i + 1) % nc) {
    nd.push_back(doors_[c][i]);
    ns.push_back(steps_[c][i]);
    if (i == c_first) break;
  }
  for (size_t q = 0; q < new_doors.size(); ++q) {
    nd.push_back(new_doors[q]);
    ns.push_back(plan[q].tok);
  }
  doors_[c] = std::move(nd);
  steps_[c] = std::move(ns);
  rebuild();
}

void Overlay::reduce(const std::vector<bool>& movable) {
  for (;;) {
    const Region* best = nullptr;
    int best_cls = -1;
    for (auto& r : regions_) {
      if (!r.is_bigon() || r.marked) continue;
      int c1 = r.circuits[0].legs[0].cls, c2 = r.circuits[0].legs[1].cls;
      int mv = -1;
      if (movable[c1]) mv = c1;
      if (movable[c2] && c2 > mv) mv = c2;
      if (mv < 0) continue;
      if (!best || r.faces < best->faces || (r.faces == best->faces && r.id < best->id)) {
        best = &r;
        best_cls = mv;
      }
    }
    if (!best) return;
    Region chosen = *best;
    remove_bigon(chosen, best_cls);
  }
}

void Overlay::reduce_movable_group(int movable_group) {
  std::vector<bool> mv(num_classes());
  for (int c = 0; c < num_classes(); ++c) mv[c] = (group_[c] == movable_group);
  reduce(mv);
}

std::vector<int> Overlay::dual_path(int target_region) const {
  auto& pic = *pic_;
  int nf = pic.nfaces;
  std::vector<int> dist(nf, -1), par_face(nf, -1), par_cls(nf, -1);
  std::deque<int> dq;
  for (int f = 0; f < nf; ++f)
    if (pic.face_region[f] == z_region_id_) {
      dist[f] = 0;
      dq.push_back(f);
    }
  int goal = -1;
  while (!dq.empty() && goal < 0) {
    int f = dq.front();
    dq.pop_front();
    if (pic.face_region[f] == target_region) {
      goal = f;
      break;
    }
    for (int he : pic.face_he[f]) {
      auto& sg = pic.seg[he >> 1];
      if (sg.seam) {
        int g = pic.he_face[pic.real_he_of_seam(pic.seam_mate.at(he >> 1))];
        if (g >= 0 && dist[g] == -1) {
          dist[g] = dist[f];
          par_face[g] = f;
          par_cls[g] = -1;
          dq.push_front(g);
        }
      } else {
        int g = pic.he_face[he ^ 1];
        if (g >= 0 && dist[g] == -1) {
          dist[g] = dist[f] + 1;
          par_face[g] = f;
          par_cls[g] = sg.cls;
          dq.push_back(g);
        }
      }
    }
  }
  if (goal < 0) throw ConfigError("dual_path: unreachable region");
  std::vector<int> crossed;
  for (int f = goal; par_face[f] != -1; f = par_face[f])
    if (par_cls[f] >= 0) crossed.push_back(par_cls[f]);
  std::reverse(crossed.begin(), crossed.end());
  return crossed;
}

std::vector<Overlay::AlongCross> Overlay::crossings_along(int cls) const {
  auto it = pic_->along.find(cls);
  return it == pic_->along.end() ? std::vector<AlongCross>{} : it->second;
}

std::pair<int, std::vector<int>> Overlay::z_arc(int cls) const {
  auto& pic = *pic_;
  int nf = pic.nfaces;
  std::vector<int> par(nf, -2), door_in(nf, -1);
  std::deque<int> dq;
  // corner-incident faces of the marked region are the sources
  for (size_t v = 0; v < pic.vtx.size(); ++v) {
    if (pic.vtx[v].kind != 0) continue;
    for (size_t s = 0; s < pic.seg.size(); ++s) {
      if (pic.seg[s].v0 != static_cast<int>(v) && pic.seg[s].v1 != static_cast<int>(v)) continue;
      for (int d = 0; d < 2; ++d) {
        int f = pic.he_face[2 * static_cast<int>(s) + d];
        if (f >= 0 && par[f] == -2) {
          par[f] = -1;
          dq.push_back(f);
        }
      }
    }
  }
  while (!dq.empty()) {
    int f = dq.front();
    dq.pop_front();
    // does this face touch the class?
    for (int he : pic.face_he[f]) {
      auto& sg = pic.seg[he >> 1];
      if (!sg.seam && sg.cls == cls) {
        // reconstruct doors from f back to a source
        std::vector<int> doors;
        for (int g = f; par[g] != -1; g = par[g]) doors.push_back(T_.mate(door_in[g]));
        return {sg.step, doors};
      }
    }
    for (int he : pic.face_he[f]) {
      auto& sg = pic.seg[he >> 1];
      if (!sg.seam) continue;
      int mate = pic.seam_mate.at(he >> 1);
      int g = pic.he_face[pic.real_he_of_seam(mate)];
      if (g >= 0 && par[g] == -2) {
        par[g] = f;
        door_in[g] = pic.seg[mate].side;
        dq.push_back(g);
      }
    }
  }
  throw ConfigError("z_arc: class not reachable through the marked region");
}

Overlay disjoint_overlay(const Tri& T, const Multicurve& m) {
  Overlay ov(T, {m});
  if (ov.total_crossings() != 0) throw ConfigError("disjoint_overlay: classes cross");
  return ov;
}

}  // namespace curvex
