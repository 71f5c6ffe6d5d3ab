#pragma once

// The 4-dimensional invariant: movies of knotted surfaces evaluated on
// formal rational combinations of colored dotted stills.
//
// A state keeps one consolidated fibre label per link component, anchored
// just after a chosen arc position.  Labels move by the six dot-transport
// relations: through an under-crossing they pick up the over color's
// action, through an over-crossing they emit a compensating dot on the
// outgoing under-arc.  Reidemeister events rewrite the still and recolor
// by constraint propagation; births sum over the base group, saddles sum
// a delta-weighted fibre label pair, and deaths pay #E when the circle's
// total label is trivial.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "xmk/catgroup.hpp"
#include "xmk/diagram.hpp"
#include "xmk/rational.hpp"

namespace xmk {

// ---------------------------------------------------------------------------
// states

struct DotMark {
  int arc = 0;
  int pos = 0;  // number of over-legs behind the dot
  Elem label = 0;
  friend auto operator<=>(const DotMark&, const DotMark&) = default;
};

struct DottedState {
  std::vector<Elem> color;    // per arc, the value at the arc's head side
  std::vector<DotMark> dots;  // sorted by (arc, pos); no identity labels

  friend auto operator<=>(const DottedState&, const DottedState&) = default;
};

using StateVector = std::map<DottedState, Rational>;

inline void add_state(StateVector& v, const DottedState& s, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = v.emplace(s, c);
  if (!fresh) {
    it->second = it->second + c;
    if (it->second.is_zero()) v.erase(it);
  }
}

// ---------------------------------------------------------------------------
// still helpers

class Still {
 public:
  explicit Still(SlicedDiagram d) : g_(analyze(d)) { index(); }
  explicit Still(DiagramGraph g) : g_(std::move(g)) { index(); }

  const DiagramGraph& graph() const { return g_; }
  const SlicedDiagram& diagram() const { return g_.diagram; }
  int arcs() const { return static_cast<int>(g_.arcs.size()); }

  int arc_at(Segment s) const {
    auto it = seg_arc_.find(s);
    return it == seg_arc_.end() ? -1 : it->second.first;
  }
  int seg_index(Segment s) const {
    auto it = seg_arc_.find(s);
    return it == seg_arc_.end() ? -1 : it->second.second;
  }
  /// over-leg interval containing a segment of an arc
  int interval_of(int arc, int seg_idx) const { return g_.arcs[arc].seg_interval[seg_idx]; }
  int intervals(int arc) const { return static_cast<int>(g_.arcs[arc].over_legs.size()) + 1; }
  int min_arc_of_component(int comp) const { return comp_min_arc_[comp]; }
  int component_of(int arc) const { return g_.arcs[arc].component; }

 private:
  DiagramGraph g_;
  std::map<Segment, std::pair<int, int>> seg_arc_;
  std::vector<int> comp_min_arc_;

  void index() {
    for (const auto& a : g_.arcs)
      for (std::size_t i = 0; i < a.segments.size(); ++i)
        seg_arc_[a.segments[i]] = {a.id, static_cast<int>(i)};
    comp_min_arc_.assign(g_.components, -1);
    for (const auto& a : g_.arcs)
      if (comp_min_arc_[a.component] < 0) comp_min_arc_[a.component] = a.id;
  }
};

namespace s4 {

/// Color of arc `a` at the point just before over-leg `k` (k = intervals-1
/// means past the last leg).  Dots ahead of the point contribute inverse
/// boundary jumps.
inline Elem color_at_interval(const CrossedModule& cm, const Still& st, const DottedState& s,
                              int arc, int interval) {
  const FiniteGroup& G = cm.base();
  Elem c = s.color[arc];
  for (const auto& d : s.dots)
    if (d.arc == arc && d.pos > interval) c = G.mul(G.inv(cm.bnd(d.label)), c);
  return c;
}

/// Color entering the arc at its tail.
inline Elem tail_color(const CrossedModule& cm, const Still& st, const DottedState& s, int arc) {
  const FiniteGroup& G = cm.base();
  Elem c = s.color[arc];
  for (const auto& d : s.dots)
    if (d.arc == arc) c = G.mul(G.inv(cm.bnd(d.label)), c);
  return c;
}

/// Over color seen at crossing x (by the strands passing under it).
inline Elem over_color_at(const CrossedModule& cm, const Still& st, const DottedState& s, int x) {
  int o = st.graph().crossings[x].over_arc;
  const auto& legs = st.graph().arcs[o].over_legs;
  int k = 0;
  for (std::size_t i = 0; i < legs.size(); ++i)
    if (legs[i] == x) k = static_cast<int>(i);
  return color_at_interval(cm, st, s, o, k);
}

/// Verifies every crossing constraint and component closure; used as an
/// internal consistency gate after each event.
inline bool state_consistent(const CrossedModule& cm, const Still& st, const DottedState& s) {
  const FiniteGroup& G = cm.base();
  for (std::size_t x = 0; x < st.graph().crossings.size(); ++x) {
    const auto& ci = st.graph().crossings[x];
    Elem o = over_color_at(cm, st, s, static_cast<int>(x));
    Elem uin = s.color[ci.under_in_arc];
    Elem expect = ci.sign > 0 ? G.conj(o, uin) : G.conj(G.inv(o), uin);
    if (tail_color(cm, st, s, ci.under_out_arc) != expect) return false;
  }
  // vertex-free circles must close up
  for (const auto& a : st.graph().arcs)
    if (a.closed && a.over_legs.empty()) {
      if (tail_color(cm, st, s, a.id) != s.color[a.id]) return false;
    }
  return true;
}

/// Inserts a dot arriving at (arc, pos) from behind; merges with an
/// existing dot there (the newcomer is earlier along the orientation).
inline void land_dot(const FiniteGroup& E, DottedState& s, int arc, int pos, Elem label) {
  for (auto& d : s.dots)
    if (d.arc == arc && d.pos == pos) {
      d.label = E.mul(d.label, label);
      return;
    }
  s.dots.push_back({arc, pos, label});
  std::sort(s.dots.begin(), s.dots.end());
}

inline void drop_identity_dots(const FiniteGroup& E, DottedState& s) {
  s.dots.erase(std::remove_if(s.dots.begin(), s.dots.end(),
                              [&](const DotMark& d) { return d.label == E.identity(); }),
               s.dots.end());
}

/// Moves the dot at s.dots[di] one step forward.  Through an over-leg it
/// keeps its label and emits a compensating dot on the crossed under-out
/// arc; through its head under-leg it transports by the over color.
inline void slide_step(const CrossedModule& cm, const Still& st, DottedState& s, std::size_t di) {
  const FiniteGroup& G = cm.base();
  const FiniteGroup& E = cm.fibre();
  DotMark d = s.dots[di];
  s.dots.erase(s.dots.begin() + di);
  const Arc& arc = st.graph().arcs[d.arc];
  int nlegs = static_cast<int>(arc.over_legs.size());
  if (d.pos < nlegs) {
    // over-leg: R3/R4
    int x = arc.over_legs[d.pos];
    const auto& ci = st.graph().crossings[x];
    // over color once the dot has passed: strip this dot's jump
    DotMark moved{d.arc, d.pos + 1, d.label};
    s.dots.push_back(moved);
    std::sort(s.dots.begin(), s.dots.end());
    // recompute seen colors with the dot past the leg
    Elem X;
    {
      // find leg index of x on the over arc = d.pos by construction
      X = color_at_interval(cm, st, s, d.arc, d.pos);
    }
    Elem U = s.color[ci.under_in_arc];
    Elem g;
    if (ci.sign > 0) {
      g = E.mul(d.label, cm.act(G.conj(X, U), E.inv(d.label)));
    } else {
      g = E.mul(cm.act(G.inv(X), E.inv(d.label)), cm.act(G.mul(G.inv(X), U), d.label));
    }
    if (!(g == E.identity())) land_dot(E, s, ci.under_out_arc, 0, g);
    return;
  }
  // head under-leg: R5/R6 transport, or a plain wrap on a closed arc
  if (arc.closed) {
    s.dots.push_back({d.arc, 0, d.label});
    std::sort(s.dots.begin(), s.dots.end());
    return;
  }
  // find the crossing where this arc is the under-in
  int x = -1;
  for (std::size_t c = 0; c < st.graph().crossings.size(); ++c)
    if (st.graph().crossings[c].under_in_arc == d.arc) x = static_cast<int>(c);
  if (x < 0) throw Error(ErrorCode::Internal, "slide: open arc in a closed still");
  const auto& ci = st.graph().crossings[x];
  Elem O = over_color_at(cm, st, s, x);
  Elem moved = ci.sign > 0 ? cm.act(O, d.label) : cm.act(G.inv(O), d.label);
  // the arc loses the dot: its uniform color becomes the pre-dot value
  s.color[d.arc] = cm.base().mul(cm.base().inv(cm.bnd(d.label)), s.color[d.arc]);
  land_dot(E, s, ci.under_out_arc, 0, moved);
}

/// Merges every component's dots into one mark by sliding later marks
/// forward onto the earliest one.
inline void consolidate(const CrossedModule& cm, const Still& st, DottedState& s,
                        int guard = 4096) {
  const FiniteGroup& E = cm.fibre();
  drop_identity_dots(E, s);
  while (guard-- > 0) {
    // find a component with two dots
    std::map<int, std::vector<std::size_t>> by_comp;
    for (std::size_t i = 0; i < s.dots.size(); ++i)
      by_comp[st.component_of(s.dots[i].arc)].push_back(i);
    bool multi = false;
    for (auto& [comp, idx] : by_comp) {
      if (idx.size() < 2) continue;
      multi = true;
      // slide the second-earliest mark forward; sliding eventually reaches
      // the earliest one around the component cycle
      slide_step(cm, st, s, idx[1]);
      drop_identity_dots(E, s);
      break;
    }
    if (!multi) return;
  }
  throw Error(ErrorCode::Internal, "consolidation did not terminate");
}

/// Optional loop-slide canonicalisation: every dot is pushed forward to
/// position 0 of its component's minimal arc.
inline void canonicalize(const CrossedModule& cm, const Still& st, DottedState& s,
                         int guard = 4096) {
  consolidate(cm, st, s);
  while (guard-- > 0) {
    bool moved = false;
    for (std::size_t i = 0; i < s.dots.size(); ++i) {
      int target = st.min_arc_of_component(st.component_of(s.dots[i].arc));
      if (s.dots[i].arc == target && s.dots[i].pos == 0) continue;
      slide_step(cm, st, s, i);
      drop_identity_dots(cm.fibre(), s);
      consolidate(cm, st, s);
      moved = true;
      break;
    }
    if (!moved) return;
  }
  throw Error(ErrorCode::Internal, "canonicalization did not terminate");
}

}  // namespace s4

// ---------------------------------------------------------------------------
// segment correspondences

/// Partial map from old segments to new ones induced by an event surgery.
struct SegMap {
  // boundary renumbering with a band of dropped boundaries
  std::function<std::optional<Segment>(Segment)> map;

  static SegMap shift_after(int boundary, int delta, std::set<int> dropped = {}) {
    SegMap m;
    m.map = [boundary, delta, dropped = std::move(dropped)](Segment s) -> std::optional<Segment> {
      if (dropped.count(s.b)) return std::nullopt;
      if (s.b <= boundary) return s;
      return Segment{s.b + delta, s.j};
    };
    return m;
  }
  static SegMap identity_with_drops(std::set<int> dropped) {
    return shift_after(1 << 28, 0, std::move(dropped));
  }
};

/// Segment renumbering for a structural rewrite, derived from the move's
/// locus.  Boundaries strictly inside the rewritten band are dropped.
inline SegMap segmap_for_move(const Move& m, const SlicedDiagram& before,
                              const SlicedDiagram& after) {
  using K = Move::Kind;
  int delta = static_cast<int>(after.slices.size()) - static_cast<int>(before.slices.size());
  switch (m.kind) {
    case K::Pad: return SegMap::shift_after(m.b, 1);
    case K::SliceSplit: return SegMap::shift_after(m.s, 1);
    case K::SliceMerge: return SegMap::shift_after(m.s, -1);
    case K::TileDown:
    case K::TileUp: {
      bool down = m.kind == K::TileDown;
      int bstar = down ? m.s : m.s + 1;  // the shared boundary
      const Slice& from = before.slices[m.s];
      const Tile& tile = from[m.j];
      int in_slot = 0, out_slot = 0;
      for (int t = 0; t < m.j; ++t) {
        in_slot += from[t].legs_in();
        out_slot += from[t].legs_out();
      }
      int near = down ? in_slot : out_slot;  // slots at bstar the tile held
      int n_near = down ? tile.legs_in() : tile.legs_out();
      int n_far = down ? tile.legs_out() : tile.legs_in();
      int landing = n_near == 0 ? m.j2 : near;
      SegMap sm;
      sm.map = [bstar, near, n_near, n_far, landing](Segment s) -> std::optional<Segment> {
        if (s.b != bstar) return s;
        if (n_near > 0) {
          if (s.j >= near && s.j < near + n_near) return std::nullopt;
          if (s.j >= near + n_near) return Segment{s.b, s.j + n_far - n_near};
          return s;
        }
        if (s.j >= landing) return Segment{s.b, s.j + n_far};
        return s;
      };
      return sm;
    }
    case K::ZigIntro: return SegMap::shift_after(m.b, 2);
    case K::ZigElim: return SegMap::shift_after(m.s, -2, {m.s + 1});
    case K::R1Plus: return SegMap::shift_after(m.b, 3);
    case K::R1Minus: return SegMap::shift_after(m.s, -3, {m.s + 1, m.s + 2});
    case K::R2Plus: return SegMap::shift_after(m.b, 2);
    case K::R2Minus: return SegMap::shift_after(m.s, -2, {m.s + 1});
    case K::R3: return SegMap::identity_with_drops({m.s + 1, m.s + 2});
    case K::BightPush: return SegMap::shift_after(m.s, 2, {m.s + 1});
    case K::BightPull: return SegMap::shift_after(m.s, -2, {m.s + 1, m.s + 2});
    case K::TwistElim:
      if (!m.variant_b) return SegMap::shift_after(m.s - 1, delta, {m.s, m.s + 1});
      return SegMap::shift_after(m.s - 1, delta, {m.s, m.s + 1});
    case K::TwistIntro:
      if (!m.variant_b) return SegMap::shift_after(m.s - 1, 1, {m.s});
      return SegMap::shift_after(m.s, 1, {m.s + 1});
    case K::DotSlide:
    case K::DotMerge:
    case K::DotSplit:
      break;
  }
  throw Error(ErrorCode::Internal, "no segment map for this move");
}

// ---------------------------------------------------------------------------
// state transfer across a surgery

namespace s4 {

struct Transfer {
  const CrossedModule* cm;
  const Still* oldst;
  const Still* newst;
  // for each new arc: latest segment with an old preimage
  struct Anchor {
    int new_seg = -1;
    int old_arc = -1;
    int old_seg = -1;
  };
  std::vector<Anchor> anchors;      // per new arc
  std::vector<char> arc_in_locus;   // per old arc: every segment unmapped
  std::map<Segment, Segment> fwd;   // old -> new segments
};

inline Transfer make_transfer(const CrossedModule& cm, const Still& oldst, const Still& newst,
                              const SegMap& sm) {
  Transfer t;
  t.cm = &cm;
  t.oldst = &oldst;
  t.newst = &newst;
  t.anchors.assign(newst.arcs(), {});
  t.arc_in_locus.assign(oldst.arcs(), 1);
  for (const auto& a : oldst.graph().arcs) {
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
      auto mapped = sm.map(a.segments[i]);
      if (!mapped) continue;
      int na = newst.arc_at(*mapped);
      if (na < 0) continue;  // segment absorbed into a changed region
      t.arc_in_locus[a.id] = 0;
      t.fwd[a.segments[i]] = *mapped;
      int nseg = newst.seg_index(*mapped);
      auto& an = t.anchors[na];
      if (nseg > an.new_seg) {
        an.new_seg = nseg;
        an.old_arc = a.id;
        an.old_seg = static_cast<int>(i);
      }
    }
  }
  return t;
}

/// Color of an old arc at one of its segments, given the state's dots.
inline Elem color_at_segment(const CrossedModule& cm, const Still& st, const DottedState& s,
                             int arc, int seg_idx) {
  return color_at_interval(cm, st, s, arc, st.interval_of(arc, seg_idx));
}

/// Slides dots whose anchor segment disappears under the surgery.
inline void clear_locus_dots(const Transfer& t, DottedState& s, int guard = 256) {
  const Still& st = *t.oldst;
  while (guard-- > 0) {
    bool moved = false;
    for (std::size_t i = 0; i < s.dots.size(); ++i) {
      const DotMark& d = s.dots[i];
      // anchor segment: first segment of the dot's interval
      const Arc& a = st.graph().arcs[d.arc];
      int seg = -1;
      for (std::size_t k = 0; k < a.segments.size(); ++k)
        if (a.seg_interval[k] == d.pos) {
          seg = static_cast<int>(k);
          break;
        }
      bool ok = seg >= 0 && t.fwd.count(a.segments[seg]);
      if (!ok) {
        slide_step(*t.cm, st, s, i);
        drop_identity_dots(t.cm->fibre(), s);
        moved = true;
        break;
      }
    }
    if (!moved) return;
  }
  throw Error(ErrorCode::Internal, "could not clear dots off the locus");
}

/// Maps colors and dots through the surgery; arcs without mapped
/// segments stay uncolored (-1) for the caller to fill or propagate.
inline DottedState transfer_state(const Transfer& t, const DottedState& old) {
  const CrossedModule& cm = *t.cm;
  DottedState s;
  s.color.assign(t.newst->arcs(), -1);
  // dots first: their boundary jumps feed the color formulas
  for (const DotMark& d : old.dots) {
    const Arc& a = t.oldst->graph().arcs[d.arc];
    int seg = -1;
    for (std::size_t k = 0; k < a.segments.size(); ++k)
      if (a.seg_interval[k] == d.pos) {
        seg = static_cast<int>(k);
        break;
      }
    if (seg < 0) throw Error(ErrorCode::Internal, "dot without anchor segment");
    auto it = t.fwd.find(a.segments[seg]);
    if (it == t.fwd.end()) throw Error(ErrorCode::Internal, "dot anchored on the locus");
    int na = t.newst->arc_at(it->second);
    int nseg = t.newst->seg_index(it->second);
    s.dots.push_back({na, t.newst->interval_of(na, nseg), d.label});
  }
  std::sort(s.dots.begin(), s.dots.end());
  // colors: value at the latest mapped segment, pushed forward over the
  // new arc's trailing dots
  for (int na = 0; na < t.newst->arcs(); ++na) {
    const auto& an = t.anchors[na];
    if (an.new_seg < 0) continue;
    Elem v = color_at_segment(cm, *t.oldst, old, an.old_arc, an.old_seg);
    int iv = t.newst->interval_of(na, an.new_seg);
    for (const DotMark& d : s.dots)
      if (d.arc == na && d.pos > iv) v = cm.base().mul(cm.bnd(d.label), v);
    s.color[na] = v;
  }
  return s;
}

/// Fills colors of fully-new arcs by crossing-constraint propagation.
inline void propagate_colors(const CrossedModule& cm, const Still& st, DottedState& s) {
  const FiniteGroup& G = cm.base();
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t x = 0; x < st.graph().crossings.size(); ++x) {
      const auto& ci = st.graph().crossings[x];
      if (s.color[ci.over_arc] < 0) continue;
      Elem o = over_color_at(cm, st, s, static_cast<int>(x));
      if (s.color[ci.under_in_arc] >= 0 && s.color[ci.under_out_arc] < 0) {
        Elem base = ci.sign > 0 ? G.conj(o, s.color[ci.under_in_arc])
                                : G.conj(G.inv(o), s.color[ci.under_in_arc]);
        // head color = base pushed past all the arc's dots
        Elem v = base;
        for (const DotMark& d : s.dots)
          if (d.arc == ci.under_out_arc) v = G.mul(cm.bnd(d.label), v);
        s.color[ci.under_out_arc] = v;
        progress = true;
      } else if (s.color[ci.under_out_arc] >= 0 && s.color[ci.under_in_arc] < 0) {
        Elem tailv = tail_color(cm, st, s, ci.under_out_arc);
        Elem v = ci.sign > 0 ? G.conj(G.inv(o), tailv) : G.conj(o, tailv);
        s.color[ci.under_in_arc] = v;
        progress = true;
      }
    }
  }
}

}  // namespace s4

// ---------------------------------------------------------------------------
// movie events

struct MovieEvent {
  enum class Kind { Birth, Death, Saddle, Rewrite, Swap };
  Kind kind = Kind::Swap;
  bool ccw = true;  // birth orientation
  int b = 0, j = 0;
  Move move;        // payload for Kind::Rewrite
  int b2 = 0, j2 = 0;
};

struct Movie {
  std::vector<MovieEvent> events;
};

/// Applies one event to a state vector over `still`, producing the next
/// still and states.  Throws SiteMismatch (and friends) on bad sites.
class MovieEngine {
 public:
  MovieEngine(const CrossedModule& cm, bool canonical = true)
      : cm_(&cm), canonical_(canonical), still_(SlicedDiagram{}) {
    DottedState empty;
    states_[empty] = Rational(1);
  }

  const Still& still() const { return still_; }
  const StateVector& states() const { return states_; }
  bool canonical() const { return canonical_; }

  void apply(const MovieEvent& ev) {
    switch (ev.kind) {
      case MovieEvent::Kind::Birth: return apply_birth(ev);
      case MovieEvent::Kind::Death: return apply_death(ev);
      case MovieEvent::Kind::Saddle: return apply_saddle(ev);
      case MovieEvent::Kind::Rewrite: return apply_rewrite(ev);
      case MovieEvent::Kind::Swap: return;  // distant critical points commute
    }
  }

  /// Final scalar: the coefficient of the empty state on the empty still.
  Rational scalar() const {
    if (!still_.diagram().slices.empty())
      throw Error(ErrorCode::InvalidMovie, "movie does not end on the empty still");
    DottedState empty;
    auto it = states_.find(empty);
    return it == states_.end() ? Rational(0) : it->second;
  }

 private:
  const CrossedModule* cm_;
  bool canonical_;
  Still still_;
  StateVector states_;

  void finish(const Still& ns, StateVector&& next) {
    StateVector cleaned;
    for (auto& [s, c] : next) {
      DottedState t = s;
      s4::consolidate(*cm_, ns, t);
      if (canonical_) s4::canonicalize(*cm_, ns, t);
      s4::drop_identity_dots(cm_->fibre(), t);
      if (!s4::state_consistent(*cm_, ns, t))
        throw Error(ErrorCode::Internal, "inconsistent state after event");
      add_state(cleaned, t, c);
    }
    still_ = ns;
    states_ = std::move(cleaned);
  }

  void apply_birth(const MovieEvent& ev) {
    auto dirs = boundary_dirs(still_.diagram());
    if (ev.b < 0 || ev.b >= static_cast<int>(dirs.size()))
      throw Error(ErrorCode::SiteMismatch, "birth: bad boundary");
    if (ev.j < 0 || ev.j > static_cast<int>(dirs[ev.b].size()))
      throw Error(ErrorCode::SiteMismatch, "birth: bad slot");
    SlicedDiagram nd = still_.diagram();
    {
      const auto& below = dirs[ev.b];
      Slice a = detail::splice_slice(below, ev.j, 0, {cup_tile(!ev.ccw)});
      std::vector<bool> mid = below;
      mid.insert(mid.begin() + ev.j, {!ev.ccw, ev.ccw});
      Slice b = detail::splice_slice(mid, ev.j, 2, {cap_tile(!ev.ccw)});
      nd.slices.insert(nd.slices.begin() + ev.b, {a, b});
    }
    Still ns(nd);
    SegMap sm = SegMap::shift_after(ev.b, 2);
    auto tr = s4::make_transfer(*cm_, still_, ns, sm);
    // the new circle is the arc with no anchor
    int circle = -1;
    for (int a = 0; a < ns.arcs(); ++a)
      if (tr.anchors[a].new_seg < 0) circle = a;
    if (circle < 0) throw Error(ErrorCode::Internal, "birth: no new circle arc");
    StateVector next;
    for (const auto& [s0, c] : states_) {
      DottedState base = s4::transfer_state(tr, s0);
      for (Elem x = 0; x < cm_->base().order(); ++x) {
        DottedState t = base;
        t.color[circle] = x;
        add_state(next, t, c);
      }
    }
    finish(ns, std::move(next));
  }

  void apply_death(const MovieEvent& ev) {
    // the site names a segment on the dying circle
    int arc = still_.arc_at({ev.b, ev.j});
    if (arc < 0) throw Error(ErrorCode::SiteMismatch, "death: no strand at site");
    const Arc& a = still_.graph().arcs[arc];
    int comp = a.component;
    // the component must be a single free circle
    int comp_arcs = 0;
    for (const auto& other : still_.graph().arcs)
      if (other.component == comp) ++comp_arcs;
    if (comp_arcs != 1 || !a.closed || !a.over_legs.empty())
      throw Error(ErrorCode::DeathOnKnottedCircle, "death: circle still carries crossings");
    // structural removal: drop the circle's tiles, then empty slices
    std::set<Segment> segs(a.segments.begin(), a.segments.end());
    SlicedDiagram nd;
    std::vector<int> bmap;  // old boundary -> new boundary
    {
      // per-boundary slot shifts
      auto dirs = boundary_dirs(still_.diagram());
      std::vector<std::vector<int>> slot_map(dirs.size());
      for (std::size_t b = 0; b < dirs.size(); ++b) {
        int kept = 0;
        slot_map[b].assign(dirs[b].size(), -1);
        for (std::size_t j = 0; j < dirs[b].size(); ++j) {
          if (segs.count({static_cast<int>(b), static_cast<int>(j)})) continue;
          slot_map[b][j] = kept++;
        }
      }
      bmap.assign(dirs.size(), -1);
      int nb = 0;
      for (std::size_t sidx = 0; sidx < still_.diagram().slices.size(); ++sidx) {
        const Slice& sl = still_.diagram().slices[sidx];
        Slice ns;
        int in_pos = 0, out_pos = 0;
        for (const Tile& t : sl) {
          bool mine = false;
          for (int k = 0; k < t.legs_in(); ++k)
            if (segs.count({static_cast<int>(sidx), in_pos + k})) mine = true;
          for (int k = 0; k < t.legs_out(); ++k)
            if (segs.count({static_cast<int>(sidx) + 1, out_pos + k})) mine = true;
          if (!mine) ns.push_back(t);
          in_pos += t.legs_in();
          out_pos += t.legs_out();
        }
        bmap[sidx] = nb;
        if (!ns.empty()) {
          nd.slices.push_back(ns);
          ++nb;
        }
      }
      bmap[still_.diagram().slices.size()] = nb;
      // remap the outer function below using slot_map and bmap
      Still ns2(nd);
      SegMap sm;
      sm.map = [slot_map, bmap, segs](Segment s) -> std::optional<Segment> {
        if (segs.count(s)) return std::nullopt;
        if (s.b >= static_cast<int>(slot_map.size())) return std::nullopt;
        int j2 = slot_map[s.b][s.j];
        if (j2 < 0) return std::nullopt;
        int b2 = bmap[s.b];
        return Segment{b2, j2};
      };
      // dropped slices collapse neighbouring boundaries; mapping the lower
      // index is enough because ids are all that remain there
      auto tr = s4::make_transfer(*cm_, still_, ns2, sm);
      const FiniteGroup& E = cm_->fibre();
      StateVector next;
      for (const auto& [s0, c] : states_) {
        // total label on the dying circle (states are consolidated)
        Elem total = E.identity();
        for (const DotMark& d : s0.dots)
          if (d.arc == arc) total = E.mul(d.label, total);
        if (!(total == E.identity())) continue;  // delta kills the state
        DottedState s1 = s0;
        s1.dots.erase(std::remove_if(s1.dots.begin(), s1.dots.end(),
                                     [&](const DotMark& d) { return d.arc == arc; }),
                      s1.dots.end());
        DottedState t = s4::transfer_state(tr, s1);
        add_state(next, t, c * Rational(E.order()));
      }
      finish(ns2, std::move(next));
    }
  }

  void apply_saddle(const MovieEvent& ev) {
    auto dirs = boundary_dirs(still_.diagram());
    if (ev.b <= 0 || ev.b >= static_cast<int>(dirs.size()))
      throw Error(ErrorCode::SiteMismatch, "saddle: bad boundary");
    if (ev.j < 0 || ev.j + 1 >= static_cast<int>(dirs[ev.b].size()))
      throw Error(ErrorCode::SiteMismatch, "saddle: bad slot");
    bool dl = dirs[ev.b][ev.j], dr = dirs[ev.b][ev.j + 1];
    if (dl == dr) throw Error(ErrorCode::SiteMismatch, "saddle: strands not antiparallel");
    int arcL = still_.arc_at({ev.b, ev.j});
    int arcR = still_.arc_at({ev.b, ev.j + 1});
    SlicedDiagram nd = still_.diagram();
    {
      Slice cap = detail::splice_slice(dirs[ev.b], ev.j, 2, {cap_tile(dl)});
      std::vector<bool> mid = dirs[ev.b];
      mid.erase(mid.begin() + ev.j, mid.begin() + ev.j + 2);
      Slice cup = detail::splice_slice(mid, ev.j, 0, {cup_tile(dl)});
      nd.slices.insert(nd.slices.begin() + ev.b, {cap, cup});
    }
    Still ns(nd);
    SegMap sm = SegMap::shift_after(ev.b, 2);
    auto tr = s4::make_transfer(*cm_, still_, ns, sm);
    const FiniteGroup& E = cm_->fibre();
    const FiniteGroup& G = cm_->base();
    // in-strand flows up into the cap
    int in_arc = dl ? arcL : arcR;
    int out_arc = dl ? arcR : arcL;
    int in_slot = dl ? ev.j : ev.j + 1;
    int out_slot = dl ? ev.j + 1 : ev.j;
    StateVector next;
    Rational inv_e(BigInt(1), BigInt(E.order()));
    for (const auto& [s0, c] : states_) {
      Elem in_color = s4::color_at_segment(*cm_, still_, s0, in_arc,
                                           still_.seg_index({ev.b, in_slot}));
      Elem out_color = s4::color_at_segment(*cm_, still_, s0, out_arc,
                                            still_.seg_index({ev.b, out_slot}));
      Elem need = G.mul(out_color, G.inv(in_color));
      for (Elem e : cm_->preimage(need)) {
        DottedState t = s4::transfer_state(tr, s0);
        // cap dot: before the first segment past the cap along the flow,
        // i.e. the out-strand's lower copy at (b, out_slot)
        {
          Segment below{ev.b, out_slot};
          int na = ns.arc_at(below);
          int np = ns.interval_of(na, ns.seg_index(below));
          s4::land_dot(E, t, na, np, e);
        }
        // cup dot: before the in-strand's upper copy at (b+2, in_slot)
        {
          Segment above{ev.b + 2, in_slot};
          int na = ns.arc_at(above);
          int np = ns.interval_of(na, ns.seg_index(above));
          s4::land_dot(E, t, na, np, E.inv(e));
          if (t.color[na] < 0) {
            // the upper chain lies entirely inside the inserted band
            // (a self-saddle on a small circle); its value at this
            // segment is the in-strand's at-site color
            Elem v = in_color;
            int iv = ns.interval_of(na, ns.seg_index(above));
            for (const DotMark& d : t.dots)
              if (d.arc == na && d.pos > iv) v = G.mul(cm_->bnd(d.label), v);
            t.color[na] = v;
          }
        }
        add_state(next, t, c * inv_e);
      }
    }
    finish(ns, std::move(next));
  }

  void apply_rewrite(const MovieEvent& ev) {
    SlicedDiagram nd;
    try {
      nd = apply_move(still_.diagram(), ev.move);
    } catch (const Error& e) {
      throw Error(ErrorCode::SiteMismatch, std::string("rewrite: ") + e.what());
    }
    Still ns(nd);
    SegMap sm = segmap_for_move(ev.move, still_.diagram(), nd);
    auto tr = s4::make_transfer(*cm_, still_, ns, sm);
    StateVector next;
    for (const auto& [s0, c] : states_) {
      DottedState cleared = s0;
      s4::clear_locus_dots(tr, cleared);
      DottedState t = s4::transfer_state(tr, cleared);
      s4::propagate_colors(*cm_, ns, t);
      for (Elem col : t.color)
        if (col < 0) throw Error(ErrorCode::Internal, "rewrite left an uncolored arc");
      add_state(next, t, c);
    }
    finish(ns, std::move(next));
  }
};

/// Evaluates a whole movie from the empty still.
inline Rational invariant4(const Movie& movie, const CrossedModule& cm, bool canonical = true) {
  MovieEngine eng(cm, canonical);
  for (std::size_t i = 0; i < movie.events.size(); ++i) {
    try {
      eng.apply(movie.events[i]);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidMovie,
                  "event " + std::to_string(i) + ": " + e.what());
    }
  }
  return eng.scalar();
}

}  // namespace xmk
