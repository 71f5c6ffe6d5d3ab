#pragma once

// The 3-dimensional state sum: count flat colorings and normalise by
// #E^(number of vertices).
//
// Counting does not enumerate fibre labels one by one.  With the base
// coloring fixed, the total evaluation label is an ordered product of
// independent terms w_v |> e_v with e_v ranging over a boundary-preimage
// coset, so the flat count per skeleton is a small convolution over E.

#include <string>
#include <thread>
#include <vector>

#include "xmk/catgroup.hpp"
#include "xmk/diagram.hpp"
#include "xmk/rational.hpp"

namespace xmk {

inline bool is_flat(const CrossedModule& cm, const DiagramGraph& dg, const Coloring3& c) {
  return evaluate_coloring3(cm, dg, c) == cm.fibre().identity();
}

inline bool is_flat(const SlicedDiagram& d, const Coloring3& c, const CrossedModule& cm) {
  auto dg = analyze(d);
  return is_flat(cm, dg, c);
}

struct Invariant3Result {
  Rational value;
  BigInt flat_count;
  BigInt coloring_count;  // without the flatness filter
  int vertices = 0;
};

namespace detail {

// Vertices in evaluation order (slices bottom to top, right to left
// within a slice) with the group element each label is transported by.
struct VertexTerm {
  bool is_dot = false;
  int index = 0;       // into dg.crossings / dg.dots
  Elem transport = 0;  // prefix * variant conjugator, depends on the skeleton
};

inline std::vector<std::pair<int, int>> vertex_scan_order(const DiagramGraph& dg) {
  // (slice, tile index) of every crossing/dot, slices ascending and tiles
  // descending within a slice
  std::vector<std::pair<int, int>> order;
  for (int s = 0; s < static_cast<int>(dg.diagram.slices.size()); ++s)
    for (int t = static_cast<int>(dg.diagram.slices[s].size()); t-- > 0;) {
      TileKind k = dg.diagram.slices[s][t].kind;
      if (k == TileKind::Dot || k == TileKind::CrossPos || k == TileKind::CrossNeg)
        order.push_back({s, t});
    }
  return order;
}

// product of boundary-entry objects left of a tile's bottom slots
inline Elem slice_prefix(const FiniteGroup& g, const DiagramGraph& dg,
                         const std::vector<Elem>& seg_color, int slice, int tile_index) {
  int in_slot = 0;
  for (int t = 0; t < tile_index; ++t) in_slot += dg.diagram.slices[slice][t].legs_in();
  Elem p = g.identity();
  for (int j = 0; j < in_slot; ++j) {
    Elem c = seg_color[j];
    p = g.mul(p, dg.dirs[slice][j] ? c : g.inv(c));
  }
  return p;
}

inline BigInt bigint_from_u128(unsigned __int128 v) {
  BigInt r(0), base(1);
  const BigInt two32(std::int64_t(1) << 32);
  while (v) {
    r = r + base * BigInt(static_cast<std::int64_t>(v & 0xffffffffu));
    v >>= 32;
    base = base * two32;
  }
  return r;
}

}  // namespace detail

/// Exact value of the 3-dimensional invariant together with the raw
/// counts.  `use_flatness` off exposes the unfiltered coloring count
/// (no invariance claim).  `threads` > 1 partitions the base-coloring
/// search by the first arc's color.
inline Invariant3Result invariant3(const SlicedDiagram& d, const CrossedModule& cm,
                                   bool use_flatness = true, int threads = 1) {
  DiagramGraph dg = analyze(d);
  for (int comp = 0; comp < dg.components; ++comp) {
    bool has_dot = false;
    for (const auto& di : dg.dots)
      if (dg.arcs[di.in_arc].component == comp) has_dot = true;
    if (!has_dot)
      throw Error(ErrorCode::NoDotOnComponent,
                  "component " + std::to_string(comp) + " carries no dot");
  }

  const FiniteGroup& G = cm.base();
  const FiniteGroup& E = cm.fibre();
  auto scan = detail::vertex_scan_order(dg);

  // map (slice,index) to crossing/dot registry entries once
  struct ScanEntry {
    bool is_dot;
    int reg;
    int slice, index;
  };
  std::vector<ScanEntry> entries;
  for (auto [s, t] : scan) {
    bool found = false;
    for (std::size_t k = 0; k < dg.crossings.size(); ++k)
      if (dg.crossings[k].at.slice == s && dg.crossings[k].at.index == t) {
        entries.push_back({false, static_cast<int>(k), s, t});
        found = true;
      }
    if (!found)
      for (std::size_t k = 0; k < dg.dots.size(); ++k)
        if (dg.dots[k].at.slice == s && dg.dots[k].at.index == t)
          entries.push_back({true, static_cast<int>(k), s, t});
  }

  // per-boundary segment -> arc id table for prefix computation
  std::vector<std::vector<int>> seg_arc(dg.dirs.size());
  for (std::size_t b = 0; b < dg.dirs.size(); ++b) seg_arc[b].assign(dg.dirs[b].size(), -1);
  for (const auto& a : dg.arcs)
    for (const auto& seg : a.segments) seg_arc[seg.b][seg.j] = a.id;

  // per-vertex prefix data: boundary slots left of the tile, as (slot, up)
  struct PrefixSlot {
    int slot;
    bool up;
  };
  std::vector<std::vector<PrefixSlot>> prefix_slots(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& en = entries[i];
    int in_slot = 0;
    for (int t = 0; t < en.index; ++t) in_slot += dg.diagram.slices[en.slice][t].legs_in();
    for (int j = 0; j < in_slot; ++j) prefix_slots[i].push_back({j, dg.dirs[en.slice][j]});
  }

  // per-skeleton counts fit in 128 bits for desk-scale diagrams; the
  // accumulators stay unbounded
  {
    int bits_per_vertex = 1;
    while ((1 << bits_per_vertex) < E.order()) ++bits_per_vertex;
    if (static_cast<int>(entries.size()) * bits_per_vertex > 120)
      throw Error(ErrorCode::SizeExceeded, "diagram too large for the counting path");
  }

  auto count_for = [&](int pinned_first_color, BigInt& flat, BigInt& all) {
    std::vector<unsigned __int128> dist(E.order()), next(E.order());
    BigInt flat_acc(0), all_acc(0);
    detail::for_each_skeleton(dg, cm, /*three_dim=*/true,
        [&](const std::vector<Elem>& color, const std::vector<Elem>& cross_bnd,
            const std::vector<Elem>& dot_bnd) {
      if (pinned_first_color >= 0 && !color.empty() && color[0] != pinned_first_color) return;
      // label-count convolution over E
      std::fill(dist.begin(), dist.end(), 0);
      dist[E.identity()] = 1;
      unsigned __int128 weight = 1;
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& en = entries[i];
        Elem prefix = G.identity();
        for (const auto& ps : prefix_slots[i]) {
          Elem c = color[seg_arc[en.slice][ps.slot]];
          prefix = G.mul(prefix, ps.up ? c : G.inv(c));
        }
        Elem w, t;
        if (en.is_dot) {
          const DotInfo& di = dg.dots[en.reg];
          Elem h = di.up ? G.identity() : G.inv(color[di.in_arc]);
          w = G.mul(prefix, h);
          t = dot_bnd[en.reg];
        } else {
          const CrossingInfo& ci = dg.crossings[en.reg];
          Elem h = detail::crossing_label_conjugator(G, ci, color[ci.over_arc],
                                                     color[ci.under_in_arc]);
          w = G.mul(prefix, h);
          t = cross_bnd[en.reg];
        }
        const auto& coset = cm.preimage(t);
        weight *= static_cast<unsigned __int128>(coset.size());
        std::fill(next.begin(), next.end(), 0);
        for (Elem e : coset) {
          Elem term = cm.act(w, e);
          for (Elem x = 0; x < E.order(); ++x)
            if (dist[x]) next[E.mul(term, x)] += dist[x];
        }
        dist.swap(next);
      }
      flat_acc = flat_acc + detail::bigint_from_u128(dist[E.identity()]);
      all_acc = all_acc + detail::bigint_from_u128(weight);
    });
    flat = flat + flat_acc;
    all = all + all_acc;
  };

  BigInt flat(0), all(0);
  if (threads <= 1 || dg.arcs.empty()) {
    count_for(-1, flat, all);
  } else {
    int n = G.order();
    std::vector<BigInt> flats(n, BigInt(0)), alls(n, BigInt(0));
    std::vector<std::thread> pool;
    int nthreads = std::min(threads, n);
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t]() {
        for (int c = t; c < n; c += nthreads) count_for(c, flats[c], alls[c]);
      });
    for (auto& th : pool) th.join();
    for (int c = 0; c < n; ++c) {
      flat = flat + flats[c];
      all = all + alls[c];
    }
  }

  Invariant3Result res;
  res.vertices = dg.n_vertices();
  res.flat_count = flat;
  res.coloring_count = all;
  BigInt den = BigInt::pow(BigInt(E.order()), static_cast<std::uint64_t>(res.vertices));
  res.value = Rational(use_flatness ? flat : all, den);
  return res;
}

struct InvarianceReport {
  struct Mismatch {
    std::size_t move_index;
    Rational before, after;
  };
  std::vector<Mismatch> mismatches;
  std::size_t moves_applied = 0;
  bool ok() const { return mismatches.empty(); }
};

/// Applies each move in turn and reports any change in the invariant.
inline InvarianceReport invariance_suite(const SlicedDiagram& d, const CrossedModule& cm,
                                         const std::vector<Move>& moves) {
  InvarianceReport rep;
  SlicedDiagram cur = d;
  Rational before = invariant3(cur, cm).value;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    cur = apply_move(cur, moves[i]);
    Rational after = invariant3(cur, cm).value;
    if (!(after == before)) rep.mismatches.push_back({i, before, after});
    before = after;
    ++rep.moves_applied;
  }
  return rep;
}

}  // namespace xmk
