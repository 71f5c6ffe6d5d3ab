#pragma once

// Independent ground truths for the two state-sum engines: closed-form
// values, brute-force homomorphism counting, and local relation checks.
// Nothing here shares counting or evaluation arithmetic with knot3 or
// surface4.

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xmk/catgroup.hpp"
#include "xmk/diagram.hpp"
#include "xmk/rational.hpp"

namespace xmk {

/// #E * #{(X,f) : f * (X^-1 |> f^-1) * (X^-2 |> f) = 1_E}; the
/// closed-form value of the 4-dimensional invariant on the spun trefoil
/// for abelian base and fibre with trivial boundary.
inline BigInt spun_trefoil_closed_form(const CrossedModule& cm) {
  const FiniteGroup& G = cm.base();
  const FiniteGroup& E = cm.fibre();
  if (!G.is_abelian() || !E.is_abelian())
    throw Error(ErrorCode::NotApplicable, "closed form needs abelian base and fibre");
  for (Elem e = 0; e < E.order(); ++e)
    if (cm.bnd(e) != G.identity())
      throw Error(ErrorCode::NotApplicable, "closed form needs a trivial boundary");
  std::int64_t count = 0;
  for (Elem x = 0; x < G.order(); ++x) {
    Elem xi = G.inv(x);
    Elem xi2 = G.mul(xi, xi);
    for (Elem f = 0; f < E.order(); ++f) {
      Elem v = E.mul(f, E.mul(cm.act(xi, E.inv(f)), cm.act(xi2, f)));
      if (v == E.identity()) ++count;
    }
  }
  return BigInt(E.order()) * BigInt(count);
}

/// #E * #G, the value on the unknotted sphere.
inline BigInt trivial_sphere_value(const CrossedModule& cm) {
  return BigInt(cm.fibre().order()) * BigInt(cm.base().order());
}

/// Counts arc colorings with the under-arc conjugation rule at crossings
/// by plain exhaustive assignment (dots force equal colors).  This is the
/// number of homomorphisms from the complement's group into G.
inline BigInt wirtinger_count(const SlicedDiagram& d, const FiniteGroup& g) {
  DiagramGraph dg = analyze(d);
  int n = static_cast<int>(dg.arcs.size());
  std::vector<Elem> color(n, 0);
  BigInt count(0);
  // odometer over all |G|^n assignments
  while (true) {
    bool ok = true;
    for (const auto& ci : dg.crossings) {
      Elem o = color[ci.over_arc], u = color[ci.under_in_arc], v = color[ci.under_out_arc];
      Elem expect = ci.sign > 0 ? g.mul(g.mul(o, u), g.inv(o)) : g.mul(g.mul(g.inv(o), u), o);
      if (v != expect) {
        ok = false;
        break;
      }
    }
    if (ok)
      for (const auto& di : dg.dots)
        if (color[di.in_arc] != color[di.out_arc]) {
          ok = false;
          break;
        }
    if (ok) count = count + BigInt(1);
    int i = 0;
    while (i < n && ++color[i] == g.order()) color[i++] = 0;
    if (i == n) break;
  }
  return count;
}

// ---------------------------------------------------------------------------
// local relation soundness

struct RelationReport {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<int> mismatches;  // per relation R1..R6
  bool ok() const {
    for (int m : mismatches)
      if (m) return false;
    return true;
  }
  std::string summary() const {
    std::ostringstream os;
    os << "seed=" << seed;
    for (std::size_t i = 0; i < mismatches.size(); ++i)
      os << " R" << (i + 1) << "=" << mismatches[i];
    return os.str();
  }
};

namespace detail {

// Evaluates an open two-strand patch with explicit dot labels; crossings
// carry the identity label (the 4-dimensional mode).
inline CatMorphism eval_patch(const CrossedModule& cm, const SlicedDiagram& d,
                              const std::vector<Elem>& arc_colors,
                              const std::vector<Elem>& dot_labels) {
  DiagramGraph dg = analyze(d, /*require_closed=*/false);
  VertexLabels labels;
  labels.crossing.assign(dg.crossings.size(), cm.fibre().identity());
  labels.dot = dot_labels;
  return evaluate_sliced_open(cm, dg, arc_colors, labels);
}

// Colors the arcs of a patch by walking from given boundary colors
// through the coloring rules; returns colors indexed by arc id.
inline std::vector<Elem> color_patch(const CrossedModule& cm, const SlicedDiagram& d,
                                     const std::vector<Elem>& dot_labels_by_registry,
                                     const std::vector<Elem>& seed_colors) {
  const FiniteGroup& g = cm.base();
  DiagramGraph dg = analyze(d, /*require_closed=*/false);
  int n = static_cast<int>(dg.arcs.size());
  std::vector<Elem> color(n, -1);
  // seed: arcs entering through the bottom boundary, left to right
  std::size_t si = 0;
  for (int j = 0; j < static_cast<int>(dg.dirs[0].size()); ++j) {
    if (!dg.dirs[0][j]) continue;
    for (const auto& a : dg.arcs)
      if (!a.segments.empty() && a.segments.front() == Segment{0, j}) {
        if (si < seed_colors.size()) color[a.id] = seed_colors[si++];
      }
  }
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& di : dg.dots) {
      Elem e = dot_labels_by_registry[&di - dg.dots.data()];
      if (color[di.in_arc] >= 0 && color[di.out_arc] < 0) {
        color[di.out_arc] = g.mul(cm.bnd(e), color[di.in_arc]);
        progress = true;
      }
    }
    for (const auto& ci : dg.crossings) {
      if (color[ci.over_arc] >= 0 && color[ci.under_in_arc] >= 0 && color[ci.under_out_arc] < 0) {
        Elem o = color[ci.over_arc], u = color[ci.under_in_arc];
        color[ci.under_out_arc] =
            ci.sign > 0 ? g.mul(g.mul(o, u), g.inv(o)) : g.mul(g.mul(g.inv(o), u), o);
        progress = true;
      }
    }
  }
  for (Elem c : color)
    if (c < 0) throw Error(ErrorCode::Internal, "patch coloring did not propagate");
  return color;
}

}  // namespace detail

/// Compares both sides of the six dot-transport relations on random local
/// patches, evaluating each side in the graphical calculus.
inline RelationReport relation_soundness(const CrossedModule& cm, int trials, std::uint64_t seed) {
  const FiniteGroup& G = cm.base();
  const FiniteGroup& E = cm.fibre();
  RelationReport rep;
  rep.seed = seed;
  rep.trials = trials;
  rep.mismatches.assign(6, 0);
  std::mt19937_64 rng(seed);
  auto rg = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };

  for (int t = 0; t < trials; ++t) {
    Elem x = rg(G.order()), y = rg(G.order());
    Elem e = rg(E.order()), f = rg(E.order());

    // R1: a dot labeled 1_E is no dot
    {
      SlicedDiagram lhs{{{dot_tile("a", true)}}};
      SlicedDiagram rhs{{{id_tile(true)}}};
      auto ml = detail::eval_patch(cm, lhs, detail::color_patch(cm, lhs, {E.identity()}, {x}),
                                   {E.identity()});
      auto mr = detail::eval_patch(cm, rhs, detail::color_patch(cm, rhs, {}, {x}), {});
      if (!(ml == mr)) ++rep.mismatches[0];
    }
    // R2: consecutive dots e then f merge to fe
    {
      SlicedDiagram lhs{{{dot_tile("a", true)}, {dot_tile("b", true)}}};
      SlicedDiagram rhs{{{dot_tile("c", true)}}};
      auto ml = detail::eval_patch(cm, lhs, detail::color_patch(cm, lhs, {e, f}, {x}), {e, f});
      Elem fe = E.mul(f, e);
      auto mr = detail::eval_patch(cm, rhs, detail::color_patch(cm, rhs, {fe}, {x}), {fe});
      if (!(ml == mr)) ++rep.mismatches[1];
    }
    // R3: dot on the over strand of a positive crossing; moving it past
    // the crossing emits e * (XYX^-1 |> e^-1) on the under-out arc
    {
      SlicedDiagram lhs{{{dot_tile("a", true), id_tile(true)}, {cross_tile(true, true, true)}}};
      SlicedDiagram rhs{{{cross_tile(true, true, true)}, {dot_tile("g", true), dot_tile("a", true)}}};
      Elem gl = E.mul(e, cm.act(G.conj(x, y), E.inv(e)));
      auto ml = detail::eval_patch(cm, lhs, detail::color_patch(cm, lhs, {e}, {x, y}), {e});
      auto mr = detail::eval_patch(cm, rhs, detail::color_patch(cm, rhs, {gl, e}, {x, y}), {gl, e});
      if (!(ml == mr)) ++rep.mismatches[2];
    }
    // R4: dot on the over strand of a negative crossing; the emitted dot
    // is (Y^-1 |> e^-1)(Y^-1 X |> e) for over color Y, under color X
    {
      SlicedDiagram lhs{{{id_tile(true), dot_tile("a", true)}, {cross_tile(false, true, true)}}};
      SlicedDiagram rhs{{{cross_tile(false, true, true)}, {dot_tile("a", true), dot_tile("g", true)}}};
      Elem gl = E.mul(cm.act(G.inv(y), E.inv(e)), cm.act(G.mul(G.inv(y), x), e));
      auto ml = detail::eval_patch(cm, lhs, detail::color_patch(cm, lhs, {e}, {x, y}), {e});
      auto mr = detail::eval_patch(cm, rhs, detail::color_patch(cm, rhs, {e, gl}, {x, y}), {e, gl});
      if (!(ml == mr)) ++rep.mismatches[3];
    }
    // R5: dot through the under strand of a positive crossing: e -> X |> e
    {
      SlicedDiagram lhs{{{id_tile(true), dot_tile("a", true)}, {cross_tile(true, true, true)}}};
      SlicedDiagram rhs{{{cross_tile(true, true, true)}, {dot_tile("a", true), id_tile(true)}}};
      Elem te = cm.act(x, e);
      auto ml = detail::eval_patch(cm, lhs, detail::color_patch(cm, lhs, {e}, {x, y}), {e});
      auto mr = detail::eval_patch(cm, rhs, detail::color_patch(cm, rhs, {te}, {x, y}), {te});
      if (!(ml == mr)) ++rep.mismatches[4];
    }
    // R6: dot through the under strand of a negative crossing: e -> Y^-1 |> e
    {
      SlicedDiagram lhs{{{dot_tile("a", true), id_tile(true)}, {cross_tile(false, true, true)}}};
      SlicedDiagram rhs{{{cross_tile(false, true, true)}, {id_tile(true), dot_tile("a", true)}}};
      Elem te = cm.act(G.inv(y), e);
      auto ml = detail::eval_patch(cm, lhs, detail::color_patch(cm, lhs, {e}, {x, y}), {e});
      auto mr = detail::eval_patch(cm, rhs, detail::color_patch(cm, rhs, {te}, {x, y}), {te});
      if (!(ml == mr)) ++rep.mismatches[5];
    }
    (void)f;
  }
  return rep;
}

}  // namespace xmk
