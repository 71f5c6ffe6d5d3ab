#pragma once

// Shared fixtures for the test suite.  Groups built here use independent
// constructions (permutation composition, modular arithmetic) so the
// library tables are checked against something it did not produce.

#include <algorithm>
#include <array>
#include <random>
#include <string>
#include <vector>

#include "xmk/algebra.hpp"
#include "xmk/diagram.hpp"

namespace xmktest {

// S_n as permutation words, composed directly
inline xmk::FiniteGroup symmetric_group(int n) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  int order = static_cast<int>(perms.size());
  auto index_of = [&](const std::vector<int>& q) {
    for (int i = 0; i < order; ++i)
      if (perms[i] == q) return i;
    return -1;
  };
  std::vector<xmk::Elem> table(static_cast<std::size_t>(order) * order);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) {
      std::vector<int> q(n);
      for (int i = 0; i < n; ++i) q[i] = perms[a][perms[b][i]];  // (a*b)(i) = a(b(i))
      table[static_cast<std::size_t>(a) * order + b] = index_of(q);
    }
  return xmk::FiniteGroup::from_table(order, std::move(table));
}

// the worked example: Z_3 acting on Z_2[Z_3] by translation, trivial boundary
inline xmk::CrossedModule zmod3_module() {
  auto g = xmk::cyclic_group(3);
  auto [e, act] = xmk::group_algebra_module(g, 2);
  return xmk::crossed_module_trivial_boundary(g, e, act);
}

inline xmk::CrossedModule s3_homcount_module() {
  return xmk::crossed_module_trivial_fibre(symmetric_group(3));
}

inline xmk::CrossedModule z1z2_module() {
  auto g = xmk::cyclic_group(1);
  auto e = xmk::cyclic_group(2);
  return xmk::crossed_module_trivial_boundary(g, e, xmk::GroupAction::trivial(g, e));
}

inline xmk::CrossedModule s3_inner_module() {
  return xmk::crossed_module_inner(symmetric_group(3));
}

inline std::vector<xmk::CrossedModule> fixture_modules() {
  std::vector<xmk::CrossedModule> v;
  v.push_back(zmod3_module());
  v.push_back(s3_homcount_module());
  v.push_back(z1z2_module());
  v.push_back(s3_inner_module());
  return v;
}

// --- diagrams -------------------------------------------------------------

using xmk::cap_tile;
using xmk::cross_tile;
using xmk::cup_tile;
using xmk::dot_tile;
using xmk::id_tile;

// plain circle, counterclockwise
inline xmk::SlicedDiagram unknot0() {
  return {{{cup_tile(false)}, {cap_tile(false)}}};
}

inline xmk::SlicedDiagram unknot1() {
  return {{{cup_tile(false)}, {id_tile(false), dot_tile("a", true)}, {cap_tile(false)}}};
}

// braid closure of three positive crossings on two strands; columns are
// return(down), braid(up), braid(up), return(down)
inline xmk::SlicedDiagram trefoil_closure(bool with_dot = true) {
  xmk::SlicedDiagram d;
  d.slices.push_back({cup_tile(false), cup_tile(true)});
  for (int k = 0; k < 3; ++k)
    d.slices.push_back({id_tile(false), cross_tile(true, true, true), id_tile(false)});
  if (with_dot)
    d.slices.push_back({id_tile(false), dot_tile("a", true), id_tile(true), id_tile(false)});
  d.slices.push_back({cap_tile(false), cap_tile(true)});
  return d;
}

// 2-bridge plat: adjacent cups and caps, three half-twists between the
// middle strands (both pointing down)
inline xmk::SlicedDiagram trefoil_plat(bool with_dot = true) {
  xmk::SlicedDiagram d;
  d.slices.push_back({cup_tile(true), cup_tile(false)});
  for (int k = 0; k < 3; ++k)
    d.slices.push_back({id_tile(true), cross_tile(true, false, false), id_tile(true)});
  if (with_dot)
    d.slices.push_back({dot_tile("a", true), id_tile(false), id_tile(false), id_tile(true)});
  d.slices.push_back({cap_tile(true), cap_tile(false)});
  return d;
}

// braid closure of (s1 s2^-1)^2 on three strands, nested returns on the left
inline xmk::SlicedDiagram figure_eight(bool with_dot = true) {
  xmk::SlicedDiagram d;
  d.slices.push_back({cup_tile(false)});
  d.slices.push_back({id_tile(false), cup_tile(false), id_tile(true)});
  d.slices.push_back({id_tile(false), id_tile(false), cup_tile(false), id_tile(true), id_tile(true)});
  auto braid = [&](int which, bool positive) {
    xmk::Slice s{id_tile(false), id_tile(false), id_tile(false)};
    if (which == 0) {
      s.push_back(cross_tile(positive, true, true));
      s.push_back(id_tile(true));
    } else {
      s.push_back(id_tile(true));
      s.push_back(cross_tile(positive, true, true));
    }
    return s;
  };
  d.slices.push_back(braid(0, true));
  d.slices.push_back(braid(1, false));
  d.slices.push_back(braid(0, true));
  d.slices.push_back(braid(1, false));
  if (with_dot)
    d.slices.push_back({id_tile(false), id_tile(false), id_tile(false), dot_tile("a", true),
                        id_tile(true), id_tile(true)});
  d.slices.push_back({id_tile(false), id_tile(false), cap_tile(false), id_tile(true), id_tile(true)});
  d.slices.push_back({id_tile(false), cap_tile(false), id_tile(true)});
  d.slices.push_back({cap_tile(false)});
  return d;
}

// the same trefoil as a three-strand braid closure of (s1 s2)^2; its
// braid column contains honest R3 sites
inline xmk::SlicedDiagram trefoil_braid3(bool with_dot = true) {
  xmk::SlicedDiagram d;
  d.slices.push_back({cup_tile(false)});
  d.slices.push_back({id_tile(false), cup_tile(false), id_tile(true)});
  d.slices.push_back({id_tile(false), id_tile(false), cup_tile(false), id_tile(true), id_tile(true)});
  auto braid = [&](int which) {
    xmk::Slice s{id_tile(false), id_tile(false), id_tile(false)};
    if (which == 0) {
      s.push_back(cross_tile(true, true, true));
      s.push_back(id_tile(true));
    } else {
      s.push_back(id_tile(true));
      s.push_back(cross_tile(true, true, true));
    }
    return s;
  };
  d.slices.push_back(braid(0));
  d.slices.push_back(braid(1));
  d.slices.push_back(braid(0));
  d.slices.push_back(braid(1));
  if (with_dot)
    d.slices.push_back({id_tile(false), id_tile(false), id_tile(false), dot_tile("a", true),
                        id_tile(true), id_tile(true)});
  d.slices.push_back({id_tile(false), id_tile(false), cap_tile(false), id_tile(true), id_tile(true)});
  d.slices.push_back({id_tile(false), cap_tile(false), id_tile(true)});
  d.slices.push_back({cap_tile(false)});
  return d;
}

inline xmk::SlicedDiagram unlink2(bool with_dots = true) {
  xmk::SlicedDiagram d;
  d.slices.push_back({cup_tile(false), cup_tile(false)});
  if (with_dots)
    d.slices.push_back({id_tile(false), dot_tile("a", true), id_tile(false), dot_tile("b", true)});
  d.slices.push_back({cap_tile(false), cap_tile(false)});
  return d;
}

// --- randomized move driver -------------------------------------------------

// Draws random move parameters until one applies; the mix covers both
// Reidemeister moves, dot moves and re-slicings.
inline std::pair<xmk::SlicedDiagram, xmk::Move> random_move(const xmk::SlicedDiagram& d,
                                                            std::mt19937_64& rng,
                                                            int max_crossings = 8) {
  using xmk::Move;
  auto dirs = xmk::boundary_dirs(d);
  auto ri = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  int nslices = static_cast<int>(d.slices.size());
  int ncross = 0;
  for (const auto& sl : d.slices)
    for (const auto& t : sl)
      if (t.is_cross()) ++ncross;
  bool big = ncross >= max_crossings || nslices >= 5 * max_crossings;
  for (int attempt = 0; attempt < 400; ++attempt) {
    Move m;
    int kind = ri(big ? 8 : 16);  // favour shrinking moves once large
    switch (kind) {
      case 0: m.kind = Move::Kind::R1Minus; m.s = ri(nslices); break;
      case 1:
        m.kind = Move::Kind::R2Minus;
        m.s = ri(nslices);
        m.j = ri(8);
        break;
      case 2: m.kind = Move::Kind::ZigElim; m.s = ri(nslices); m.j = ri(8); break;
      case 3: m.kind = Move::Kind::SliceMerge; m.s = ri(nslices); break;
      case 4:
        m.kind = Move::Kind::R3;
        m.s = ri(nslices);
        m.j = ri(8);
        m.variant_b = ri(2);
        break;
      case 5:
        m.kind = Move::Kind::DotMerge;
        m.s = ri(nslices);
        m.j = ri(8);
        break;
      case 6:
        m.kind = Move::Kind::TwistElim;
        m.s = ri(nslices);
        m.j = ri(8);
        m.variant_b = ri(2);
        break;
      case 7:
        m.kind = Move::Kind::BightPull;
        m.s = ri(nslices);
        m.j = ri(8);
        m.left = ri(2);
        m.pos = ri(2);
        m.variant_b = ri(2);
        break;
      case 12:
        m.kind = Move::Kind::TwistIntro;
        m.s = ri(nslices);
        m.j = ri(8);
        m.pos = ri(2);
        m.variant_b = ri(2);
        break;
      case 13:
        m.kind = Move::Kind::BightPush;
        m.s = ri(nslices);
        m.j = ri(8);
        m.left = ri(2);
        m.pos = ri(2);
        m.variant_b = ri(2);
        break;
      case 8:
        m.kind = Move::Kind::R1Plus;
        m.b = 1 + ri(nslices - 1);
        m.j = ri(static_cast<int>(dirs[m.b].size()) + 1);
        m.pos = ri(2);
        m.left = ri(2);
        break;
      case 9:
        m.kind = Move::Kind::R2Plus;
        m.b = 1 + ri(nslices - 1);
        m.j = ri(static_cast<int>(dirs[m.b].size()) + 1);
        m.pos = ri(2);
        break;
      case 10:
        m.kind = Move::Kind::ZigIntro;
        m.b = 1 + ri(nslices - 1);
        m.j = ri(static_cast<int>(dirs[m.b].size()) + 1);
        m.left = ri(2);
        break;
      case 11: {
        m.kind = Move::Kind::DotSplit;
        m.b = 1 + ri(nslices - 1);
        m.j = ri(static_cast<int>(dirs[m.b].size()) + 1);
        m.name = "r" + std::to_string(attempt);
        break;
      }
      case 14: {
        m.kind = Move::Kind::DotSlide;
        m.s = ri(nslices);
        m.j = ri(8);
        m.b2 = 1 + ri(nslices - 1);
        m.j2 = ri(static_cast<int>(dirs[m.b2].size()) + 1);
        break;
      }
      default:
        m.kind = Move::Kind::Pad;
        m.b = ri(nslices + 1);
        break;
    }
    try {
      auto d2 = xmk::apply_move(d, m);
      if (!xmk::validate(d2).ok()) continue;
      return {d2, m};
    } catch (const xmk::Error&) {
      continue;
    }
  }
  throw xmk::Error(xmk::ErrorCode::Internal, "no applicable random move found");
}

}  // namespace xmktest
