#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "common.hpp"
#include "xmk/algebra.hpp"

using namespace xmk;

TEST_CASE("cyclic groups") {
  auto z1 = cyclic_group(1);
  CHECK(z1.order() == 1);
  auto z3 = cyclic_group(3);
  CHECK(z3.mul(1, 0) == 1);
  CHECK(z3.mul(1, 1) == 2);
  CHECK(z3.mul(1, 2) == 0);
  CHECK(z3.inv(1) == 2);
  CHECK(z3.identity() == 0);
  CHECK(z3.is_abelian());
}

TEST_CASE("table validation names the failure") {
  CHECK_NOTHROW(FiniteGroup::from_table(2, {0, 1, 1, 0}));
  CHECK_THROWS_AS(FiniteGroup::from_table(2, {0, 1, 1, 1}), Error);
  try {
    FiniteGroup::from_table(2, {0, 1, 1, 1});
  } catch (const Error& e) {
    // the corrupted table first fails the identity scan
    CHECK((e.code() == ErrorCode::NotLatinSquare || e.code() == ErrorCode::NoIdentity));
  }
  // associativity failure with intact identity and Latin property:
  // the cyclic-shift table of order 5 tweaked is hard to hit; use RPS-like
  // quasigroup of order 3: a Latin square with identity row/col but not
  // associative does not exist at order 3, so check order 5
  std::vector<Elem> t = {
      0, 1, 2, 3, 4,
      1, 0, 3, 4, 2,
      2, 4, 0, 1, 3,
      3, 2, 4, 0, 1,
      4, 3, 1, 2, 0,
  };
  CHECK_THROWS_AS(FiniteGroup::from_table(5, t), Error);
}

TEST_CASE("S3 built from permutation composition") {
  auto s3 = xmktest::symmetric_group(3);
  CHECK(s3.order() == 6);
  CHECK_FALSE(s3.is_abelian());
  int order2 = 0, order3 = 0;
  for (Elem a = 0; a < 6; ++a) {
    if (s3.element_order(a) == 2) ++order2;
    if (s3.element_order(a) == 3) ++order3;
  }
  CHECK(order2 == 3);
  CHECK(order3 == 2);
}

TEST_CASE("group axioms as properties") {
  for (const auto& g : {xmktest::symmetric_group(3), cyclic_group(6)}) {
    for (Elem a = 0; a < g.order(); ++a) {
      CHECK(g.mul(a, g.inv(a)) == g.identity());
      for (Elem b = 0; b < g.order(); ++b)
        for (Elem c = 0; c < g.order(); ++c)
          CHECK(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
    }
  }
}

TEST_CASE("group algebra over Z2 for Z3") {
  auto g = cyclic_group(3);
  auto [e, act] = group_algebra_module(g, 2);
  CHECK(e.order() == 8);
  CHECK(e.is_abelian());
  // f = 1.[0] + 1.[1] encodes as 1 + 2 = 3; [1] |> f = 1.[1] + 1.[2] = 6
  CHECK(act.act(1, 3) == 6);
  // translation by g permutes coordinates with g's cycle type: no fixed
  // nonzero vector for g = [1]
  int fixed = 0;
  for (Elem f = 0; f < 8; ++f)
    if (act.act(1, f) == f) ++fixed;
  CHECK(fixed == 2);  // 0 and 1+2+4
  // |E| = p^|G|
  auto [e2, act2] = group_algebra_module(cyclic_group(1), 5);
  CHECK(e2.order() == 5);
  for (Elem f = 0; f < 5; ++f) CHECK(act2.act(0, f) == f);
  CHECK_THROWS_AS(group_algebra_module(cyclic_group(13), 3), Error);
}

TEST_CASE("trivial boundary crossed module") {
  auto cm = xmktest::zmod3_module();
  CHECK(cm.verify().ok());
  CHECK(cm.kernel().size() == 8);
  // nonabelian fibre cannot have a trivial boundary
  auto g = cyclic_group(3);
  auto s3 = xmktest::symmetric_group(3);
  CHECK_THROWS_AS(crossed_module_trivial_boundary(g, s3, GroupAction::trivial(g, s3)), Error);
}

TEST_CASE("trivial fibre crossed module") {
  auto cm = xmktest::s3_homcount_module();
  CHECK(cm.fibre().order() == 1);
  CHECK(cm.verify().ok());
  auto cm1 = crossed_module_trivial_fibre(cyclic_group(1));
  CHECK(cm1.verify().ok());
}

TEST_CASE("inner crossed module on S3") {
  auto cm = xmktest::s3_inner_module();
  CHECK(cm.verify().ok());
  CHECK_FALSE(cm.fibre().is_abelian());
  CHECK(cm.kernel().size() == 1);  // the centre of S3 is trivial
}

TEST_CASE("verify reports violations on mutated modules") {
  auto cm = xmktest::zmod3_module();
  // corrupt one boundary entry
  std::vector<Elem> bnd = cm.boundary_table();
  bnd[3] = 1;
  CrossedModule bad(cm.base(), cm.fibre(), bnd, cm.action(), /*trusted=*/true);
  auto rep = bad.verify();
  CHECK_FALSE(rep.ok());
  // corrupt one action entry
  GroupAction act = cm.action();
  act.raw_map()[5] = (act.raw_map()[5] + 1) % cm.fibre().order();
  CrossedModule bad2(cm.base(), cm.fibre(), cm.boundary_table(), act, /*trusted=*/true);
  CHECK_FALSE(bad2.verify().ok());
}

TEST_CASE("kernel commutes with the whole fibre") {
  for (const auto& cm : xmktest::fixture_modules()) {
    for (Elem k : cm.kernel())
      for (Elem f = 0; f < cm.fibre().order(); ++f)
        CHECK(cm.fibre().mul(k, f) == cm.fibre().mul(f, k));
  }
}

TEST_CASE("actions are automorphisms") {
  for (const auto& cm : xmktest::fixture_modules()) {
    const auto& g = cm.base();
    const auto& e = cm.fibre();
    for (Elem a = 0; a < g.order(); ++a) {
      std::vector<bool> hit(e.order(), false);
      for (Elem x = 0; x < e.order(); ++x) {
        hit[cm.act(a, x)] = true;
        for (Elem y = 0; y < e.order(); ++y)
          CHECK(cm.act(a, e.mul(x, y)) == e.mul(cm.act(a, x), cm.act(a, y)));
      }
      for (bool h : hit) CHECK(h);
    }
  }
}
