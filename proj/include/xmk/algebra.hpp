#pragma once

// Finite groups as multiplication tables, group actions, and crossed
// modules (G, E, boundary, action) with exhaustive axiom checking.
//
// Elements are dense integer indices into the tables; every operation
// downstream is a table lookup.

#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "xmk/error.hpp"

namespace xmk {

using Elem = int;  // element index within its group

struct VerifyViolation {
  std::string rule;  // which axiom failed
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyViolation> violations;
  bool ok() const { return violations.empty(); }
  static constexpr std::size_t kMaxViolations = 100;
  void add(const std::string& rule, const std::string& detail) {
    if (violations.size() < kMaxViolations) violations.push_back({rule, detail});
  }
};

class FiniteGroup {
 public:
  FiniteGroup() = default;

  /// Builds from a full Cayley table (row g, column h -> g*h) and checks
  /// the group axioms exhaustively unless `trusted` is set.
  static FiniteGroup from_table(int order, std::vector<Elem> table, bool trusted = false) {
    if (order <= 0) throw Error(ErrorCode::ValidationError, "order must be positive");
    if (static_cast<int>(table.size()) != order * order)
      throw Error(ErrorCode::ValidationError, "table size mismatch");
    FiniteGroup g;
    g.order_ = order;
    g.table_ = std::move(table);
    for (Elem v : g.table_)
      if (v < 0 || v >= order) throw Error(ErrorCode::ValidationError, "table entry out of range");
    if (!trusted) g.check_axioms();
    g.find_identity_and_inverses();
    return g;
  }

  int order() const { return order_; }
  Elem identity() const { return identity_; }
  Elem mul(Elem a, Elem b) const { return table_[static_cast<std::size_t>(a) * order_ + b]; }
  Elem inv(Elem a) const { return inverse_[a]; }
  Elem conj(Elem a, Elem b) const { return mul(mul(a, b), inv(a)); }  // a b a^-1

  bool is_abelian() const {
    for (Elem a = 0; a < order_; ++a)
      for (Elem b = a + 1; b < order_; ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  int element_order(Elem a) const {
    int n = 1;
    Elem cur = a;
    while (cur != identity_) {
      cur = mul(cur, a);
      ++n;
    }
    return n;
  }

  const std::vector<Elem>& raw_table() const { return table_; }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.order_ == b.order_ && a.table_ == b.table_;
  }

 private:
  int order_ = 0;
  std::vector<Elem> table_;
  std::vector<Elem> inverse_;
  Elem identity_ = 0;

  void check_axioms() const {
    // identity candidates: rows acting as identity on the left
    bool found = false;
    for (Elem e = 0; e < order_ && !found; ++e) {
      bool ok = true;
      for (Elem a = 0; a < order_ && ok; ++a)
        ok = table_[static_cast<std::size_t>(e) * order_ + a] == a &&
             table_[static_cast<std::size_t>(a) * order_ + e] == a;
      found = ok;
    }
    if (!found) throw Error(ErrorCode::NoIdentity, "no two-sided identity element");

    // Latin square: each row and column a permutation
    std::vector<char> seen(order_);
    for (Elem a = 0; a < order_; ++a) {
      std::fill(seen.begin(), seen.end(), 0);
      for (Elem b = 0; b < order_; ++b) {
        Elem v = table_[static_cast<std::size_t>(a) * order_ + b];
        if (seen[v]) {
          std::ostringstream os;
          os << "row " << a << " repeats element " << v;
          throw Error(ErrorCode::NotLatinSquare, os.str());
        }
        seen[v] = 1;
      }
      std::fill(seen.begin(), seen.end(), 0);
      for (Elem b = 0; b < order_; ++b) {
        Elem v = table_[static_cast<std::size_t>(b) * order_ + a];
        if (seen[v]) {
          std::ostringstream os;
          os << "column " << a << " repeats element " << v;
          throw Error(ErrorCode::NotLatinSquare, os.str());
        }
        seen[v] = 1;
      }
    }

    for (Elem a = 0; a < order_; ++a)
      for (Elem b = 0; b < order_; ++b)
        for (Elem c = 0; c < order_; ++c) {
          Elem ab = table_[static_cast<std::size_t>(a) * order_ + b];
          Elem bc = table_[static_cast<std::size_t>(b) * order_ + c];
          if (table_[static_cast<std::size_t>(ab) * order_ + c] !=
              table_[static_cast<std::size_t>(a) * order_ + bc]) {
            std::ostringstream os;
            os << "(" << a << "*" << b << ")*" << c << " != " << a << "*(" << b << "*" << c << ")";
            throw Error(ErrorCode::NotAssociative, os.str());
          }
        }
  }

  void find_identity_and_inverses() {
    identity_ = -1;
    for (Elem e = 0; e < order_; ++e) {
      bool ok = true;
      for (Elem a = 0; a < order_ && ok; ++a)
        ok = mul(e, a) == a && mul(a, e) == a;
      if (ok) {
        identity_ = e;
        break;
      }
    }
    if (identity_ < 0) throw Error(ErrorCode::NoIdentity, "no identity");
    inverse_.assign(order_, -1);
    for (Elem a = 0; a < order_; ++a) {
      for (Elem b = 0; b < order_; ++b)
        if (mul(a, b) == identity_ && mul(b, a) == identity_) {
          inverse_[a] = b;
          break;
        }
      if (inverse_[a] < 0) throw Error(ErrorCode::NotLatinSquare, "element without inverse");
    }
  }
};

/// Z_n with i*j = (i+j) mod n, identity 0.
inline FiniteGroup cyclic_group(int n) {
  if (n < 1) throw Error(ErrorCode::ValidationError, "cyclic_group: n must be >= 1");
  std::vector<Elem> t(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(i) * n + j] = (i + j) % n;
  return FiniteGroup::from_table(n, std::move(t), /*trusted=*/true);
}

/// Left action of `actor` on `target` by automorphisms; map[g][e] = g |> e.
class GroupAction {
 public:
  GroupAction() = default;
  GroupAction(const FiniteGroup& actor, const FiniteGroup& target, std::vector<Elem> map,
              bool trusted = false)
      : actor_order_(actor.order()), target_order_(target.order()), map_(std::move(map)) {
    if (static_cast<int>(map_.size()) != actor_order_ * target_order_)
      throw Error(ErrorCode::ValidationError, "action table size mismatch");
    if (!trusted) {
      VerifyReport rep;
      verify(actor, target, rep);
      if (!rep.ok())
        throw Error(ErrorCode::ValidationError, "action: " + rep.violations.front().rule + " " +
                                                    rep.violations.front().detail);
    }
  }

  static GroupAction trivial(const FiniteGroup& actor, const FiniteGroup& target) {
    std::vector<Elem> m(static_cast<std::size_t>(actor.order()) * target.order());
    for (int g = 0; g < actor.order(); ++g)
      for (int e = 0; e < target.order(); ++e) m[static_cast<std::size_t>(g) * target.order() + e] = e;
    return GroupAction(actor, target, std::move(m), /*trusted=*/true);
  }

  Elem act(Elem g, Elem e) const { return map_[static_cast<std::size_t>(g) * target_order_ + e]; }
  const std::vector<Elem>& raw_map() const { return map_; }
  std::vector<Elem>& raw_map() { return map_; }

  void verify(const FiniteGroup& g, const FiniteGroup& e, VerifyReport& rep) const {
    for (Elem x = 0; x < e.order(); ++x)
      if (act(g.identity(), x) != x) rep.add("action-identity", "1 |> " + std::to_string(x));
    for (Elem a = 0; a < g.order(); ++a)
      for (Elem b = 0; b < g.order(); ++b)
        for (Elem x = 0; x < e.order(); ++x)
          if (act(g.mul(a, b), x) != act(a, act(b, x)))
            rep.add("action-composition",
                    "(" + std::to_string(a) + "*" + std::to_string(b) + ") |> " + std::to_string(x));
    for (Elem a = 0; a < g.order(); ++a)
      for (Elem x = 0; x < e.order(); ++x)
        for (Elem y = 0; y < e.order(); ++y)
          if (act(a, e.mul(x, y)) != e.mul(act(a, x), act(a, y)))
            rep.add("action-automorphism", std::to_string(a) + " |> (" + std::to_string(x) + "*" +
                                               std::to_string(y) + ")");
  }

 private:
  int actor_order_ = 0, target_order_ = 0;
  std::vector<Elem> map_;
};

/// Crossed module (G, E, boundary, action).  The two defining axioms:
///   CM1: boundary(X |> e) = X boundary(e) X^-1
///   CM2: boundary(e) |> f = e f e^-1   (Peiffer identity)
class CrossedModule {
 public:
  CrossedModule() = default;
  CrossedModule(FiniteGroup base, FiniteGroup fibre, std::vector<Elem> boundary, GroupAction action,
                bool trusted = false)
      : base_(std::move(base)),
        fibre_(std::move(fibre)),
        boundary_(std::move(boundary)),
        action_(std::move(action)) {
    if (static_cast<int>(boundary_.size()) != fibre_.order())
      throw Error(ErrorCode::ValidationError, "boundary table size mismatch");
    for (Elem v : boundary_)
      if (v < 0 || v >= base_.order())
        throw Error(ErrorCode::ValidationError, "boundary entry out of range");
    if (!trusted) {
      VerifyReport rep = verify();
      if (!rep.ok())
        throw Error(ErrorCode::ValidationError,
                    rep.violations.front().rule + " " + rep.violations.front().detail);
    }
    compute_kernel();
  }

  const FiniteGroup& base() const { return base_; }
  const FiniteGroup& fibre() const { return fibre_; }
  Elem bnd(Elem e) const { return boundary_[e]; }
  Elem act(Elem g, Elem e) const { return action_.act(g, e); }
  const GroupAction& action() const { return action_; }
  const std::vector<Elem>& boundary_table() const { return boundary_; }

  /// Elements of ker(boundary); these commute with all of E.
  const std::vector<Elem>& kernel() const { return kernel_; }

  /// Distinct values of the boundary map, ascending.
  const std::vector<Elem>& image() const { return image_; }

  /// All e with boundary(e) = t (may be empty when t is outside the image).
  const std::vector<Elem>& preimage(Elem t) const { return preimages_[t]; }

  VerifyReport verify() const {
    VerifyReport rep;
    // boundary is a homomorphism
    if (boundary_[fibre_.identity()] != base_.identity())
      rep.add("boundary-identity", "boundary(1_E) != 1_G");
    for (Elem e = 0; e < fibre_.order(); ++e)
      for (Elem f = 0; f < fibre_.order(); ++f)
        if (boundary_[fibre_.mul(e, f)] != base_.mul(boundary_[e], boundary_[f]))
          rep.add("boundary-homomorphism",
                  "boundary(" + std::to_string(e) + "*" + std::to_string(f) + ")");
    action_.verify(base_, fibre_, rep);
    // CM1
    for (Elem x = 0; x < base_.order(); ++x)
      for (Elem e = 0; e < fibre_.order(); ++e)
        if (boundary_[action_.act(x, e)] != base_.conj(x, boundary_[e]))
          rep.add("CM1", "X=" + std::to_string(x) + " e=" + std::to_string(e));
    // CM2 (Peiffer)
    for (Elem e = 0; e < fibre_.order(); ++e)
      for (Elem f = 0; f < fibre_.order(); ++f)
        if (action_.act(boundary_[e], f) != fibre_.conj(e, f))
          rep.add("CM2", "e=" + std::to_string(e) + " f=" + std::to_string(f));
    return rep;
  }

 private:
  FiniteGroup base_, fibre_;
  std::vector<Elem> boundary_;
  GroupAction action_;
  std::vector<Elem> kernel_;
  std::vector<Elem> image_;
  std::vector<std::vector<Elem>> preimages_;

  void compute_kernel() {
    kernel_.clear();
    image_.clear();
    preimages_.assign(base_.order(), {});
    for (Elem e = 0; e < fibre_.order(); ++e) {
      if (boundary_[e] == base_.identity()) kernel_.push_back(e);
      preimages_[boundary_[e]].push_back(e);
    }
    for (Elem g = 0; g < base_.order(); ++g)
      if (!preimages_[g].empty()) image_.push_back(g);
  }
};

/// kappa[G] for kappa = Z_p as an additive group together with the left
/// translation action of G on coordinates: (g |> f)[g*m] = f[m].
/// Elements are mixed-radix integers over coordinates ordered by G's
/// element index.
inline std::pair<FiniteGroup, GroupAction> group_algebra_module(const FiniteGroup& g, int p,
                                                                long max_order = 4096) {
  if (p < 2) throw Error(ErrorCode::ValidationError, "p must be >= 2");
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) throw Error(ErrorCode::ValidationError, "p must be prime");
  long order = 1;
  for (int i = 0; i < g.order(); ++i) {
    order *= p;
    if (order > max_order) throw Error(ErrorCode::SizeExceeded, "group algebra order exceeds bound");
  }
  int n = g.order();
  auto digits = [&](long v) {
    std::vector<int> d(n);
    for (int i = 0; i < n; ++i) {
      d[i] = static_cast<int>(v % p);
      v /= p;
    }
    return d;
  };
  auto pack = [&](const std::vector<int>& d) {
    long v = 0;
    for (int i = n; i-- > 0;) v = v * p + d[i];
    return v;
  };
  std::vector<Elem> table(static_cast<std::size_t>(order) * order);
  for (long a = 0; a < order; ++a) {
    auto da = digits(a);
    for (long b = 0; b < order; ++b) {
      auto db = digits(b);
      std::vector<int> dc(n);
      for (int i = 0; i < n; ++i) dc[i] = (da[i] + db[i]) % p;
      table[static_cast<std::size_t>(a) * order + b] = static_cast<Elem>(pack(dc));
    }
  }
  FiniteGroup e = FiniteGroup::from_table(static_cast<int>(order), std::move(table),
                                          /*trusted=*/order > 256);
  std::vector<Elem> actmap(static_cast<std::size_t>(n) * order);
  for (int x = 0; x < n; ++x)
    for (long f = 0; f < order; ++f) {
      auto df = digits(f);
      std::vector<int> dr(n);
      for (int m = 0; m < n; ++m) dr[g.mul(x, m)] = df[m];
      actmap[static_cast<std::size_t>(x) * order + f] = static_cast<Elem>(pack(dr));
    }
  GroupAction act(g, e, std::move(actmap));
  return {std::move(e), std::move(act)};
}

/// Crossed module with boundary constantly 1_G.  CM2 then forces E abelian.
inline CrossedModule crossed_module_trivial_boundary(FiniteGroup g, FiniteGroup e,
                                                     GroupAction action) {
  if (!e.is_abelian())
    throw Error(ErrorCode::FibreNotAbelian, "trivial boundary requires an abelian fibre");
  std::vector<Elem> bnd(e.order(), g.identity());
  return CrossedModule(std::move(g), std::move(e), std::move(bnd), std::move(action));
}

/// Crossed module with E = {1}; the hom-counting degeneration.
inline CrossedModule crossed_module_trivial_fibre(FiniteGroup g) {
  FiniteGroup e = cyclic_group(1);
  GroupAction act = GroupAction::trivial(g, e);
  return CrossedModule(std::move(g), std::move(e), {g.identity()}, std::move(act));
}

/// The inner crossed module (G, G, id, conjugation); a nonabelian fibre
/// fixture when G is nonabelian.
inline CrossedModule crossed_module_inner(const FiniteGroup& g) {
  std::vector<Elem> bnd(g.order());
  std::iota(bnd.begin(), bnd.end(), 0);
  std::vector<Elem> actmap(static_cast<std::size_t>(g.order()) * g.order());
  for (Elem a = 0; a < g.order(); ++a)
    for (Elem x = 0; x < g.order(); ++x)
      actmap[static_cast<std::size_t>(a) * g.order() + x] = g.conj(a, x);
  GroupAction act(g, g, std::move(actmap), /*trusted=*/true);
  return CrossedModule(g, g, std::move(bnd), std::move(act));
}

/// Exhaustive axiom check as a report (never throws).
inline VerifyReport verify_crossed_module(const CrossedModule& cm) { return cm.verify(); }

}  // namespace xmk
