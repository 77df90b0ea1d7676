#include <doctest.h>

#include <random>
#include <set>

#include "lambek/star.hpp"
#include "support.hpp"

using namespace lambek;
using testing::random_tractable;

namespace {

Formula f(const char* text) { return parse_formula(text); }

using Ids = std::vector<std::uint32_t>;

Ids ids_of(const std::vector<Formula>& v) {
  Ids out;
  for (auto x : v) out.push_back(x.id());
  return out;
}

// Direct reading of the Inst clauses with bounded unfolding.
std::set<Ids> inst_oracle(Formula a, std::size_t bound) {
  auto concat = [](const std::set<Ids>& x, const std::set<Ids>& y) {
    std::set<Ids> out;
    for (const auto& u : x)
      for (const auto& v : y) {
        Ids w = u;
        w.insert(w.end(), v.begin(), v.end());
        out.insert(w);
      }
    return out;
  };
  switch (a.kind()) {
    case Connective::Prod:
      return concat(inst_oracle(a.left(), bound), inst_oracle(a.right(), bound));
    case Connective::Star:
    case Connective::Plus: {
      std::set<Ids> one = inst_oracle(a.operand(), bound), acc{Ids{}}, out;
      for (std::size_t k = 1; k <= bound; ++k) {
        acc = concat(acc, one);
        out.insert(acc.begin(), acc.end());
      }
      if (a.kind() == Connective::Star) out.insert(Ids{});
      return out;
    }
    default:
      return {Ids{a.id()}};
  }
}

bool has_star_below(Formula a, bool negative) {
  switch (a.kind()) {
    case Connective::Atom:
    case Connective::Unit:
      return false;
    case Connective::Under:
      return has_star_below(a.denominator(), !negative) || has_star_below(a.numerator(), negative);
    case Connective::Over:
      return has_star_below(a.numerator(), negative) || has_star_below(a.denominator(), !negative);
    case Connective::Star:
    case Connective::Plus:
      return negative || has_star_below(a.operand(), negative);
    default:
      return has_star_below(a.left(), negative) || has_star_below(a.right(), negative);
  }
}

}  // namespace

TEST_CASE("powers and bounded disjunctions") {
  Formula p = f("p");
  CHECK(power(p, 1) == p);
  CHECK(power(p, 3) == f("p.p.p"));
  CHECK(power_upto(p, 0) == Formula::unit());
  CHECK(power_upto(p, 1) == Formula::disj(Formula::unit(), p));
  CHECK(power_upto(p, 2) == Formula::disj(Formula::unit(), Formula::disj(p, f("p.p"))));
  CHECK_THROWS(power(p, 0));
  CHECK(normalize_plus(f("(p\\q)^+")) == f("(p\\q).(p\\q)^*"));
}

TEST_CASE("approximations of atoms, divisions and stars") {
  Formula p = f("p");
  for (std::size_t n = 0; n < 4; ++n) {
    CHECK(approx_positive(p, n) == p);
    CHECK(approx_negative(p, n) == p);
  }
  Sequent s = approximate(parse_sequent("p^* -> p^*"), 2);
  REQUIRE(s.antecedent.size() == 1);
  CHECK(s.antecedent[0] == power_upto(p, 2));
  CHECK(s.succedent == f("p^*"));
  // Polarity flips under the denominator.
  CHECK(approx_positive(f("p^*\\q"), 1) == Formula::under(power_upto(p, 1), f("q")));
  CHECK(approx_negative(f("p^*\\q"), 1) == f("p^*\\q"));
  CHECK(approx_positive(f("q/p^*"), 2) == Formula::over(f("q"), power_upto(p, 2)));
  CHECK(has_negative_star(parse_sequent("p^* -> p")));
  CHECK(has_negative_star(parse_sequent("-> q/p^+")));
  CHECK_FALSE(has_negative_star(parse_sequent("p -> p^*")));
}

TEST_CASE("polarity fixpoint on star-free formulae") {
  std::mt19937 rng(11);
  const std::vector<Connective> all{Connective::Under, Connective::Over, Connective::Prod, Connective::Or,
                                    Connective::And};
  for (int i = 0; i < 300; ++i) {
    Formula a = testing::random_formula(rng, 1 + i % 12, all, {}, 3, true);
    CHECK(approx_positive(a, i % 4) == a);
    CHECK(approx_negative(a, i % 4) == a);
  }
}

TEST_CASE("approximations never leave negative stars") {
  std::mt19937 rng(12);
  const std::vector<Connective> bin{Connective::Under, Connective::Over, Connective::Prod, Connective::Or};
  const std::vector<Connective> un{Connective::Star, Connective::Plus};
  for (int i = 0; i < 300; ++i) {
    Sequent s;
    s.antecedent.push_back(testing::random_formula(rng, 2 + i % 9, bin, un));
    s.succedent = testing::random_formula(rng, 2 + i % 7, bin, un);
    Sequent a = approximate(s, i % 4);
    CHECK_FALSE(has_negative_star(a));
    for (auto x : a.antecedent) CHECK_FALSE(has_star_below(x, true));
    CHECK_FALSE(has_star_below(a.succedent, false));
  }
}

TEST_CASE("check_approximations") {
  auto r = check_approximations(parse_sequent("p^* -> p^*"), 5);
  CHECK(r.verdict == BoundedVerdict::Unrefuted);
  CHECK(r.levels_checked == 6);
  CHECK(r.note.find("does not establish") != std::string::npos);

  r = check_approximations(parse_sequent("p^* -> p"), 3);
  CHECK(r.verdict == BoundedVerdict::Refuted);
  REQUIRE(r.level);
  CHECK(*r.level == 0);

  CHECK(check_approximations(parse_sequent("-> p^*"), 3).verdict == BoundedVerdict::Unrefuted);
  // p, p^* -> p^+ holds; p^* -> p^+ fails at the empty word.
  CHECK(check_approximations(parse_sequent("p, p^* -> p^+"), 3).verdict == BoundedVerdict::Unrefuted);
  CHECK(check_approximations(parse_sequent("p^* -> p^+"), 3).verdict == BoundedVerdict::Refuted);
  // (p.p)^* -> p^* holds, p^* -> (p.p)^* fails first at one copy of p.
  CHECK(check_approximations(parse_sequent("(p.p)^* -> p^*"), 3).verdict == BoundedVerdict::Unrefuted);
  r = check_approximations(parse_sequent("p^* -> (p.p)^*"), 3);
  CHECK(r.verdict == BoundedVerdict::Refuted);
  REQUIRE(r.level);
  CHECK(*r.level == 1);

  ProverConfig tiny;
  tiny.depth_budget = 1;
  CHECK(check_approximations(parse_sequent("(p.p)^* -> p^*"), 2, tiny).verdict == BoundedVerdict::Unknown);
}

TEST_CASE("monotone refutation") {
  for (const char* text : {"p^* -> p", "p^* -> (p.p)^*", "(p/q)^*, q -> p", "p^*, p\\q -> q"}) {
    INFO(text);
    Sequent s = parse_sequent(text);
    auto r = check_approximations(s, 4);
    REQUIRE(r.verdict == BoundedVerdict::Refuted);
    ProverConfig pc;
    for (std::size_t n = *r.level; n <= 4; ++n) CHECK(prove(approximate(s, n), pc).refuted());
    // A^{<=n} -> A^{<=n'} for n <= n'.
    Formula p = f("p");
    for (std::size_t n = 0; n < 3; ++n) CHECK(prove(Sequent{{power_upto(p, n)}, power_upto(p, n + 1)}).proved());
  }
}

TEST_CASE("star-external recognition") {
  CHECK(is_star_external(parse_sequent("((p/q)^+ . (q\\p)^+)^+ -> p/q")));
  CHECK(is_star_external(parse_sequent("p, q\\p -> p")));
  CHECK(is_star_external(parse_sequent("-> p")));
  CHECK_FALSE(is_star_external(parse_sequent("p^*\\q -> q")));
  CHECK_FALSE(is_star_external(parse_sequent("(p.q)/r -> q")));
  CHECK_FALSE(is_star_external(parse_sequent("p^* -> p^*")));
  CHECK_FALSE(is_star_external(parse_sequent("p -> p.p")));
  CHECK_FALSE(is_star_external(f("p | q")));
  CHECK_FALSE(is_star_external(f("1")));
}

TEST_CASE("instances") {
  Formula p = f("p"), q = f("q");
  auto v = instances(f("p^*"), 2);
  CHECK(v == std::vector<std::vector<Formula>>{{}, {p}, {p, p}});
  CHECK(instances(f("q\\p"), 3) == std::vector<std::vector<Formula>>{{f("q\\p")}});
  CHECK(instances(f("p.q"), 3) == std::vector<std::vector<Formula>>{{p, q}});
  CHECK(instances(f("p^+"), 0).empty());
  CHECK(instances(f("p^*"), 0) == std::vector<std::vector<Formula>>{{}});
  // Duplicated leaves collapse.
  CHECK(instances(f("p^* . p^*"), 1) == std::vector<std::vector<Formula>>{{}, {p}, {p, p}});

  // (A1^+ . A2^+)^+ gives alternating blocks A1^n1, A2^m1, ...
  Formula a1 = f("p/q"), a2 = f("q\\p");
  auto alt = instances(Formula::plus(Formula::prod(Formula::plus(a1), Formula::plus(a2))), 2);
  CHECK(ids_of(alt.front()) == Ids{a1.id(), a2.id()});
  for (const auto& inst : alt) {
    REQUIRE(inst.size() >= 2);
    CHECK(inst.front() == a1);
    CHECK(inst.back() == a2);
    std::size_t blocks = 1;
    for (std::size_t i = 1; i < inst.size(); ++i) blocks += inst[i] != inst[i - 1];
    CHECK(blocks % 2 == 0);
    CHECK(blocks <= 4);
  }
  CHECK(alt.size() == inst_oracle(Formula::plus(Formula::prod(Formula::plus(a1), Formula::plus(a2))), 2).size());

  InstanceStream st(f("p^*"), 3, 2);
  std::size_t n = 0;
  while (st.next()) ++n;
  CHECK(n == 3);
  CHECK_THROWS_AS(InstanceStream(f("p^*\\q"), 2), NotStarExternal);
  CHECK_THROWS_AS(instances(f("p|q"), 2), NotStarExternal);
}

TEST_CASE("instance streams match the defining clauses") {
  std::mt19937 rng(21);
  std::size_t redrawn = 0;
  for (int i = 0; i < 200; ++i) {
    std::size_t bound = i % 4;
    Formula a = random_tractable(rng, 1 + i % 8, bound, redrawn);
    INFO(render_formula(a));
    INFO(bound);
    std::set<Ids> expected = inst_oracle(a, bound);
    std::set<Ids> got;
    std::size_t prev_len = 0;
    InstanceStream st(a, bound);
    while (auto x = st.next()) {
      CHECK(x->size() >= prev_len);
      prev_len = x->size();
      CHECK(got.insert(ids_of(*x)).second);
    }
    CHECK(got == expected);
  }
}

TEST_CASE("instance soundness certificates") {
  Formula p = f("p");
  auto d = instance_soundness(f("p^*"), {p, p});
  CHECK(d->rule == Rule::StarR);
  CHECK(d->premises.size() == 2);
  CHECK(check_derivation(d));
  d = instance_soundness(f("p^*"), {});
  CHECK(d->rule == Rule::StarR);
  CHECK(d->premises.empty());
  d = instance_soundness(f("q\\p"), {f("q\\p")});
  CHECK(d->rule == Rule::UnderR);
  CHECK(check_derivation(d));
  CHECK(instance_soundness(p, {p})->rule == Rule::Ax);
  d = instance_soundness(f("p.q"), {p, f("q")});
  CHECK(d->rule == Rule::ProdR);
  CHECK(check_derivation(d));
  d = instance_soundness(f("(p^*)^+"), {});
  CHECK(d->rule == Rule::PlusR);
  CHECK(check_derivation(d));
  CHECK_THROWS_AS(instance_soundness(f("p^+"), {}), std::invalid_argument);
  CHECK_THROWS_AS(instance_soundness(f("p.q"), {f("q"), p}), std::invalid_argument);
  CHECK_THROWS_AS(instance_soundness(f("p^*\\q"), {}), std::invalid_argument);

  for (const char* text : {"p", "1", "p\\q", "q/p", "p.q", "p|q", "p&q", "(p/q)\\(r.1)"}) {
    INFO(text);
    auto id = identity_derivation(f(text));
    CHECK(check_derivation(id));
  }
  CHECK_THROWS(identity_derivation(f("p^*")));
}

TEST_CASE("every instance of a random star-external formula is certified") {
  std::mt19937 rng(4);
  std::size_t certified = 0, redrawn = 0;
  for (int i = 0; i < 100; ++i) {
    Formula a = random_tractable(rng, 1 + i % 8, 3, redrawn);
    INFO(render_formula(a));
    for (std::size_t bound = 0; bound <= 3; ++bound) {
      InstanceStream st(a, bound);
      while (auto x = st.next()) {
        auto d = instance_soundness(a, *x);
        REQUIRE(d);
        CHECK(check_derivation(d));
        ++certified;
      }
    }
  }
  CHECK(certified > 100);
  MESSAGE(certified << " certificates, " << redrawn << " intractable draws redrawn");
}

TEST_CASE("check_instances") {
  auto r = check_instances(parse_sequent("p^* -> q"), 3);
  CHECK(r.verdict == BoundedVerdict::Refuted);
  REQUIRE(r.witness);
  CHECK(r.witness->antecedent.empty());
  CHECK(r.checked == 1);
  CHECK_THROWS_AS(check_instances(parse_sequent("p^* -> p^*"), 2), NotStarExternal);

  CHECK(check_instances(parse_sequent("p, p\\q -> q"), 2).verdict == BoundedVerdict::Unrefuted);
  r = check_instances(parse_sequent("p^+, p\\p -> p"), 3);
  CHECK(r.verdict == BoundedVerdict::Refuted);
  REQUIRE(r.witness);
  CHECK(render_sequent(*r.witness) == render_sequent(parse_sequent("p, p, p\\p -> p")));
  CHECK(check_instances(parse_sequent("-> p/p"), 1).verdict == BoundedVerdict::Unrefuted);
  CHECK(check_instances(parse_sequent("-> p"), 1).verdict == BoundedVerdict::Refuted);

  ProverConfig tiny;
  tiny.depth_budget = 1;
  CHECK(check_instances(parse_sequent("(p/p)^*, p/p, p -> p"), 3, tiny).verdict == BoundedVerdict::Unknown);
}

TEST_CASE("bounded instances agree with approximations on star-only sequents") {
  std::mt19937 rng(31);
  const std::vector<Connective> divs{Connective::Under, Connective::Over};
  std::size_t refuted = 0;
  for (int i = 0; i < 60; ++i) {
    Sequent s;
    std::size_t n = 1 + i % 2;
    for (std::size_t k = 0; k < n; ++k) {
      Formula leaf = testing::random_formula(rng, 1 + (i + k) % 4, divs, {}, 2);
      s.antecedent.push_back(k % 2 == 0 ? Formula::star(leaf) : leaf);
    }
    s.succedent = testing::random_formula(rng, 1 + i % 4, divs, {}, 2);
    INFO(render_sequent(s));
    for (std::size_t bound = 0; bound <= 2; ++bound) {
      auto inst = check_instances(s, bound);
      auto ap = check_approximations(s, bound);
      REQUIRE(inst.verdict != BoundedVerdict::Unknown);
      REQUIRE(ap.verdict != BoundedVerdict::Unknown);
      CHECK(inst.verdict == ap.verdict);
      refuted += inst.verdict == BoundedVerdict::Refuted;
    }
  }
  CHECK(refuted > 0);
}

TEST_CASE("positive families stay unrefuted") {
  std::mt19937 rng(41);
  const std::vector<Connective> divs{Connective::Under, Connective::Over};
  for (int i = 0; i < 40; ++i) {
    Formula b = testing::random_formula(rng, 1 + i % 5, divs, {}, 3);
    Formula bb = Formula::over(b, b), ub = Formula::under(b, b);
    INFO(render_formula(b));
    for (std::size_t bound = 0; bound <= 3; ++bound) {
      CHECK(check_instances(Sequent{{Formula::star(bb)}, bb}, bound).verdict == BoundedVerdict::Unrefuted);
      CHECK(check_instances(Sequent{{Formula::star(ub)}, ub}, bound).verdict == BoundedVerdict::Unrefuted);
      CHECK(check_instances(Sequent{{Formula::star(bb), b}, b}, bound).verdict == BoundedVerdict::Unrefuted);
      CHECK(check_instances(Sequent{{b, Formula::plus(ub)}, b}, bound).verdict == BoundedVerdict::Unrefuted);
    }
  }
}
