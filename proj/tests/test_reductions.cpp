#include <doctest.h>

#include <functional>
#include <set>

#include "lambek/reductions.hpp"

using namespace lambek;

namespace {

ProverConfig big() {
  ProverConfig pc;
  pc.depth_budget = 50'000'000;
  return pc;
}

// Words in {a1,a2}^+ starting with a1 and ending with a2, by recursion on
// the block structure.
std::set<Word> alternation_oracle(const std::string& a1, const std::string& a2, std::size_t max_len,
                                  std::size_t max_exp = static_cast<std::size_t>(-1),
                                  std::size_t max_pairs = static_cast<std::size_t>(-1)) {
  std::set<Word> out;
  std::function<void(Word, std::size_t)> go = [&](Word w, std::size_t pairs) {
    if (pairs == max_pairs) return;
    for (std::size_t n = 1; n <= max_exp && w.size() + n + 1 <= max_len; ++n)
      for (std::size_t m = 1; m <= max_exp && w.size() + n + m <= max_len; ++m) {
        Word x = w;
        x.insert(x.end(), n, a1);
        x.insert(x.end(), m, a2);
        out.insert(x);
        go(x, pairs + 1);
      }
  };
  go({}, 0);
  return out;
}

const char* kG1 = "S -> a\n";
const char* kG2 = "S -> a S | a\n";
const char* kG3 = "S -> a S b | a b\n";
const char* kOnlyAb = "S -> a1 B\nB -> a2\n";
const char* kUniversal = "S -> a1 S | a2 S | a1 | a2\n";

std::vector<Word> accepted(const EquivalenceReport& r) {
  std::vector<Word> out;
  for (const auto& row : r.rows)
    if (row.lambek == Verdict::Proved) out.push_back(row.word);
  return out;
}

}  // namespace

TEST_CASE("method names") {
  CHECK(parse_method("gaifman") == CompileMethod::Gaifman);
  CHECK(parse_method("unique") == CompileMethod::Unique);
  CHECK(parse_method("safiullin") == CompileMethod::Unique);
  CHECK_FALSE(parse_method("other"));
  CHECK(method_name(CompileMethod::Gaifman) == "gaifman");
}

TEST_CASE("alternation words") {
  auto v = alternation_words("a1", "a2", 6);
  std::set<Word> got(v.begin(), v.end());
  CHECK(got.size() == v.size());
  CHECK(got == alternation_oracle("a1", "a2", 6));
  for (std::size_t i = 1; i < v.size(); ++i) {
    CHECK(v[i - 1].size() <= v[i].size());
    if (v[i - 1].size() == v[i].size()) CHECK(v[i - 1] < v[i]);
  }
  CHECK(alternation_words("a", "b", 1).empty());
  CHECK(alternation_words("a", "b", 2) == std::vector<Word>{{"a", "b"}});
}

TEST_CASE("alt2 sequent shape") {
  CompiledGrammar cg = compile_unique(to_gnf2(parse_cfg(kOnlyAb)));
  Sequent s = alt2_sequent(cg);
  REQUIRE(s.antecedent.size() == 1);
  CHECK(is_star_external(s));
  CHECK(s.succedent == cg.goal);
  Formula k1 = cg.lexicon.at("a1"), k2 = cg.lexicon.at("a2");
  CHECK(s.antecedent[0] == Formula::plus(Formula::prod(Formula::plus(k1), Formula::plus(k2))));

  // Instances at bound k are exactly the alternation words with at most k
  // blocks of each letter and exponents at most k.
  for (std::size_t k = 1; k <= 3; ++k) {
    INFO(k);
    std::set<Word> got;
    for (const auto& inst : instances(s.antecedent[0], k)) {
      Word w;
      for (auto f : inst) {
        REQUIRE((f == k1 || f == k2));
        w.push_back(f == k1 ? "a1" : "a2");
      }
      CHECK(got.insert(w).second);
    }
    CHECK(got == alternation_oracle("a1", "a2", 2 * k * k, k, k));
    CHECK(got.count(Word{"a1", "a2"}));
  }

  CompiledGrammar one = compile_unique(to_gnf2(parse_cfg(kG1)));
  CHECK_THROWS_AS(alt2_sequent(one), AlphabetError);
}

TEST_CASE("bounded alt2 refutation") {
  Cfg g = parse_cfg(kOnlyAb);
  Alt2Report r = refute_alt2(g, 4, big());
  REQUIRE(r.verdict == BoundedVerdict::Refuted);
  REQUIRE(r.witness);
  CHECK(r.witness->word == Word{"a1", "a1", "a2"});
  CHECK_FALSE(cyk_member(g, r.witness->word));
  CHECK(r.cyk_missing == r.witness->word);
  CHECK(r.consistent);
  REQUIRE(r.witness->membership);
  CHECK(check_derivation(r.witness->membership));
  CHECK(r.witness->instance.antecedent.size() == 3);
  CHECK(r.witness->trace.find("exhausted") != std::string::npos);

  Alt2Report u = refute_alt2(total_plus_to_alt2(parse_cfg(kUniversal)), 3, big());
  CHECK(u.verdict == BoundedVerdict::Unrefuted);
  CHECK_FALSE(u.witness);
  CHECK_FALSE(u.cyk_missing);
  CHECK(u.consistent);
  CHECK(u.instances_checked == alternation_oracle("a1", "a2", 3).size());

  CHECK_THROWS_AS(refute_alt2(parse_cfg("S -> a | b | c\n"), 2), AlphabetError);
  CHECK_THROWS_AS(refute_alt2(parse_cfg(kG1), 2), AlphabetError);
}

TEST_CASE("reduction composition at matched bounds") {
  // a1 w a2 is generated by the extended grammar iff w is empty or in L(g).
  for (const char* text : {"S -> a | b\n", "S -> a S | b S | a | b\n", "S -> a | b b\n"}) {
    INFO(text);
    Cfg g = parse_cfg(text);
    const std::size_t bound = 3;
    std::size_t total = 0;
    for (std::size_t len = 1; len + 2 <= bound; ++len) total += std::size_t{1} << len;
    bool complete = enumerate_words(g, bound - 2).size() == total;
    Alt2Report r = refute_alt2(total_plus_to_alt2(g), bound, big());
    CHECK(r.consistent);
    CHECK((r.verdict == BoundedVerdict::Refuted) == !complete);
    if (r.witness) CHECK_FALSE(cyk_member(total_plus_to_alt2(g), r.witness->word));
  }
}

TEST_CASE("equivalence harness on the corpus") {
  auto r1 = equivalence_harness(parse_cfg(kG1), CompileMethod::Unique, 4, big(), "G1");
  CHECK(r1.passed());
  CHECK(r1.rows.size() == 4);
  CHECK(accepted(r1) == std::vector<Word>{{"a"}});
  CHECK(r1.joins_verified == 2);

  auto r2 = equivalence_harness(parse_cfg(kG2), CompileMethod::Unique, 4, big(), "G2");
  CHECK(r2.passed());
  CHECK(accepted(r2) == std::vector<Word>{{"a"}, {"a", "a"}, {"a", "a", "a"}, {"a", "a", "a", "a"}});

  auto r3 = equivalence_harness(parse_cfg(kG3), CompileMethod::Gaifman, 6, big(), "G3");
  CHECK(r3.passed());
  CHECK(r3.rows.size() == 126);
  CHECK(accepted(r3) == std::vector<Word>{{"a", "b"}, {"a", "a", "b", "b"}, {"a", "a", "a", "b", "b", "b"}});
  CHECK(r3.joins_verified == 0);

  auto r4 = equivalence_harness(parse_cfg(kG3), CompileMethod::Unique, 4, big(), "G3");
  CHECK(r4.passed());
  CHECK(accepted(r4) == std::vector<Word>{{"a", "b"}, {"a", "a", "b", "b"}});
  for (const auto& row : r4.rows) CHECK(row.cyk == cyk_member(parse_cfg(kG3), row.word));

  std::string table = render_report(r1);
  CHECK(table.find("method unique") != std::string::npos);
  CHECK(table.find("0 mismatches") != std::string::npos);
}

TEST_CASE("equivalence harness failures") {
  auto r = equivalence_harness(parse_cfg("S -> a\nT -> b\n"), CompileMethod::Unique, 2);
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r.error.empty());
  CHECK(r.rows.empty());
  ProverConfig tiny;
  tiny.depth_budget = 3;
  CHECK_THROWS_AS(equivalence_harness(parse_cfg(kG2), CompileMethod::Unique, 2, tiny), IndeterminateVerdict);
}

TEST_CASE("disjunction elimination chain") {
  Formula a1 = parse_formula("p"), a2 = parse_formula("q"), h = parse_formula("r");
  auto chain = vee_elimination_chain(a1, a2, h);
  REQUIRE(chain.size() == 4);
  CHECK(render_sequent(chain[0]) == render_sequent(parse_sequent("(p | q)^*, p | q -> r")));
  CHECK(render_sequent(chain[1]) == render_sequent(parse_sequent("(p^* . q)^* . p^*, p | q -> r")));
  CHECK(render_sequent(chain[2]) == render_sequent(parse_sequent("(p^* . q)^* . p^* -> r / (p | q)")));
  CHECK(render_sequent(chain[3]) == render_sequent(parse_sequent("(p^* . q)^* . p^* -> (r/p) & (r/q)")));

  // A/(B|C) <-> (A/B)&(A/C).
  Formula l = chain[2].succedent, rr = chain[3].succedent;
  CHECK(prove(Sequent{{l}, rr}).proved());
  CHECK(prove(Sequent{{rr}, l}).proved());

  // Both directions of (A1|A2)^* <-> (A1^*.A2)^*.A1^* at every approximation.
  Formula s1 = chain[0].antecedent[0], s2 = chain[1].antecedent[0];
  for (std::size_t n = 0; n <= 2; ++n) {
    CHECK(prove(approximate(Sequent{{s1}, s2}, n)).proved());
    CHECK(prove(approximate(Sequent{{s2}, s1}, n)).proved());
  }

  // Adjacent members get the same approximation verdicts.
  for (Formula goal : {parse_formula("r"), parse_formula("(p | q)^*")}) {
    auto c = vee_elimination_chain(a1, a2, goal);
    for (std::size_t n = 0; n <= 2; ++n) {
      INFO(n);
      Verdict first = prove(approximate(c[0], n)).verdict;
      REQUIRE(first != Verdict::Unknown);
      for (std::size_t i = 1; i < 4; ++i) CHECK(prove(approximate(c[i], n)).verdict == first);
    }
  }
}

TEST_CASE("conjecture probe") {
  {
    CompiledGrammar cg = compile_unique(to_gnf2(parse_cfg(kOnlyAb)));
    auto p = conjecture_probe(cg.lexicon.at("a1"), cg.lexicon.at("a2"), cg.goal, 2, big());
    CHECK(p.lhs_verdict == BoundedVerdict::Refuted);
    CHECK(p.rhs_verdict == BoundedVerdict::Refuted);
    CHECK(p.rows.size() == 5);
    CHECK(p.disagreements == 0);
    CHECK(p.status.find("conjecture") != std::string::npos);
    CHECK(p.rows[0].lhs_verdict == Verdict::Proved);
    CHECK(p.rows[0].rhs_verdict == Verdict::Proved);
  }
  {
    CompiledGrammar cg = compile_unique(to_gnf2(parse_cfg("S -> a1 T\nT -> a1 T | a2 T | a2\n")));
    auto p = conjecture_probe(cg.lexicon.at("a1"), cg.lexicon.at("a2"), cg.goal, 1, big());
    CHECK(p.lhs_verdict == BoundedVerdict::Unrefuted);
    CHECK(p.rhs_verdict == BoundedVerdict::Unrefuted);
    CHECK(p.agreements == 1);
  }
  {
    Formula p = parse_formula("p"), q = parse_formula("q"), b = parse_formula("b");
    auto r = conjecture_probe(p, q, Formula::over(b, q), 1, {}, 0, 1);
    // The probe picks a b that does not occur in the inputs.
    CHECK(r.rhs.succedent != Formula::over(b, Formula::over(b, Formula::over(b, q))));
    REQUIRE(r.rhs_approximations);
    CHECK(r.rhs_approximations->verdict != BoundedVerdict::Unknown);
  }
}
