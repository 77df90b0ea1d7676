#include <doctest.h>

#include <set>

#include "lambek/compiler.hpp"
#include "lambek/group_word.hpp"

using namespace lambek;

namespace {

GnfCfg gnf(const char* text) { return to_gnf2(parse_cfg(text)); }

const char* kG1 = "S -> a\n";
const char* kG2 = "S -> a S | a\n";
const char* kG3 = "S -> a S b | a b\n";

bool focused(const std::vector<Formula>& g, Formula f) {
  ProverConfig pc;
  pc.depth_budget = 50'000'000;
  auto r = prove_focused(Sequent{g, f}, pc);
  REQUIRE(r.verdict != Verdict::Unknown);
  return r.proved();
}

// All words over the alphabet with 1 <= length <= n.
std::vector<Word> words_upto(const std::vector<std::string>& alphabet, std::size_t n) {
  std::vector<Word> out, layer{{}};
  for (std::size_t len = 1; len <= n; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (const auto& a : alphabet) {
        Word x = w;
        x.push_back(a);
        next.push_back(x);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("compiler context hands out distinct fresh variables") {
  CompilerContext ctx;
  std::set<Variable> seen;
  for (auto v : {ctx.x(), ctx.z(), ctx.u(), ctx.t(), ctx.v(), ctx.w(), ctx.s()}) {
    CHECK(v.generation() > 0);
    CHECK(seen.insert(v).second);
  }
  for (std::size_t i = 0; i < 3; ++i)
    for (auto v : {ctx.p(i), ctx.q(i), ctx.r(i)}) CHECK(seen.insert(v).second);
  CHECK(ctx.p(1) == ctx.p(1));
  Variable f1 = ctx.fresh("f"), f2 = ctx.fresh("f");
  CHECK(f1 != f2);
  CHECK(ctx.allocated().size() == seen.size() + 2);
}

TEST_CASE("single-rule grammar") {
  CompiledGrammar cg = compile_unique(gnf(kG1));
  REQUIRE(cg.lexicon.size() == 1);
  REQUIRE(cg.parts.size() == 1);
  const auto& is = cg.parts[0].is;
  REQUIRE(is.members.size() == 1);
  Formula s0 = cg.sentinels[0];
  Variable x = top_of(is.members[0]);
  CHECK(is.members[0] == Formula::over(Formula::atom(x), Formula::under(s0, Formula::atom(x))));
  // |U| = 1: E = S, A1, S and both families are {E}.
  REQUIRE(is.e.size() == 3);
  CHECK(is.e[0] == is.sentinel);
  CHECK(is.e[1] == is.members[0]);
  CHECK(is.e[2] == is.sentinel);
  CHECK(is.f_problem.inputs == std::vector<std::vector<Formula>>{is.e});
  CHECK(is.g_problem.inputs == std::vector<std::vector<Formula>>{is.e});
  CHECK(cg.goal == cg.h[0]);

  CHECK(accepts(cg, Word{"a"}));
  CHECK_FALSE(accepts(cg, Word{"a", "a"}));
  CHECK_FALSE(accepts(cg, Word{"a", "a", "a"}));
}

TEST_CASE("tops, zero balance and sentinel laws on the corpus") {
  for (const char* text : {kG1, kG2, kG3}) {
    INFO(text);
    CompiledGrammar cg = compile_unique(gnf(text));
    Variable z = top_of(cg.goal);
    for (const auto& [t, k] : cg.lexicon) {
      CHECK(top_of(k) == z);
      CHECK(zero_balanced(k));
    }
    for (std::size_t i = 0; i < cg.h.size(); ++i) {
      CHECK(top_of(cg.h[i]) == z);
      CHECK(zero_balanced(cg.h[i]));
      Spine sp = unfold_spine(cg.sentinels[i]);
      CHECK(top_of(cg.sentinels[i]) == sp.core.var());
      Formula s = cg.sentinels[i];
      CHECK(focused({s}, s));
      CHECK_FALSE(focused({}, s));
      CHECK_FALSE(focused({s, s}, s));
    }
    std::set<Variable> xs;
    for (const auto& part : cg.parts) {
      for (auto a : part.is.members) {
        CHECK(zero_balanced(a));
        xs.insert(top_of(a));
      }
      // Formulae of B and C have tops x or w.
      Variable w = top_of(part.is.sentinel);
      for (const auto* seq : {&part.is.b, &part.is.c})
        for (auto f : *seq) {
          Variable t = top_of(f);
          CHECK((t == w || xs.count(t) > 0));
        }
    }
    CHECK(xs.size() == 1);
  }
}

TEST_CASE("unique assignment and the Gaifman contrast") {
  for (const char* text : {kG1, kG2, kG3}) {
    GnfCfg g = gnf(text);
    CompiledGrammar cg = compile_unique(g);
    LambekGrammar lg = as_lambek_grammar(cg);
    CHECK(lg.lexicon.size() == g.terminals.size());
    for (const auto& [t, types] : lg.lexicon) CHECK(types.size() == 1);
  }
  LambekGrammar g3 = compile_gaifman(gnf(kG3));
  // S -> a S B | a B, B -> b with S = n0, B = n1.
  Formula n0 = Formula::atom("n0", 1), n1 = Formula::atom("n1", 1);
  REQUIRE(g3.lexicon.count("a"));
  CHECK(g3.lexicon["a"] == std::vector<Formula>{Formula::over(Formula::over(n0, n1), n0), Formula::over(n0, n1)});
  CHECK(g3.lexicon["b"] == std::vector<Formula>{n1});
  CHECK(g3.goal == n0);
  LambekGrammar g1 = compile_gaifman(gnf(kG1));
  CHECK(g1.lexicon["a"] == std::vector<Formula>{n0});
}

TEST_CASE("members prove is(U) and the construction pins") {
  for (const char* text : {kG1, kG2, kG3}) {
    INFO(text);
    CompiledGrammar cg = compile_unique(gnf(text));
    std::vector<Formula> ks;
    for (const auto& [t, k] : cg.lexicon) ks.push_back(k);
    for (const auto& part : cg.parts) {
      const auto& is = part.is;
      for (auto a : is.members) CHECK(focused({a}, is.formula));
      CHECK_FALSE(focused({}, is.formula));
      for (auto k : ks) {
        CHECK_FALSE(focused({k}, is.formula));
        for (auto k2 : ks) CHECK_FALSE(focused({k, k2}, is.formula));
      }
      // Suffixes of B followed by lexical types.
      for (std::size_t from = 0; from <= is.b.size(); ++from) {
        std::vector<Formula> suffix(is.b.begin() + static_cast<std::ptrdiff_t>(from), is.b.end());
        CHECK_FALSE(focused(suffix, is.formula));
        for (auto k : ks) {
          auto g = suffix;
          g.push_back(k);
          CHECK_FALSE(focused(g, is.formula));
        }
      }
      CHECK(verify_certificate(is.f_problem, is.f));
      CHECK(verify_certificate(is.g_problem, is.g));
      for (std::size_t i = 0; i < is.f_problem.inputs.size(); ++i) {
        CHECK(focused(is.f_problem.inputs[i], is.f.join));
        CHECK(focused(is.g_problem.inputs[i], is.g.join));
      }
    }
  }
}

TEST_CASE("compiled acceptance agrees with CYK") {
  struct Case {
    const char* text;
    std::size_t max_len;
  };
  for (Case c : {Case{kG1, 4}, Case{kG2, 4}, Case{kG3, 4}}) {
    INFO(c.text);
    Cfg g = parse_cfg(c.text);
    GnfCfg n = to_gnf2(g);
    LambekGrammar uni = as_lambek_grammar(compile_unique(n));
    LambekGrammar gai = compile_gaifman(n);
    ProverConfig pc;
    pc.depth_budget = 50'000'000;
    FocusedProver pu(pc), pg(pc);
    Recognizer rec(g);
    std::size_t accepted = 0;
    for (const auto& w : words_upto(g.terminals, c.max_len)) {
      INFO(render_word(w));
      bool expected = rec.accepts(w);
      auto au = accept_word(uni, w, pu);
      auto ag = accept_word(gai, w, pg);
      REQUIRE(au.verdict != Verdict::Unknown);
      REQUIRE(ag.verdict != Verdict::Unknown);
      CHECK((au.verdict == Verdict::Proved) == expected);
      CHECK((ag.verdict == Verdict::Proved) == expected);
      if (au.verdict == Verdict::Proved) {
        CHECK(check_derivation(au.derivation));
        CHECK(au.types.size() == w.size());
      }
      accepted += expected;
    }
    CHECK(accepted > 0);
  }
}

TEST_CASE("compiler errors") {
  // b occurs in no rule.
  Cfg g = parse_cfg("S -> a\nT -> b\n");
  GnfCfg n = to_gnf2(g);
  CHECK_THROWS_AS(compile_unique(n), CompileError);
  GnfCfg empty;
  empty.nonterminals = {"S"};
  empty.terminals = {"a"};
  CHECK_THROWS_AS(compile_unique(empty), CompileError);

  CompilerContext ctx;
  CHECK_THROWS_AS(build_is_formula({}, ctx), CompileError);
  std::vector<Formula> bad{Formula::atom("p")};
  CHECK_THROWS_AS(build_is_formula(bad, ctx), CompileError);

  CompiledGrammar cg = compile_unique(gnf(kG1));
  CHECK_THROWS_AS(accepts(cg, Word{}), CfgError);
  CHECK_THROWS_AS(accepts(cg, Word{"b"}), CfgError);
  ProverConfig tiny;
  tiny.depth_budget = 3;
  CHECK_THROWS_AS(accepts(cg, Word{"a", "a"}, tiny), IndeterminateVerdict);
}
