#include "lambek/compiler.hpp"

#include <algorithm>

#include "lambek/group_word.hpp"

namespace lambek {

CompilerContext::CompilerContext() {
  x_ = fresh("x");
  z_ = fresh("z");
  u_ = fresh("u");
  t_ = fresh("t");
  v_ = fresh("v");
  w_ = fresh("w");
  s_ = fresh("s");
}

Variable CompilerContext::fresh(std::string_view base) {
  auto it = next_.find(base);
  if (it == next_.end()) it = next_.emplace(std::string(base), 1).first;
  Variable v = Variable::make(base, it->second++);
  allocated_.push_back(v);
  return v;
}

std::array<Variable, 3>& CompilerContext::pqr(std::size_t i) {
  auto it = pqr_.find(i);
  if (it == pqr_.end()) {
    std::string n = std::to_string(i);
    it = pqr_.emplace(i, std::array<Variable, 3>{fresh("p" + n), fresh("q" + n), fresh("r" + n)}).first;
  }
  return it->second;
}

Variable CompilerContext::p(std::size_t i) { return pqr(i)[0]; }
Variable CompilerContext::q(std::size_t i) { return pqr(i)[1]; }
Variable CompilerContext::r(std::size_t i) { return pqr(i)[2]; }

IsConstruction build_is_formula(std::span<const Formula> u_set, CompilerContext& ctx,
                                const JoinOptions& opt) {
  if (u_set.empty()) throw CompileError("is(U) needs a non-empty set U");
  for (auto a : u_set)
    if (!a.fg_defined() || !zero_balanced(a))
      throw CompileError("member " + render_formula(a) + " is not zero-balanced");
  IsConstruction is;
  is.members.assign(u_set.begin(), u_set.end());
  is.sentinel = sentinel(ctx.t(), ctx.v(), ctx.w());
  const Formula sf = is.sentinel;
  const std::size_t n = u_set.size();
  is.e.push_back(sf);
  for (auto a : u_set) {
    is.e.push_back(a);
    is.e.push_back(sf);
  }
  for (std::size_t i = 0; i < n; ++i) {
    is.f_problem.inputs.emplace_back(is.e.begin() + static_cast<std::ptrdiff_t>(2 * i), is.e.end());
    is.g_problem.inputs.emplace_back(is.e.begin(), is.e.begin() + static_cast<std::ptrdiff_t>(2 * i + 3));
  }
  is.f_problem.variable_budget = {ctx.fresh("f")};
  is.g_problem.variable_budget = {ctx.fresh("g")};
  is.f = join(is.f_problem, opt);
  is.g = join(is.g_problem, opt);

  Formula u = Formula::atom(ctx.u());
  is.b = is.e;
  // ((u/F)\u)\S
  is.b.push_back(Formula::under(Formula::under(Formula::over(u, is.f.join), u), sf));
  // S/(u/(G\u))
  is.c.push_back(Formula::over(sf, Formula::over(u, Formula::under(is.g.join, u))));
  is.c.insert(is.c.end(), is.e.begin(), is.e.end());

  std::vector<Formula> left{curried_division({}, ctx.s(), is.e)};
  left.insert(left.end(), is.b.begin(), is.b.end());
  is.formula = curried_division(left, ctx.s(), is.c);
  return is;
}

CompiledGrammar compile_unique(const GnfCfg& g, const JoinOptions& opt) {
  check_gnf_shape(g);
  if (g.rules.empty()) throw CompileError("grammar has no rules");
  for (const auto& t : g.terminals) {
    bool used = std::any_of(g.rules.begin(), g.rules.end(), [&](const GnfRule& r) { return r.terminal == t; });
    if (!used) throw CompileError("terminal '" + t + "' occurs in no rule");
  }
  CompilerContext ctx;
  CompiledGrammar cg;
  cg.terminals = g.terminals;
  cg.nonterminals = g.nonterminals;
  Formula z = Formula::atom(ctx.z());
  Formula zz = Formula::over(z, z);
  for (std::size_t i = 0; i < g.nonterminals.size(); ++i) {
    cg.sentinels.push_back(sentinel(ctx.p(i), ctx.q(i), ctx.r(i)));
    cg.h.push_back(Formula::over(zz, cg.sentinels.back()));
  }
  for (const auto& t : g.terminals) {
    TerminalPart part;
    part.terminal = t;
    std::vector<Formula> u_set;
    for (std::size_t ri = 0; ri < g.rules.size(); ++ri) {
      const GnfRule& r = g.rules[ri];
      if (r.terminal != t) continue;
      part.rules.push_back(ri);
      std::vector<Formula> den;
      if (r.k) den.push_back(cg.h[*r.k]);
      if (r.l) den.push_back(cg.h[*r.l]);
      den.push_back(cg.sentinels[r.lhs]);
      u_set.push_back(raise(den, ctx.x()));
    }
    part.is = build_is_formula(u_set, ctx, opt);
    part.k = Formula::over(zz, part.is.formula);
    cg.lexicon[t] = part.k;
    cg.parts.push_back(std::move(part));
  }
  cg.goal = cg.h[0];
  return cg;
}

LambekGrammar compile_gaifman(const GnfCfg& g) {
  check_gnf_shape(g);
  auto atom = [](std::size_t i) { return Formula::atom("n" + std::to_string(i), 1); };
  LambekGrammar lg;
  for (const auto& r : g.rules) {
    Formula f = atom(r.lhs);
    if (r.l) f = Formula::over(f, atom(*r.l));
    if (r.k) f = Formula::over(f, atom(*r.k));
    auto& types = lg.lexicon[r.terminal];
    if (std::find(types.begin(), types.end(), f) == types.end()) types.push_back(f);
  }
  lg.goal = atom(0);
  return lg;
}

LambekGrammar as_lambek_grammar(const CompiledGrammar& cg) {
  LambekGrammar lg;
  for (const auto& [t, f] : cg.lexicon) lg.lexicon[t] = {f};
  lg.goal = cg.goal;
  return lg;
}

Acceptance accept_word(const LambekGrammar& g, const Word& w, FocusedProver& prover) {
  if (w.empty()) throw CfgError("acceptance is defined for non-empty words only");
  std::vector<const std::vector<Formula>*> choices;
  for (const auto& a : w) {
    auto it = g.lexicon.find(a);
    if (it == g.lexicon.end() || it->second.empty()) throw CfgError("letter '" + a + "' is not in the lexicon");
    choices.push_back(&it->second);
  }
  Acceptance out;
  out.verdict = Verdict::Refuted;
  std::vector<std::size_t> idx(w.size(), 0);
  while (true) {
    Sequent s;
    s.succedent = g.goal;
    for (std::size_t i = 0; i < w.size(); ++i) s.antecedent.push_back((*choices[i])[idx[i]]);
    auto r = prover.prove(s);
    out.expansions += r.expansions;
    if (r.proved()) {
      out.verdict = Verdict::Proved;
      out.types = s.antecedent;
      out.derivation = r.derivation;
      return out;
    }
    if (r.verdict == Verdict::Unknown) out.verdict = Verdict::Unknown;
    std::size_t i = w.size();
    while (i > 0) {
      --i;
      if (++idx[i] < choices[i]->size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
  }
}

bool accepts(const LambekGrammar& g, const Word& w, const ProverConfig& cfg) {
  FocusedProver prover(cfg);
  auto a = accept_word(g, w, prover);
  if (a.verdict == Verdict::Unknown)
    throw IndeterminateVerdict("prover budget exhausted on '" + render_word(w) + "'");
  return a.verdict == Verdict::Proved;
}

bool accepts(const CompiledGrammar& g, const Word& w, const ProverConfig& cfg) {
  return accepts(as_lambek_grammar(g), w, cfg);
}

}  // namespace lambek
