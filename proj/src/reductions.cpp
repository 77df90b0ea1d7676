#include "lambek/reductions.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace lambek {

std::string_view method_name(CompileMethod m) { return m == CompileMethod::Gaifman ? "gaifman" : "unique"; }

std::optional<CompileMethod> parse_method(std::string_view text) {
  if (text == "gaifman") return CompileMethod::Gaifman;
  if (text == "unique" || text == "safiullin") return CompileMethod::Unique;
  return std::nullopt;
}

Sequent alt2_sequent(const CompiledGrammar& cg) {
  if (cg.lexicon.size() != 2)
    throw AlphabetError("the alternation sequent needs exactly two terminals, got " +
                        std::to_string(cg.lexicon.size()));
  // std::map keeps the smaller terminal first.
  Formula k1 = cg.lexicon.begin()->second, k2 = std::next(cg.lexicon.begin())->second;
  return Sequent{{Formula::plus(Formula::prod(Formula::plus(k1), Formula::plus(k2)))}, cg.goal};
}

std::vector<Word> alternation_words(const std::string& a1, const std::string& a2, std::size_t max_len) {
  std::vector<Word> out;
  for (std::size_t len = 2; len <= max_len; ++len) {
    // Every word of this length over {a1, a2} in lexicographic order, kept
    // when it starts with a1 and ends with a2.
    for (std::size_t mask = 0; mask < (std::size_t{1} << len); ++mask) {
      Word w;
      for (std::size_t i = 0; i < len; ++i) w.push_back((mask >> (len - 1 - i)) & 1 ? a2 : a1);
      if (w.front() == a1 && w.back() == a2) out.push_back(std::move(w));
    }
  }
  return out;
}

Alt2Report refute_alt2(const Cfg& g, std::size_t word_len_bound, const ProverConfig& cfg) {
  if (g.terminals.size() != 2)
    throw AlphabetError("alternation needs exactly two terminals, got " + std::to_string(g.terminals.size()));
  std::vector<std::string> sigma = g.terminals;
  std::sort(sigma.begin(), sigma.end());
  CompiledGrammar cg = compile_unique(to_gnf2(g));
  Sequent s = alt2_sequent(cg);

  Alt2Report rep;
  InstanceReport ir = check_instances(s, word_len_bound, cfg, word_len_bound);
  rep.verdict = ir.verdict;
  rep.instances_checked = ir.checked;
  rep.expansions = ir.expansions;
  rep.note = ir.note;
  if (ir.witness) {
    // Leaves of (K1^+ . K2^+)^+ are K1 (index 0) and K2 (index 1).
    RefutationWitness w;
    w.instance = *ir.witness;
    for (std::size_t c : ir.witness_codes) w.word.push_back(sigma[c]);
    if (ir.verdict == BoundedVerdict::Refuted) {
      w.trace = "focused search exhausted; " + std::to_string(ir.expansions) + " expansions over " +
                std::to_string(ir.checked) + " instances";
      w.membership = instance_soundness(s.antecedent[0], w.instance.antecedent);
    } else {
      w.trace = ir.note;
    }
    rep.witness = std::move(w);
  }

  Recognizer rec(g);
  for (const auto& w : alternation_words(sigma[0], sigma[1], word_len_bound))
    if (!rec.accepts(w)) {
      rep.cyk_missing = w;
      break;
    }
  if (rep.verdict == BoundedVerdict::Refuted)
    rep.consistent = rep.cyk_missing && rep.witness && rep.witness->word == *rep.cyk_missing;
  else if (rep.verdict == BoundedVerdict::Unrefuted)
    rep.consistent = !rep.cyk_missing;
  return rep;
}

namespace {

// All non-empty words up to max_len, shortest first, then lexicographic.
std::vector<Word> all_words(std::vector<std::string> sigma, std::size_t max_len) {
  std::sort(sigma.begin(), sigma.end());
  std::vector<Word> out, layer{{}};
  for (std::size_t len = 1; len <= max_len && !sigma.empty(); ++len) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (const auto& a : sigma) {
        Word x = w;
        x.push_back(a);
        next.push_back(std::move(x));
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

EquivalenceReport equivalence_harness(const Cfg& g, CompileMethod method, std::size_t max_len,
                                      const ProverConfig& cfg, std::string grammar_id) {
  EquivalenceReport rep;
  rep.grammar_id = std::move(grammar_id);
  rep.method = method;
  rep.max_len = max_len;

  auto t0 = std::chrono::steady_clock::now();
  LambekGrammar lg;
  try {
    GnfCfg n = to_gnf2(g);
    if (method == CompileMethod::Gaifman) {
      lg = compile_gaifman(n);
    } else {
      CompiledGrammar cg = compile_unique(n);
      for (const auto& part : cg.parts) {
        for (const auto* pc : {&part.is.f_problem, &part.is.g_problem}) {
          const JoinCertificate& c = pc == &part.is.f_problem ? part.is.f : part.is.g;
          if (!verify_certificate(*pc, c)) {
            rep.error = "join certificate for terminal '" + part.terminal + "' fails verification";
            return rep;
          }
          ++rep.joins_verified;
        }
      }
      lg = as_lambek_grammar(cg);
    }
  } catch (const std::exception& e) {
    rep.error = e.what();
    return rep;
  }
  rep.compile_seconds = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  Recognizer rec(g);
  std::size_t current_len = 0;
  std::optional<FocusedProver> prover;
  for (const auto& w : all_words(g.terminals, max_len)) {
    // A fresh memo per length keeps memory flat on long runs.
    if (w.size() != current_len) {
      prover.emplace(cfg);
      current_len = w.size();
    }
    WordRow row{w, rec.accepts(w), Verdict::Unknown, 0};
    auto a = accept_word(lg, w, *prover);
    row.lambek = a.verdict;
    row.expansions = a.expansions;
    if (a.verdict == Verdict::Unknown)
      throw IndeterminateVerdict("prover budget exhausted on '" + render_word(w) + "'");
    if ((a.verdict == Verdict::Proved) != row.cyk) rep.mismatches.push_back(w);
    rep.rows.push_back(std::move(row));
  }
  rep.check_seconds = seconds_since(t0);
  return rep;
}

std::string render_report(const EquivalenceReport& r) {
  std::ostringstream os;
  os << "grammar " << (r.grammar_id.empty() ? "-" : r.grammar_id) << ", method " << method_name(r.method)
     << ", words up to length " << r.max_len << "\n";
  if (!r.error.empty()) {
    os << "error: " << r.error << "\n";
    return os.str();
  }
  os << "cyk lambek word\n";
  for (const auto& row : r.rows)
    os << "  " << (row.cyk ? "+" : "-") << "     " << (row.lambek == Verdict::Proved ? "+" : "-") << "   "
       << render_word(row.word) << "\n";
  os << r.rows.size() << " words, " << r.mismatches.size() << " mismatches";
  if (r.method == CompileMethod::Unique) os << ", " << r.joins_verified << " joins verified";
  os << "\n";
  return os.str();
}

std::vector<Sequent> vee_elimination_chain(Formula a1, Formula a2, Formula h) {
  Formula both = Formula::disj(a1, a2);
  Formula blocks = Formula::prod(Formula::star(Formula::prod(Formula::star(a1), a2)), Formula::star(a1));
  return {
      Sequent{{Formula::star(both), both}, h},
      Sequent{{blocks, both}, h},
      Sequent{{blocks}, Formula::over(h, both)},
      Sequent{{blocks}, Formula::conj(Formula::over(h, a1), Formula::over(h, a2))},
  };
}

namespace {

Formula fresh_b(Formula a1, Formula a2, Formula h) {
  std::uint32_t gen = 0;
  for (Formula f : {a1, a2, h})
    for (Variable v : variables_of(f))
      if (v.name() == "b") gen = std::max(gen, v.generation() + 1);
  return Formula::atom("b", gen);
}

// Block exponents of an alternation word.
std::vector<std::size_t> exponents(const Word& w) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i == 0 || w[i] != w[i - 1]) out.push_back(0);
    ++out.back();
  }
  return out;
}

Verdict decide(const Sequent& s, const ProverConfig& cfg) { return prove(s, cfg).verdict; }

}  // namespace


static BoundedVerdict summarize(const std::vector<ProbeRow>& rows, Verdict ProbeRow::*side) {
  bool unknown = false;
  for (const auto& r : rows) {
    if (r.*side == Verdict::Refuted) return BoundedVerdict::Refuted;
    unknown |= r.*side == Verdict::Unknown;
  }
  return unknown ? BoundedVerdict::Unknown : BoundedVerdict::Unrefuted;
}

ProbeReport conjecture_probe(Formula a1, Formula a2, Formula h, std::size_t bound, const ProverConfig& cfg,
                             std::size_t max_word_len, std::optional<std::size_t> approx_up_to) {
  if (max_word_len == 0) max_word_len = 2 * bound;
  ProbeReport rep;
  Formula b = fresh_b(a1, a2, h);
  Formula goal = Formula::over(b, Formula::over(b, h));
  auto x = [&](Formula d1, Formula d2) { return Formula::over(b, Formula::over(Formula::over(b, d2), d1)); };
  rep.lhs = Sequent{{Formula::plus(Formula::prod(Formula::plus(a1), Formula::plus(a2)))}, h};
  rep.rhs = Sequent{{Formula::plus(x(Formula::plus(a1), Formula::plus(a2)))}, goal};
  rep.status = "conjecture (open): equiderivability of the two sides is unproved; this report is evidence only";

  const bool focused_lhs = a1.product_free() && a2.product_free() && h.product_free();
  std::optional<FocusedProver> fp;
  if (focused_lhs) fp.emplace(cfg);
  for (const auto& w : alternation_words("a1", "a2", std::min(max_word_len, 2 * bound * bound))) {
    auto ex = exponents(w);
    if (ex.size() > 2 * bound || std::any_of(ex.begin(), ex.end(), [&](std::size_t e) { return e > bound; }))
      continue;
    ProbeRow row;
    row.word = w;
    row.lhs.succedent = h;
    row.rhs.succedent = goal;
    for (std::size_t i = 0; i < ex.size(); i += 2) {
      row.lhs.antecedent.insert(row.lhs.antecedent.end(), ex[i], a1);
      row.lhs.antecedent.insert(row.lhs.antecedent.end(), ex[i + 1], a2);
      row.rhs.antecedent.push_back(x(power(a1, ex[i]), power(a2, ex[i + 1])));
    }
    row.lhs_verdict = fp ? fp->prove(row.lhs).verdict : decide(row.lhs, cfg);
    row.rhs_verdict = decide(row.rhs, cfg);
    if (row.lhs_verdict != Verdict::Unknown && row.rhs_verdict != Verdict::Unknown)
      ++(row.lhs_verdict == row.rhs_verdict ? rep.agreements : rep.disagreements);
    rep.rows.push_back(std::move(row));
  }
  rep.lhs_verdict = summarize(rep.rows, &ProbeRow::lhs_verdict);
  rep.rhs_verdict = summarize(rep.rows, &ProbeRow::rhs_verdict);
  if (approx_up_to) rep.rhs_approximations = check_approximations(rep.rhs, *approx_up_to, cfg);
  return rep;
}

}  // namespace lambek
