#include "lambek/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lambek/group_word.hpp"
#include "lambek/json_io.hpp"

namespace lambek {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  bool json = false;
  bool restrict = false;
  bool no_memo = false;
  std::size_t budget = 1'000'000;
  std::string fragment = "all";
  std::string emit_cert;

  ProverConfig config() const {
    ProverConfig c;
    c.depth_budget = budget;
    c.lambek_restriction = restrict;
    c.memo_enabled = !no_memo;
    c.fragment = parse_fragment(fragment);
    if (restrict) c.fragment = c.fragment.without(Connective::Unit);
    return c;
  }

  static Fragment parse_fragment(const std::string& text) {
    if (text == "all") return Fragment::all();
    if (text == "product-free") return Fragment::product_free();
    if (text == "multiplicative") return Fragment::multiplicative();
    Fragment f;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
      if (tok == "\\") f = f.with(Connective::Under);
      else if (tok == "/") f = f.with(Connective::Over);
      else if (tok == ".") f = f.with(Connective::Prod);
      else if (tok == "1") f = f.with(Connective::Unit);
      else if (tok == "|") f = f.with(Connective::Or);
      else if (tok == "&") f = f.with(Connective::And);
      else if (tok == "^*" || tok == "*") f = f.with(Connective::Star);
      else if (tok == "^+" || tok == "+") f = f.with(Connective::Plus);
      else throw UsageError("unknown connective in --fragment: " + tok);
    }
    return f;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_flag("--json", c.json, "Emit a structured record");
  sub->add_flag("--restrict", c.restrict, "Lambek's restriction: no empty antecedents");
  sub->add_flag("--no-memo", c.no_memo, "Disable memoization");
  sub->add_option("--budget", c.budget, "Prover expansion budget per query")->capture_default_str();
  sub->add_option("--fragment", c.fragment, "all, product-free, multiplicative or connective list")
      ->capture_default_str();
}

// A grammar argument is a file path if one exists, otherwise inline text
// with ';' separating rules.
Cfg load_grammar(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_cfg(ss.str());
  }
  std::string text = arg;
  std::replace(text.begin(), text.end(), ';', '\n');
  return parse_cfg(text);
}

std::string grammar_id(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return std::filesystem::path(arg).filename().string();
  return "inline";
}

void write_cert(const Common& c, const DerivationPtr& d) {
  if (c.emit_cert.empty() || !d) return;
  std::ofstream f(c.emit_cert);
  if (!f) throw UsageError("cannot write " + c.emit_cert);
  f << derivation_to_json(d).dump(2) << "\n";
}

std::string instance_text(const std::vector<Formula>& inst) {
  return inst.empty() ? "()" : render_sequence(inst);
}

int bounded_exit(BoundedVerdict v) {
  switch (v) {
    case BoundedVerdict::Refuted:
      return kExitNegative;
    case BoundedVerdict::Unknown:
      return kExitBudget;
    default:
      return kExitOk;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lambek calculus workbench"};
  app.require_subcommand(1);
  Common c;
  std::string input, input2, engine = "general", method = "unique", member_method = "cyk";
  std::size_t max_len = 4, bound = 3, up_to = 3, max_word_len = 0;
  std::optional<std::size_t> probe_approx;
  std::vector<std::string> formulas;
  int code = kExitOk;

  auto* fmt = app.add_subcommand("fmt", "Parse and print a formula or sequent canonically");
  fmt->add_option("input", input, "Formula or sequent")->required();
  add_common(fmt, c);

  auto* prove_cmd = app.add_subcommand("prove", "Decide a sequent");
  prove_cmd->add_option("sequent", input, "Sequent, e.g. \"p, p\\q -> q\"")->required();
  prove_cmd->add_option("--engine", engine, "general, focused or naive")
      ->check(CLI::IsMember({"general", "focused", "naive"}))
      ->capture_default_str();
  prove_cmd->add_option("--emit-cert", c.emit_cert, "Write the derivation as JSON to this file");
  add_common(prove_cmd, c);

  auto* fg = app.add_subcommand("fg", "Free-group interpretation");
  fg->add_option("input", input, "Formula or sequent")->required();
  add_common(fg, c);

  auto* gnf = app.add_subcommand("gnf", "Binary Greibach normal form");
  gnf->add_option("grammar", input, "Grammar file or inline rules separated by ';'")->required();
  add_common(gnf, c);

  auto* member = app.add_subcommand("member", "Word membership");
  member->add_option("grammar", input, "Grammar file or inline rules")->required();
  member->add_option("word", input2, "Word, letters separated by spaces")->required();
  member->add_option("--method", member_method, "cyk, gaifman or unique")
      ->check(CLI::IsMember({"cyk", "gaifman", "unique", "safiullin"}))
      ->capture_default_str();
  member->add_option("--emit-cert", c.emit_cert, "Write the acceptance derivation as JSON");
  add_common(member, c);

  auto* compile = app.add_subcommand("compile", "Compile a grammar into a Lambek grammar");
  compile->add_option("grammar", input, "Grammar file or inline rules")->required();
  compile->add_option("--method", method, "unique or gaifman")
      ->check(CLI::IsMember({"gaifman", "unique", "safiullin"}))
      ->capture_default_str();
  add_common(compile, c);

  auto* equiv = app.add_subcommand("equiv", "Compare CYK with Lambek acceptance");
  equiv->add_option("grammar", input, "Grammar file or inline rules")->required();
  equiv->add_option("--method", method, "unique or gaifman")
      ->check(CLI::IsMember({"gaifman", "unique", "safiullin"}))
      ->capture_default_str();
  equiv->add_option("--max-len", max_len, "Longest word to compare")->capture_default_str();
  add_common(equiv, c);

  auto* approx = app.add_subcommand("approx", "Check approximations 0..n");
  approx->add_option("sequent", input, "Sequent")->required();
  approx->add_option("--n,--up-to", up_to, "Highest approximation level")->capture_default_str();
  add_common(approx, c);

  auto* inst = app.add_subcommand("instances", "List instances of a *-external formula");
  inst->add_option("formula", input, "Formula")->required();
  inst->add_option("--bound", bound, "Unfolding bound per star")->capture_default_str();
  add_common(inst, c);

  auto* refute = app.add_subcommand("refute", "Check the bounded instances of a *-external sequent");
  refute->add_option("sequent", input, "Sequent")->required();
  refute->add_option("--bound", bound, "Unfolding bound per star")->capture_default_str();
  add_common(refute, c);

  auto* alt2 = app.add_subcommand("refute-alt2", "Bounded refutation of alternation completeness");
  alt2->add_option("grammar", input, "Two-letter grammar file or inline rules")->required();
  alt2->add_option("--bound", bound, "Word length bound")->capture_default_str();
  add_common(alt2, c);

  auto* probe = app.add_subcommand("probe", "Experimental probe of the product-free conjecture");
  probe->add_option("inputs", formulas, "Two-letter grammar, or the formulae A1 A2 H")->required();
  probe->add_option("--bound", bound, "Block and exponent bound")->capture_default_str();
  probe->add_option("--max-word-len", max_word_len, "Longest row word (0 = 2 * bound)");
  probe->add_option("--approx", probe_approx, "Also check approximations of the right side up to this level");
  add_common(probe, c);

  std::vector<std::string> argv_store{"lambek"};
  // A sequent with an empty antecedent starts with "->"; keep CLI11 from
  // reading it as an option.
  for (const auto& a : args) argv_store.push_back(a.rfind("->", 0) == 0 ? " " + a : a);
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    const ProverConfig cfg = c.config();
    if (fmt->parsed()) {
      if (input.find("->") != std::string::npos) {
        Sequent s = parse_sequent(input);
        if (c.json) out << to_json(s).dump(2) << "\n";
        else out << render_sequent(s) << "\n";
      } else {
        Formula f = parse_formula(input);
        if (c.json) out << Json{{"formula", render_formula(f)}, {"size", f.size()}}.dump(2) << "\n";
        else out << render_formula(f) << "\n";
      }
    } else if (prove_cmd->parsed()) {
      Sequent s = parse_sequent(input);
      ProveResult r = engine == "focused" ? prove_focused(s, cfg) : engine == "naive" ? naive_prove(s, cfg) : prove(s, cfg);
      write_cert(c, r.derivation);
      if (c.json) {
        out << to_json(r, s, true).dump(2) << "\n";
      } else {
        out << verdict_name(r.verdict) << "\n";
        if (r.derivation) out << render_derivation(r.derivation);
        if (!r.note.empty()) out << r.note << "\n";
      }
      if (r.verdict == Verdict::Unknown) code = kExitBudget;
    } else if (fg->parsed()) {
      if (input.find("->") != std::string::npos) {
        Sequent s = parse_sequent(input);
        GroupWord l = fg_interp(s.antecedent), r = fg_interp(s.succedent);
        if (c.json)
          out << Json{{"antecedent", l.str()}, {"succedent", r.str()}, {"balanced", l == r}}.dump(2) << "\n";
        else
          out << l.str() << "\n" << r.str() << "\n" << (l == r ? "balanced" : "unbalanced") << "\n";
      } else {
        GroupWord w = fg_interp(parse_formula(input));
        if (c.json) out << Json{{"word", w.str()}}.dump(2) << "\n";
        else out << w.str() << "\n";
      }
    } else if (gnf->parsed()) {
      GnfCfg n = to_gnf2(load_grammar(input));
      if (c.json) {
        Cfg back = gnf_to_cfg(n);
        out << Json{{"schema", kSchemaVersion}, {"kind", "gnf"}, {"grammar", render_cfg(back)}, {"warnings", n.warnings}}
                   .dump(2)
            << "\n";
      } else {
        out << render_gnf(n);
        for (const auto& w : n.warnings) err << "warning: " << w << "\n";
      }
    } else if (member->parsed()) {
      Cfg g = load_grammar(input);
      Word w = parse_word(input2, g.terminals);
      bool yes = false;
      std::size_t expansions = 0;
      if (member_method == "cyk") {
        yes = cyk_member(g, w);
      } else {
        auto m = parse_method(member_method);
        GnfCfg n = to_gnf2(g);
        LambekGrammar lg = *m == CompileMethod::Gaifman ? compile_gaifman(n) : as_lambek_grammar(compile_unique(n));
        FocusedProver prover(cfg);
        Acceptance a = accept_word(lg, w, prover);
        if (a.verdict == Verdict::Unknown) throw BudgetError("prover budget exhausted on '" + render_word(w) + "'");
        yes = a.verdict == Verdict::Proved;
        expansions = a.expansions;
        write_cert(c, a.derivation);
      }
      if (c.json)
        out << Json{{"schema", kSchemaVersion}, {"kind", "member"}, {"method", member_method}, {"word", render_word(w)},
                    {"member", yes}, {"expansions", expansions}}
                   .dump(2)
            << "\n";
      else
        out << (yes ? "member" : "not member") << "\n";
    } else if (compile->parsed()) {
      GnfCfg n = to_gnf2(load_grammar(input));
      if (*parse_method(method) == CompileMethod::Gaifman) {
        LambekGrammar lg = compile_gaifman(n);
        if (c.json) {
          out << to_json(lg).dump(2) << "\n";
        } else {
          out << "goal: " << render_formula(lg.goal) << "\n";
          for (const auto& [t, ks] : lg.lexicon)
            for (auto k : ks) out << t << " : " << render_formula(k) << "\n";
        }
      } else {
        CompiledGrammar cg = compile_unique(n);
        if (c.json) {
          out << to_json(cg).dump(2) << "\n";
        } else {
          out << "goal: " << render_formula(cg.goal) << "\n";
          for (const auto& [t, k] : cg.lexicon) out << t << " : " << render_formula(k) << "\n";
        }
      }
    } else if (equiv->parsed()) {
      EquivalenceReport r =
          equivalence_harness(load_grammar(input), *parse_method(method), max_len, cfg, grammar_id(input));
      if (c.json) out << to_json(r).dump(2) << "\n";
      else out << render_report(r);
      if (!r.passed()) code = kExitNegative;
    } else if (approx->parsed()) {
      ApproxReport r = check_approximations(parse_sequent(input), up_to, cfg);
      if (c.json) {
        out << to_json(r).dump(2) << "\n";
      } else {
        out << bounded_verdict_name(r.verdict);
        if (r.level) out << " at n = " << *r.level;
        out << "\n" << r.note << "\n";
      }
      code = bounded_exit(r.verdict);
    } else if (inst->parsed()) {
      InstanceStream st(parse_formula(input), bound);
      Json list = Json::array();
      while (auto x = st.next()) {
        if (c.json) list.push_back(instance_text(*x));
        else out << instance_text(*x) << "\n";
      }
      if (c.json)
        out << Json{{"schema", kSchemaVersion}, {"kind", "instance-list"}, {"bound", bound}, {"instances", list}}
                   .dump(2)
            << "\n";
    } else if (refute->parsed()) {
      InstanceReport r = check_instances(parse_sequent(input), bound, cfg);
      if (c.json) {
        out << to_json(r).dump(2) << "\n";
      } else {
        out << bounded_verdict_name(r.verdict) << "\n";
        if (r.witness) out << "witness: " << render_sequent(*r.witness) << "\n";
        out << r.note << "\n";
      }
      code = bounded_exit(r.verdict);
    } else if (alt2->parsed()) {
      Alt2Report r = refute_alt2(load_grammar(input), bound, cfg);
      if (c.json) {
        out << to_json(r).dump(2) << "\n";
      } else {
        out << bounded_verdict_name(r.verdict) << "\n";
        if (r.witness) {
          out << "word: " << render_word(r.witness->word) << "\n";
          out << "instance: " << render_sequent(r.witness->instance) << "\n";
          out << "trace: " << r.witness->trace << "\n";
        }
        out << "cyk: "
            << (r.cyk_missing ? "first missing word " + render_word(*r.cyk_missing) : std::string("no missing word"))
            << (r.consistent ? "" : " (inconsistent with the prover)") << "\n";
        out << r.note << "\n";
      }
      code = bounded_exit(r.verdict);
    } else if (probe->parsed()) {
      Formula a1, a2, h;
      if (formulas.size() == 3) {
        a1 = parse_formula(formulas[0]);
        a2 = parse_formula(formulas[1]);
        h = parse_formula(formulas[2]);
      } else if (formulas.size() == 1) {
        CompiledGrammar cg = compile_unique(to_gnf2(load_grammar(formulas[0])));
        if (cg.lexicon.size() != 2) throw AlphabetError("probe needs a two-letter grammar");
        a1 = cg.lexicon.begin()->second;
        a2 = std::next(cg.lexicon.begin())->second;
        h = cg.goal;
      } else {
        throw UsageError("probe takes a grammar or three formulae");
      }
      ProbeReport r = conjecture_probe(a1, a2, h, bound, cfg, max_word_len, probe_approx);
      if (c.json) {
        out << to_json(r).dump(2) << "\n";
      } else {
        out << r.status << "\n";
        for (const auto& row : r.rows)
          out << render_word(row.word) << "  " << verdict_name(row.lhs_verdict) << "  "
              << verdict_name(row.rhs_verdict) << "\n";
        out << "left " << bounded_verdict_name(r.lhs_verdict) << ", right " << bounded_verdict_name(r.rhs_verdict)
            << ", " << r.agreements << " agreements, " << r.disagreements << " disagreements\n";
        if (r.rhs_approximations)
          out << "right approximations: " << bounded_verdict_name(r.rhs_approximations->verdict) << "\n";
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const IndeterminateVerdict& e) {
    err << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    // Malformed input of any kind: formulas, grammars, fragments, shapes.
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return code;
}

}  // namespace lambek
