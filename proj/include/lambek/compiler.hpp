#pragma once

// Compilation of binary-GNF grammars into Lambek grammars: the classical
// Gaifman assignment and the unique type assignment built from sentinels
// and is(U) formulae.

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambek/cfg.hpp"
#include "lambek/formula.hpp"
#include "lambek/join.hpp"
#include "lambek/prover.hpp"

namespace lambek {

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hands out variables that are pairwise distinct and never generation 0,
/// so they cannot clash with user variables.
class CompilerContext {
 public:
  CompilerContext();

  /// Next unused generation of `base`.
  Variable fresh(std::string_view base);

  Variable x() const { return x_; }
  Variable z() const { return z_; }
  Variable u() const { return u_; }
  Variable t() const { return t_; }
  Variable v() const { return v_; }
  Variable w() const { return w_; }
  Variable s() const { return s_; }
  /// Sentinel parameters of nonterminal i, allocated on first use.
  Variable p(std::size_t i);
  Variable q(std::size_t i);
  Variable r(std::size_t i);

  const std::vector<Variable>& allocated() const { return allocated_; }

 private:
  std::map<std::string, std::uint32_t, std::less<>> next_;
  std::vector<Variable> allocated_;
  std::map<std::size_t, std::array<Variable, 3>> pqr_;
  Variable x_, z_, u_, t_, v_, w_, s_;
  std::array<Variable, 3>& pqr(std::size_t i);
};

/// Pieces of is(U) for one set U = A_1..A_n.
struct IsConstruction {
  std::vector<Formula> members;
  Formula sentinel;  // S_{t,v,w}
  std::vector<Formula> e;
  std::vector<Formula> b;
  std::vector<Formula> c;
  JoinProblem f_problem;  // {E_{i+}}
  JoinProblem g_problem;  // {E_{i-}}
  JoinCertificate f;
  JoinCertificate g;
  Formula formula;
};

IsConstruction build_is_formula(std::span<const Formula> u_set, CompilerContext& ctx,
                                const JoinOptions& opt = {});

struct TerminalPart {
  std::string terminal;
  /// Indices into GnfCfg::rules, in declaration order.
  std::vector<std::size_t> rules;
  IsConstruction is;
  Formula k;
};

struct CompiledGrammar {
  std::vector<std::string> terminals;
  std::map<std::string, Formula> lexicon;
  Formula goal;
  std::vector<std::string> nonterminals;
  std::vector<Formula> sentinels;  // S_{p_i,q_i,r_i}
  std::vector<Formula> h;          // H_i
  std::vector<TerminalPart> parts;
};

struct LambekGrammar {
  std::map<std::string, std::vector<Formula>> lexicon;
  Formula goal;
};

/// Throws CompileError for an empty grammar or a terminal used by no rule;
/// JoinError propagates from join synthesis.
CompiledGrammar compile_unique(const GnfCfg& g, const JoinOptions& opt = {});

/// N_i => a ↦ n_i, N_i => a N_k ↦ n_i/n_k, N_i => a N_k N_l ↦ (n_i/n_l)/n_k.
LambekGrammar compile_gaifman(const GnfCfg& g);

LambekGrammar as_lambek_grammar(const CompiledGrammar& cg);

/// The prover ran out of budget on every remaining type choice.
class IndeterminateVerdict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Acceptance {
  Verdict verdict = Verdict::Unknown;
  /// The type choice that was proved, when Proved.
  std::vector<Formula> types;
  DerivationPtr derivation;
  std::size_t expansions = 0;
};

/// Tries every type choice with the focused prover. Throws CfgError for an
/// empty word or a letter outside the lexicon.
Acceptance accept_word(const LambekGrammar& g, const Word& w, FocusedProver& prover);

bool accepts(const LambekGrammar& g, const Word& w, const ProverConfig& cfg = {});
bool accepts(const CompiledGrammar& g, const Word& w, const ProverConfig& cfg = {});

}  // namespace lambek
