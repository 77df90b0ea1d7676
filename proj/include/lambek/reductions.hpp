#pragma once

// Executable reductions: the ALT2 sequent and its bounded refutation, the
// CYK-versus-Lambek equivalence harness, the disjunction-elimination chain
// and an experimental probe of the product-free conjecture.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lambek/cfg.hpp"
#include "lambek/compiler.hpp"
#include "lambek/star.hpp"

namespace lambek {

enum class CompileMethod : std::uint8_t { Gaifman, Unique };

std::string_view method_name(CompileMethod m);
/// Accepts "gaifman", "unique" and "safiullin".
std::optional<CompileMethod> parse_method(std::string_view text);

/// Lexicon domain is not exactly two terminals.
class AlphabetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (K1^+ . K2^+)^+ -> H0, with K1 the type of the smaller terminal.
Sequent alt2_sequent(const CompiledGrammar& cg);

/// a1^n1 a2^m1 ... a1^nk a2^mk with all exponents >= 1, up to length
/// max_len, shortest first and then lexicographically (a1 < a2).
std::vector<Word> alternation_words(const std::string& a1, const std::string& a2, std::size_t max_len);

struct RefutationWitness {
  Sequent instance;
  Word word;
  /// Search record of the refutation.
  std::string trace;
  /// instance -> (K1^+ . K2^+)^+, checked.
  DerivationPtr membership;
};

struct Alt2Report {
  BoundedVerdict verdict = BoundedVerdict::Unrefuted;
  std::optional<RefutationWitness> witness;
  std::size_t instances_checked = 0;
  std::size_t expansions = 0;
  /// First alternation word within the bound that CYK rejects.
  std::optional<Word> cyk_missing;
  /// The prover and CYK agree on the first missing word.
  bool consistent = true;
  std::string note;
};

/// to_gnf2, compile_unique, alt2_sequent, check_instances with star bound
/// and instance length both equal to word_len_bound. Throws AlphabetError
/// unless g has exactly two terminals.
Alt2Report refute_alt2(const Cfg& g, std::size_t word_len_bound, const ProverConfig& cfg = {});

struct WordRow {
  Word word;
  bool cyk = false;
  Verdict lambek = Verdict::Unknown;
  std::size_t expansions = 0;
};

struct EquivalenceReport {
  std::string grammar_id;
  CompileMethod method = CompileMethod::Unique;
  std::size_t max_len = 0;
  std::vector<WordRow> rows;
  std::vector<Word> mismatches;
  /// Join certificates re-verified after compilation (unique method).
  std::size_t joins_verified = 0;
  /// Compilation or certificate failure; empty on success.
  std::string error;
  double compile_seconds = 0;
  double check_seconds = 0;

  bool passed() const { return error.empty() && mismatches.empty(); }
};

/// Compares CYK on g with Lambek acceptance of the compiled grammar on every
/// non-empty word up to max_len. Throws IndeterminateVerdict if the prover
/// runs out of budget on any word.
EquivalenceReport equivalence_harness(const Cfg& g, CompileMethod method, std::size_t max_len,
                                      const ProverConfig& cfg = {}, std::string grammar_id = {});

std::string render_report(const EquivalenceReport& r);

/// (A1|A2)^*, A1|A2 -> H through to (A1^* . A2)^* . A1^* -> (H/A1) & (H/A2).
std::vector<Sequent> vee_elimination_chain(Formula a1, Formula a2, Formula h);

struct ProbeRow {
  Word word;
  /// A1^n1, A2^m1, ... -> H.
  Sequent lhs;
  /// X(n1,m1), ... -> b/(b/H) with X(n,m) = b/((b/A2^m)/A1^n). X(n,m)
  /// derives b/((b/A2^+)/A1^+), so refuting a row refutes that side.
  Sequent rhs;
  Verdict lhs_verdict = Verdict::Unknown;
  Verdict rhs_verdict = Verdict::Unknown;
};

struct ProbeReport {
  Sequent lhs;  // (A1^+ . A2^+)^+ -> H
  Sequent rhs;  // (b/((b/A2^+)/A1^+))^+ -> b/(b/H)
  /// One row per word of length at most max_word_len with at most `bound`
  /// blocks of each letter, every exponent at most `bound`.
  std::vector<ProbeRow> rows;
  BoundedVerdict lhs_verdict = BoundedVerdict::Unrefuted;
  BoundedVerdict rhs_verdict = BoundedVerdict::Unrefuted;
  std::optional<ApproxReport> rhs_approximations;
  std::size_t agreements = 0;
  std::size_t disagreements = 0;
  std::string status;
};

/// Evidence for or against equiderivability of the two sides; never a
/// proof. Undecided rows count as neither agreement nor disagreement.
/// max_word_len = 0 means 2 * bound. With approx_up_to set, the right side
/// is also run through check_approximations, which is expensive on
/// compiled grammars.
ProbeReport conjecture_probe(Formula a1, Formula a2, Formula h, std::size_t bound, const ProverConfig& cfg = {},
                             std::size_t max_word_len = 0, std::optional<std::size_t> approx_up_to = std::nullopt);

}  // namespace lambek
