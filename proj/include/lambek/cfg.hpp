#pragma once

// Context-free grammars: parsing, binary Greibach normal form, CYK
// membership, word enumeration and the TOTAL+ -> ALT2 transform.

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lambek {

class CfgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GrammarSymbol {
  std::string name;
  bool terminal = false;
  friend auto operator<=>(const GrammarSymbol&, const GrammarSymbol&) = default;
};

struct CfgRule {
  std::string lhs;
  std::vector<GrammarSymbol> rhs;  // empty = epsilon rule
  friend bool operator==(const CfgRule&, const CfgRule&) = default;
};

struct Cfg {
  /// In order of first appearance.
  std::vector<std::string> nonterminals;
  std::vector<std::string> terminals;
  std::vector<CfgRule> rules;
  std::string start;

  bool has_nonterminal(std::string_view n) const;
  bool has_terminal(std::string_view t) const;
};

using Word = std::vector<std::string>;

/// One rule per line, `LHS -> rhs1 | rhs2`; nonterminals start with an
/// upper-case letter, terminals with a lower-case one; `#` starts a comment.
/// The start symbol is the first left-hand side unless `@start X` is given.
/// Every nonterminal used on a right-hand side must have a rule.
Cfg parse_cfg(std::string_view text);
std::string render_cfg(const Cfg& g);

/// Rule N_lhs => terminal N_k? N_l?.
struct GnfRule {
  std::size_t lhs = 0;
  std::string terminal;
  std::optional<std::size_t> k;
  std::optional<std::size_t> l;
  friend bool operator==(const GnfRule&, const GnfRule&) = default;
};

struct GnfCfg {
  /// Index 0 is the start symbol.
  std::vector<std::string> nonterminals;
  /// Terminal alphabet of the source grammar (including letters that no
  /// longer occur in any rule).
  std::vector<std::string> terminals;
  std::vector<GnfRule> rules;
  std::vector<std::string> warnings;
};

/// Throws CfgError if the empty word is derivable. An empty language gives
/// a grammar without rules and a warning.
GnfCfg to_gnf2(const Cfg& g);
Cfg gnf_to_cfg(const GnfCfg& g);
/// Throws CfgError if a rule violates the N => a N? N? shape.
void check_gnf_shape(const GnfCfg& g);
std::string render_gnf(const GnfCfg& g);

/// Precompiled CYK recogniser.
class Recognizer {
 public:
  explicit Recognizer(const Cfg& g);
  ~Recognizer();
  Recognizer(Recognizer&&) noexcept;
  Recognizer& operator=(Recognizer&&) noexcept;
  bool accepts(const Word& w) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool cyk_member(const Cfg& g, const Word& w);

/// All words of length <= max_len in the language, shortest first, then
/// lexicographically by terminal name.
std::vector<Word> enumerate_words(const Cfg& g, std::size_t max_len);

/// Requires exactly two terminals; a1 is the lexicographically smaller one.
/// Adds a fresh start S' with S' -> a1 S a2 | a1 a2.
Cfg total_plus_to_alt2(const Cfg& g);

/// Splits on whitespace, then matches each chunk greedily (longest first)
/// against `alphabet`.
Word parse_word(std::string_view text, const std::vector<std::string>& alphabet);
/// Letters concatenated when all are single characters, else space separated.
std::string render_word(const Word& w);

}  // namespace lambek
