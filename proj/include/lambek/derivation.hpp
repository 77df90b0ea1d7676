#pragma once

// Rule-labelled cut-free derivations and the certificate checker.
//
// Premises are shared pointers so memoised subproofs are shared rather than
// copied; a derivation is therefore a DAG whose unfolding is the proof tree.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lambek/formula.hpp"

namespace lambek {

enum class Rule : std::uint8_t {
  Ax,       // q -> q, q atomic
  UnitAx,   // -> 1
  UnderL,   // premises: Pi -> A, Gamma B Delta -> C
  UnderR,
  OverL,    // premises: Pi -> A, Gamma B Delta -> C
  OverR,
  ProdL,
  ProdR,    // premises: Gamma -> A, Delta -> B
  UnitL,
  OrL,      // premises: ... A1 ... -> C, ... A2 ... -> C
  OrR1,
  OrR2,
  AndL1,
  AndL2,
  AndR,
  StarR,    // (->*)_n with n = number of premises, n = 0 is a leaf
  PlusR,    // (->+)_n, n >= 1
};

std::string_view rule_label(Rule r);
std::optional<Rule> rule_from_label(std::string_view label);

struct Derivation;
using DerivationPtr = std::shared_ptr<const Derivation>;

struct Derivation {
  Rule rule;
  Sequent conclusion;
  std::vector<DerivationPtr> premises;
};

DerivationPtr make_derivation(Rule rule, Sequent conclusion, std::vector<DerivationPtr> premises = {});

/// Number of nodes in the unfolded tree (saturating at SIZE_MAX).
std::size_t tree_size(const DerivationPtr& d);
/// Number of distinct nodes in the DAG.
std::size_t dag_size(const DerivationPtr& d);

struct CheckOptions {
  /// Reject any sequent with an empty antecedent.
  bool lambek_restriction = false;
};

/// True iff every node is an exact instance of its labelled rule. Does not
/// rely on any prover code.
bool check_derivation(const DerivationPtr& d, CheckOptions opts = {});

/// Human-readable rendering, one sequent per line, premises indented.
std::string render_derivation(const DerivationPtr& d);

}  // namespace lambek
