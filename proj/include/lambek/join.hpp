#pragma once

// Joining formulae: for sequences Γ_1..Γ_n with one free-group image, a
// product-free B with Γ_i -> B derivable for every i. Every emitted join is
// checked by the prover and carries one derivation per input.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambek/derivation.hpp"
#include "lambek/formula.hpp"
#include "lambek/prover.hpp"

namespace lambek {

struct JoinProblem {
  std::vector<std::vector<Formula>> inputs;
  /// Fresh variables the engine may use, in order of preference. Entries
  /// that occur in the inputs are skipped. When empty the engine picks a
  /// variable `q#k` not occurring in the inputs.
  std::vector<Variable> variable_budget;
};

struct JoinCertificate {
  Formula join;
  /// witnesses[i] derives inputs[i] -> join.
  std::vector<DerivationPtr> witnesses;
  /// How the join was found: "single", "closed-form" or "synthesis".
  std::string strategy;
};

class JoinError : public std::runtime_error {
 public:
  enum class Kind { PreconditionViolation, SynthesisFailed };
  JoinError(Kind k, const std::string& what, std::vector<std::string> tried = {})
      : std::runtime_error(what), kind_(k), tried_(std::move(tried)) {}
  Kind kind() const { return kind_; }
  const std::vector<std::string>& tried() const { return tried_; }

 private:
  Kind kind_;
  std::vector<std::string> tried_;
};

struct JoinOptions {
  /// Budget for each verification call.
  ProverConfig prover{Fragment::all(), false, 2'000'000, true};
  /// Limits of the enumerative fallback.
  std::size_t max_candidate_size = 40;
  std::size_t max_candidates = 10'000;
  /// Budget for each fallback candidate check.
  std::size_t candidate_budget = 20'000;
  bool use_cache = true;
};

/// A_1 . ... . A_n, left nested; q/q for the empty sequence.
Formula product_fold(std::span<const Formula> gamma, Variable fallback);

/// Product-free B with f -> B, verified by the prover. Positive products
/// are raised over their factors with `q`. Throws JoinError
/// (SynthesisFailed) if the result cannot be verified.
Formula eliminate_product(Formula f, Variable q);

/// A formula J with both -> J and a -> J derivable, built from the shape of
/// the zero-balanced formula `a`; `q` is used for internal raisings. Not
/// verified; nullopt when no recognised shape applies.
std::optional<Formula> unit_join(Formula a, Variable q);

JoinCertificate join(const JoinProblem& p, const JoinOptions& opt = {});

/// Re-proves every input against the certificate's join with the
/// independent checker.
bool verify_certificate(const JoinProblem& p, const JoinCertificate& c);

void clear_join_cache();
std::size_t join_cache_size();

}  // namespace lambek
