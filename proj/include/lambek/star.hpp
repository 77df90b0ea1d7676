#pragma once

// Kleene-star elimination. Approximations replace negative stars by finite
// disjunctions of powers; instances replace the stars and products of a
// *-external antecedent by concrete sequences. Both turn a question about
// the omega-rule into a bounded family of star-free prover queries.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lambek/derivation.hpp"
#include "lambek/formula.hpp"
#include "lambek/prover.hpp"

namespace lambek {

/// A.A. ... .A (n >= 1 factors, left-nested).
Formula power(Formula a, std::size_t n);
/// 1 | A | A^2 | ... | A^n, right-nested; n = 0 gives 1.
Formula power_upto(Formula a, std::size_t n);
/// A^+ rewritten as A . A^*, recursively.
Formula normalize_plus(Formula f);

/// P_n and N_n. Plus is normalized first.
Formula approx_positive(Formula f, std::size_t n);
Formula approx_negative(Formula f, std::size_t n);
Sequent approximate(const Sequent& s, std::size_t n);

/// True if a star or plus occurs in a negative position of the sequent.
bool has_negative_star(const Sequent& s);

enum class BoundedVerdict : std::uint8_t { Refuted, Unrefuted, Unknown };
std::string_view bounded_verdict_name(BoundedVerdict v);

struct ApproxReport {
  BoundedVerdict verdict = BoundedVerdict::Unrefuted;
  /// Least refuted level, or the level where the prover gave up.
  std::optional<std::size_t> level;
  std::size_t levels_checked = 0;
  std::string note;
};

/// Refuted(n) certifies underivability; Unrefuted never claims derivability.
ApproxReport check_approximations(const Sequent& s, std::size_t up_to, const ProverConfig& cfg = {});

/// No product or star under a division; plus counts as a star.
bool is_star_external(Formula f);
/// All antecedent formulae *-external and the succedent product-free.
bool is_star_external(const Sequent& s);

class NotStarExternal : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Instances of a *-external formula with every star unfolded at most
/// `bound` times (a plus between 1 and `bound` times), streamed by length
/// and then lexicographically by the left-to-right position of each
/// element's source inside the formula. Duplicates are dropped.
class InstanceStream {
 public:
  InstanceStream(Formula source, std::size_t bound,
                 std::size_t max_length = static_cast<std::size_t>(-1));

  std::optional<std::vector<Formula>> next();
  Formula source() const { return source_; }
  std::size_t bound() const { return bound_; }
  /// Product-free subformulae of the source, left to right.
  const std::vector<Formula>& leaves() const { return leaves_; }
  /// Leaf indices of the instance last returned by next().
  const std::vector<std::size_t>& last_codes() const { return last_; }

 private:
  using Layer = std::vector<std::vector<std::size_t>>;
  Formula source_;
  std::size_t bound_;
  std::size_t max_length_;
  std::size_t longest_;
  std::vector<Formula> leaves_;
  std::vector<std::size_t> last_;
  std::size_t length_ = 0;
  Layer layer_;
  std::size_t pos_ = 0;
  bool loaded_ = false;
};

std::vector<std::vector<Formula>> instances(Formula f, std::size_t bound);

struct InstanceReport {
  BoundedVerdict verdict = BoundedVerdict::Unrefuted;
  /// The first refuted (or undecided) instance sequent.
  std::optional<Sequent> witness;
  /// Leaf indices of the witness inside the antecedent product.
  std::vector<std::size_t> witness_codes;
  std::size_t checked = 0;
  std::size_t expansions = 0;
  std::string note;
};

/// Checks every instance Pi_1..Pi_n -> B with the focused prover, in
/// stream order of the product A_1 . ... . A_n. Instances longer than
/// `max_length` are skipped.
InstanceReport check_instances(const Sequent& s, std::size_t bound, const ProverConfig& cfg = {},
                               std::size_t max_length = static_cast<std::size_t>(-1));

/// Certificate of inst -> f. Throws std::invalid_argument if inst is not an
/// instance of f.
DerivationPtr instance_soundness(Formula f, const std::vector<Formula>& inst);

/// A -> A from atomic axioms.
DerivationPtr identity_derivation(Formula a);

}  // namespace lambek
