#pragma once

// Cut-free backward proof search for the Lambek calculus with empty
// antecedents and its extensions by 1, additives and positive Kleene star.
//
// Three engines are provided:
//   prove          general search over every enabled rule (invertible rules
//                  first, free-group pruning where the image is defined);
//   prove_focused  product-free fragment only: succedent inversion to an atom,
//                  principal occurrence among matching tops, contiguous split
//                  of the remaining context per denominator;
//   naive_prove    exhaustive search over all rules, used as a test oracle.
// They share no search code.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "lambek/derivation.hpp"
#include "lambek/formula.hpp"

namespace lambek {

/// Set of enabled connectives. Atoms are always allowed.
class Fragment {
 public:
  constexpr Fragment() = default;
  static Fragment all();
  /// \ and / only.
  static Fragment product_free();
  /// \, /, . and 1.
  static Fragment multiplicative();
  static Fragment of(std::initializer_list<Connective> cs);

  bool allows(Connective c) const;
  Fragment with(Connective c) const;
  Fragment without(Connective c) const;
  std::uint16_t mask() const { return mask_; }
  /// Connectives in parse syntax, e.g. "\\ / . 1".
  std::string str() const;

  friend bool operator==(Fragment, Fragment) = default;

 private:
  constexpr explicit Fragment(std::uint16_t m) : mask_(m) {}
  std::uint16_t mask_ = 0;
};

struct ProverConfig {
  Fragment fragment = Fragment::all();
  /// Forbid empty antecedents everywhere in the derivation.
  bool lambek_restriction = false;
  /// Maximum number of goal expansions per call; exceeding it yields Unknown.
  std::size_t depth_budget = 1'000'000;
  bool memo_enabled = true;
};

enum class Verdict : std::uint8_t { Proved, Refuted, Unknown };

std::string_view verdict_name(Verdict v);

struct ProveResult {
  Verdict verdict = Verdict::Unknown;
  DerivationPtr derivation;  // set iff Proved
  bool budget_exhausted = false;
  std::size_t expansions = 0;
  std::string note;

  bool proved() const { return verdict == Verdict::Proved; }
  bool refuted() const { return verdict == Verdict::Refuted; }
};

/// A star or plus occurs in a negative position; such sequents need the
/// omega-rule and must go through the star engine instead.
class UnsupportedNegativeStar : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The sequent uses a connective outside the configured fragment, or the
/// engine's own fragment.
class FragmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ProveResult prove(const Sequent& s, const ProverConfig& cfg = {});
ProveResult prove_focused(const Sequent& s, const ProverConfig& cfg = {});
ProveResult naive_prove(const Sequent& s, const ProverConfig& cfg = {});

/// Focused engine with a memo table that survives across calls. Useful
/// when many related sequents are asked against the same large formulae.
/// Not thread-safe; use one instance per thread.
class FocusedProver {
 public:
  explicit FocusedProver(ProverConfig cfg = {});
  ~FocusedProver();
  FocusedProver(FocusedProver&&) noexcept;
  FocusedProver& operator=(FocusedProver&&) noexcept;

  ProveResult prove(const Sequent& s);
  std::size_t memo_size() const;
  const ProverConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Applies inverted (->\) and (->/) until the succedent is not a division.
Sequent invert_to_atomic(const Sequent& s);

/// Antecedent positions whose top is the (atomic) succedent. When
/// `filtered`, positions that cannot be principal because they have no
/// left (right) denominators but non-empty material to their left (right)
/// are dropped.
std::vector<std::size_t> principal_candidates(const Sequent& s, bool filtered = true);

/// All premise sets for taking the formula at `pos` as principal and
/// unfolding its spine down to the succedent variable. Each set lists
/// Phi_i -> X_i for the left denominators followed by Psi_j -> Y_j for the
/// right ones.
std::vector<std::vector<Sequent>> decompose_at(const Sequent& s, std::size_t pos);

/// Throws UnsupportedNegativeStar if a star or plus occurs negatively.
void require_positive_stars(const Sequent& s);
/// Throws FragmentError if a connective outside `f` occurs.
void require_fragment(const Sequent& s, Fragment f);

}  // namespace lambek
