#pragma once

// Formulae, variables and sequents of the Lambek calculus and its
// extensions (unit, additives, Kleene star and plus).
//
// Formulae are hash-consed: two structurally equal formulae share one
// node, so equality and hashing are O(1) and formulae are cheap to copy.
// Nodes are immutable and live for the lifetime of the process.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lambek {

class GroupWord;

/// A propositional variable: a name plus a generation counter. User
/// variables have generation 0; compiler-allocated fresh variables carry
/// a positive generation and render as `name#gen`.
class Variable {
 public:
  Variable() = default;
  static Variable make(std::string_view name, std::uint32_t generation = 0);

  const std::string& name() const;
  std::uint32_t generation() const;
  std::uint32_t id() const { return id_; }
  std::string str() const;

  friend bool operator==(Variable a, Variable b) { return a.id_ == b.id_; }
  friend bool operator!=(Variable a, Variable b) { return a.id_ != b.id_; }
  /// Orders by (name, generation), independent of interning order.
  friend bool operator<(Variable a, Variable b);

 private:
  explicit Variable(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
  friend class Formula;
};

enum class Connective : std::uint8_t {
  Atom,
  Unit,
  Under,  // A\B : left = A (denominator), right = B (numerator)
  Over,   // B/A : left = B (numerator),   right = A (denominator)
  Prod,
  Or,
  And,
  Star,
  Plus,
};

namespace detail {
struct Node;
}

class Formula {
 public:
  /// Default-constructed formulae are not valid; use the factories.
  Formula() = default;

  static Formula atom(Variable v);
  static Formula atom(std::string_view name, std::uint32_t generation = 0);
  static Formula unit();
  /// A\B
  static Formula under(Formula den, Formula num);
  /// B/A
  static Formula over(Formula num, Formula den);
  static Formula prod(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula conj(Formula a, Formula b);
  static Formula star(Formula a);
  static Formula plus(Formula a);

  bool valid() const { return node_ != nullptr; }
  Connective kind() const;
  bool is_atom() const { return kind() == Connective::Atom; }
  Variable var() const;
  Formula left() const;
  Formula right() const;
  /// Operand of Star/Plus.
  Formula operand() const { return left(); }

  /// Division helpers: numerator / denominator for Under and Over.
  Formula numerator() const;
  Formula denominator() const;

  std::size_t size() const;
  std::uint32_t id() const;
  std::size_t hash() const;

  /// Atoms and divisions only.
  bool product_free() const;
  /// No Or/And/Star/Plus, so the free-group interpretation is defined.
  bool fg_defined() const;
  bool has_star() const;
  /// Top variable of a \,/ spine, if the spine ends in an atom.
  std::optional<Variable> top() const;
  /// Cached free-group image; nullptr when fg_defined() is false.
  const GroupWord* fg_word() const;

  friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }
  friend bool operator!=(Formula a, Formula b) { return a.node_ != b.node_; }

 private:
  explicit Formula(const detail::Node* n) : node_(n) {}
  const detail::Node* node_ = nullptr;
};

/// Total order on formulae that depends only on structure (not on
/// interning order). Used wherever deterministic output matters.
bool structural_less(Formula a, Formula b);

struct Sequent {
  std::vector<Formula> antecedent;
  Formula succedent;

  friend bool operator==(const Sequent&, const Sequent&) = default;
  std::size_t size() const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Grammar: atoms `[a-z][a-z0-9_]*(#[0-9]+)?`, `1`, infix `\` (lowest,
/// right-assoc), `/` (left-assoc), `|`, `&`, `.` (left-assoc, in increasing
/// binding strength), postfix `^*` and `^+`, parentheses.
Formula parse_formula(std::string_view text);
/// `A, B -> C`; `-> C` for the empty antecedent.
Sequent parse_sequent(std::string_view text);
/// Comma-separated formula list; empty text gives the empty list.
std::vector<Formula> parse_formula_list(std::string_view text);

std::string render_formula(Formula f);
std::string render_sequence(std::span<const Formula> seq);
std::string render_sequent(const Sequent& s);

/// Right-nested curried division X_n\...\X_1\core/Y_m/.../Y_1 where
/// gamma = X_1..X_n and delta = Y_1..Y_m.
Formula curried_division(std::span<const Formula> gamma, Formula core,
                         std::span<const Formula> delta);
Formula curried_division(std::span<const Formula> gamma, Variable core,
                         std::span<const Formula> delta);

/// Denominators of a \,/ spine. `left` is ordered as the antecedent
/// segments it consumes (X_1..X_n), `right` likewise (Y_1..Y_m).
struct Spine {
  std::vector<Formula> left;
  Formula core;
  std::vector<Formula> right;
};
Spine unfold_spine(Formula f);

class UndefinedTop : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Variable top_of(Formula f);

/// q/(a\q)
Formula raise(Formula a, Variable q);
/// q/(Γ\q) for a sequence Γ.
Formula raise(std::span<const Formula> seq, Variable q);

/// Distinct variables of `f`, ordered by (name, generation).
std::vector<Variable> variables_of(Formula f);
std::vector<Variable> variables_of(std::span<const Formula> seq);

/// (r/(p\r))/(q/(p\q)); throws std::invalid_argument unless pairwise distinct.
Formula sentinel(Variable p, Variable q, Variable r);

}  // namespace lambek

template <>
struct std::hash<lambek::Formula> {
  std::size_t operator()(lambek::Formula f) const noexcept { return f.hash(); }
};

template <>
struct std::hash<lambek::Variable> {
  std::size_t operator()(lambek::Variable v) const noexcept { return v.id(); }
};

template <>
struct std::hash<lambek::Sequent> {
  std::size_t operator()(const lambek::Sequent& s) const noexcept;
};
