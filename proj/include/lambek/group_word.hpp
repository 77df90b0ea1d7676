#pragma once

// Free-group interpretation ‖·‖ of Lambek formulae.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambek/formula.hpp"

namespace lambek {

struct Letter {
  Variable var;
  int sign = 1;  // +1 or -1
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Reduced word in the free group over Var. The representation is always
/// reduced, so structural equality is group equality.
class GroupWord {
 public:
  GroupWord() = default;
  static GroupWord generator(Variable v);
  /// Reduces an arbitrary letter sequence left to right.
  static GroupWord from_letters(std::span<const Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  bool is_identity() const { return letters_.empty(); }
  std::size_t length() const { return letters_.size(); }

  GroupWord inverse() const;
  GroupWord operator*(const GroupWord& rhs) const;
  GroupWord& operator*=(const GroupWord& rhs);

  /// `p^-1 q`; the identity renders as `1`.
  std::string str() const;

  friend bool operator==(const GroupWord&, const GroupWord&) = default;

 private:
  std::vector<Letter> letters_;
};

class UnsupportedConnective : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

GroupWord fg_interp(Formula f);
GroupWord fg_interp(std::span<const Formula> seq);
bool zero_balanced(Formula f);

}  // namespace lambek
