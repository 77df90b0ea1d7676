#include "lambek/group_word.hpp"

namespace lambek {

namespace {

void push_reduced(std::vector<Letter>& w, Letter l) {
  if (!w.empty() && w.back().var == l.var && w.back().sign == -l.sign) {
    w.pop_back();
  } else {
    w.push_back(l);
  }
}

}  // namespace

GroupWord GroupWord::generator(Variable v) {
  GroupWord g;
  g.letters_.push_back({v, 1});
  return g;
}

GroupWord GroupWord::from_letters(std::span<const Letter> letters) {
  GroupWord g;
  for (const auto& l : letters) {
    if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("letter sign must be +1 or -1");
    push_reduced(g.letters_, l);
  }
  return g;
}

GroupWord GroupWord::inverse() const {
  GroupWord g;
  g.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) g.letters_.push_back({it->var, -it->sign});
  return g;
}

GroupWord GroupWord::operator*(const GroupWord& rhs) const {
  GroupWord g = *this;
  g *= rhs;
  return g;
}

GroupWord& GroupWord::operator*=(const GroupWord& rhs) {
  for (const auto& l : rhs.letters_) push_reduced(letters_, l);
  return *this;
}

std::string GroupWord::str() const {
  if (letters_.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) out += ' ';
    out += letters_[i].var.str();
    if (letters_[i].sign < 0) out += "^-1";
  }
  return out;
}

GroupWord fg_interp(Formula f) {
  if (const GroupWord* w = f.fg_word()) return *w;
  throw UnsupportedConnective("free-group image undefined for " + render_formula(f));
}

GroupWord fg_interp(std::span<const Formula> seq) {
  GroupWord g;
  for (auto f : seq) g *= fg_interp(f);
  return g;
}

bool zero_balanced(Formula f) { return fg_interp(f).is_identity(); }

}  // namespace lambek
