#include "lambek/derivation.hpp"

#include <array>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace lambek {

namespace {

constexpr std::array<std::string_view, 17> kLabels = {
    "Ax",   "1-Ax", "\\->", "->\\", "/->",  "->/",  ".->", "->.", "1->",
    "|->",  "->|1", "->|2", "&1->", "&2->", "->&",  "->*", "->+",
};

using Seq = std::vector<Formula>;

Seq concat(std::initializer_list<std::span<const Formula>> parts) {
  Seq out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

bool same(const Seq& a, const Seq& b) { return a == b; }

// Each checker below tries every way the conclusion could instantiate the
// rule and accepts if one matches the given premises.

bool check_under_l(const Sequent& c, const Sequent& p1, const Sequent& p2) {
  const Seq& ant = c.antecedent;
  if (p2.succedent != c.succedent) return false;
  const std::size_t pi = p1.antecedent.size();
  for (std::size_t k = 0; k < ant.size(); ++k) {
    Formula f = ant[k];
    if (f.kind() != Connective::Under) continue;
    if (f.left() != p1.succedent || k < pi) continue;
    std::span<const Formula> all(ant);
    if (!same(Seq(all.begin() + (k - pi), all.begin() + k), p1.antecedent)) continue;
    Seq expect(ant.begin(), ant.begin() + (k - pi));
    expect.push_back(f.right());
    expect.insert(expect.end(), ant.begin() + k + 1, ant.end());
    if (same(expect, p2.antecedent)) return true;
  }
  return false;
}

bool check_over_l(const Sequent& c, const Sequent& p1, const Sequent& p2) {
  const Seq& ant = c.antecedent;
  if (p2.succedent != c.succedent) return false;
  const std::size_t pi = p1.antecedent.size();
  for (std::size_t k = 0; k < ant.size(); ++k) {
    Formula f = ant[k];
    if (f.kind() != Connective::Over) continue;
    if (f.right() != p1.succedent || k + 1 + pi > ant.size()) continue;
    if (!same(Seq(ant.begin() + k + 1, ant.begin() + k + 1 + pi), p1.antecedent)) continue;
    Seq expect(ant.begin(), ant.begin() + k);
    expect.push_back(f.left());
    expect.insert(expect.end(), ant.begin() + k + 1 + pi, ant.end());
    if (same(expect, p2.antecedent)) return true;
  }
  return false;
}

// Positions k where replacing ant[k] by `repl` gives `target`.
template <class Pred, class Repl>
bool some_position(const Seq& ant, const Seq& target, Pred pred, Repl repl) {
  for (std::size_t k = 0; k < ant.size(); ++k) {
    if (!pred(ant[k])) continue;
    Seq expect(ant.begin(), ant.begin() + k);
    for (Formula r : repl(ant[k])) expect.push_back(r);
    expect.insert(expect.end(), ant.begin() + k + 1, ant.end());
    if (same(expect, target)) return true;
  }
  return false;
}

bool check_node(const Derivation& d, const CheckOptions& opts) {
  const Sequent& c = d.conclusion;
  if (!c.succedent.valid()) return false;
  for (auto f : c.antecedent)
    if (!f.valid()) return false;
  if (opts.lambek_restriction && c.antecedent.empty()) return false;
  const auto& ps = d.premises;
  for (const auto& p : ps)
    if (!p) return false;
  auto n_is = [&](std::size_t n) { return ps.size() == n; };
  const Formula goal = c.succedent;
  const Seq& ant = c.antecedent;

  switch (d.rule) {
    case Rule::Ax:
      return n_is(0) && goal.is_atom() && ant.size() == 1 && ant[0] == goal;
    case Rule::UnitAx:
      return n_is(0) && ant.empty() && goal.kind() == Connective::Unit;
    case Rule::UnderL:
      return n_is(2) && check_under_l(c, ps[0]->conclusion, ps[1]->conclusion);
    case Rule::OverL:
      return n_is(2) && check_over_l(c, ps[0]->conclusion, ps[1]->conclusion);
    case Rule::UnderR: {
      if (!n_is(1) || goal.kind() != Connective::Under) return false;
      const Sequent& p = ps[0]->conclusion;
      Seq expect{goal.left()};
      expect.insert(expect.end(), ant.begin(), ant.end());
      return p.succedent == goal.right() && same(p.antecedent, expect);
    }
    case Rule::OverR: {
      if (!n_is(1) || goal.kind() != Connective::Over) return false;
      const Sequent& p = ps[0]->conclusion;
      Seq expect = ant;
      expect.push_back(goal.right());
      return p.succedent == goal.left() && same(p.antecedent, expect);
    }
    case Rule::ProdL: {
      if (!n_is(1)) return false;
      const Sequent& p = ps[0]->conclusion;
      if (p.succedent != goal) return false;
      return some_position(
          ant, p.antecedent, [](Formula f) { return f.kind() == Connective::Prod; },
          [](Formula f) { return Seq{f.left(), f.right()}; });
    }
    case Rule::ProdR: {
      if (!n_is(2) || goal.kind() != Connective::Prod) return false;
      const Sequent& a = ps[0]->conclusion;
      const Sequent& b = ps[1]->conclusion;
      if (a.succedent != goal.left() || b.succedent != goal.right()) return false;
      return same(concat({a.antecedent, b.antecedent}), ant);
    }
    case Rule::UnitL: {
      if (!n_is(1)) return false;
      const Sequent& p = ps[0]->conclusion;
      if (p.succedent != goal) return false;
      return some_position(
          ant, p.antecedent, [](Formula f) { return f.kind() == Connective::Unit; },
          [](Formula) { return Seq{}; });
    }
    case Rule::OrL: {
      if (!n_is(2)) return false;
      const Sequent& a = ps[0]->conclusion;
      const Sequent& b = ps[1]->conclusion;
      if (a.succedent != goal || b.succedent != goal) return false;
      for (std::size_t k = 0; k < ant.size(); ++k) {
        if (ant[k].kind() != Connective::Or) continue;
        Seq e1 = ant, e2 = ant;
        e1[k] = ant[k].left();
        e2[k] = ant[k].right();
        if (same(e1, a.antecedent) && same(e2, b.antecedent)) return true;
      }
      return false;
    }
    case Rule::OrR1:
    case Rule::OrR2: {
      if (!n_is(1) || goal.kind() != Connective::Or) return false;
      const Sequent& p = ps[0]->conclusion;
      Formula want = d.rule == Rule::OrR1 ? goal.left() : goal.right();
      return p.succedent == want && same(p.antecedent, ant);
    }
    case Rule::AndL1:
    case Rule::AndL2: {
      if (!n_is(1)) return false;
      const Sequent& p = ps[0]->conclusion;
      if (p.succedent != goal) return false;
      bool first = d.rule == Rule::AndL1;
      return some_position(
          ant, p.antecedent, [](Formula f) { return f.kind() == Connective::And; },
          [first](Formula f) { return Seq{first ? f.left() : f.right()}; });
    }
    case Rule::AndR: {
      if (!n_is(2) || goal.kind() != Connective::And) return false;
      const Sequent& a = ps[0]->conclusion;
      const Sequent& b = ps[1]->conclusion;
      return a.succedent == goal.left() && b.succedent == goal.right() && same(a.antecedent, ant) &&
             same(b.antecedent, ant);
    }
    case Rule::StarR:
    case Rule::PlusR: {
      Connective want = d.rule == Rule::StarR ? Connective::Star : Connective::Plus;
      if (goal.kind() != want) return false;
      if (d.rule == Rule::PlusR && ps.empty()) return false;
      Seq joined;
      for (const auto& p : ps) {
        if (p->conclusion.succedent != goal.operand()) return false;
        joined.insert(joined.end(), p->conclusion.antecedent.begin(), p->conclusion.antecedent.end());
      }
      return same(joined, ant);
    }
  }
  return false;
}

}  // namespace

std::string_view rule_label(Rule r) { return kLabels[static_cast<std::size_t>(r)]; }

std::optional<Rule> rule_from_label(std::string_view label) {
  for (std::size_t i = 0; i < kLabels.size(); ++i)
    if (kLabels[i] == label) return static_cast<Rule>(i);
  return std::nullopt;
}

DerivationPtr make_derivation(Rule rule, Sequent conclusion, std::vector<DerivationPtr> premises) {
  return std::make_shared<const Derivation>(Derivation{rule, std::move(conclusion), std::move(premises)});
}

std::size_t tree_size(const DerivationPtr& root) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::unordered_map<const Derivation*, std::size_t> memo;
  auto go = [&](auto&& self, const Derivation* d) -> std::size_t {
    if (auto it = memo.find(d); it != memo.end()) return it->second;
    std::size_t n = 1;
    for (const auto& p : d->premises) {
      std::size_t s = self(self, p.get());
      n = (kMax - n < s) ? kMax : n + s;
    }
    memo[d] = n;
    return n;
  };
  return root ? go(go, root.get()) : 0;
}

std::size_t dag_size(const DerivationPtr& root) {
  std::unordered_set<const Derivation*> seen;
  std::vector<const Derivation*> stack;
  if (root) stack.push_back(root.get());
  while (!stack.empty()) {
    const Derivation* d = stack.back();
    stack.pop_back();
    if (!seen.insert(d).second) continue;
    for (const auto& p : d->premises) stack.push_back(p.get());
  }
  return seen.size();
}

bool check_derivation(const DerivationPtr& root, CheckOptions opts) {
  if (!root) return false;
  std::unordered_set<const Derivation*> seen{root.get()};
  std::vector<const Derivation*> stack{root.get()};
  while (!stack.empty()) {
    const Derivation* d = stack.back();
    stack.pop_back();
    if (!check_node(*d, opts)) return false;
    for (const auto& p : d->premises)
      if (p && seen.insert(p.get()).second) stack.push_back(p.get());
  }
  return true;
}

std::string render_derivation(const DerivationPtr& root) {
  std::string out;
  auto go = [&](auto&& self, const Derivation* d, int depth) -> void {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += render_sequent(d->conclusion);
    out += "   [";
    out += rule_label(d->rule);
    if (d->rule == Rule::StarR || d->rule == Rule::PlusR) out += std::to_string(d->premises.size());
    out += "]\n";
    for (const auto& p : d->premises) self(self, p.get(), depth + 1);
  };
  if (root) go(go, root.get(), 0);
  return out;
}

}  // namespace lambek
