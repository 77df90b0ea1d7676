#include <unordered_map>

#include "lambek/audit.hpp"
#include "lambek/group_word.hpp"
#include "lambek/prover.hpp"

namespace lambek {

namespace {

struct BudgetExceeded {};

using Seq = std::vector<Formula>;

bool group_defined(const Sequent& s) {
  if (!s.succedent.fg_defined()) return false;
  for (auto f : s.antecedent)
    if (!f.fg_defined()) return false;
  return true;
}

Seq slice(const Seq& a, std::size_t lo, std::size_t hi) { return Seq(a.begin() + lo, a.begin() + hi); }

Seq replace_at(const Seq& a, std::size_t k, std::initializer_list<Formula> with) {
  Seq out(a.begin(), a.begin() + k);
  out.insert(out.end(), with.begin(), with.end());
  out.insert(out.end(), a.begin() + k + 1, a.end());
  return out;
}

class GeneralSearch {
 public:
  explicit GeneralSearch(const ProverConfig& cfg) : cfg_(cfg) {}

  std::size_t expansions() const { return expansions_; }

  DerivationPtr solve(const Sequent& s) {
    if (cfg_.lambek_restriction && s.antecedent.empty()) return nullptr;
    if (cfg_.memo_enabled) {
      if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    }
    if (++expansions_ > cfg_.depth_budget) throw BudgetExceeded{};
    DerivationPtr d = expand(s);
    if (cfg_.memo_enabled) memo_.emplace(s, d);
    return d;
  }

 private:
  DerivationPtr expand(const Sequent& s) {
    const Seq& ant = s.antecedent;
    const Formula c = s.succedent;

    if (group_defined(s) && fg_interp(ant) != fg_interp(c)) return nullptr;

    // Invertible rules first; each is applied once and its verdict is final.
    switch (c.kind()) {
      case Connective::Under: {
        Seq a{c.denominator()};
        a.insert(a.end(), ant.begin(), ant.end());
        return unary(Rule::UnderR, s, Sequent{std::move(a), c.numerator()});
      }
      case Connective::Over: {
        Seq a = ant;
        a.push_back(c.denominator());
        return unary(Rule::OverR, s, Sequent{std::move(a), c.numerator()});
      }
      case Connective::And: {
        auto l = solve(Sequent{ant, c.left()});
        if (!l) return nullptr;
        auto r = solve(Sequent{ant, c.right()});
        if (!r) return nullptr;
        return make_derivation(Rule::AndR, s, {l, r});
      }
      default:
        break;
    }
    for (std::size_t k = 0; k < ant.size(); ++k) {
      Formula f = ant[k];
      switch (f.kind()) {
        case Connective::Prod:
          return unary(Rule::ProdL, s, Sequent{replace_at(ant, k, {f.left(), f.right()}), c});
        case Connective::Unit:
          return unary(Rule::UnitL, s, Sequent{replace_at(ant, k, {}), c});
        case Connective::Or: {
          auto l = solve(Sequent{replace_at(ant, k, {f.left()}), c});
          if (!l) return nullptr;
          auto r = solve(Sequent{replace_at(ant, k, {f.right()}), c});
          if (!r) return nullptr;
          return make_derivation(Rule::OrL, s, {l, r});
        }
        default:
          break;
      }
    }

    // Antecedent now holds atoms, divisions and meets only.
    if (c.is_atom() && ant.size() == 1 && ant[0] == c) return make_derivation(Rule::Ax, s);
    if (c.kind() == Connective::Unit && ant.empty()) return make_derivation(Rule::UnitAx, s);

    if (auto d = right_rules(s)) return d;
    return left_rules(s);
  }

  DerivationPtr unary(Rule r, const Sequent& s, Sequent premise) {
    auto d = solve(premise);
    return d ? make_derivation(r, s, {d}) : nullptr;
  }

  DerivationPtr right_rules(const Sequent& s) {
    const Seq& ant = s.antecedent;
    const Formula c = s.succedent;
    switch (c.kind()) {
      case Connective::Prod:
        for (std::size_t k = 0; k <= ant.size(); ++k) {
          auto l = solve(Sequent{slice(ant, 0, k), c.left()});
          if (!l) continue;
          auto r = solve(Sequent{slice(ant, k, ant.size()), c.right()});
          if (r) return make_derivation(Rule::ProdR, s, {l, r});
        }
        return nullptr;
      case Connective::Or:
        if (auto d = unary(Rule::OrR1, s, Sequent{ant, c.left()})) return d;
        return unary(Rule::OrR2, s, Sequent{ant, c.right()});
      case Connective::Star:
        if (ant.empty()) return make_derivation(Rule::StarR, s);
        return iterate(Rule::StarR, s);
      case Connective::Plus:
        if (ant.empty()) {
          auto d = solve(Sequent{{}, c.operand()});
          return d ? make_derivation(Rule::PlusR, s, {d}) : nullptr;
        }
        return iterate(Rule::PlusR, s);
      default:
        return nullptr;
    }
  }

  // (->*)_n / (->+)_n over non-empty parts only: an empty part contributes a
  // premise -> A that can simply be dropped.
  DerivationPtr iterate(Rule rule, const Sequent& s) {
    const Seq& ant = s.antecedent;
    const Formula a = s.succedent.operand();
    std::vector<DerivationPtr> parts;
    auto go = [&](auto&& self, std::size_t start) -> bool {
      if (start == ant.size()) return true;
      for (std::size_t end = start + 1; end <= ant.size(); ++end) {
        auto d = solve(Sequent{slice(ant, start, end), a});
        if (!d) continue;
        parts.push_back(d);
        if (self(self, end)) return true;
        parts.pop_back();
      }
      return false;
    };
    if (!go(go, 0)) return nullptr;
    return make_derivation(rule, s, parts);
  }

  DerivationPtr left_rules(const Sequent& s) {
    const Seq& ant = s.antecedent;
    const Formula c = s.succedent;
    for (std::size_t k = 0; k < ant.size(); ++k) {
      Formula f = ant[k];
      if (f.kind() == Connective::Under) {
        // Gamma, Pi, A\B, Delta: Pi = ant[i, k).
        for (std::size_t i = 0; i <= k; ++i) {
          auto minor = solve(Sequent{slice(ant, i, k), f.denominator()});
          if (!minor) continue;
          Seq a = slice(ant, 0, i);
          a.push_back(f.numerator());
          a.insert(a.end(), ant.begin() + k + 1, ant.end());
          if (auto major = solve(Sequent{std::move(a), c})) return make_derivation(Rule::UnderL, s, {minor, major});
        }
      } else if (f.kind() == Connective::Over) {
        // Gamma, B/A, Pi, Delta: Pi = ant(k, j).
        for (std::size_t j = k + 1; j <= ant.size(); ++j) {
          auto minor = solve(Sequent{slice(ant, k + 1, j), f.denominator()});
          if (!minor) continue;
          Seq a = slice(ant, 0, k);
          a.push_back(f.numerator());
          a.insert(a.end(), ant.begin() + j, ant.end());
          if (auto major = solve(Sequent{std::move(a), c})) return make_derivation(Rule::OverL, s, {minor, major});
        }
      } else if (f.kind() == Connective::And) {
        if (auto d = unary(Rule::AndL1, s, Sequent{replace_at(ant, k, {f.left()}), c})) return d;
        if (auto d = unary(Rule::AndL2, s, Sequent{replace_at(ant, k, {f.right()}), c})) return d;
      }
    }
    return nullptr;
  }

  const ProverConfig& cfg_;
  std::unordered_map<Sequent, DerivationPtr> memo_;
  std::size_t expansions_ = 0;
};

}  // namespace

ProveResult prove(const Sequent& s, const ProverConfig& cfg) {
  require_fragment(s, cfg.fragment);
  require_positive_stars(s);
  GeneralSearch search(cfg);
  ProveResult r;
  try {
    r.derivation = search.solve(s);
    r.verdict = r.derivation ? Verdict::Proved : Verdict::Refuted;
  } catch (const BudgetExceeded&) {
    r.verdict = Verdict::Unknown;
    r.budget_exhausted = true;
    r.note = "prover: budget of " + std::to_string(cfg.depth_budget) + " expansions exhausted";
  }
  r.expansions = search.expansions();
  if (r.proved()) audit_derivation(r.derivation, cfg.lambek_restriction);
  return r;
}

}  // namespace lambek
