#include <unordered_map>
#include <unordered_set>

#include "lambek/audit.hpp"
#include "lambek/prover.hpp"

namespace lambek {

namespace {

struct BudgetExceeded {};

using Seq = std::vector<Formula>;

// Exhaustive backward search: every rule at every position with every
// split. No inversion strategy and no pruning.
class NaiveSearch {
 public:
  explicit NaiveSearch(const ProverConfig& cfg) : cfg_(cfg) {}
  std::size_t expansions() const { return expansions_; }

  DerivationPtr solve(const Sequent& s) {
    if (cfg_.lambek_restriction && s.antecedent.empty()) return nullptr;
    if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    if (active_.count(s)) {
      looped_ = true;
      return nullptr;
    }
    if (++expansions_ > cfg_.depth_budget) throw BudgetExceeded{};
    active_.insert(s);
    bool outer_looped = looped_;
    looped_ = false;
    DerivationPtr d = search(s);
    active_.erase(s);
    // Results that depended on a loop cut-off are path-dependent; keep them
    // out of the memo unless positive.
    if (d || !looped_) memo_.emplace(s, d);
    looped_ = looped_ || outer_looped;
    return d;
  }

 private:
  DerivationPtr search(const Sequent& s) {
    const Seq& a = s.antecedent;
    const Formula c = s.succedent;
    const std::size_t n = a.size();
    auto sub = [](const Seq& v, std::size_t lo, std::size_t hi) { return Seq(v.begin() + lo, v.begin() + hi); };
    auto cat = [](Seq x, const Seq& y) {
      x.insert(x.end(), y.begin(), y.end());
      return x;
    };

    if (c.is_atom() && n == 1 && a[0] == c) return make_derivation(Rule::Ax, s);
    if (c.kind() == Connective::Unit && n == 0) return make_derivation(Rule::UnitAx, s);

    // Right rules.
    switch (c.kind()) {
      case Connective::Under:
        if (auto d = solve(Sequent{cat(Seq{c.left()}, a), c.right()}))
          return make_derivation(Rule::UnderR, s, {d});
        break;
      case Connective::Over:
        if (auto d = solve(Sequent{cat(a, Seq{c.right()}), c.left()})) return make_derivation(Rule::OverR, s, {d});
        break;
      case Connective::Prod:
        for (std::size_t k = 0; k <= n; ++k) {
          auto l = solve(Sequent{sub(a, 0, k), c.left()});
          auto r = l ? solve(Sequent{sub(a, k, n), c.right()}) : nullptr;
          if (l && r) return make_derivation(Rule::ProdR, s, {l, r});
        }
        break;
      case Connective::Or:
        if (auto d = solve(Sequent{a, c.left()})) return make_derivation(Rule::OrR1, s, {d});
        if (auto d = solve(Sequent{a, c.right()})) return make_derivation(Rule::OrR2, s, {d});
        break;
      case Connective::And: {
        auto l = solve(Sequent{a, c.left()});
        auto r = l ? solve(Sequent{a, c.right()}) : nullptr;
        if (l && r) return make_derivation(Rule::AndR, s, {l, r});
        break;
      }
      case Connective::Star:
      case Connective::Plus: {
        bool plus = c.kind() == Connective::Plus;
        if (!plus && n == 0) return make_derivation(Rule::StarR, s);
        // Any composition of the antecedent into parts, empty parts included;
        // n + 1 parts are enough to cover every distinct premise set.
        std::vector<DerivationPtr> parts;
        auto go = [&](auto&& self, std::size_t start, std::size_t used) -> bool {
          if (start == n && used > 0) return true;
          if (used > n) return false;
          for (std::size_t end = start; end <= n; ++end) {
            auto d = solve(Sequent{sub(a, start, end), c.left()});
            if (!d) continue;
            parts.push_back(d);
            if (self(self, end, used + 1)) return true;
            parts.pop_back();
          }
          return false;
        };
        if (go(go, 0, 0)) return make_derivation(plus ? Rule::PlusR : Rule::StarR, s, parts);
        break;
      }
      default:
        break;
    }

    // Left rules.
    for (std::size_t k = 0; k < n; ++k) {
      Formula f = a[k];
      Seq before = sub(a, 0, k), after = sub(a, k + 1, n);
      switch (f.kind()) {
        case Connective::Under:
          for (std::size_t i = 0; i <= k; ++i) {
            auto minor = solve(Sequent{sub(a, i, k), f.left()});
            if (!minor) continue;
            auto major = solve(Sequent{cat(cat(sub(a, 0, i), Seq{f.right()}), after), c});
            if (major) return make_derivation(Rule::UnderL, s, {minor, major});
          }
          break;
        case Connective::Over:
          for (std::size_t j = k + 1; j <= n; ++j) {
            auto minor = solve(Sequent{sub(a, k + 1, j), f.right()});
            if (!minor) continue;
            auto major = solve(Sequent{cat(cat(before, Seq{f.left()}), sub(a, j, n)), c});
            if (major) return make_derivation(Rule::OverL, s, {minor, major});
          }
          break;
        case Connective::Prod:
          if (auto d = solve(Sequent{cat(cat(before, Seq{f.left(), f.right()}), after), c}))
            return make_derivation(Rule::ProdL, s, {d});
          break;
        case Connective::Unit:
          if (auto d = solve(Sequent{cat(before, after), c})) return make_derivation(Rule::UnitL, s, {d});
          break;
        case Connective::Or: {
          auto l = solve(Sequent{cat(cat(before, Seq{f.left()}), after), c});
          auto r = l ? solve(Sequent{cat(cat(before, Seq{f.right()}), after), c}) : nullptr;
          if (l && r) return make_derivation(Rule::OrL, s, {l, r});
          break;
        }
        case Connective::And:
          if (auto d = solve(Sequent{cat(cat(before, Seq{f.left()}), after), c}))
            return make_derivation(Rule::AndL1, s, {d});
          if (auto d = solve(Sequent{cat(cat(before, Seq{f.right()}), after), c}))
            return make_derivation(Rule::AndL2, s, {d});
          break;
        default:
          break;
      }
    }
    return nullptr;
  }

  const ProverConfig& cfg_;
  std::unordered_map<Sequent, DerivationPtr> memo_;
  std::unordered_set<Sequent> active_;
  bool looped_ = false;
  std::size_t expansions_ = 0;
};

}  // namespace

ProveResult naive_prove(const Sequent& s, const ProverConfig& cfg) {
  require_fragment(s, cfg.fragment);
  require_positive_stars(s);
  NaiveSearch search(cfg);
  ProveResult r;
  try {
    r.derivation = search.solve(s);
    r.verdict = r.derivation ? Verdict::Proved : Verdict::Refuted;
  } catch (const BudgetExceeded&) {
    r.verdict = Verdict::Unknown;
    r.budget_exhausted = true;
    r.note = "naive prover: budget of " + std::to_string(cfg.depth_budget) + " expansions exhausted";
  }
  r.expansions = search.expansions();
  if (r.proved()) audit_derivation(r.derivation, cfg.lambek_restriction);
  return r;
}

}  // namespace lambek
