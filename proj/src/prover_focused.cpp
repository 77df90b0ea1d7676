#include <unordered_map>

#include "lambek/audit.hpp"
#include "lambek/group_word.hpp"
#include "lambek/prover.hpp"

namespace lambek {

namespace {

struct BudgetExceeded {};

using Seq = std::vector<Formula>;

struct Shape {
  Spine spine;
  std::optional<Variable> top;
};

}  // namespace

struct FocusedProver::Impl {
  ProverConfig cfg;
  // Atomic goals only; nullptr = underivable.
  std::unordered_map<Sequent, DerivationPtr> memo;
  std::unordered_map<std::uint32_t, Shape> shapes;
  std::size_t expansions = 0;

  explicit Impl(ProverConfig c) : cfg(c) {}

  const Shape& shape(Formula f) {
    auto it = shapes.find(f.id());
    if (it == shapes.end()) it = shapes.emplace(f.id(), Shape{unfold_spine(f), f.top()}).first;
    return it->second;
  }

  // Necessary condition for lo..hi -> goal: after inverting the goal there
  // is a formula that can be principal in the sense of principal_candidates.
  bool viable(const Formula* lo, const Formula* hi, Formula goal) {
    const Shape& g = shape(goal);
    if (!g.spine.core.is_atom()) return true;
    const Variable q = g.spine.core.var();
    const std::size_t n = g.spine.left.size() + static_cast<std::size_t>(hi - lo) + g.spine.right.size();
    std::size_t idx = 0;
    auto fits = [&](Formula f) {
      const std::size_t k = idx++;
      const Shape& s = shape(f);
      if (!s.top || *s.top != q) return false;
      if (s.spine.left.empty() && k > 0) return false;
      if (s.spine.right.empty() && k + 1 < n) return false;
      return true;
    };
    for (Formula f : g.spine.left)
      if (fits(f)) return true;
    for (const Formula* p = lo; p != hi; ++p)
      if (fits(*p)) return true;
    for (Formula f : g.spine.right)
      if (fits(f)) return true;
    return false;
  }

  // Inverts (->\) and (->/) eagerly; only the atomic sequent is memoized.
  DerivationPtr solve(const Sequent& s) {
    const Formula c = s.succedent;
    if (c.kind() != Connective::Under && c.kind() != Connective::Over) return solve_atomic(s);
    if (cfg.lambek_restriction && s.antecedent.empty()) return nullptr;
    const Shape& g = shape(c);
    Sequent inner{g.spine.left, g.spine.core};
    inner.antecedent.insert(inner.antecedent.end(), s.antecedent.begin(), s.antecedent.end());
    inner.antecedent.insert(inner.antecedent.end(), g.spine.right.begin(), g.spine.right.end());
    DerivationPtr d = solve_atomic(inner);
    if (!d) return nullptr;
    // Rebuild the intermediate sequents from the outside in.
    std::vector<Sequent> chain{s};
    while (chain.back().succedent.kind() == Connective::Under ||
           chain.back().succedent.kind() == Connective::Over) {
      const Sequent& cur = chain.back();
      Formula f = cur.succedent;
      Sequent next{{}, f.numerator()};
      if (f.kind() == Connective::Under) {
        next.antecedent.push_back(f.denominator());
        next.antecedent.insert(next.antecedent.end(), cur.antecedent.begin(), cur.antecedent.end());
      } else {
        next.antecedent = cur.antecedent;
        next.antecedent.push_back(f.denominator());
      }
      chain.push_back(std::move(next));
    }
    for (std::size_t i = chain.size() - 1; i-- > 0;) {
      Rule r = chain[i].succedent.kind() == Connective::Under ? Rule::UnderR : Rule::OverR;
      d = make_derivation(r, chain[i], {d});
    }
    return d;
  }

  DerivationPtr solve_atomic(const Sequent& s) {
    if (cfg.lambek_restriction && s.antecedent.empty()) return nullptr;
    if (cfg.memo_enabled) {
      if (auto it = memo.find(s); it != memo.end()) return it->second;
    }
    if (++expansions > cfg.depth_budget) throw BudgetExceeded{};
    DerivationPtr d = expand(s);
    if (cfg.memo_enabled) memo.emplace(s, d);
    return d;
  }

  DerivationPtr expand(const Sequent& s) {
    const Formula c = s.succedent;
    if (fg_interp(s.antecedent) != *c.fg_word()) return nullptr;
    if (s.antecedent.size() == 1 && s.antecedent[0] == c) return make_derivation(Rule::Ax, s);

    for (std::size_t k : principal_candidates(s, true)) {
      const Spine& sp = shape(s.antecedent[k]).spine;
      std::vector<std::size_t> left_ends, right_ends;
      if (!split(s.antecedent, 0, k, sp.left, left_ends)) continue;
      if (!split(s.antecedent, k + 1, s.antecedent.size(), sp.right, right_ends)) continue;

      std::vector<DerivationPtr> ld, rd;
      std::size_t start = 0;
      for (std::size_t i = 0; i < sp.left.size(); ++i) {
        ld.push_back(solve(segment(s.antecedent, start, left_ends[i], sp.left[i])));
        start = left_ends[i];
      }
      start = k + 1;
      for (std::size_t j = 0; j < sp.right.size(); ++j) {
        rd.push_back(solve(segment(s.antecedent, start, right_ends[j], sp.right[j])));
        start = right_ends[j];
      }
      return peel(s, k, ld, rd);
    }
    return nullptr;
  }

  static Sequent segment(const Seq& ant, std::size_t lo, std::size_t hi, Formula goal) {
    return Sequent{Seq(ant.begin() + lo, ant.begin() + hi), goal};
  }

  // Cuts [lo, hi) into dens.size() contiguous segments, segment i proving
  // dens[i]. Fills `ends` with the end of each segment; earliest cuts first.
  // Segments failing viable() are never searched, and a cut is only tried
  // when the remaining material can still be covered by viable segments.
  bool split(const Seq& ant, std::size_t lo, std::size_t hi, const std::vector<Formula>& dens,
             std::vector<std::size_t>& ends) {
    const std::size_t n = dens.size();
    if (n == 0) return lo == hi;
    ends.assign(n, 0);
    const std::size_t width = hi - lo + 1;
    auto cell = [&](std::size_t i, std::size_t pos) { return i * width + (pos - lo); };
    std::vector<char> ok(n * width * width, 0);
    auto ok_at = [&](std::size_t i, std::size_t a, std::size_t b) -> char& {
      return ok[(i * width + (a - lo)) * width + (b - lo)];
    };
    // covers[i, pos]: dens[i..n) can cover [pos, hi) with viable segments.
    std::vector<char> covers((n + 1) * width, 0);
    covers[cell(n, hi)] = 1;
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t a = lo; a <= hi; ++a) {
        std::size_t first = (i + 1 == n) ? hi : a;
        for (std::size_t b = first; b <= hi; ++b) {
          if (!covers[cell(i + 1, b)]) continue;
          if (viable(ant.data() + a, ant.data() + b, dens[i])) {
            ok_at(i, a, b) = 1;
            covers[cell(i, a)] = 1;
          }
        }
      }
    }
    if (!covers[cell(0, lo)]) return false;

    std::vector<char> dead(n * width, 0);
    auto go = [&](auto&& self, std::size_t i, std::size_t start) -> bool {
      if (i == n) return start == hi;
      char& mark = dead[cell(i, start)];
      if (mark) return false;
      std::size_t first = (i + 1 == n) ? hi : start;
      for (std::size_t end = first; end <= hi; ++end) {
        if (!ok_at(i, start, end)) continue;
        if (solve(segment(ant, start, end, dens[i])) && self(self, i + 1, end)) {
          ends[i] = end;
          return true;
        }
      }
      mark = 1;
      return false;
    };
    return go(go, 0, lo);
  }

  // Rebuilds the derivation of Phi_1..Phi_n, F, Psi_1..Psi_m -> q by peeling
  // the outermost connective of F one step at a time.
  DerivationPtr peel(const Sequent& s, std::size_t k, const std::vector<DerivationPtr>& ld,
                     const std::vector<DerivationPtr>& rd) {
    // Current sequent: Gamma, G, Delta -> q where G is the remaining part of F,
    // Gamma is the material before it and Delta the material after it.
    struct Frame {
      Sequent seq;
      std::size_t g;  // index of G in seq.antecedent
      std::size_t nl;  // left denominators still to consume: X_1..X_nl
      std::size_t jr;  // next right denominator to consume
    };
    std::vector<Frame> chain;
    chain.push_back({s, k, ld.size(), 0});
    for (;;) {
      const Frame& f = chain.back();
      Formula g = f.seq.antecedent[f.g];
      if (g.is_atom()) break;
      Frame next;
      if (g.kind() == Connective::Under) {
        const Sequent& prem = ld[f.nl - 1]->conclusion;
        std::size_t len = prem.antecedent.size();
        Seq a(f.seq.antecedent.begin(), f.seq.antecedent.begin() + (f.g - len));
        a.push_back(g.numerator());
        a.insert(a.end(), f.seq.antecedent.begin() + f.g + 1, f.seq.antecedent.end());
        next = {Sequent{std::move(a), s.succedent}, f.g - len, f.nl - 1, f.jr};
      } else {
        const Sequent& prem = rd[f.jr]->conclusion;
        std::size_t len = prem.antecedent.size();
        Seq a(f.seq.antecedent.begin(), f.seq.antecedent.begin() + f.g);
        a.push_back(g.numerator());
        a.insert(a.end(), f.seq.antecedent.begin() + f.g + 1 + len, f.seq.antecedent.end());
        next = {Sequent{std::move(a), s.succedent}, f.g, f.nl, f.jr + 1};
      }
      chain.push_back(std::move(next));
    }
    DerivationPtr d = make_derivation(Rule::Ax, chain.back().seq);
    for (std::size_t i = chain.size() - 1; i-- > 0;) {
      const Frame& f = chain[i];
      Formula g = f.seq.antecedent[f.g];
      if (g.kind() == Connective::Under) {
        d = make_derivation(Rule::UnderL, f.seq, {ld[f.nl - 1], d});
      } else {
        d = make_derivation(Rule::OverL, f.seq, {rd[f.jr], d});
      }
    }
    return d;
  }
};

FocusedProver::FocusedProver(ProverConfig cfg) : impl_(std::make_unique<Impl>(cfg)) {}
FocusedProver::~FocusedProver() = default;
FocusedProver::FocusedProver(FocusedProver&&) noexcept = default;
FocusedProver& FocusedProver::operator=(FocusedProver&&) noexcept = default;

std::size_t FocusedProver::memo_size() const { return impl_->memo.size(); }
const ProverConfig& FocusedProver::config() const { return impl_->cfg; }

ProveResult FocusedProver::prove(const Sequent& s) {
  require_fragment(s, impl_->cfg.fragment);
  for (auto f : s.antecedent)
    if (!f.product_free()) throw FragmentError("focused prover needs product-free input: " + render_sequent(s));
  if (!s.succedent.product_free())
    throw FragmentError("focused prover needs product-free input: " + render_sequent(s));

  ProveResult r;
  impl_->expansions = 0;
  try {
    r.derivation = impl_->solve(s);
    r.verdict = r.derivation ? Verdict::Proved : Verdict::Refuted;
  } catch (const BudgetExceeded&) {
    r.verdict = Verdict::Unknown;
    r.budget_exhausted = true;
    r.note = "focused prover: budget of " + std::to_string(impl_->cfg.depth_budget) + " expansions exhausted";
  }
  r.expansions = impl_->expansions;
  if (r.proved()) audit_derivation(r.derivation, impl_->cfg.lambek_restriction);
  return r;
}

ProveResult prove_focused(const Sequent& s, const ProverConfig& cfg) {
  FocusedProver p(cfg);
  return p.prove(s);
}

}  // namespace lambek
