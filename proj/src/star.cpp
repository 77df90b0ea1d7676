#include "lambek/star.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "lambek/audit.hpp"

namespace lambek {

Formula power(Formula a, std::size_t n) {
  if (n == 0) throw std::invalid_argument("power needs at least one factor");
  Formula out = a;
  for (std::size_t i = 1; i < n; ++i) out = Formula::prod(out, a);
  return out;
}

Formula power_upto(Formula a, std::size_t n) {
  Formula out = n == 0 ? Formula::unit() : power(a, n);
  for (std::size_t k = n; k-- > 0;) out = Formula::disj(k == 0 ? Formula::unit() : power(a, k), out);
  return out;
}

Formula normalize_plus(Formula f) {
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::Unit:
      return f;
    case Connective::Under:
      return Formula::under(normalize_plus(f.denominator()), normalize_plus(f.numerator()));
    case Connective::Over:
      return Formula::over(normalize_plus(f.numerator()), normalize_plus(f.denominator()));
    case Connective::Prod:
      return Formula::prod(normalize_plus(f.left()), normalize_plus(f.right()));
    case Connective::Or:
      return Formula::disj(normalize_plus(f.left()), normalize_plus(f.right()));
    case Connective::And:
      return Formula::conj(normalize_plus(f.left()), normalize_plus(f.right()));
    case Connective::Star:
      return Formula::star(normalize_plus(f.operand()));
    case Connective::Plus: {
      Formula a = normalize_plus(f.operand());
      return Formula::prod(a, Formula::star(a));
    }
  }
  return f;
}

namespace {

Formula approx(Formula f, std::size_t n, bool positive) {
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::Unit:
      return f;
    case Connective::Under:
      return Formula::under(approx(f.denominator(), n, !positive), approx(f.numerator(), n, positive));
    case Connective::Over:
      return Formula::over(approx(f.numerator(), n, positive), approx(f.denominator(), n, !positive));
    case Connective::Prod:
      return Formula::prod(approx(f.left(), n, positive), approx(f.right(), n, positive));
    case Connective::Or:
      return Formula::disj(approx(f.left(), n, positive), approx(f.right(), n, positive));
    case Connective::And:
      return Formula::conj(approx(f.left(), n, positive), approx(f.right(), n, positive));
    case Connective::Star: {
      Formula a = approx(f.operand(), n, positive);
      return positive ? Formula::star(a) : power_upto(a, n);
    }
    case Connective::Plus:
      break;
  }
  throw std::logic_error("approximation of an unnormalized plus");
}

bool negative_star(Formula f, bool positive) {
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::Unit:
      return false;
    case Connective::Under:
      return negative_star(f.denominator(), !positive) || negative_star(f.numerator(), positive);
    case Connective::Over:
      return negative_star(f.numerator(), positive) || negative_star(f.denominator(), !positive);
    case Connective::Star:
    case Connective::Plus:
      return !positive || negative_star(f.operand(), positive);
    default:
      return negative_star(f.left(), positive) || negative_star(f.right(), positive);
  }
}

}  // namespace

Formula approx_positive(Formula f, std::size_t n) { return approx(normalize_plus(f), n, true); }
Formula approx_negative(Formula f, std::size_t n) { return approx(normalize_plus(f), n, false); }

Sequent approximate(const Sequent& s, std::size_t n) {
  Sequent out;
  for (auto f : s.antecedent) out.antecedent.push_back(approx_negative(f, n));
  out.succedent = approx_positive(s.succedent, n);
  return out;
}

bool has_negative_star(const Sequent& s) {
  for (auto f : s.antecedent)
    if (negative_star(f, false)) return true;
  return negative_star(s.succedent, true);
}

std::string_view bounded_verdict_name(BoundedVerdict v) {
  switch (v) {
    case BoundedVerdict::Refuted:
      return "Refuted";
    case BoundedVerdict::Unrefuted:
      return "Unrefuted";
    case BoundedVerdict::Unknown:
      return "Unknown";
  }
  return "?";
}

ApproxReport check_approximations(const Sequent& s, std::size_t up_to, const ProverConfig& cfg) {
  ApproxReport rep;
  std::optional<std::size_t> undecided;
  for (std::size_t n = 0; n <= up_to; ++n) {
    Sequent a = approximate(s, n);
    auto r = prove(a, cfg);
    ++rep.levels_checked;
    if (r.refuted()) {
      rep.verdict = BoundedVerdict::Refuted;
      rep.level = n;
      rep.note = "approximation " + std::to_string(n) + " is underivable, so the sequent is underivable";
      if (undecided) rep.note += "; level " + std::to_string(*undecided) + " was undecided";
      return rep;
    }
    if (r.verdict == Verdict::Unknown && !undecided) undecided = n;
  }
  if (undecided) {
    rep.verdict = BoundedVerdict::Unknown;
    rep.level = undecided;
    rep.note = "prover budget exhausted at approximation " + std::to_string(*undecided);
  } else {
    rep.verdict = BoundedVerdict::Unrefuted;
    rep.note = "approximations 0.." + std::to_string(up_to) +
               " are derivable; this does not establish derivability of the sequent";
  }
  return rep;
}

bool is_star_external(Formula f) {
  switch (f.kind()) {
    case Connective::Prod:
      return is_star_external(f.left()) && is_star_external(f.right());
    case Connective::Star:
    case Connective::Plus:
      return is_star_external(f.operand());
    default:
      return f.product_free();
  }
}

bool is_star_external(const Sequent& s) {
  if (!s.succedent.product_free()) return false;
  return std::all_of(s.antecedent.begin(), s.antecedent.end(), [](Formula f) { return is_star_external(f); });
}

namespace {

// Product-free pieces of a *-external formula, left to right.
void collect_leaves(Formula f, std::vector<Formula>& out) {
  switch (f.kind()) {
    case Connective::Prod:
      collect_leaves(f.left(), out);
      collect_leaves(f.right(), out);
      return;
    case Connective::Star:
    case Connective::Plus:
      collect_leaves(f.operand(), out);
      return;
    default:
      out.push_back(f);
  }
}

std::size_t leaf_count(Formula f) {
  std::vector<Formula> v;
  collect_leaves(f, v);
  return v.size();
}

std::size_t longest_instance(Formula f, std::size_t bound) {
  switch (f.kind()) {
    case Connective::Prod:
      return longest_instance(f.left(), bound) + longest_instance(f.right(), bound);
    case Connective::Star:
    case Connective::Plus:
      return bound * longest_instance(f.operand(), bound);
    default:
      return 1;
  }
}

using Codes = std::vector<std::size_t>;
using CodeSet = std::set<Codes>;

// Instances of exactly `len` elements, as leaf indices. `base` is the index
// of the first leaf of f.
class ExactInstances {
 public:
  explicit ExactInstances(std::size_t bound) : bound_(bound) {}

  const CodeSet& get(Formula f, std::size_t base, std::size_t len) {
    auto key = std::make_tuple(f.id(), base, len);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    CodeSet out;
    switch (f.kind()) {
      case Connective::Prod: {
        std::size_t rb = base + leaf_count(f.left());
        for (std::size_t l = 0; l <= len; ++l) {
          const CodeSet& a = get(f.left(), base, l);
          if (a.empty()) continue;
          const CodeSet& b = get(f.right(), rb, len - l);
          for (const auto& x : a)
            for (const auto& y : b) {
              Codes c = x;
              c.insert(c.end(), y.begin(), y.end());
              out.insert(std::move(c));
            }
        }
        break;
      }
      case Connective::Star:
      case Connective::Plus: {
        std::size_t lo = f.kind() == Connective::Star ? 0 : 1;
        for (std::size_t k = lo; k <= bound_; ++k) {
          const CodeSet& r = repeat(f.operand(), base, k, len);
          out.insert(r.begin(), r.end());
        }
        break;
      }
      default:
        if (len == 1) out.insert(Codes{base});
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  // k pieces of Inst(a) with total length len.
  const CodeSet& repeat(Formula a, std::size_t base, std::size_t k, std::size_t len) {
    auto key = std::make_tuple(a.id(), base, k, len);
    if (auto it = rep_.find(key); it != rep_.end()) return it->second;
    CodeSet out;
    if (k == 0) {
      if (len == 0) out.insert(Codes{});
    } else {
      for (std::size_t l = 0; l <= len; ++l) {
        const CodeSet& first = get(a, base, l);
        if (first.empty()) continue;
        const CodeSet& rest = repeat(a, base, k - 1, len - l);
        for (const auto& x : first)
          for (const auto& y : rest) {
            Codes c = x;
            c.insert(c.end(), y.begin(), y.end());
            out.insert(std::move(c));
          }
      }
    }
    return rep_.emplace(key, std::move(out)).first->second;
  }

  std::size_t bound_;
  std::map<std::tuple<std::uint32_t, std::size_t, std::size_t>, CodeSet> memo_;
  std::map<std::tuple<std::uint32_t, std::size_t, std::size_t, std::size_t>, CodeSet> rep_;
};

}  // namespace

InstanceStream::InstanceStream(Formula source, std::size_t bound, std::size_t max_length)
    : source_(source), bound_(bound), max_length_(max_length) {
  if (!is_star_external(source)) throw NotStarExternal("not *-external: " + render_formula(source));
  collect_leaves(source, leaves_);
  longest_ = longest_instance(source, bound);
}

std::optional<std::vector<Formula>> InstanceStream::next() {
  for (;;) {
    if (loaded_ && pos_ < layer_.size()) {
      std::vector<Formula> out;
      for (std::size_t i : layer_[pos_]) out.push_back(leaves_[i]);
      last_ = layer_[pos_];
      ++pos_;
      return out;
    }
    std::size_t len = loaded_ ? length_ + 1 : 0;
    if (len > longest_ || len > max_length_) return std::nullopt;
    ExactInstances gen(bound_);
    const CodeSet& codes = gen.get(source_, 0, len);
    // Distinct code sequences can name the same formula sequence when a
    // formula occurs at several leaves.
    std::set<std::vector<std::uint32_t>> seen;
    layer_.clear();
    for (const auto& c : codes) {
      std::vector<std::uint32_t> ids;
      for (std::size_t i : c) ids.push_back(leaves_[i].id());
      if (seen.insert(ids).second) layer_.push_back(c);
    }
    length_ = len;
    pos_ = 0;
    loaded_ = true;
  }
}

std::vector<std::vector<Formula>> instances(Formula f, std::size_t bound) {
  InstanceStream st(f, bound);
  std::vector<std::vector<Formula>> out;
  while (auto i = st.next()) out.push_back(std::move(*i));
  return out;
}

InstanceReport check_instances(const Sequent& s, std::size_t bound, const ProverConfig& cfg,
                               std::size_t max_length) {
  if (!is_star_external(s)) throw NotStarExternal("not a *-external sequent: " + render_sequent(s));
  InstanceReport rep;
  FocusedProver prover(cfg);
  auto check = [&](std::vector<Formula> inst) {
    Sequent q{std::move(inst), s.succedent};
    auto r = prover.prove(q);
    ++rep.checked;
    rep.expansions += r.expansions;
    if (r.proved()) return true;
    rep.witness = q;
    if (r.refuted()) {
      rep.verdict = BoundedVerdict::Refuted;
      rep.note = "instance is underivable, so the sequent is underivable";
    } else {
      rep.verdict = BoundedVerdict::Unknown;
      rep.note = r.note;
    }
    return false;
  };
  if (s.antecedent.empty()) {
    if (!check({})) return rep;
  } else {
    Formula whole = s.antecedent[0];
    for (std::size_t i = 1; i < s.antecedent.size(); ++i) whole = Formula::prod(whole, s.antecedent[i]);
    InstanceStream st(whole, bound, max_length);
    while (auto inst = st.next())
      if (!check(std::move(*inst))) {
        rep.witness_codes = st.last_codes();
        return rep;
      }
  }
  rep.verdict = BoundedVerdict::Unrefuted;
  rep.note = std::to_string(rep.checked) + " instances at bound " + std::to_string(bound) +
             " are derivable; this does not establish derivability of the sequent";
  return rep;
}

DerivationPtr identity_derivation(Formula a) {
  Sequent s{{a}, a};
  switch (a.kind()) {
    case Connective::Atom:
      return make_derivation(Rule::Ax, s);
    case Connective::Unit:
      return make_derivation(Rule::UnitL, s, {make_derivation(Rule::UnitAx, Sequent{{}, a})});
    case Connective::Under: {
      Formula x = a.denominator(), y = a.numerator();
      auto inner = make_derivation(Rule::UnderL, Sequent{{x, a}, y}, {identity_derivation(x), identity_derivation(y)});
      return make_derivation(Rule::UnderR, s, {inner});
    }
    case Connective::Over: {
      Formula x = a.denominator(), y = a.numerator();
      auto inner = make_derivation(Rule::OverL, Sequent{{a, x}, y}, {identity_derivation(x), identity_derivation(y)});
      return make_derivation(Rule::OverR, s, {inner});
    }
    case Connective::Prod: {
      auto inner = make_derivation(Rule::ProdR, Sequent{{a.left(), a.right()}, a},
                                   {identity_derivation(a.left()), identity_derivation(a.right())});
      return make_derivation(Rule::ProdL, s, {inner});
    }
    case Connective::Or: {
      auto l = make_derivation(Rule::OrR1, Sequent{{a.left()}, a}, {identity_derivation(a.left())});
      auto r = make_derivation(Rule::OrR2, Sequent{{a.right()}, a}, {identity_derivation(a.right())});
      return make_derivation(Rule::OrL, s, {l, r});
    }
    case Connective::And: {
      auto l = make_derivation(Rule::AndL1, Sequent{{a}, a.left()}, {identity_derivation(a.left())});
      auto r = make_derivation(Rule::AndL2, Sequent{{a}, a.right()}, {identity_derivation(a.right())});
      return make_derivation(Rule::AndR, s, {l, r});
    }
    default:
      throw std::invalid_argument("no finite identity derivation for " + render_formula(a));
  }
}

namespace {

class InstanceParser {
 public:
  explicit InstanceParser(const std::vector<Formula>& inst) : inst_(inst) {}

  DerivationPtr parse(Formula f, std::size_t lo, std::size_t hi) {
    auto key = std::make_tuple(f.id(), lo, hi);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    DerivationPtr d = build(f, lo, hi);
    memo_.emplace(key, d);
    return d;
  }

 private:
  Sequent seq(Formula f, std::size_t lo, std::size_t hi) const {
    return Sequent{std::vector<Formula>(inst_.begin() + lo, inst_.begin() + hi), f};
  }

  DerivationPtr build(Formula f, std::size_t lo, std::size_t hi) {
    switch (f.kind()) {
      case Connective::Prod:
        for (std::size_t m = lo; m <= hi; ++m) {
          auto a = parse(f.left(), lo, m);
          if (!a) continue;
          auto b = parse(f.right(), m, hi);
          if (b) return make_derivation(Rule::ProdR, seq(f, lo, hi), {a, b});
        }
        return nullptr;
      case Connective::Star:
      case Connective::Plus: {
        const Rule rule = f.kind() == Connective::Star ? Rule::StarR : Rule::PlusR;
        if (lo == hi) {
          if (rule == Rule::StarR) return make_derivation(rule, seq(f, lo, hi));
          auto one = parse(f.operand(), lo, hi);
          return one ? make_derivation(rule, seq(f, lo, hi), {one}) : nullptr;
        }
        std::vector<DerivationPtr> pieces;
        if (!pieces_of(f.operand(), lo, hi, pieces)) return nullptr;
        return make_derivation(rule, seq(f, lo, hi), pieces);
      }
      default:
        if (hi == lo + 1 && inst_[lo] == f) return identity_derivation(f);
        return nullptr;
    }
  }

  // Non-empty pieces only; an empty piece never helps once lo < hi.
  bool pieces_of(Formula a, std::size_t lo, std::size_t hi, std::vector<DerivationPtr>& out) {
    if (lo == hi) return true;
    for (std::size_t m = lo + 1; m <= hi; ++m) {
      auto d = parse(a, lo, m);
      if (!d) continue;
      out.push_back(d);
      if (pieces_of(a, m, hi, out)) return true;
      out.pop_back();
    }
    return false;
  }

  const std::vector<Formula>& inst_;
  std::map<std::tuple<std::uint32_t, std::size_t, std::size_t>, DerivationPtr> memo_;
};

}  // namespace

DerivationPtr instance_soundness(Formula f, const std::vector<Formula>& inst) {
  if (!is_star_external(f)) throw std::invalid_argument("not *-external: " + render_formula(f));
  InstanceParser p(inst);
  DerivationPtr d = p.parse(f, 0, inst.size());
  if (!d) throw std::invalid_argument(render_sequence(inst) + " is not an instance of " + render_formula(f));
  audit_derivation(d);
  return d;
}

}  // namespace lambek
