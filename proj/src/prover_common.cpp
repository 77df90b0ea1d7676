#include "lambek/prover.hpp"

#include <functional>

namespace lambek {

namespace {

constexpr std::uint16_t bit(Connective c) { return static_cast<std::uint16_t>(1u << static_cast<unsigned>(c)); }

const char* connective_symbol(Connective c) {
  switch (c) {
    case Connective::Atom:
      return "atom";
    case Connective::Unit:
      return "1";
    case Connective::Under:
      return "\\";
    case Connective::Over:
      return "/";
    case Connective::Prod:
      return ".";
    case Connective::Or:
      return "|";
    case Connective::And:
      return "&";
    case Connective::Star:
      return "^*";
    case Connective::Plus:
      return "^+";
  }
  return "?";
}

void walk_polarity(Formula f, bool positive, const Sequent& s) {
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::Unit:
      return;
    case Connective::Under:
    case Connective::Over:
      walk_polarity(f.denominator(), !positive, s);
      walk_polarity(f.numerator(), positive, s);
      return;
    case Connective::Prod:
    case Connective::Or:
    case Connective::And:
      walk_polarity(f.left(), positive, s);
      walk_polarity(f.right(), positive, s);
      return;
    case Connective::Star:
    case Connective::Plus:
      if (!positive)
        throw UnsupportedNegativeStar("negative occurrence of " + render_formula(f) + " in " + render_sequent(s) +
                                      "; use the star engine (approximations or instances)");
      walk_polarity(f.operand(), positive, s);
      return;
  }
}

void walk_fragment(Formula f, Fragment frag, const Sequent& s) {
  if (f.kind() != Connective::Atom && !frag.allows(f.kind()))
    throw FragmentError(std::string("connective ") + connective_symbol(f.kind()) + " not enabled in " +
                        render_sequent(s));
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::Unit:
      return;
    case Connective::Star:
    case Connective::Plus:
      walk_fragment(f.operand(), frag, s);
      return;
    default:
      walk_fragment(f.left(), frag, s);
      walk_fragment(f.right(), frag, s);
  }
}

}  // namespace

Fragment Fragment::all() { return Fragment(0x1ff); }
Fragment Fragment::product_free() { return Fragment(bit(Connective::Under) | bit(Connective::Over)); }
Fragment Fragment::multiplicative() {
  return Fragment(bit(Connective::Under) | bit(Connective::Over) | bit(Connective::Prod) | bit(Connective::Unit));
}
Fragment Fragment::of(std::initializer_list<Connective> cs) {
  std::uint16_t m = 0;
  for (auto c : cs) m |= bit(c);
  return Fragment(m);
}
bool Fragment::allows(Connective c) const { return c == Connective::Atom || (mask_ & bit(c)) != 0; }
Fragment Fragment::with(Connective c) const { return Fragment(static_cast<std::uint16_t>(mask_ | bit(c))); }
Fragment Fragment::without(Connective c) const {
  return Fragment(static_cast<std::uint16_t>(mask_ & ~bit(c)));
}

std::string Fragment::str() const {
  std::string out;
  for (auto c : {Connective::Under, Connective::Over, Connective::Prod, Connective::Unit, Connective::Or,
                 Connective::And, Connective::Star, Connective::Plus}) {
    if (!allows(c)) continue;
    if (!out.empty()) out += ' ';
    out += connective_symbol(c);
  }
  return out;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Proved:
      return "Proved";
    case Verdict::Refuted:
      return "Refuted";
    case Verdict::Unknown:
      return "Unknown";
  }
  return "?";
}

void require_positive_stars(const Sequent& s) {
  for (auto f : s.antecedent) walk_polarity(f, false, s);
  walk_polarity(s.succedent, true, s);
}

void require_fragment(const Sequent& s, Fragment frag) {
  for (auto f : s.antecedent) walk_fragment(f, frag, s);
  walk_fragment(s.succedent, frag, s);
}

Sequent invert_to_atomic(const Sequent& s) {
  Sequent out = s;
  for (;;) {
    Formula c = out.succedent;
    if (c.kind() == Connective::Under) {
      out.antecedent.insert(out.antecedent.begin(), c.denominator());
      out.succedent = c.numerator();
    } else if (c.kind() == Connective::Over) {
      out.antecedent.push_back(c.denominator());
      out.succedent = c.numerator();
    } else {
      return out;
    }
  }
}

std::vector<std::size_t> principal_candidates(const Sequent& s, bool filtered) {
  std::vector<std::size_t> out;
  if (!s.succedent.is_atom()) return out;
  const Variable q = s.succedent.var();
  const std::size_t n = s.antecedent.size();
  for (std::size_t k = 0; k < n; ++k) {
    Formula f = s.antecedent[k];
    auto t = f.top();
    if (!t || *t != q) continue;
    if (filtered) {
      Spine sp = unfold_spine(f);
      if (sp.left.empty() && k > 0) continue;
      if (sp.right.empty() && k + 1 < n) continue;
    }
    out.push_back(k);
  }
  return out;
}

std::vector<std::vector<Sequent>> decompose_at(const Sequent& s, std::size_t pos) {
  if (pos >= s.antecedent.size()) throw std::out_of_range("decompose_at: position out of range");
  Formula f = s.antecedent[pos];
  Spine sp = unfold_spine(f);
  if (!sp.core.is_atom() || sp.core != s.succedent)
    throw std::invalid_argument("decompose_at: " + render_formula(f) + " does not have top " +
                                render_formula(s.succedent));
  const auto& ant = s.antecedent;
  std::vector<std::vector<Sequent>> out;

  // All ways to cut [lo, hi) into `dens.size()` contiguous, possibly empty,
  // segments, paired with the denominators.
  auto splits = [&](std::size_t lo, std::size_t hi, const std::vector<Formula>& dens) {
    std::vector<std::vector<Sequent>> res;
    std::vector<Sequent> cur;
    std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t start) {
      if (i == dens.size()) {
        if (start == hi) res.push_back(cur);
        return;
      }
      std::size_t first_end = (i + 1 == dens.size()) ? hi : start;
      for (std::size_t end = first_end; end <= hi; ++end) {
        cur.push_back(Sequent{std::vector<Formula>(ant.begin() + start, ant.begin() + end), dens[i]});
        go(i + 1, end);
        cur.pop_back();
      }
    };
    go(0, lo);
    return res;
  };

  auto left = splits(0, pos, sp.left);
  auto right = splits(pos + 1, ant.size(), sp.right);
  for (const auto& l : left) {
    for (const auto& r : right) {
      std::vector<Sequent> set = l;
      set.insert(set.end(), r.begin(), r.end());
      out.push_back(std::move(set));
    }
  }
  return out;
}

}  // namespace lambek
