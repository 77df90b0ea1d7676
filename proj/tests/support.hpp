#pragma once

// Random formula and sequent generators for property tests.

#include <random>
#include <vector>

#include "lambek/cfg.hpp"
#include "lambek/formula.hpp"

namespace lambek::testing {

inline Formula random_formula(std::mt19937& rng, std::size_t size, const std::vector<Connective>& binary,
                              const std::vector<Connective>& unary = {}, std::size_t vars = 3,
                              bool allow_unit = false) {
  static const char* names[] = {"p", "q", "r", "s", "t"};
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  if (size <= 1 || (binary.empty() && unary.empty())) {
    if (allow_unit && pick(6) == 0) return Formula::unit();
    return Formula::atom(names[pick(vars)]);
  }
  if (!unary.empty() && (binary.empty() || size == 2 || pick(4) == 0)) {
    Formula a = random_formula(rng, size - 1, binary, unary, vars, allow_unit);
    return unary[pick(unary.size())] == Connective::Star ? Formula::star(a) : Formula::plus(a);
  }
  if (size == 2) return Formula::atom(names[pick(vars)]);
  std::size_t left = 1 + pick(size - 2);
  Formula a = random_formula(rng, left, binary, unary, vars, allow_unit);
  Formula b = random_formula(rng, size - 1 - left, binary, unary, vars, allow_unit);
  switch (binary[pick(binary.size())]) {
    case Connective::Under:
      return Formula::under(a, b);
    case Connective::Over:
      return Formula::over(a, b);
    case Connective::Prod:
      return Formula::prod(a, b);
    case Connective::Or:
      return Formula::disj(a, b);
    default:
      return Formula::conj(a, b);
  }
}

/// Product-free sequent with total size at most `max_size`.
inline Sequent random_product_free_sequent(std::mt19937& rng, std::size_t max_size, std::size_t vars = 3) {
  const std::vector<Connective> divs{Connective::Under, Connective::Over};
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  std::size_t total = pick(2, max_size);
  std::size_t succ = pick(1, std::min<std::size_t>(total - 1, 5));
  Sequent s;
  s.succedent = random_formula(rng, succ, divs, {}, vars);
  std::size_t rest = total - succ;
  while (rest > 0) {
    std::size_t sz = pick(1, std::min<std::size_t>(rest, 5));
    s.antecedent.push_back(random_formula(rng, sz, divs, {}, vars));
    rest -= std::min(rest, s.antecedent.back().size());
  }
  if (pick(0, 9) == 0) s.antecedent.clear();
  return s;
}

// Random *-external formula: product-free leaves under ., *, +.
inline Formula random_external(std::mt19937& rng, std::size_t size) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::vector<Connective> divs{Connective::Under, Connective::Over};
  if (size <= 1 || pick(5) == 0) return random_formula(rng, std::max<std::size_t>(size, 1), divs, {}, 3);
  switch (pick(3)) {
    case 0:
      return Formula::star(random_external(rng, size - 1));
    case 1:
      return Formula::plus(random_external(rng, size - 1));
    default: {
      if (size < 3) return Formula::star(random_external(rng, size - 1));
      std::size_t l = 1 + pick(size - 2);
      return Formula::prod(random_external(rng, l), random_external(rng, size - 1 - l));
    }
  }
}

// Upper bound on |Inst(a)| at the given bound, counting unfoldings rather
// than distinct sequences.
inline double unfoldings(Formula a, std::size_t bound) {
  switch (a.kind()) {
    case Connective::Prod:
      return unfoldings(a.left(), bound) * unfoldings(a.right(), bound);
    case Connective::Star:
    case Connective::Plus: {
      double c = unfoldings(a.operand(), bound), sum = a.kind() == Connective::Star ? 1 : 0, pw = 1;
      for (std::size_t k = 1; k <= bound; ++k) sum += pw *= c;
      return sum;
    }
    default:
      return 1;
  }
}

// Nested stars over several leaves make Inst astronomically large; such
// draws are redrawn.
constexpr double kMaxUnfoldings = 5000;

inline Formula random_tractable(std::mt19937& rng, std::size_t size, std::size_t bound, std::size_t& redrawn) {
  for (;;) {
    Formula a = random_external(rng, size);
    if (unfoldings(a, bound) <= kMaxUnfoldings) return a;
    ++redrawn;
  }
}

// Random grammar over terminals a, b with up to max_nt nonterminals.
inline Cfg random_grammar(std::mt19937& rng, bool allow_eps, std::size_t max_nt = 4,
                          std::size_t max_rules = 6) {
  std::size_t nts = 1 + rng() % max_nt;
  std::size_t rules = std::max<std::size_t>(nts, 1 + rng() % max_rules);
  static const char* names[] = {"S", "A", "B", "C"};
  std::string text;
  for (std::size_t r = 0; r < rules; ++r) {
    std::size_t lhs = r < nts ? r : rng() % nts;
    std::size_t len = allow_eps ? rng() % 4 : 1 + rng() % 3;
    text += std::string(names[lhs]) + " ->";
    for (std::size_t i = 0; i < len; ++i) {
      if (rng() % 2) {
        text += std::string(" ") + ((rng() % 2) ? "a" : "b");
      } else {
        text += std::string(" ") + names[rng() % nts];
      }
    }
    text += "\n";
  }
  return parse_cfg(text);
}

}  // namespace lambek::testing
