#include "lambek/join.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "lambek/group_word.hpp"

namespace lambek {

namespace {

std::vector<Formula> factors(Formula f) {
  if (f.kind() != Connective::Prod) return {f};
  auto l = factors(f.left());
  auto r = factors(f.right());
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

void require_multiplicative(Formula f) {
  if (!Fragment::multiplicative().allows(f.kind()))
    throw std::invalid_argument("eliminate_product: only \\, /, . and 1 are supported");
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::Unit:
      return;
    default:
      require_multiplicative(f.left());
      require_multiplicative(f.right());
  }
}

struct NoLowerBound {};

Formula elim_pos(Formula f, Variable q);
Formula elim_neg(Formula f, Variable q);

// Denominator positions admit products by currying.
Formula over_den(Formula num, Formula den, bool pos, Variable q) {
  if (den.kind() == Connective::Unit) return num;
  if (den.kind() == Connective::Prod) {
    return over_den(over_den(num, den.right(), pos, q), den.left(), pos, q);
  }
  return Formula::over(num, pos ? elim_neg(den, q) : elim_pos(den, q));
}

Formula under_den(Formula den, Formula num, bool pos, Variable q) {
  if (den.kind() == Connective::Unit) return num;
  if (den.kind() == Connective::Prod) {
    return under_den(den.right(), under_den(den.left(), num, pos, q), pos, q);
  }
  return Formula::under(pos ? elim_neg(den, q) : elim_pos(den, q), num);
}

Formula elim_pos(Formula f, Variable q) {
  if (f.product_free()) return f;
  switch (f.kind()) {
    case Connective::Unit:
      return Formula::over(Formula::atom(q), Formula::atom(q));
    case Connective::Prod: {
      std::vector<Formula> fs;
      for (auto g : factors(f))
        if (g.kind() != Connective::Unit) fs.push_back(elim_pos(g, q));
      if (fs.empty()) return Formula::over(Formula::atom(q), Formula::atom(q));
      if (fs.size() == 1) return fs[0];
      return raise(fs, q);
    }
    case Connective::Over:
      return over_den(elim_pos(f.numerator(), q), f.denominator(), true, q);
    case Connective::Under:
      return under_den(f.denominator(), elim_pos(f.numerator(), q), true, q);
    default:
      throw NoLowerBound{};
  }
}

Formula elim_neg(Formula f, Variable q) {
  if (f.product_free()) return f;
  switch (f.kind()) {
    case Connective::Over:
      return over_den(elim_neg(f.numerator(), q), f.denominator(), false, q);
    case Connective::Under:
      return under_den(f.denominator(), elim_neg(f.numerator(), q), false, q);
    default:
      throw NoLowerBound{};
  }
}

bool is_atom(Formula f) { return f.valid() && f.kind() == Connective::Atom; }

// r/(P\r)
std::optional<Formula> raised_core(Formula f) {
  if (f.kind() != Connective::Over || !is_atom(f.numerator())) return std::nullopt;
  Formula d = f.denominator();
  if (d.kind() != Connective::Under || d.numerator() != f.numerator()) return std::nullopt;
  return d.denominator();
}

Variable pick_fresh(const JoinProblem& p) {
  std::vector<Formula> all;
  for (const auto& g : p.inputs) all.insert(all.end(), g.begin(), g.end());
  auto used = variables_of(all);
  auto occurs = [&](Variable v) { return std::binary_search(used.begin(), used.end(), v); };
  for (auto v : p.variable_budget)
    if (!occurs(v)) return v;
  if (!p.variable_budget.empty())
    throw JoinError(JoinError::Kind::PreconditionViolation,
                    "every variable in the budget occurs in the inputs");
  std::uint32_t gen = 1;
  for (auto v : used)
    if (v.name() == "q") gen = std::max(gen, v.generation() + 1);
  return Variable::make("q", gen);
}

class Verifier {
 public:
  explicit Verifier(const ProverConfig& cfg) : cfg_(cfg), focused_(cfg) {}

  ProveResult run(const Sequent& s) {
    bool pf = s.succedent.product_free() &&
              std::all_of(s.antecedent.begin(), s.antecedent.end(),
                          [](Formula f) { return f.product_free(); });
    return pf ? focused_.prove(s) : prove(s, cfg_);
  }

 private:
  ProverConfig cfg_;
  FocusedProver focused_;
};

std::optional<std::vector<DerivationPtr>> verify_all(Verifier& v, const JoinProblem& p, Formula b) {
  std::vector<DerivationPtr> out;
  for (const auto& g : p.inputs) {
    auto r = v.run(Sequent{g, b});
    if (!r.proved()) return std::nullopt;
    out.push_back(r.derivation);
  }
  return out;
}

Formula single_join(const std::vector<Formula>& g, Variable q) {
  return eliminate_product(product_fold(g, q), q);
}

std::optional<Formula> closed_form(const JoinProblem& p, Variable q) {
  const auto& in = p.inputs;
  std::size_t shortest = in[0].size();
  for (const auto& g : in) shortest = std::min(shortest, g.size());
  std::size_t pre = 0;
  while (pre < shortest &&
         std::all_of(in.begin(), in.end(), [&](const auto& g) { return g[pre] == in[0][pre]; }))
    ++pre;
  std::size_t suf = 0;
  while (pre + suf < shortest && std::all_of(in.begin(), in.end(), [&](const auto& g) {
           return g[g.size() - 1 - suf] == in[0][in[0].size() - 1 - suf];
         }))
    ++suf;

  std::vector<Formula> seq(in[0].begin(), in[0].begin() + static_cast<std::ptrdiff_t>(pre));
  std::vector<std::vector<Formula>> middles;
  for (const auto& g : in) {
    std::vector<Formula> m(g.begin() + static_cast<std::ptrdiff_t>(pre),
                           g.end() - static_cast<std::ptrdiff_t>(suf));
    if (m.empty() || std::find(middles.begin(), middles.end(), m) != middles.end()) continue;
    middles.push_back(m);
  }
  for (const auto& m : middles)
    for (auto f : m) {
      auto j = unit_join(f, q);
      if (!j) return std::nullopt;
      seq.push_back(*j);
    }
  seq.insert(seq.end(), in[0].end() - static_cast<std::ptrdiff_t>(suf), in[0].end());
  for (auto f : seq)
    if (!f.product_free()) return std::nullopt;
  if (seq.empty()) return Formula::over(Formula::atom(q), Formula::atom(q));
  return raise(seq, q);
}

// Product-free formulae over `vars` with exactly `atoms` leaves.
void enumerate_shapes(const std::vector<Formula>& vars, std::size_t atoms,
                      std::map<std::size_t, std::vector<Formula>>& memo) {
  if (memo.count(atoms)) return;
  std::vector<Formula> out;
  if (atoms == 1) {
    out = vars;
  } else {
    for (std::size_t l = 1; l < atoms; ++l) {
      enumerate_shapes(vars, l, memo);
      enumerate_shapes(vars, atoms - l, memo);
      for (auto a : memo[l])
        for (auto b : memo[atoms - l]) {
          out.push_back(Formula::under(a, b));
          out.push_back(Formula::over(a, b));
        }
      if (out.size() > 200'000) break;
    }
  }
  memo[atoms] = std::move(out);
}

std::mutex cache_mutex;
std::map<std::string, JoinCertificate> cache;

std::string cache_key(const JoinProblem& p, const JoinOptions& opt) {
  std::string k;
  for (const auto& g : p.inputs) {
    for (auto f : g) k += std::to_string(f.id()) + ",";
    k += ";";
  }
  k += "|";
  for (auto v : p.variable_budget) k += std::to_string(v.id()) + ",";
  k += "|" + std::to_string(opt.max_candidate_size) + "," + std::to_string(opt.max_candidates);
  return k;
}

}  // namespace

Formula product_fold(std::span<const Formula> gamma, Variable fallback) {
  if (gamma.empty()) return Formula::over(Formula::atom(fallback), Formula::atom(fallback));
  Formula acc = gamma[0];
  for (std::size_t i = 1; i < gamma.size(); ++i) acc = Formula::prod(acc, gamma[i]);
  return acc;
}

Formula eliminate_product(Formula f, Variable q) {
  if (f.product_free()) return f;
  require_multiplicative(f);
  Formula b;
  try {
    b = elim_pos(f, q);
  } catch (const NoLowerBound&) {
    throw JoinError(JoinError::Kind::SynthesisFailed,
                    "no product-free upper bound for " + render_formula(f));
  }
  auto r = prove(Sequent{{f}, b});
  if (!r.proved())
    throw JoinError(JoinError::Kind::SynthesisFailed,
                    "could not verify " + render_formula(f) + " -> " + render_formula(b),
                    {render_formula(b)});
  return b;
}

std::optional<Formula> unit_join(Formula a, Variable q) {
  if (!a.fg_defined() || !zero_balanced(a)) return std::nullopt;
  switch (a.kind()) {
    case Connective::Unit:
      return Formula::over(Formula::atom(q), Formula::atom(q));
    case Connective::Prod: {
      std::vector<Formula> js;
      for (auto g : factors(a)) {
        auto j = unit_join(g, q);
        if (!j) return std::nullopt;
        js.push_back(*j);
      }
      return raise(js, q);
    }
    case Connective::Over: {
      Formula x = a.numerator(), y = a.denominator();
      if (x == y) return a;
      // (r/(P\r))/(q/(P\q)) -> (r/(P\r))/P
      auto cx = raised_core(x), cy = raised_core(y);
      if (cx && cy && *cx == *cy) return Formula::over(x, *cx);
      // x/(Γ\x) -> x/(J(Γ)\x)
      if (is_atom(x)) {
        Spine sp = unfold_spine(y);
        if (sp.core == x && sp.right.empty() && !sp.left.empty()) {
          std::vector<Formula> js;
          for (auto g : sp.left) {
            auto j = unit_join(g, q);
            if (!j) break;
            js.push_back(*j);
          }
          if (js.size() == sp.left.size()) return Formula::over(x, curried_division(js, x, {}));
        }
      }
      if (zero_balanced(x) && zero_balanced(y)) {
        auto jx = unit_join(x, q), jy = unit_join(y, q);
        if (jx && jy) return Formula::over(raise(std::vector<Formula>{*jx, *jy}, q), y);
      }
      return std::nullopt;
    }
    case Connective::Under: {
      Formula y = a.denominator(), x = a.numerator();
      if (x == y) return a;
      // (x/Γ)\x -> (x/J(Γ))\x
      if (is_atom(x)) {
        Spine sp = unfold_spine(y);
        if (sp.core == x && sp.left.empty() && !sp.right.empty()) {
          std::vector<Formula> js;
          for (auto g : sp.right) {
            auto j = unit_join(g, q);
            if (!j) break;
            js.push_back(*j);
          }
          if (js.size() == sp.right.size()) return Formula::under(curried_division({}, x, js), x);
        }
      }
      if (zero_balanced(x) && zero_balanced(y)) {
        auto jx = unit_join(x, q), jy = unit_join(y, q);
        if (jx && jy) return Formula::under(y, raise(std::vector<Formula>{*jy, *jx}, q));
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

JoinCertificate join(const JoinProblem& p, const JoinOptions& opt) {
  if (p.inputs.empty())
    throw JoinError(JoinError::Kind::PreconditionViolation, "join needs at least one input");
  std::optional<GroupWord> image;
  for (const auto& g : p.inputs) {
    for (auto f : g)
      if (!f.fg_defined())
        throw JoinError(JoinError::Kind::PreconditionViolation,
                        "input " + render_sequence(g) + " has no free-group image");
    GroupWord w = fg_interp(g);
    if (!image) {
      image = w;
    } else if (w != *image) {
      throw JoinError(JoinError::Kind::PreconditionViolation,
                      "free-group images differ: " + image->str() + " vs " + w.str());
    }
  }

  std::string key;
  if (opt.use_cache) {
    key = cache_key(p, opt);
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  Variable q = pick_fresh(p);
  Verifier verifier(opt.prover);
  std::vector<std::string> tried;
  auto attempt = [&](Formula b, const char* strategy) -> std::optional<JoinCertificate> {
    tried.push_back(render_formula(b));
    auto w = verify_all(verifier, p, b);
    if (!w) return std::nullopt;
    return JoinCertificate{b, std::move(*w), strategy};
  };

  std::optional<JoinCertificate> result;
  bool all_same = std::all_of(p.inputs.begin(), p.inputs.end(),
                              [&](const auto& g) { return g == p.inputs[0]; });
  if (all_same) {
    try {
      result = attempt(single_join(p.inputs[0], q), "single");
    } catch (const JoinError&) {
    }
  }
  if (!result) {
    if (auto b = closed_form(p, q)) result = attempt(*b, "closed-form");
  }
  if (!result) {
    // Enumerative fallback: inputs that are already formulae, raisings of
    // whole inputs, then small formulae with the right image.
    Verifier cheap(ProverConfig{opt.prover.fragment, opt.prover.lambek_restriction,
                                opt.candidate_budget, true});
    std::size_t budget = opt.max_candidates;
    auto try_cheap = [&](Formula b) {
      if (budget == 0 || b.size() > opt.max_candidate_size || !b.product_free()) return false;
      --budget;
      tried.push_back(render_formula(b));
      auto w = verify_all(cheap, p, b);
      if (!w) return false;
      result = JoinCertificate{b, std::move(*w), "synthesis"};
      return true;
    };
    for (const auto& g : p.inputs) {
      if (result) break;
      if (g.size() == 1) try_cheap(g[0]);
    }
    for (const auto& g : p.inputs) {
      if (result) break;
      bool pf = std::all_of(g.begin(), g.end(), [](Formula f) { return f.product_free(); });
      if (pf && !g.empty()) try_cheap(raise(g, q));
    }
    if (!result) {
      std::vector<Formula> all;
      for (const auto& g : p.inputs) all.insert(all.end(), g.begin(), g.end());
      std::vector<Formula> vars;
      for (auto v : variables_of(all)) vars.push_back(Formula::atom(v));
      vars.push_back(Formula::atom(q));
      std::map<std::size_t, std::vector<Formula>> memo;
      for (std::size_t atoms = 1; !result && budget > 0 && 2 * atoms - 1 <= opt.max_candidate_size;
           ++atoms) {
        enumerate_shapes(vars, atoms, memo);
        for (auto b : memo[atoms]) {
          if (fg_interp(b) != *image) continue;
          if (try_cheap(b) || budget == 0) break;
        }
      }
    }
  }
  if (!result) {
    std::string msg = "no verified join among " + std::to_string(tried.size()) + " candidates";
    throw JoinError(JoinError::Kind::SynthesisFailed, msg, tried);
  }
  if (opt.use_cache) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(key, *result);
  }
  return *result;
}

bool verify_certificate(const JoinProblem& p, const JoinCertificate& c) {
  if (!c.join.valid() || !c.join.product_free() || c.witnesses.size() != p.inputs.size())
    return false;
  for (std::size_t i = 0; i < p.inputs.size(); ++i) {
    const auto& d = c.witnesses[i];
    if (!d || !(d->conclusion == Sequent{p.inputs[i], c.join})) return false;
    if (!check_derivation(d)) return false;
  }
  return true;
}

void clear_join_cache() {
  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.clear();
}

std::size_t join_cache_size() {
  std::lock_guard<std::mutex> lock(cache_mutex);
  return cache.size();
}

}  // namespace lambek
