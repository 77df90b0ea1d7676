#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "lambek/cfg.hpp"

namespace lambek {

namespace {

// Removes nonterminals that are unproductive or unreachable from index 0
// and renumbers the rest in order of first appearance (start first).
GnfCfg prune(const GnfCfg& g) {
  const std::size_t n = g.nonterminals.size();
  std::vector<char> productive(n, 0);
  auto tail_ok = [&](const GnfRule& r, const std::vector<char>& mark) {
    return (!r.k || mark[*r.k]) && (!r.l || mark[*r.l]);
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : g.rules)
      if (!productive[r.lhs] && tail_ok(r, productive)) productive[r.lhs] = 1, changed = true;
  }
  GnfCfg out;
  out.terminals = g.terminals;
  out.warnings = g.warnings;
  if (n == 0) return out;
  if (!productive[0]) {
    out.nonterminals.push_back(g.nonterminals[0]);
    out.warnings.push_back("language is empty");
    return out;
  }
  std::vector<long> remap(n, -1);
  std::deque<std::size_t> todo{0};
  remap[0] = 0;
  out.nonterminals.push_back(g.nonterminals[0]);
  std::vector<std::vector<const GnfRule*>> by_lhs(n);
  for (const auto& r : g.rules)
    if (productive[r.lhs] && tail_ok(r, productive)) by_lhs[r.lhs].push_back(&r);
  std::vector<std::size_t> order{0};
  while (!todo.empty()) {
    std::size_t a = todo.front();
    todo.pop_front();
    for (const GnfRule* r : by_lhs[a])
      for (auto x : {r->k, r->l})
        if (x && remap[*x] < 0) {
          remap[*x] = static_cast<long>(out.nonterminals.size());
          out.nonterminals.push_back(g.nonterminals[*x]);
          order.push_back(*x);
          todo.push_back(*x);
        }
  }
  for (std::size_t a : order)
    for (const GnfRule* r : by_lhs[a]) {
      GnfRule nr{static_cast<std::size_t>(remap[a]), r->terminal, std::nullopt, std::nullopt};
      if (r->k) nr.k = static_cast<std::size_t>(remap[*r->k]);
      if (r->l) nr.l = static_cast<std::size_t>(remap[*r->l]);
      if (std::find(out.rules.begin(), out.rules.end(), nr) == out.rules.end()) out.rules.push_back(nr);
    }
  return out;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Grammars already of the form N -> a X1 .. Xk without epsilon rules: lift
// non-initial terminals into nonterminals. Fails if some tail stays longer
// than two.
std::optional<GnfCfg> direct_gnf(const Cfg& g) {
  for (const auto& r : g.rules)
    if (r.rhs.empty() || !r.rhs[0].terminal || r.rhs.size() > 3) return std::nullopt;

  GnfCfg out;
  out.terminals = g.terminals;
  std::map<std::string, std::size_t> idx;
  auto add = [&](const std::string& name) {
    idx.emplace(name, out.nonterminals.size());
    out.nonterminals.push_back(name);
  };
  add(g.start);
  for (const auto& n : g.nonterminals)
    if (!idx.count(n)) add(n);
  std::map<std::string, std::size_t> lifted;
  std::vector<GnfRule> lift_rules;
  auto lift = [&](const std::string& t) {
    if (auto it = lifted.find(t); it != lifted.end()) return it->second;
    std::string name = upper(t);
    while (idx.count(name)) name += "'";
    add(name);
    std::size_t id = idx.at(name);
    lifted.emplace(t, id);
    lift_rules.push_back({id, t, std::nullopt, std::nullopt});
    return id;
  };
  for (const auto& r : g.rules) {
    GnfRule nr{idx.at(r.lhs), r.rhs[0].name, std::nullopt, std::nullopt};
    std::vector<std::size_t> tail;
    for (std::size_t i = 1; i < r.rhs.size(); ++i)
      tail.push_back(r.rhs[i].terminal ? lift(r.rhs[i].name) : idx.at(r.rhs[i].name));
    if (tail.size() >= 1) nr.k = tail[0];
    if (tail.size() >= 2) nr.l = tail[1];
    out.rules.push_back(nr);
  }
  out.rules.insert(out.rules.end(), lift_rules.begin(), lift_rules.end());
  return prune(out);
}

struct Cnf {
  std::size_t n = 0;
  std::size_t start = 0;
  std::vector<std::pair<std::size_t, std::string>> lexical;  // A -> a
  std::vector<std::array<std::size_t, 3>> binary;            // A -> B C
};

Cnf to_cnf(const Cfg& g) {
  std::map<std::string, std::size_t> nt;
  for (const auto& n : g.nonterminals) nt.emplace(n, nt.size());
  struct Sym {
    bool terminal;
    std::size_t nt;
    std::string t;
    auto key() const { return std::make_tuple(terminal, nt, t); }
    bool operator<(const Sym& o) const { return key() < o.key(); }
  };
  using Rhs = std::vector<Sym>;
  std::vector<std::pair<std::size_t, Rhs>> rules;
  for (const auto& r : g.rules) {
    Rhs rhs;
    for (const auto& s : r.rhs) rhs.push_back(s.terminal ? Sym{true, 0, s.name} : Sym{false, nt.at(s.name), ""});
    rules.emplace_back(nt.at(r.lhs), rhs);
  }
  const std::size_t n = nt.size();
  std::vector<char> nullable(n, 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [lhs, rhs] : rules)
      if (!nullable[lhs] &&
          std::all_of(rhs.begin(), rhs.end(), [&](const Sym& s) { return !s.terminal && nullable[s.nt]; }))
        nullable[lhs] = 1, changed = true;
  }
  if (nullable[nt.at(g.start)]) throw CfgError("the empty word is derivable; only languages without it are supported");

  std::set<std::pair<std::size_t, Rhs>> eps_free;
  for (const auto& [lhs, rhs] : rules) {
    std::vector<std::size_t> opt;
    for (std::size_t i = 0; i < rhs.size(); ++i)
      if (!rhs[i].terminal && nullable[rhs[i].nt]) opt.push_back(i);
    for (std::size_t mask = 0; mask < (std::size_t{1} << opt.size()); ++mask) {
      Rhs out;
      for (std::size_t i = 0, o = 0; i < rhs.size(); ++i) {
        if (o < opt.size() && opt[o] == i) {
          bool drop = (mask >> o++) & 1u;
          if (drop) continue;
        }
        out.push_back(rhs[i]);
      }
      if (!out.empty()) eps_free.insert({lhs, out});
    }
  }
  std::vector<std::set<std::size_t>> reach(n);
  for (std::size_t a = 0; a < n; ++a) reach[a].insert(a);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [lhs, rhs] : eps_free) {
      if (rhs.size() != 1 || rhs[0].terminal) continue;
      for (std::size_t a = 0; a < n; ++a) {
        if (!reach[a].count(lhs)) continue;
        for (std::size_t b : std::set<std::size_t>(reach[rhs[0].nt]))
          if (reach[a].insert(b).second) changed = true;
      }
    }
  }
  std::set<std::pair<std::size_t, Rhs>> proper;
  for (std::size_t a = 0; a < n; ++a)
    for (const auto& [lhs, rhs] : eps_free)
      if (!(rhs.size() == 1 && !rhs[0].terminal) && reach[a].count(lhs)) proper.insert({a, rhs});

  Cnf c;
  c.start = nt.at(g.start);
  std::size_t next = n;
  std::map<std::string, std::size_t> term_nt;
  auto as_nt = [&](const Sym& s) -> std::size_t {
    if (!s.terminal) return s.nt;
    auto it = term_nt.find(s.t);
    if (it != term_nt.end()) return it->second;
    term_nt.emplace(s.t, next);
    c.lexical.push_back({next, s.t});
    return next++;
  };
  for (const auto& [lhs, rhs] : proper) {
    if (rhs.size() == 1) {
      c.lexical.push_back({lhs, rhs[0].t});
      continue;
    }
    std::vector<std::size_t> syms;
    for (const auto& s : rhs) syms.push_back(as_nt(s));
    std::size_t cur = lhs;
    for (std::size_t i = 0; i + 2 < syms.size(); ++i) {
      c.binary.push_back({cur, syms[i], next});
      cur = next++;
    }
    c.binary.push_back({cur, syms[syms.size() - 2], syms.back()});
  }
  c.n = next;
  return c;
}

// Left-corner construction. For A, B let R(B, A) be the strings w with
// A =>* B w along the left spine; L(A) is the union of a R(B, A) over
// B -> a, and
//   R(B, A) = [B = A] eps  u  union over B' -> B C of L(C) R(B', A).
// Nonterminal Z(B, A) stands for R(B, A) without eps, which yields rules
//   S0      => a Z(B, S)?                  for B -> a (Z omitted iff B = S)
//   Z(B, A) => b Z(B'', C)? Z(B', A)?      for B' -> B C, B'' -> b
// with each optional part omittable exactly when its eps case applies.
GnfCfg left_corner_gnf(const Cfg& g) {
  Cnf c = to_cnf(g);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> parents(c.n);  // B -> (B', C)
  for (const auto& r : c.binary) parents[r[1]].push_back({r[0], r[2]});
  std::vector<std::pair<std::size_t, std::string>> corners = c.lexical;
  std::sort(corners.begin(), corners.end());
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());

  GnfCfg out;
  out.terminals = g.terminals;
  out.nonterminals.push_back("N0");
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> zid;
  std::deque<std::pair<std::size_t, std::size_t>> todo;
  auto z = [&](std::size_t b, std::size_t a) {
    auto key = std::make_pair(b, a);
    if (auto it = zid.find(key); it != zid.end()) return it->second;
    std::size_t id = out.nonterminals.size();
    zid.emplace(key, id);
    out.nonterminals.push_back("N" + std::to_string(id));
    todo.push_back(key);
    return id;
  };
  auto emit = [&](std::size_t lhs, const std::string& t, std::vector<std::size_t> tail) {
    GnfRule r{lhs, t, std::nullopt, std::nullopt};
    if (!tail.empty()) r.k = tail[0];
    if (tail.size() > 1) r.l = tail[1];
    out.rules.push_back(r);
  };
  for (const auto& [b, a] : corners) {
    if (b == c.start) emit(0, a, {});
    if (!parents[b].empty()) emit(0, a, {z(b, c.start)});
  }
  while (!todo.empty()) {
    auto [b, a] = todo.front();
    todo.pop_front();
    std::size_t self = zid.at({b, a});
    for (const auto& [bp, cc] : parents[b]) {
      for (const auto& [bpp, t] : corners) {
        std::vector<std::optional<std::size_t>> first, second;
        if (bpp == cc) first.push_back(std::nullopt);
        if (!parents[bpp].empty()) first.push_back(z(bpp, cc));
        if (bp == a) second.push_back(std::nullopt);
        if (!parents[bp].empty()) second.push_back(z(bp, a));
        for (auto x : first)
          for (auto y : second) {
            std::vector<std::size_t> tail;
            if (x) tail.push_back(*x);
            if (y) tail.push_back(*y);
            emit(self, t, tail);
          }
      }
    }
  }
  GnfCfg pruned = prune(out);
  for (std::size_t i = 0; i < pruned.nonterminals.size(); ++i) pruned.nonterminals[i] = "N" + std::to_string(i);
  return pruned;
}

}  // namespace

GnfCfg to_gnf2(const Cfg& g) {
  // Empty-word check first so both paths reject it identically.
  bool nullable_start = false;
  {
    std::set<std::string> nullable;
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& r : g.rules)
        if (!nullable.count(r.lhs) && std::all_of(r.rhs.begin(), r.rhs.end(), [&](const GrammarSymbol& s) {
              return !s.terminal && nullable.count(s.name);
            }))
          nullable.insert(r.lhs), changed = true;
    }
    nullable_start = nullable.count(g.start) > 0;
  }
  if (nullable_start) throw CfgError("the empty word is derivable; only languages without it are supported");

  GnfCfg out;
  if (auto d = direct_gnf(g); d) {
    out = *d;
  } else {
    out = left_corner_gnf(g);
  }
  check_gnf_shape(out);
  return out;
}

void check_gnf_shape(const GnfCfg& g) {
  for (const auto& r : g.rules) {
    if (r.lhs >= g.nonterminals.size()) throw CfgError("GNF rule with unknown left-hand side");
    if (r.l && !r.k) throw CfgError("GNF rule has a second nonterminal without a first");
    if ((r.k && *r.k >= g.nonterminals.size()) || (r.l && *r.l >= g.nonterminals.size()))
      throw CfgError("GNF rule refers to an unknown nonterminal");
    if (std::find(g.terminals.begin(), g.terminals.end(), r.terminal) == g.terminals.end())
      throw CfgError("GNF rule uses unknown terminal '" + r.terminal + "'");
  }
}

Cfg gnf_to_cfg(const GnfCfg& g) {
  Cfg c;
  c.nonterminals = g.nonterminals;
  c.terminals = g.terminals;
  c.start = g.nonterminals.empty() ? "N0" : g.nonterminals[0];
  if (c.nonterminals.empty()) c.nonterminals.push_back(c.start);
  for (const auto& r : g.rules) {
    CfgRule cr{g.nonterminals[r.lhs], {{r.terminal, true}}};
    if (r.k) cr.rhs.push_back({g.nonterminals[*r.k], false});
    if (r.l) cr.rhs.push_back({g.nonterminals[*r.l], false});
    c.rules.push_back(cr);
  }
  return c;
}

std::string render_gnf(const GnfCfg& g) {
  std::string out;
  for (const auto& r : g.rules) {
    out += g.nonterminals[r.lhs] + " => " + r.terminal;
    if (r.k) out += " " + g.nonterminals[*r.k];
    if (r.l) out += " " + g.nonterminals[*r.l];
    out += "\n";
  }
  return out;
}

}  // namespace lambek
