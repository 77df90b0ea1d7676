#include "lambek/cfg.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace lambek {

bool Cfg::has_nonterminal(std::string_view n) const {
  return std::find(nonterminals.begin(), nonterminals.end(), n) != nonterminals.end();
}

bool Cfg::has_terminal(std::string_view t) const {
  return std::find(terminals.begin(), terminals.end(), t) != terminals.end();
}

namespace {

bool is_nonterminal_token(std::string_view t) {
  if (t.empty() || !std::isupper(static_cast<unsigned char>(t[0]))) return false;
  return std::all_of(t.begin(), t.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

bool is_terminal_token(std::string_view t) {
  if (t.empty() || !std::islower(static_cast<unsigned char>(t[0]))) return false;
  return std::all_of(t.begin(), t.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

void note(std::vector<std::string>& list, const std::string& s) {
  if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
}

}  // namespace

Cfg parse_cfg(std::string_view text) {
  Cfg g;
  std::optional<std::string> start_directive;
  std::set<std::string> defined;
  std::vector<std::pair<std::string, std::size_t>> used;  // nonterminal, line
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
    if (toks[0] == "@start") {
      if (toks.size() != 2 || !is_nonterminal_token(toks[1])) throw CfgError(where() + "expected '@start Nonterminal'");
      start_directive = toks[1];
      continue;
    }
    if (toks.size() < 2 || toks[1] != "->") throw CfgError(where() + "expected 'LHS -> rhs'");
    if (!is_nonterminal_token(toks[0])) throw CfgError(where() + "left-hand side '" + toks[0] + "' is not a nonterminal");
    const std::string& lhs = toks[0];
    note(g.nonterminals, lhs);
    defined.insert(lhs);
    CfgRule cur{lhs, {}};
    auto flush = [&] {
      g.rules.push_back(cur);
      cur.rhs.clear();
    };
    for (std::size_t i = 2; i < toks.size(); ++i) {
      const std::string& t = toks[i];
      if (t == "|") {
        flush();
      } else if (is_nonterminal_token(t)) {
        note(g.nonterminals, t);
        used.emplace_back(t, lineno);
        cur.rhs.push_back({t, false});
      } else if (is_terminal_token(t)) {
        note(g.terminals, t);
        cur.rhs.push_back({t, true});
      } else {
        throw CfgError(where() + "bad symbol '" + t + "'");
      }
    }
    flush();
  }
  if (g.rules.empty()) throw CfgError("grammar has no rules");
  for (const auto& [n, l] : used)
    if (!defined.count(n)) throw CfgError("line " + std::to_string(l) + ": undeclared symbol '" + n + "'");
  g.start = start_directive.value_or(g.rules.front().lhs);
  if (!defined.count(g.start)) throw CfgError("undeclared symbol '" + g.start + "' in @start");
  return g;
}

std::string render_cfg(const Cfg& g) {
  std::string out;
  if (g.rules.empty() || g.rules.front().lhs != g.start) out += "@start " + g.start + "\n";
  for (const auto& n : g.nonterminals) {
    std::vector<std::string> alts;
    for (const auto& r : g.rules) {
      if (r.lhs != n) continue;
      std::string a;
      for (const auto& s : r.rhs) {
        if (!a.empty()) a += ' ';
        a += s.name;
      }
      alts.push_back(a);
    }
    if (alts.empty()) continue;
    std::string line = n + " ->";
    for (std::size_t i = 0; i < alts.size(); ++i) {
      if (i) line += " |";
      if (!alts[i].empty()) line += " " + alts[i];
    }
    out += line + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// CYK over a Chomsky normal form built from the input grammar.

struct Recognizer::Impl {
  std::map<std::string, std::size_t> term_index;
  std::size_t n_nt = 0;
  std::size_t start = 0;
  bool accepts_empty = false;
  std::vector<std::vector<std::size_t>> by_terminal;  // terminal -> lhs list
  struct Bin {
    std::size_t a, b, c;
  };
  std::vector<Bin> binary;
};

Recognizer::Recognizer(const Cfg& g) : impl_(std::make_unique<Impl>()) {
  auto& m = *impl_;
  std::map<std::string, std::size_t> nt;
  for (const auto& n : g.nonterminals) nt.emplace(n, nt.size());
  for (const auto& t : g.terminals) m.term_index.emplace(t, m.term_index.size());
  // Symbols: >= 0 nonterminal, < 0 terminal -(t + 1).
  using Rhs = std::vector<long>;
  std::vector<std::pair<std::size_t, Rhs>> rules;
  for (const auto& r : g.rules) {
    Rhs rhs;
    for (const auto& s : r.rhs)
      rhs.push_back(s.terminal ? -static_cast<long>(m.term_index.at(s.name)) - 1 : static_cast<long>(nt.at(s.name)));
    rules.emplace_back(nt.at(r.lhs), std::move(rhs));
  }
  std::size_t n = nt.size();

  std::vector<char> nullable(n, 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [lhs, rhs] : rules) {
      if (nullable[lhs]) continue;
      if (std::all_of(rhs.begin(), rhs.end(), [&](long s) { return s >= 0 && nullable[s]; })) {
        nullable[lhs] = 1;
        changed = true;
      }
    }
  }
  m.start = nt.at(g.start);
  m.accepts_empty = nullable[m.start];

  // Drop nullable symbols in every combination; keep non-empty results.
  std::set<std::pair<std::size_t, Rhs>> eps_free;
  for (const auto& [lhs, rhs] : rules) {
    std::vector<std::size_t> opt;
    for (std::size_t i = 0; i < rhs.size(); ++i)
      if (rhs[i] >= 0 && nullable[rhs[i]]) opt.push_back(i);
    for (std::size_t mask = 0; mask < (std::size_t{1} << opt.size()); ++mask) {
      Rhs out;
      std::size_t o = 0;
      for (std::size_t i = 0; i < rhs.size(); ++i) {
        if (o < opt.size() && opt[o] == i) {
          bool drop = (mask >> o) & 1u;
          ++o;
          if (drop) continue;
        }
        out.push_back(rhs[i]);
      }
      if (!out.empty()) eps_free.insert({lhs, out});
    }
  }

  // Unit closure.
  std::vector<std::set<std::size_t>> reach(n);
  for (std::size_t a = 0; a < n; ++a) reach[a].insert(a);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [lhs, rhs] : eps_free) {
      if (rhs.size() != 1 || rhs[0] < 0) continue;
      for (std::size_t a = 0; a < n; ++a) {
        if (!reach[a].count(lhs)) continue;
        for (std::size_t b : std::set<std::size_t>(reach[rhs[0]]))
          if (reach[a].insert(b).second) changed = true;
      }
    }
  }
  std::set<std::pair<std::size_t, Rhs>> final_rules;
  for (std::size_t a = 0; a < n; ++a)
    for (const auto& [lhs, rhs] : eps_free) {
      if (rhs.size() == 1 && rhs[0] >= 0) continue;
      if (reach[a].count(lhs)) final_rules.insert({a, rhs});
    }

  std::size_t next = n;
  std::map<long, std::size_t> term_nt;
  m.by_terminal.assign(m.term_index.size(), {});
  auto as_nt = [&](long s) -> std::size_t {
    if (s >= 0) return static_cast<std::size_t>(s);
    auto it = term_nt.find(s);
    if (it != term_nt.end()) return it->second;
    std::size_t id = next++;
    term_nt.emplace(s, id);
    m.by_terminal[static_cast<std::size_t>(-s - 1)].push_back(id);
    return id;
  };
  for (const auto& [lhs, rhs] : final_rules) {
    if (rhs.size() == 1) {
      m.by_terminal[static_cast<std::size_t>(-rhs[0] - 1)].push_back(lhs);
      continue;
    }
    std::vector<std::size_t> syms;
    for (long s : rhs) syms.push_back(as_nt(s));
    std::size_t cur = lhs;
    for (std::size_t i = 0; i + 2 < syms.size(); ++i) {
      std::size_t z = next++;
      m.binary.push_back({cur, syms[i], z});
      cur = z;
    }
    m.binary.push_back({cur, syms[syms.size() - 2], syms.back()});
  }
  m.n_nt = next;
}

Recognizer::~Recognizer() = default;
Recognizer::Recognizer(Recognizer&&) noexcept = default;
Recognizer& Recognizer::operator=(Recognizer&&) noexcept = default;

bool Recognizer::accepts(const Word& w) const {
  const auto& m = *impl_;
  if (w.empty()) return m.accepts_empty;
  const std::size_t len = w.size(), n = m.n_nt;
  // table[(i * len + (l - 1)) * n + a]: a derives w[i, i + l).
  std::vector<char> table(len * len * n, 0);
  auto cell = [&](std::size_t i, std::size_t l) { return &table[(i * len + (l - 1)) * n]; };
  for (std::size_t i = 0; i < len; ++i) {
    auto it = m.term_index.find(w[i]);
    if (it == m.term_index.end()) return false;
    for (std::size_t a : m.by_terminal[it->second]) cell(i, 1)[a] = 1;
  }
  for (std::size_t l = 2; l <= len; ++l)
    for (std::size_t i = 0; i + l <= len; ++i) {
      char* out = cell(i, l);
      for (std::size_t k = 1; k < l; ++k) {
        const char* left = cell(i, k);
        const char* right = cell(i + k, l - k);
        for (const auto& r : m.binary)
          if (left[r.b] && right[r.c]) out[r.a] = 1;
      }
    }
  return cell(0, len)[m.start];
}

bool cyk_member(const Cfg& g, const Word& w) { return Recognizer(g).accepts(w); }

std::vector<Word> enumerate_words(const Cfg& g, std::size_t max_len) {
  Recognizer rec(g);
  std::vector<std::string> sigma = g.terminals;
  std::sort(sigma.begin(), sigma.end());
  std::vector<Word> out;
  if (rec.accepts({})) out.push_back({});
  if (sigma.empty()) return out;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::size_t> idx(len, 0);
    for (;;) {
      Word w;
      for (auto i : idx) w.push_back(sigma[i]);
      if (rec.accepts(w)) out.push_back(std::move(w));
      std::size_t pos = len;
      while (pos > 0 && idx[pos - 1] + 1 == sigma.size()) idx[--pos] = 0;
      if (pos == 0) break;
      ++idx[pos - 1];
    }
  }
  return out;
}

Cfg total_plus_to_alt2(const Cfg& g) {
  if (g.terminals.size() != 2)
    throw CfgError("alphabet must have exactly two terminals, found " + std::to_string(g.terminals.size()));
  std::string a1 = std::min(g.terminals[0], g.terminals[1]);
  std::string a2 = std::max(g.terminals[0], g.terminals[1]);
  std::string fresh = g.start + "'";
  while (g.has_nonterminal(fresh)) fresh += "'";
  Cfg out;
  out.start = fresh;
  out.nonterminals.push_back(fresh);
  out.nonterminals.insert(out.nonterminals.end(), g.nonterminals.begin(), g.nonterminals.end());
  out.terminals = g.terminals;
  out.rules.push_back({fresh, {{a1, true}, {g.start, false}, {a2, true}}});
  out.rules.push_back({fresh, {{a1, true}, {a2, true}}});
  out.rules.insert(out.rules.end(), g.rules.begin(), g.rules.end());
  return out;
}

Word parse_word(std::string_view text, const std::vector<std::string>& alphabet) {
  std::vector<std::string> sorted = alphabet;
  std::sort(sorted.begin(), sorted.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  Word w;
  for (const auto& chunk : split_ws(text)) {
    std::size_t i = 0;
    while (i < chunk.size()) {
      bool hit = false;
      for (const auto& t : sorted) {
        if (!t.empty() && chunk.compare(i, t.size(), t) == 0) {
          w.push_back(t);
          i += t.size();
          hit = true;
          break;
        }
      }
      if (!hit) throw CfgError("unknown letter at '" + chunk.substr(i) + "'");
    }
  }
  return w;
}

std::string render_word(const Word& w) {
  bool single = std::all_of(w.begin(), w.end(), [](const std::string& s) { return s.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i && !single) out += ' ';
    out += w[i];
  }
  return out;
}

}  // namespace lambek
