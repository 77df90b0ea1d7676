#include "lambek/formula.hpp"

#include <cctype>
#include <deque>
#include <map>
#include <mutex>
#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "lambek/group_word.hpp"

namespace lambek {

namespace {

struct VarEntry {
  std::string name;
  std::uint32_t generation;
};

struct VarTable {
  std::mutex mu;
  std::deque<VarEntry> entries;
  std::map<std::pair<std::string, std::uint32_t>, std::uint32_t> index;
};

VarTable& var_table() {
  static VarTable t;
  return t;
}

}  // namespace

Variable Variable::make(std::string_view name, std::uint32_t generation) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  auto& t = var_table();
  std::lock_guard lock(t.mu);
  auto key = std::make_pair(std::string(name), generation);
  auto it = t.index.find(key);
  if (it != t.index.end()) return Variable(it->second);
  auto id = static_cast<std::uint32_t>(t.entries.size());
  t.entries.push_back({key.first, generation});
  t.index.emplace(std::move(key), id);
  return Variable(id);
}

const std::string& Variable::name() const {
  auto& t = var_table();
  std::lock_guard lock(t.mu);
  return t.entries.at(id_).name;
}

std::uint32_t Variable::generation() const {
  auto& t = var_table();
  std::lock_guard lock(t.mu);
  return t.entries.at(id_).generation;
}

std::string Variable::str() const {
  auto& t = var_table();
  std::lock_guard lock(t.mu);
  const auto& e = t.entries.at(id_);
  if (e.generation == 0) return e.name;
  return e.name + "#" + std::to_string(e.generation);
}

bool operator<(Variable a, Variable b) {
  if (a == b) return false;
  auto& t = var_table();
  std::lock_guard lock(t.mu);
  const auto& x = t.entries.at(a.id_);
  const auto& y = t.entries.at(b.id_);
  if (x.name != y.name) return x.name < y.name;
  return x.generation < y.generation;
}

namespace detail {

struct Node {
  Connective kind;
  std::uint32_t id;
  Variable var;
  const Node* a;
  const Node* b;
  std::size_t size;
  std::size_t hash;
  std::optional<Variable> top;
  bool product_free;
  bool fg_defined;
  bool has_star;
  std::optional<GroupWord> fg;
};

}  // namespace detail

namespace {

using detail::Node;

struct NodeKey {
  Connective kind;
  std::uint32_t var;
  std::uint32_t a;
  std::uint32_t b;
  friend bool operator==(const NodeKey&, const NodeKey&) = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.kind) * 0x9e3779b97f4a7c15ull;
    h ^= (std::size_t{k.var} + 0x632be59bd9b4e019ull + (h << 6) + (h >> 2));
    h ^= (std::size_t{k.a} + 0x8cb92ba72f3d8dd7ull + (h << 6) + (h >> 2));
    h ^= (std::size_t{k.b} + 0xd6e8feb86659fd93ull + (h << 6) + (h >> 2));
    return h;
  }
};

class Interner {
 public:
  const Node* intern(Connective kind, Variable var, const Node* a, const Node* b) {
    NodeKey key{kind, kind == Connective::Atom ? var.id() : 0u,
                a ? a->id + 1 : 0u, b ? b->id + 1 : 0u};
    std::lock_guard lock(mu_);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    Node n{};
    n.kind = kind;
    n.id = static_cast<std::uint32_t>(nodes_.size());
    n.var = var;
    n.a = a;
    n.b = b;
    n.size = 1 + (a ? a->size : 0) + (b ? b->size : 0);
    n.hash = NodeKeyHash{}(key);
    switch (kind) {
      case Connective::Atom:
        n.top = var;
        n.product_free = true;
        n.fg_defined = true;
        n.has_star = false;
        n.fg = GroupWord::generator(var);
        break;
      case Connective::Unit:
        n.product_free = false;
        n.fg_defined = true;
        n.has_star = false;
        n.fg = GroupWord{};
        break;
      case Connective::Under:
      case Connective::Over: {
        const Node* num = kind == Connective::Under ? b : a;
        const Node* den = kind == Connective::Under ? a : b;
        n.top = num->top;
        n.product_free = a->product_free && b->product_free;
        n.fg_defined = a->fg_defined && b->fg_defined;
        n.has_star = a->has_star || b->has_star;
        if (n.fg_defined) {
          n.fg = kind == Connective::Under ? den->fg->inverse() * *num->fg
                                           : *num->fg * den->fg->inverse();
        }
        break;
      }
      case Connective::Prod:
        n.product_free = false;
        n.fg_defined = a->fg_defined && b->fg_defined;
        n.has_star = a->has_star || b->has_star;
        if (n.fg_defined) n.fg = *a->fg * *b->fg;
        break;
      case Connective::Or:
      case Connective::And:
        n.product_free = false;
        n.fg_defined = false;
        n.has_star = a->has_star || b->has_star;
        break;
      case Connective::Star:
      case Connective::Plus:
        n.product_free = false;
        n.fg_defined = false;
        n.has_star = true;
        break;
    }
    nodes_.push_back(std::move(n));
    const Node* p = &nodes_.back();
    index_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::deque<Node> nodes_;
  std::unordered_map<NodeKey, const Node*, NodeKeyHash> index_;
};

Interner& interner() {
  static Interner i;
  return i;
}

const Node* require(Formula f, const char* what) {
  if (!f.valid()) throw std::invalid_argument(std::string("invalid formula passed to ") + what);
  return nullptr;
}

}  // namespace

Formula Formula::atom(Variable v) {
  return Formula(interner().intern(Connective::Atom, v, nullptr, nullptr));
}
Formula Formula::atom(std::string_view name, std::uint32_t generation) {
  return atom(Variable::make(name, generation));
}
Formula Formula::unit() {
  return Formula(interner().intern(Connective::Unit, Variable{}, nullptr, nullptr));
}
Formula Formula::under(Formula den, Formula num) {
  require(den, "under");
  require(num, "under");
  return Formula(interner().intern(Connective::Under, Variable{}, den.node_, num.node_));
}
Formula Formula::over(Formula num, Formula den) {
  require(den, "over");
  require(num, "over");
  return Formula(interner().intern(Connective::Over, Variable{}, num.node_, den.node_));
}
Formula Formula::prod(Formula a, Formula b) {
  require(a, "prod");
  require(b, "prod");
  return Formula(interner().intern(Connective::Prod, Variable{}, a.node_, b.node_));
}
Formula Formula::disj(Formula a, Formula b) {
  require(a, "disj");
  require(b, "disj");
  return Formula(interner().intern(Connective::Or, Variable{}, a.node_, b.node_));
}
Formula Formula::conj(Formula a, Formula b) {
  require(a, "conj");
  require(b, "conj");
  return Formula(interner().intern(Connective::And, Variable{}, a.node_, b.node_));
}
Formula Formula::star(Formula a) {
  require(a, "star");
  return Formula(interner().intern(Connective::Star, Variable{}, a.node_, nullptr));
}
Formula Formula::plus(Formula a) {
  require(a, "plus");
  return Formula(interner().intern(Connective::Plus, Variable{}, a.node_, nullptr));
}

Connective Formula::kind() const { return node_->kind; }
Variable Formula::var() const {
  if (node_->kind != Connective::Atom) throw std::logic_error("var() on non-atom");
  return node_->var;
}
Formula Formula::left() const { return Formula(node_->a); }
Formula Formula::right() const { return Formula(node_->b); }
Formula Formula::numerator() const {
  return node_->kind == Connective::Under ? Formula(node_->b) : Formula(node_->a);
}
Formula Formula::denominator() const {
  return node_->kind == Connective::Under ? Formula(node_->a) : Formula(node_->b);
}
std::size_t Formula::size() const { return node_->size; }
std::uint32_t Formula::id() const { return node_->id; }
std::size_t Formula::hash() const { return node_->hash; }
bool Formula::product_free() const { return node_->product_free; }
bool Formula::fg_defined() const { return node_->fg_defined; }
bool Formula::has_star() const { return node_->has_star; }
std::optional<Variable> Formula::top() const { return node_->top; }
const GroupWord* Formula::fg_word() const { return node_->fg ? &*node_->fg : nullptr; }

bool structural_less(Formula a, Formula b) {
  if (a == b) return false;
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case Connective::Atom:
      return a.var() < b.var();
    case Connective::Unit:
      return false;
    case Connective::Star:
    case Connective::Plus:
      return structural_less(a.operand(), b.operand());
    default:
      if (a.left() != b.left()) return structural_less(a.left(), b.left());
      return structural_less(a.right(), b.right());
  }
}

std::size_t Sequent::size() const {
  std::size_t n = succedent.size();
  for (auto f : antecedent) n += f.size();
  return n;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Atom, Unit, Under, Over, Dot, Bar, Amp, StarOp, PlusOp, LParen, RParen, Comma, Arrow, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  std::uint32_t generation = 0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (c >= 'a' && c <= 'z') {
      while (i < s.size() && (std::islower(static_cast<unsigned char>(s[i])) ||
                              std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        ++i;
      Token t{Tok::Atom, start, std::string(s.substr(start, i - start))};
      if (i < s.size() && s[i] == '#') {
        ++i;
        std::size_t ds = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (ds == i) throw ParseError("expected generation digits after '#'", ds);
        t.generation = static_cast<std::uint32_t>(std::stoul(std::string(s.substr(ds, i - ds))));
      }
      out.push_back(std::move(t));
      continue;
    }
    switch (c) {
      case '1':
        out.push_back({Tok::Unit, start, "1"});
        ++i;
        break;
      case '\\':
        out.push_back({Tok::Under, start, "\\"});
        ++i;
        break;
      case '/':
        out.push_back({Tok::Over, start, "/"});
        ++i;
        break;
      case '.':
        out.push_back({Tok::Dot, start, "."});
        ++i;
        break;
      case '|':
        out.push_back({Tok::Bar, start, "|"});
        ++i;
        break;
      case '&':
        out.push_back({Tok::Amp, start, "&"});
        ++i;
        break;
      case '(':
        out.push_back({Tok::LParen, start, "("});
        ++i;
        break;
      case ')':
        out.push_back({Tok::RParen, start, ")"});
        ++i;
        break;
      case ',':
        out.push_back({Tok::Comma, start, ","});
        ++i;
        break;
      case '^':
        if (i + 1 < s.size() && s[i + 1] == '*') {
          out.push_back({Tok::StarOp, start, "^*"});
        } else if (i + 1 < s.size() && s[i + 1] == '+') {
          out.push_back({Tok::PlusOp, start, "^+"});
        } else {
          throw ParseError("expected '*' or '+' after '^'", i + 1);
        }
        i += 2;
        break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          out.push_back({Tok::Arrow, start, "->"});
          i += 2;
          break;
        }
        throw ParseError("unknown token '-'", start);
      default:
        throw ParseError(std::string("unknown token '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool at(Tok k) const { return peek().kind == k; }

  void expect(Tok k, const char* what) {
    if (!at(k)) throw ParseError(std::string("expected ") + what, peek().pos);
    ++pos_;
  }

  Formula under_expr() {
    Formula lhs = over_expr();
    if (at(Tok::Under)) {
      take();
      Formula rhs = under_expr();
      return Formula::under(lhs, rhs);
    }
    return lhs;
  }

  Formula over_expr() {
    Formula lhs = or_expr();
    while (at(Tok::Over)) {
      take();
      lhs = Formula::over(lhs, or_expr());
    }
    return lhs;
  }

  Formula or_expr() {
    Formula lhs = and_expr();
    while (at(Tok::Bar)) {
      take();
      lhs = Formula::disj(lhs, and_expr());
    }
    return lhs;
  }

  Formula and_expr() {
    Formula lhs = prod_expr();
    while (at(Tok::Amp)) {
      take();
      lhs = Formula::conj(lhs, prod_expr());
    }
    return lhs;
  }

  Formula prod_expr() {
    Formula lhs = postfix_expr();
    while (at(Tok::Dot)) {
      take();
      lhs = Formula::prod(lhs, postfix_expr());
    }
    return lhs;
  }

  Formula postfix_expr() {
    Formula f = primary();
    for (;;) {
      if (at(Tok::StarOp)) {
        take();
        f = Formula::star(f);
      } else if (at(Tok::PlusOp)) {
        take();
        f = Formula::plus(f);
      } else {
        return f;
      }
    }
  }

  Formula primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Atom: {
        Token a = take();
        return Formula::atom(a.text, a.generation);
      }
      case Tok::Unit:
        take();
        return Formula::unit();
      case Tok::LParen: {
        take();
        Formula f = under_expr();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::End:
        throw ParseError("unexpected end of input", t.pos);
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.pos);
    }
  }

  std::vector<Formula> list_until(Tok stop) {
    std::vector<Formula> out;
    if (at(stop)) return out;
    out.push_back(under_expr());
    while (at(Tok::Comma)) {
      take();
      out.push_back(under_expr());
    }
    return out;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p(tokenize(text));
  Formula f = p.under_expr();
  if (!p.at(Tok::End)) throw ParseError("trailing input '" + p.peek().text + "'", p.peek().pos);
  return f;
}

std::vector<Formula> parse_formula_list(std::string_view text) {
  Parser p(tokenize(text));
  auto out = p.list_until(Tok::End);
  if (!p.at(Tok::End)) throw ParseError("trailing input '" + p.peek().text + "'", p.peek().pos);
  return out;
}

Sequent parse_sequent(std::string_view text) {
  Parser p(tokenize(text));
  Sequent s;
  s.antecedent = p.list_until(Tok::Arrow);
  p.expect(Tok::Arrow, "'->'");
  s.succedent = p.under_expr();
  if (!p.at(Tok::End)) throw ParseError("trailing input '" + p.peek().text + "'", p.peek().pos);
  return s;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

int level(Formula f) {
  switch (f.kind()) {
    case Connective::Under:
      return 1;
    case Connective::Over:
      return 2;
    case Connective::Or:
      return 3;
    case Connective::And:
      return 4;
    case Connective::Prod:
      return 5;
    case Connective::Star:
    case Connective::Plus:
      return 6;
    default:
      return 7;
  }
}

void render_into(Formula f, int min_level, std::string& out) {
  bool paren = level(f) < min_level;
  if (paren) out += '(';
  switch (f.kind()) {
    case Connective::Atom:
      out += f.var().str();
      break;
    case Connective::Unit:
      out += '1';
      break;
    case Connective::Under:
      render_into(f.left(), 2, out);
      out += '\\';
      render_into(f.right(), 1, out);
      break;
    case Connective::Over:
      render_into(f.left(), 2, out);
      out += '/';
      render_into(f.right(), 3, out);
      break;
    case Connective::Or:
      render_into(f.left(), 3, out);
      out += " | ";
      render_into(f.right(), 4, out);
      break;
    case Connective::And:
      render_into(f.left(), 4, out);
      out += " & ";
      render_into(f.right(), 5, out);
      break;
    case Connective::Prod:
      render_into(f.left(), 5, out);
      out += " . ";
      render_into(f.right(), 6, out);
      break;
    case Connective::Star:
      render_into(f.operand(), 6, out);
      out += "^*";
      break;
    case Connective::Plus:
      render_into(f.operand(), 6, out);
      out += "^+";
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string render_formula(Formula f) {
  std::string out;
  render_into(f, 0, out);
  return out;
}

std::string render_sequence(std::span<const Formula> seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ", ";
    out += render_formula(seq[i]);
  }
  return out;
}

std::string render_sequent(const Sequent& s) {
  std::string ant = render_sequence(s.antecedent);
  if (ant.empty()) return "-> " + render_formula(s.succedent);
  return ant + " -> " + render_formula(s.succedent);
}

// ---------------------------------------------------------------------------
// Builders

Formula curried_division(std::span<const Formula> gamma, Formula core,
                         std::span<const Formula> delta) {
  Formula f = core;
  // q/Y_m/.../Y_1 : Y_m innermost.
  for (std::size_t j = delta.size(); j-- > 0;) f = Formula::over(f, delta[j]);
  // X_n\...\X_1\(...) : X_1 innermost.
  for (const Formula& x : gamma) f = Formula::under(x, f);
  return f;
}

Formula curried_division(std::span<const Formula> gamma, Variable core,
                         std::span<const Formula> delta) {
  return curried_division(gamma, Formula::atom(core), delta);
}

Spine unfold_spine(Formula f) {
  Spine s;
  std::vector<Formula> left_outer_first;
  while (f.kind() == Connective::Under || f.kind() == Connective::Over) {
    if (f.kind() == Connective::Under) {
      left_outer_first.push_back(f.denominator());
    } else {
      s.right.push_back(f.denominator());
    }
    f = f.numerator();
  }
  s.core = f;
  s.left.assign(left_outer_first.rbegin(), left_outer_first.rend());
  return s;
}

Variable top_of(Formula f) {
  Formula g = f;
  while (g.kind() == Connective::Under || g.kind() == Connective::Over) g = g.numerator();
  if (!g.is_atom()) {
    throw UndefinedTop("top undefined: spine of " + render_formula(f) + " ends in " +
                       render_formula(g));
  }
  return g.var();
}

Formula raise(Formula a, Variable q) {
  Formula qa = Formula::atom(q);
  return Formula::over(qa, Formula::under(a, qa));
}

Formula raise(std::span<const Formula> seq, Variable q) {
  Formula qa = Formula::atom(q);
  return Formula::over(qa, curried_division(seq, qa, {}));
}

Formula sentinel(Variable p, Variable q, Variable r) {
  if (p == q || q == r || p == r)
    throw std::invalid_argument("sentinel parameters must be pairwise distinct");
  Formula pf = Formula::atom(p);
  Formula qf = Formula::atom(q);
  Formula rf = Formula::atom(r);
  return Formula::over(Formula::over(rf, Formula::under(pf, rf)),
                       Formula::over(qf, Formula::under(pf, qf)));
}

namespace {
void collect_variables(Formula f, std::unordered_set<std::uint32_t>& seen, std::vector<Variable>& out) {
  std::vector<Formula> todo{f};
  std::unordered_set<std::uint32_t> visited;
  while (!todo.empty()) {
    Formula g = todo.back();
    todo.pop_back();
    if (!visited.insert(g.id()).second) continue;
    switch (g.kind()) {
      case Connective::Atom:
        if (seen.insert(g.var().id()).second) out.push_back(g.var());
        break;
      case Connective::Unit:
        break;
      case Connective::Star:
      case Connective::Plus:
        todo.push_back(g.operand());
        break;
      default:
        todo.push_back(g.left());
        todo.push_back(g.right());
    }
  }
}
}  // namespace

std::vector<Variable> variables_of(Formula f) { return variables_of(std::span<const Formula>(&f, 1)); }

std::vector<Variable> variables_of(std::span<const Formula> seq) {
  std::unordered_set<std::uint32_t> seen;
  std::vector<Variable> out;
  for (auto f : seq) collect_variables(f, seen, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lambek

std::size_t std::hash<lambek::Sequent>::operator()(const lambek::Sequent& s) const noexcept {
  std::size_t h = s.succedent.hash();
  for (auto f : s.antecedent) h = h * 1000003u ^ f.hash();
  return h ^ s.antecedent.size();
}
