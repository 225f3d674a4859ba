#include "symcol/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace symcol {

Term Term::var(std::string name) {
  if (name.size() < 2 || (name[0] != '?' && name[0] != '!'))
    throw std::invalid_argument("variable name must carry a ? or ! sigil: " + name);
  Term t;
  t.kind_ = Kind::Var;
  t.name_ = std::move(name);
  return t;
}

Term Term::constant(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty constant name");
  Term t;
  t.kind_ = Kind::Const;
  t.name_ = std::move(name);
  return t;
}

Term Term::eps() { return Term(); }

Term Term::cat(std::vector<Term> parts) {
  std::vector<Term> flat;
  for (auto& p : parts) {
    if (p.is_eps()) continue;
    if (p.is_cat()) {
      for (auto& q : p.args_) flat.push_back(std::move(q));
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return eps();
  if (flat.size() == 1) return flat[0];
  Term t;
  t.kind_ = Kind::Cat;
  t.args_ = std::move(flat);
  return t;
}

Term Term::hash(Term arg) {
  Term t;
  t.kind_ = Kind::Hash;
  t.args_.push_back(std::move(arg));
  return t;
}

Term Term::fapp(std::vector<Term> args) {
  if (args.size() != 2 && args.size() != 4)
    throw std::invalid_argument("f expects 2 or 4 arguments");
  Term t;
  t.kind_ = Kind::FApp;
  t.args_ = std::move(args);
  return t;
}

Term Term::gapp(std::vector<Term> args) {
  if (args.size() != 2 && args.size() != 4)
    throw std::invalid_argument("g expects 2 or 4 arguments");
  Term t;
  t.kind_ = Kind::GApp;
  t.args_ = std::move(args);
  return t;
}

bool Term::is_ground() const {
  if (kind_ == Kind::Var) return false;
  for (const auto& a : args_)
    if (!a.is_ground()) return false;
  return true;
}

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const auto& a : args_) n += a.size();
  return n;
}

std::vector<Term> Term::letters() const {
  if (is_eps()) return {};
  if (is_cat()) return args_;
  return {*this};
}

Term Term::from_letters(const std::vector<Term>& ls) {
  return Term::cat(ls);
}

static void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) out.insert(t.name());
  for (const auto& a : t.args()) collect_vars(a, out);
}

static void collect_consts(const Term& t, std::set<std::string>& out) {
  if (t.is_const()) out.insert(t.name());
  for (const auto& a : t.args()) collect_consts(a, out);
}

std::set<std::string> Term::var_names() const {
  std::set<std::string> s;
  collect_vars(*this, s);
  return s;
}

std::set<std::string> Term::const_names() const {
  std::set<std::string> s;
  collect_consts(*this, s);
  return s;
}

std::strong_ordering Term::operator<=>(const Term& o) const {
  if (kind_ != o.kind_) return kind_ <=> o.kind_;
  if (auto c = name_ <=> o.name_; c != 0) return c;
  if (auto c = args_.size() <=> o.args_.size(); c != 0) return c;
  for (std::size_t i = 0; i < args_.size(); ++i)
    if (auto c = args_[i] <=> o.args_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::string Term::str() const {
  switch (kind_) {
    case Kind::Var:
    case Kind::Const:
      return name_;
    case Kind::Eps:
      return "eps";
    case Kind::Cat: {
      std::string s;
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) s += " . ";
        s += args_[i].str();
      }
      return s;
    }
    case Kind::Hash:
      return "h(" + args_[0].str() + ")";
    case Kind::FApp:
    case Kind::GApp: {
      std::string s(kind_ == Kind::FApp ? "f(" : "g(");
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) s += ", ";
        s += args_[i].str();
      }
      return s + ")";
    }
  }
  return "";
}

bool position_le(const Position& p, const Position& q) {
  if (p.size() > q.size()) return false;
  return std::equal(p.begin(), p.end(), q.begin());
}

ModeTable ModeTable::standard() {
  ModeTable m;
  m.sig[Kind::Cat] = 0;
  m.sig[Kind::Eps] = 0;
  m.sig[Kind::FApp] = 0;
  m.sig[Kind::GApp] = 0;
  m.sig[Kind::Hash] = 1;
  m.default_mode = 0;
  return m;
}

ModeTable ModeTable::example_binary_fg() {
  ModeTable m;
  m.sig[Kind::FApp] = 1;
  m.sig[Kind::GApp] = 1;
  m.sig[Kind::Cat] = 0;
  m.sig[Kind::Eps] = 0;
  m.sig[Kind::Hash] = 1;
  m.mode[{Kind::FApp, 1}] = 1;
  m.mode[{Kind::FApp, 2}] = 0;
  m.mode[{Kind::GApp, 1}] = 1;
  m.mode[{Kind::GApp, 2}] = 0;
  m.default_mode = 0;
  return m;
}

int ModeTable::sig_of(const Term& t) const {
  switch (t.kind()) {
    case Kind::Var:
      return t.is_x1_var() ? 1 : 0;
    case Kind::Const:
      return 2;
    default: {
      auto it = sig.find(t.kind());
      return it == sig.end() ? 0 : it->second;
    }
  }
}

int ModeTable::mode_of(Kind sym, int index) const {
  auto it = mode.find({sym, index});
  return it == mode.end() ? default_mode : it->second;
}

int sig_of(const Term& t, const ModeTable& m) { return m.sig_of(t); }

static bool is_atomic(const Term& t) {
  return t.is_var() || t.is_const() || t.is_eps();
}

static void collect_subterm_values(const Term& t, const ModeTable& m, bool at_root,
                                   bool parent_well_moded_slot, std::set<Term>& out) {
  const bool atomic = is_atomic(t);
  if (at_root || atomic || !parent_well_moded_slot) out.insert(t);
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    const Term& child = t.args()[i];
    bool well =
        m.sig_of(child) == m.mode_of(t.kind(), static_cast<int>(i) + 1);
    collect_subterm_values(child, m, false, well, out);
  }
}

std::set<Term> subterm_values(const Term& t, const ModeTable& m) {
  std::set<Term> out;
  collect_subterm_values(t, m, true, false, out);
  return out;
}

std::set<Term> subterm_values(const std::vector<Term>& ts, const ModeTable& m) {
  std::set<Term> out;
  for (const auto& t : ts) {
    auto s = subterm_values(t, m);
    out.insert(s.begin(), s.end());
  }
  return out;
}

bool is_syntactic_subterm(const Term& sub, const Term& of) {
  if (sub == of) return true;
  for (const auto& a : of.args())
    if (is_syntactic_subterm(sub, a)) return true;
  return false;
}

std::set<Term> factors(const Term& t, const ModeTable& m) {
  std::set<Term> sub = subterm_values(t, m);
  sub.erase(t);
  std::set<Term> out;
  for (const auto& u : sub) {
    bool maximal = true;
    for (const auto& v : sub) {
      if (u == v) continue;
      if (is_syntactic_subterm(u, v)) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.insert(u);
  }
  return out;
}

const Term* Substitution::find(const std::string& var) const {
  auto it = map.find(var);
  return it == map.end() ? nullptr : &it->second;
}

void Substitution::bind(const std::string& var, Term value) {
  map.insert_or_assign(var, std::move(value));
}

Term Substitution::apply(const Term& t) const {
  switch (t.kind()) {
    case Kind::Var: {
      if (const Term* v = find(t.name())) return *v;
      return t;
    }
    case Kind::Const:
    case Kind::Eps:
      return t;
    case Kind::Cat: {
      std::vector<Term> parts;
      parts.reserve(t.args().size());
      for (const auto& a : t.args()) parts.push_back(apply(a));
      return Term::cat(std::move(parts));
    }
    case Kind::Hash:
      return Term::hash(apply(t.args()[0]));
    case Kind::FApp:
    case Kind::GApp: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(apply(a));
      return t.kind() == Kind::FApp ? Term::fapp(std::move(args))
                                    : Term::gapp(std::move(args));
    }
  }
  return t;
}

std::vector<Term> Substitution::apply(const std::vector<Term>& ts) const {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(apply(t));
  return out;
}

Substitution Substitution::compose_under(const Substitution& newer) const {
  Substitution out;
  for (const auto& [v, t] : map) out.map.emplace(v, newer.apply(t));
  for (const auto& [v, t] : newer.map)
    if (!out.map.count(v)) out.map.emplace(v, t);
  return out;
}

bool Substitution::is_ground_on(const std::set<std::string>& vars) const {
  for (const auto& v : vars) {
    const Term* t = find(v);
    if (!t || !t->is_ground()) return false;
  }
  return true;
}

// ---- lexicographic path ordering ----

namespace {

// precedence rank; higher compares greater. c_min is strictly minimal.
int prec_rank(const Term& t, const ModeTable& m) {
  switch (t.kind()) {
    case Kind::Hash: return 6;
    case Kind::GApp: return 5;
    case Kind::FApp: return 4;
    case Kind::Cat:  return 3;
    case Kind::Const: return t.name() == m.c_min ? 0 : 2;
    case Kind::Eps:  return 1;
    case Kind::Var:  throw std::invalid_argument("compare_simp needs ground terms");
  }
  return 0;
}

// total precedence comparison on head symbols
Cmp prec_cmp(const Term& a, const Term& b, const ModeTable& m) {
  int ra = prec_rank(a, m), rb = prec_rank(b, m);
  if (ra != rb) return ra < rb ? Cmp::LT : Cmp::GT;
  if (a.kind() == Kind::Const) {
    if (a.name() == b.name()) return Cmp::EQ;
    return a.name() < b.name() ? Cmp::LT : Cmp::GT;
  }
  if (a.args().size() != b.args().size())
    return a.args().size() < b.args().size() ? Cmp::LT : Cmp::GT;
  return Cmp::EQ;
}

bool lpo_gt(const Term& s, const Term& t, const ModeTable& m);

bool lpo_ge(const Term& s, const Term& t, const ModeTable& m) {
  return s == t || lpo_gt(s, t, m);
}

bool lpo_gt(const Term& s, const Term& t, const ModeTable& m) {
  for (const auto& si : s.args())
    if (lpo_ge(si, t, m)) return true;
  Cmp hc = prec_cmp(s, t, m);
  if (hc == Cmp::GT) {
    for (const auto& tj : t.args())
      if (!lpo_gt(s, tj, m)) return false;
    return true;
  }
  if (hc == Cmp::EQ) {
    const auto& sa = s.args();
    const auto& ta = t.args();
    std::size_t i = 0;
    while (i < sa.size() && i < ta.size() && sa[i] == ta[i]) ++i;
    if (i >= sa.size() || i >= ta.size()) return false;  // equal or prefix
    if (!lpo_gt(sa[i], ta[i], m)) return false;
    for (std::size_t j = i + 1; j < ta.size(); ++j)
      if (!lpo_gt(s, ta[j], m)) return false;
    return true;
  }
  return false;
}

}  // namespace

Cmp compare_simp(const Term& a, const Term& b, const ModeTable& m) {
  if (!a.is_ground() || !b.is_ground())
    throw std::invalid_argument("compare_simp needs ground terms");
  if (a == b) return Cmp::EQ;
  return lpo_gt(a, b, m) ? Cmp::GT : Cmp::LT;
}

// ---- parser ----

namespace {

struct Lexer {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Lexer(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      if (text[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col);
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  void advance() {
    ++pos;
    ++col;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  std::string ident() {
    skip_ws();
    if (pos >= text.size() || !std::islower(static_cast<unsigned char>(text[pos])))
      fail("expected identifier");
    std::string s;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
        s += c;
        advance();
      } else {
        break;
      }
    }
    return s;
  }
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lx_(text) {}

  Term parse() {
    Term t = term();
    lx_.skip_ws();
    if (lx_.pos != lx_.text.size()) lx_.fail("trailing input");
    return t;
  }

 private:
  Lexer lx_;

  Term term() {
    std::vector<Term> parts;
    parts.push_back(factor());
    while (lx_.peek() == '.') {
      lx_.advance();
      parts.push_back(factor());
    }
    return Term::cat(std::move(parts));
  }

  Term factor() {
    char c = lx_.peek();
    if (c == '(') {
      lx_.advance();
      Term t = term();
      lx_.expect(')');
      return t;
    }
    if (c == '?' || c == '!') {
      lx_.advance();
      std::string name = lx_.ident();
      return Term::var(std::string(1, c) + name);
    }
    if (c == '\0') lx_.fail("unexpected end of input");
    int at_line = lx_.line, at_col = lx_.col;
    std::string id = lx_.ident();
    if (id == "eps") return Term::eps();
    if (id == "h") {
      lx_.expect('(');
      Term a = term();
      lx_.expect(')');
      return Term::hash(std::move(a));
    }
    if (id == "f" || id == "g") {
      lx_.expect('(');
      std::vector<Term> args;
      args.push_back(term());
      while (lx_.peek() == ',') {
        lx_.advance();
        args.push_back(term());
      }
      lx_.expect(')');
      if (args.size() != 4)
        throw ParseError(id + " takes exactly 4 arguments", at_line, at_col);
      return id == "f" ? Term::fapp(std::move(args)) : Term::gapp(std::move(args));
    }
    return Term::constant(id);
  }
};

}  // namespace

Term parse_term(const std::string& text) { return Parser(text).parse(); }

}  // namespace symcol
