#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace symcol {

// Terms over the fixed signature {., eps, f, g, h} plus free constants and
// variables. Concatenation is kept in canonical AU form: flat argument lists
// with no eps elements, so equality modulo associativity/unit is structural
// equality.
enum class Kind : std::uint8_t { Var, Const, Eps, Cat, Hash, FApp, GApp };

class Term {
 public:
  Term() : kind_(Kind::Eps) {}

  static Term var(std::string name);    // name carries the ?/! sigil
  static Term constant(std::string name);
  static Term eps();
  static Term cat(std::vector<Term> parts);  // flattens, drops eps
  static Term hash(Term arg);
  static Term fapp(std::vector<Term> args);  // arity 2 or 4
  static Term gapp(std::vector<Term> args);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<Term>& args() const { return args_; }

  bool is_var() const { return kind_ == Kind::Var; }
  bool is_const() const { return kind_ == Kind::Const; }
  bool is_eps() const { return kind_ == Kind::Eps; }
  bool is_cat() const { return kind_ == Kind::Cat; }
  bool is_hash() const { return kind_ == Kind::Hash; }
  bool is_block() const { return kind_ == Kind::FApp || kind_ == Kind::GApp; }
  // X_1 variables are written with a '!' sigil, X_0 with '?'.
  bool is_x1_var() const { return kind_ == Kind::Var && !name_.empty() && name_[0] == '!'; }

  bool is_ground() const;
  std::size_t size() const;  // syntactic node count (flat cat counts one node)

  // The letters of a term viewed as a word: [] for eps, the elements for a
  // concatenation, [t] otherwise.
  std::vector<Term> letters() const;
  static Term from_letters(const std::vector<Term>& ls);

  std::set<std::string> var_names() const;
  std::set<std::string> const_names() const;

  std::strong_ordering operator<=>(const Term& o) const;
  bool operator==(const Term& o) const { return (*this <=> o) == 0; }

  std::string str() const;  // grammar-conformant text, parse round-trips

 private:
  Kind kind_;
  std::string name_;
  std::vector<Term> args_;
};

// Positions are 1-based integer paths; the empty path is the root.
using Position = std::vector<int>;
bool position_le(const Position& p, const Position& q);  // prefix order

// Signature/mode tables. sig maps symbols to {0,1,2}: theory-0 symbols and
// X_0 variables to 0, the layer-1 symbols and X_1 variables to 1, free
// constants to 2. mode(sym, i) gives the expected signature of argument i.
struct ModeTable {
  std::map<Kind, int> sig;                      // Cat, Eps, Hash, FApp, GApp
  std::map<std::pair<Kind, int>, int> mode;     // 1-based argument index
  int default_mode = 0;
  std::string c_min = "cmin";

  static ModeTable standard();  // sig(h)=1, everything else 0, all modes 0
  static ModeTable example_binary_fg();  // binary f/g with sig=1, mode(.,1)=1, mode(.,2)=0

  int sig_of(const Term& t) const;
  int mode_of(Kind sym, int index) const;
  std::vector<std::string> c_spe() const { return {c_min, "eps"}; }
};

int sig_of(const Term& t, const ModeTable& m);

// Subterm values: syntactic subterms that are atomic or sit at an ill-moded
// position (the root always does). Factors are the maximal strict ones.
std::set<Term> subterm_values(const Term& t, const ModeTable& m);
std::set<Term> subterm_values(const std::vector<Term>& ts, const ModeTable& m);
std::set<Term> factors(const Term& t, const ModeTable& m);

bool is_syntactic_subterm(const Term& sub, const Term& of);

struct Substitution {
  std::map<std::string, Term> map;  // keyed by sigiled variable name

  bool empty() const { return map.empty(); }
  const Term* find(const std::string& var) const;
  void bind(const std::string& var, Term value);
  Term apply(const Term& t) const;
  std::vector<Term> apply(const std::vector<Term>& ts) const;
  // this ∘ other: apply `other` first, then this to its range.
  Substitution compose_under(const Substitution& newer) const;
  bool is_ground_on(const std::set<std::string>& vars) const;
};

enum class Cmp { LT, EQ, GT };

// Total simplification ordering on ground terms (lexicographic path order).
// Precedence: h > g > f > . > free constants (by name) > eps > c_min.
Cmp compare_simp(const Term& a, const Term& b, const ModeTable& m);

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& what, int l, int c)
      : std::runtime_error(what), line(l), column(c) {}
};

Term parse_term(const std::string& text);
inline std::string format_term(const Term& t) { return t.str(); }

}  // namespace symcol
