#include "symcol/theory.hpp"

#include <stdexcept>

namespace symcol {

EquationalPresentation::EquationalPresentation(std::string name,
                                               std::vector<std::pair<Term, Term>> axioms)
    : name_(std::move(name)), axioms_(std::move(axioms)) {
  for (const auto& [l, r] : axioms_) {
    if (!l.const_names().empty() || !r.const_names().empty())
      throw std::invalid_argument("axioms must not contain free constants");
    if (l.var_names() != r.var_names())
      throw std::invalid_argument("presentation is not regular: " + l.str() + " = " + r.str());
  }
}

EquationalPresentation EquationalPresentation::au() {
  Term x = Term::var("?x"), y = Term::var("?y"), z = Term::var("?z");
  std::vector<std::pair<Term, Term>> ax;
  ax.emplace_back(Term::cat({x, Term::cat({y, z})}), Term::cat({Term::cat({x, y}), z}));
  ax.emplace_back(Term::cat({x, Term::eps()}), x);
  ax.emplace_back(Term::cat({Term::eps(), x}), x);
  return EquationalPresentation("AU", std::move(ax));
}

std::pair<Term, Term> EquationalPresentation::collision_axiom() {
  Term x1 = Term::var("?x1"), x2 = Term::var("?x2");
  Term y1 = Term::var("?y1"), y2 = Term::var("?y2");
  std::vector<Term> args{x1, x2, y1, y2};
  Term lhs = Term::hash(Term::cat({x1, Term::fapp(args), x2}));
  Term rhs = Term::hash(Term::cat({y1, Term::gapp(args), y2}));
  return {lhs, rhs};
}

EquationalPresentation EquationalPresentation::e_h() {
  auto base = au();
  auto ax = base.axioms();
  ax.push_back(collision_axiom());
  return EquationalPresentation("E_h", std::move(ax));
}

Term normalize(const Term& t) {
  switch (t.kind()) {
    case Kind::Var:
    case Kind::Const:
    case Kind::Eps:
      return t;
    case Kind::Cat: {
      std::vector<Term> parts;
      for (const auto& a : t.args()) parts.push_back(normalize(a));
      return Term::cat(std::move(parts));
    }
    case Kind::Hash:
      return Term::hash(normalize(t.args()[0]));
    case Kind::FApp:
    case Kind::GApp: {
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(normalize(a));
      return t.kind() == Kind::FApp ? Term::fapp(std::move(args))
                                    : Term::gapp(std::move(args));
    }
  }
  return t;
}

bool eq_modulo_au(const Term& a, const Term& b) { return normalize(a) == normalize(b); }

namespace {

bool eq_h(const Term& a, const Term& b);

// One-sided pattern probe: m as the f-side, candidate partner checked
// against m_other. m = x1 . f(x1,x2,y1,y2) . x2 with the flanks equal to the
// block's first two arguments; the partner is y1 . g(args) . y2.
bool collision_match_dir(const Term& m, const Term& m_other, bool m_is_f_side) {
  const Kind want = m_is_f_side ? Kind::FApp : Kind::GApp;
  auto ls = m.letters();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const Term& block = ls[i];
    if (block.kind() != want || block.args().size() != 4) continue;
    Term prefix = Term::cat(std::vector<Term>(ls.begin(), ls.begin() + i));
    Term suffix = Term::cat(std::vector<Term>(ls.begin() + i + 1, ls.end()));
    const auto& args = block.args();
    const Term& flank_l = m_is_f_side ? args[0] : args[2];
    const Term& flank_r = m_is_f_side ? args[1] : args[3];
    if (!eq_h(prefix, flank_l) || !eq_h(suffix, flank_r)) continue;
    Term partner_block = m_is_f_side ? Term::gapp(args) : Term::fapp(args);
    const Term& p_l = m_is_f_side ? args[2] : args[0];
    const Term& p_r = m_is_f_side ? args[3] : args[1];
    Term partner = Term::cat({p_l, partner_block, p_r});
    if (eq_h(partner, m_other)) return true;
  }
  return false;
}

bool eq_h(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::Var:
    case Kind::Const:
    case Kind::Eps:
      return false;  // structural equality already checked
    case Kind::Cat: {
      if (a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!eq_h(a.args()[i], b.args()[i])) return false;
      return true;
    }
    case Kind::FApp:
    case Kind::GApp: {
      if (a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!eq_h(a.args()[i], b.args()[i])) return false;
      return true;
    }
    case Kind::Hash: {
      const Term& m = a.args()[0];
      const Term& m2 = b.args()[0];
      if (eq_h(m, m2)) return true;
      return collision_match_dir(m, m2, true) || collision_match_dir(m, m2, false) ||
             collision_match_dir(m2, m, true) || collision_match_dir(m2, m, false);
    }
  }
  return false;
}

}  // namespace

bool eq_modulo_h(const Term& a, const Term& b) {
  if (!a.is_ground() || !b.is_ground())
    throw std::invalid_argument("eq_modulo_h needs ground terms");
  return eq_h(normalize(a), normalize(b));
}

std::vector<Term> collision_partners(const Term& m) {
  std::vector<Term> out;
  auto ls = m.letters();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const Term& block = ls[i];
    if (!block.is_block() || block.args().size() != 4) continue;
    Term prefix = Term::cat(std::vector<Term>(ls.begin(), ls.begin() + i));
    Term suffix = Term::cat(std::vector<Term>(ls.begin() + i + 1, ls.end()));
    const auto& args = block.args();
    bool f_side = block.kind() == Kind::FApp;
    const Term& flank_l = f_side ? args[0] : args[2];
    const Term& flank_r = f_side ? args[1] : args[3];
    if (!eq_h(prefix, flank_l) || !eq_h(suffix, flank_r)) continue;
    Term partner_block = f_side ? Term::gapp(args) : Term::fapp(args);
    const Term& p_l = f_side ? args[2] : args[0];
    const Term& p_r = f_side ? args[3] : args[1];
    out.push_back(Term::cat({p_l, partner_block, p_r}));
  }
  return out;
}

namespace {

void variants_into(const Term& t, std::set<Term>& out, std::size_t cap);

void cross_product(const std::vector<std::set<Term>>& parts, std::size_t idx,
                   std::vector<Term>& acc, Kind kind, std::set<Term>& out,
                   std::size_t cap) {
  if (idx == parts.size()) {
    Term built = kind == Kind::Cat    ? Term::cat(acc)
                 : kind == Kind::FApp ? Term::fapp(acc)
                                      : Term::gapp(acc);
    if (out.insert(built).second && out.size() > cap)
      throw std::logic_error("eh_variants: class too large");
    return;
  }
  for (const auto& p : parts[idx]) {
    acc.push_back(p);
    cross_product(parts, idx + 1, acc, kind, out, cap);
    acc.pop_back();
  }
}

void variants_into(const Term& t, std::set<Term>& out, std::size_t cap) {
  switch (t.kind()) {
    case Kind::Var:
    case Kind::Const:
    case Kind::Eps:
      out.insert(t);
      return;
    case Kind::Cat:
    case Kind::FApp:
    case Kind::GApp: {
      std::vector<std::set<Term>> parts;
      for (const auto& a : t.args()) {
        std::set<Term> s;
        variants_into(a, s, cap);
        parts.push_back(std::move(s));
      }
      std::vector<Term> acc;
      cross_product(parts, 0, acc, t.kind(), out, cap);
      return;
    }
    case Kind::Hash: {
      std::set<Term> args;
      variants_into(t.args()[0], args, cap);
      // close the argument set under collision-partner swaps
      std::vector<Term> work(args.begin(), args.end());
      while (!work.empty()) {
        Term m = work.back();
        work.pop_back();
        for (const Term& p : collision_partners(m)) {
          std::set<Term> ps;
          variants_into(p, ps, cap);
          for (const auto& q : ps)
            if (args.insert(q).second) {
              work.push_back(q);
              if (args.size() > cap) throw std::logic_error("eh_variants: class too large");
            }
        }
      }
      for (const auto& m : args) {
        if (out.insert(Term::hash(m)).second && out.size() > cap)
          throw std::logic_error("eh_variants: class too large");
      }
      return;
    }
  }
}

}  // namespace

std::set<Term> eh_variants(const Term& t, std::size_t cap) {
  std::set<Term> out;
  variants_into(normalize(t), out, cap);
  return out;
}

namespace {

void check_positions(const Term& t, const ModeTable& m, int eq, int side, Position& pos,
                     WellModedReport& rep) {
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    const Term& child = t.args()[i];
    int want = m.mode_of(t.kind(), static_cast<int>(i) + 1);
    int got = m.sig_of(child);
    pos.push_back(static_cast<int>(i) + 1);
    if (got != want) {
      rep.ok = false;
      rep.violations.push_back(
          {eq, side, pos,
           "position expects signature " + std::to_string(want) + " but subterm " +
               child.str() + " has signature " + std::to_string(got)});
    }
    check_positions(child, m, eq, side, pos, rep);
    pos.pop_back();
  }
}

}  // namespace

WellModedReport check_well_moded(const EquationalPresentation& p, const ModeTable& m) {
  WellModedReport rep;
  for (std::size_t e = 0; e < p.axioms().size(); ++e) {
    const auto& [l, r] = p.axioms()[e];
    Position pos;
    check_positions(l, m, static_cast<int>(e), 0, pos, rep);
    check_positions(r, m, static_cast<int>(e), 1, pos, rep);
    if (m.sig_of(l) != m.sig_of(r)) {
      rep.ok = false;
      rep.violations.push_back({static_cast<int>(e), 0, {}, "side signatures differ"});
    }
  }
  return rep;
}

}  // namespace symcol
