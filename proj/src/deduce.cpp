#include "symcol/deduce.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "symcol/theory.hpp"

namespace symcol {

std::string system_name(SystemTag tag) {
  switch (tag) {
    case SystemTag::AU: return "au";
    case SystemTag::F: return "f";
    case SystemTag::G: return "g";
    case SystemTag::FREE: return "free";
    case SystemTag::H: return "h";
    case SystemTag::S0H: return "s0h";
  }
  return "?";
}

IntruderSystem IntruderSystem::of(SystemTag tag) {
  switch (tag) {
    case SystemTag::AU: return {tag, true, false, false, false, false};
    case SystemTag::F: return {tag, false, true, false, false, false};
    case SystemTag::G: return {tag, false, false, true, false, false};
    case SystemTag::FREE: return {tag, true, true, true, false, false};
    case SystemTag::H: return {tag, true, true, true, true, true};
    case SystemTag::S0H: return {tag, true, true, true, false, true};
  }
  return {tag, false, false, false, false, false};
}

namespace {

bool contains_hash(const Term& t) {
  if (t.is_hash()) return true;
  for (const auto& a : t.args())
    if (contains_hash(a)) return true;
  return false;
}

bool contains_block(const Term& t) {
  if (t.is_block()) return true;
  for (const auto& a : t.args())
    if (contains_block(a)) return true;
  return false;
}

bool is_word(const Term& t) { return !contains_hash(t) && !contains_block(t); }

void require_ground(const std::vector<Term>& ts, const Term& goal) {
  for (const auto& t : ts)
    if (!t.is_ground()) throw std::invalid_argument("knowledge must be ground: " + t.str());
  if (!goal.is_ground()) throw std::invalid_argument("goal must be ground: " + goal.str());
}

// Shared word-level engine. Blocks are letters; availability of a letter is
// extraction from the knowledge, composition (f/g), or the hash rule modulo
// the collision equation, depending on the system.
struct WordEngine {
  std::vector<Term> knowledge;           // normalized, first occurrence kept
  bool compose_blocks = false;           // f/g composition enabled
  bool hash_rule = false;                // x -> h(x) enabled
  bool modulo_collisions = false;        // matching modulo eq_modulo_h

  std::map<Term, std::optional<std::vector<Step>>> memo;

  bool letters_eq(const Term& a, const Term& b) const {
    if (a == b) return true;
    return modulo_collisions && eq_modulo_h(a, b);
  }

  // steps deriving exactly `segment` (a word) by extraction from one
  // knowledge element; nullopt if no element contains it
  std::optional<std::vector<Step>> extract_segment(const std::vector<Term>& seg_letters) {
    for (const Term& e : knowledge) {
      auto els = e.letters();
      if (els.size() < seg_letters.size()) continue;
      for (std::size_t off = 0; off + seg_letters.size() <= els.size(); ++off) {
        bool match = true;
        for (std::size_t k = 0; k < seg_letters.size(); ++k)
          if (!letters_eq(els[off + k], seg_letters[k])) {
            match = false;
            break;
          }
        if (!match) continue;
        std::vector<Step> steps;
        Term cur = e;
        if (off > 0) {
          Term suf = Term::cat(std::vector<Term>(els.begin() + off, els.end()));
          steps.push_back({"suffix", {cur}, suf});
          cur = suf;
        }
        if (off + seg_letters.size() < els.size()) {
          Term pre = Term::cat(
              std::vector<Term>(els.begin() + off, els.begin() + off + seg_letters.size()));
          steps.push_back({"prefix", {cur}, pre});
          cur = pre;
        }
        Term want = Term::cat(seg_letters);
        if (!(cur == want)) steps.push_back({"hc", {cur}, want});
        return steps;
      }
    }
    return std::nullopt;
  }

  std::optional<std::vector<Step>> derive_block(const Term& block) {
    if (block.is_block() && compose_blocks && block.args().size() == 4) {
      std::vector<Step> steps;
      bool ok = true;
      for (const auto& a : block.args()) {
        auto sub = derive(a);
        if (!sub) {
          ok = false;
          break;
        }
        steps.insert(steps.end(), sub->begin(), sub->end());
      }
      if (ok) {
        steps.push_back({block.kind() == Kind::FApp ? "compose_f" : "compose_g",
                         block.args(), block});
        return steps;
      }
    }
    if (block.is_hash() && hash_rule) {
      const Term& m = block.args()[0];
      std::vector<Term> candidates{m};
      for (const Term& p : collision_partners(m)) candidates.push_back(p);
      for (const Term& cand : candidates) {
        auto sub = derive(cand);
        if (!sub) continue;
        std::vector<Step> steps = *sub;
        Term hc = Term::hash(cand);
        steps.push_back({"hash", {cand}, hc});
        if (!(hc == block)) steps.push_back({"hc", {hc}, block});
        return steps;
      }
    }
    return std::nullopt;
  }

  // full word derivability: segment DP over the goal's letters
  std::optional<std::vector<Step>> derive(const Term& goal) {
    auto it = memo.find(goal);
    if (it != memo.end()) return it->second;
    memo.emplace(goal, std::nullopt);  // cut recursive cycles pessimistically

    auto ls = goal.letters();
    const std::size_t n = ls.size();
    // reach[j]: steps to derive letters [0, j)
    std::vector<std::optional<std::vector<Step>>> reach(n + 1);
    reach[0] = std::vector<Step>{};
    if (n == 0) reach[0]->push_back({"eps", {}, Term::eps()});
    for (std::size_t j = 1; j <= n; ++j) {
      for (std::size_t i = 0; i < j && !reach[j]; ++i) {
        if (!reach[i]) continue;
        std::vector<Term> seg(ls.begin() + i, ls.begin() + j);
        auto got = extract_segment(seg);
        if (!got && j == i + 1) got = derive_block(ls[i]);
        if (!got) continue;
        std::vector<Step> steps = *reach[i];
        steps.insert(steps.end(), got->begin(), got->end());
        if (i > 0) {
          Term left = Term::cat(std::vector<Term>(ls.begin(), ls.begin() + i));
          Term right = Term::cat(seg);
          Term both = Term::cat(std::vector<Term>(ls.begin(), ls.begin() + j));
          steps.push_back({"concat", {left, right}, both});
        }
        reach[j] = std::move(steps);
      }
    }
    memo[goal] = reach[n];
    return reach[n];
  }
};

Derivation assemble(const std::vector<Term>& knowledge, const Term& goal,
                    std::vector<Step> raw_steps) {
  Derivation d;
  d.initial = knowledge;
  d.goal = goal;
  std::set<Term> present(knowledge.begin(), knowledge.end());
  for (auto& s : raw_steps) {
    if (present.count(s.derived)) continue;
    present.insert(s.derived);
    d.steps.push_back(std::move(s));
  }
  return d;
}

std::vector<Term> normalize_knowledge(const std::vector<Term>& knowledge) {
  std::vector<Term> out;
  std::set<Term> seen;
  for (const auto& e : knowledge) {
    Term n = normalize(e);
    if (seen.insert(n).second) out.push_back(n);
  }
  return out;
}

}  // namespace

bool replay(const Derivation& d) {
  std::set<Term> present(d.initial.begin(), d.initial.end());
  for (const auto& s : d.steps) {
    for (const auto& p : s.premises)
      if (!present.count(p)) return false;
    if (s.rule == "eps") {
      if (!s.derived.is_eps()) return false;
    } else if (s.rule == "concat") {
      if (s.premises.size() != 2) return false;
      if (!(Term::cat({s.premises[0], s.premises[1]}) == s.derived)) return false;
    } else if (s.rule == "prefix" || s.rule == "suffix") {
      if (s.premises.size() != 1) return false;
      auto w = s.premises[0].letters();
      auto part = s.derived.letters();
      if (part.size() > w.size()) return false;
      if (s.rule == "prefix") {
        if (!std::equal(part.begin(), part.end(), w.begin())) return false;
      } else {
        if (!std::equal(part.rbegin(), part.rend(), w.rbegin())) return false;
      }
    } else if (s.rule == "compose_f" || s.rule == "compose_g") {
      if (s.premises.size() != 4) return false;
      Term built = s.rule == "compose_f" ? Term::fapp(s.premises) : Term::gapp(s.premises);
      if (!(built == s.derived)) return false;
    } else if (s.rule == "hash") {
      if (s.premises.size() != 1) return false;
      if (!(Term::hash(s.premises[0]) == s.derived)) return false;
    } else if (s.rule == "hc") {
      if (s.premises.size() != 1) return false;
      if (!eq_modulo_h(s.premises[0], s.derived)) return false;
    } else {
      return false;
    }
    present.insert(s.derived);
  }
  return present.count(d.goal) != 0;
}

std::optional<Derivation> derivable_au(const std::vector<Term>& knowledge, const Term& goal) {
  require_ground(knowledge, goal);
  for (const auto& e : knowledge)
    if (!is_word(e)) throw std::invalid_argument("derivable_au expects words: " + e.str());
  if (!is_word(goal)) throw std::invalid_argument("derivable_au expects words: " + goal.str());
  WordEngine eng;
  eng.knowledge = normalize_knowledge(knowledge);
  auto steps = eng.derive(normalize(goal));
  if (!steps) return std::nullopt;
  return assemble(eng.knowledge, normalize(goal), std::move(*steps));
}

namespace {

std::optional<std::vector<Step>> compose_derive(const std::set<Term>& members, const Term& goal,
                                                Kind sym,
                                                std::map<Term, std::optional<std::vector<Step>>>& memo) {
  if (members.count(goal)) return std::vector<Step>{};
  auto it = memo.find(goal);
  if (it != memo.end()) return it->second;
  memo.emplace(goal, std::nullopt);
  if (goal.kind() == sym && goal.args().size() == 4) {
    std::vector<Step> steps;
    for (const auto& a : goal.args()) {
      auto sub = compose_derive(members, a, sym, memo);
      if (!sub) return std::nullopt;
      steps.insert(steps.end(), sub->begin(), sub->end());
    }
    steps.push_back({sym == Kind::FApp ? "compose_f" : "compose_g", goal.args(), goal});
    memo[goal] = steps;
    return steps;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Derivation> derivable_compose(const std::vector<Term>& knowledge, const Term& goal,
                                            Kind sym) {
  if (sym != Kind::FApp && sym != Kind::GApp)
    throw std::invalid_argument("derivable_compose expects f or g");
  require_ground(knowledge, goal);
  auto norm = normalize_knowledge(knowledge);
  std::set<Term> members(norm.begin(), norm.end());
  std::map<Term, std::optional<std::vector<Step>>> memo;
  auto steps = compose_derive(members, normalize(goal), sym, memo);
  if (!steps) return std::nullopt;
  return assemble(norm, normalize(goal), std::move(*steps));
}

std::optional<Derivation> derivable_free(const std::vector<Term>& knowledge, const Term& goal) {
  require_ground(knowledge, goal);
  for (const auto& e : knowledge)
    if (contains_hash(e)) throw std::invalid_argument("derivable_free rejects h: " + e.str());
  if (contains_hash(goal)) throw std::invalid_argument("derivable_free rejects h: " + goal.str());
  WordEngine eng;
  eng.knowledge = normalize_knowledge(knowledge);
  eng.compose_blocks = true;
  auto steps = eng.derive(normalize(goal));
  if (!steps) return std::nullopt;
  return assemble(eng.knowledge, normalize(goal), std::move(*steps));
}

std::optional<Derivation> derivable_h(const std::vector<Term>& knowledge, const Term& goal) {
  require_ground(knowledge, goal);
  WordEngine eng;
  eng.knowledge = normalize_knowledge(knowledge);
  eng.compose_blocks = true;
  eng.hash_rule = true;
  eng.modulo_collisions = true;
  auto steps = eng.derive(normalize(goal));
  if (!steps) return std::nullopt;
  return assemble(eng.knowledge, normalize(goal), std::move(*steps));
}

std::optional<Derivation> derivable(SystemTag tag, const std::vector<Term>& knowledge,
                                    const Term& goal) {
  switch (tag) {
    case SystemTag::AU: return derivable_au(knowledge, goal);
    case SystemTag::F: return derivable_compose(knowledge, goal, Kind::FApp);
    case SystemTag::G: return derivable_compose(knowledge, goal, Kind::GApp);
    case SystemTag::FREE: return derivable_free(knowledge, goal);
    case SystemTag::H: return derivable_h(knowledge, goal);
    case SystemTag::S0H: {
      WordEngine eng;
      eng.knowledge = normalize_knowledge(knowledge);
      eng.compose_blocks = true;
      eng.modulo_collisions = true;
      auto steps = eng.derive(normalize(goal));
      if (!steps) return std::nullopt;
      return assemble(eng.knowledge, normalize(goal), std::move(*steps));
    }
  }
  return std::nullopt;
}

namespace {

void insert_with_variants(const Term& t, std::size_t max_size, bool collisions,
                          std::set<Term>& out, std::vector<Term>& fresh) {
  if (t.size() > max_size || out.count(t)) return;
  std::vector<Term> all;
  if (collisions && contains_hash(t)) {
    auto vs = eh_variants(t, 512);
    all.assign(vs.begin(), vs.end());
  } else {
    all.push_back(t);
  }
  for (const auto& v : all) {
    if (v.size() > max_size) continue;
    if (out.insert(v).second) fresh.push_back(v);
  }
}

}  // namespace

std::set<Term> closure_bfs(const std::vector<Term>& knowledge, int depth, SystemTag tag,
                           std::size_t max_size) {
  IntruderSystem rules = IntruderSystem::of(tag);
  if (max_size == 0) {
    std::size_t m = 1;
    for (const auto& e : knowledge) m = std::max(m, e.size());
    max_size = 2 * m + 4;
  }
  std::set<Term> cur;
  std::vector<Term> fresh;
  for (const auto& e : knowledge) insert_with_variants(normalize(e), max_size, rules.collision_theory, cur, fresh);

  for (int d = 0; d < depth; ++d) {
    std::vector<Term> added;
    std::vector<Term> snapshot(cur.begin(), cur.end());
    std::stable_sort(snapshot.begin(), snapshot.end(),
                     [](const Term& a, const Term& b) { return a.size() < b.size(); });
    auto emit = [&](const Term& t) {
      insert_with_variants(t, max_size, rules.collision_theory, cur, added);
    };
    if (rules.word_rules) {
      emit(Term::eps());
      for (const auto& w : snapshot) {
        auto ls = w.letters();
        for (std::size_t k = 0; k <= ls.size(); ++k) {
          emit(Term::cat(std::vector<Term>(ls.begin(), ls.begin() + k)));
          emit(Term::cat(std::vector<Term>(ls.begin() + k, ls.end())));
        }
      }
      for (const auto& x : snapshot) {
        for (const auto& y : snapshot) {
          // size(x.y) is at least size(x)+size(y)-1
          if (x.size() + y.size() > max_size + 1) break;
          emit(Term::cat({x, y}));
        }
      }
    }
    if (rules.compose_f || rules.compose_g) {
      // a block costs one node plus its arguments
      for (const auto& a1 : snapshot) {
        std::size_t s1 = 1 + a1.size();
        if (s1 + 3 > max_size) break;
        for (const auto& a2 : snapshot) {
          std::size_t s2 = s1 + a2.size();
          if (s2 + 2 > max_size) break;
          for (const auto& a3 : snapshot) {
            std::size_t s3 = s2 + a3.size();
            if (s3 + 1 > max_size) break;
            for (const auto& a4 : snapshot) {
              if (s3 + a4.size() > max_size) break;
              if (rules.compose_f) emit(Term::fapp({a1, a2, a3, a4}));
              if (rules.compose_g) emit(Term::gapp({a1, a2, a3, a4}));
            }
          }
        }
      }
    }
    if (rules.hash_rule)
      for (const auto& x : snapshot)
        if (x.size() + 1 <= max_size) emit(Term::hash(x));
    if (added.empty()) break;
  }
  return cur;
}

bool closure_contains(const std::set<Term>& closure, const Term& t, SystemTag tag) {
  Term n = normalize(t);
  if (closure.count(n)) return true;
  if (tag == SystemTag::H || tag == SystemTag::S0H) {
    for (const auto& c : closure)
      if (eq_modulo_h(c, n)) return true;
  }
  return false;
}

}  // namespace symcol
