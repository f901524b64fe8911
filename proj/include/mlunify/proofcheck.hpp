#pragma once

// Independent certificate checker for the proof-system fragment used by the
// generators: propositional tautologies, modus ponens, equality
// introduction and elimination, membership equality, definedness, axiom
// instances, and (optionally) the derived rules.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlunify/certificate.hpp"
#include "mlunify/encoder.hpp"

namespace mlunify {

struct CheckerConfig {
  Signature sig;
  AxiomSet axioms;
  bool allow_derived = true;
  std::size_t tautology_budget = 16;  // maximum number of distinct atoms
};

inline CheckerConfig default_config(const Signature& sig) { return CheckerConfig{sig, generate_axioms(sig), true, 16}; }

struct CheckReport {
  bool ok = true;
  std::optional<std::size_t> failed_line;
  std::string reason;
};

inline nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json out{{"ok", r.ok}, {"reason", r.reason}};
  out["failed_line"] = r.failed_line ? nlohmann::json(*r.failed_line) : nlohmann::json();
  return out;
}

// ---------------------------------------------------------------------------
// Propositional reasoning over atoms (maximal subpatterns that are not a
// negation or a conjunction).

namespace detail {

class Atoms {
 public:
  void collect(const Pattern& p) {
    if (p.kind() == Kind::Not || p.kind() == Kind::And) {
      for (const auto& c : p.children()) collect(c);
      return;
    }
    ids_.try_emplace(p, ids_.size());
  }

  std::size_t size() const noexcept { return ids_.size(); }

  bool eval(const Pattern& p, std::uint64_t assignment) const {
    switch (p.kind()) {
      case Kind::Not: return !eval(p.child(0), assignment);
      case Kind::And: return eval(p.child(0), assignment) && eval(p.child(1), assignment);
      default: return (assignment >> ids_.at(p) & 1) != 0;
    }
  }

 private:
  std::unordered_map<Pattern, std::size_t, PatternHash> ids_;
};

inline bool is_p1(const Pattern& p) {
  auto a = as_implies(p);
  if (!a) return false;
  auto b = as_implies(a->rhs);
  return b && b->rhs == a->lhs;
}

inline bool is_p2(const Pattern& p) {
  auto top = as_implies(p);
  if (!top) return false;
  auto l = as_implies(top->lhs);  // f1 -> (f2 -> f3)
  auto r = as_implies(top->rhs);  // (f1 -> f2) -> (f1 -> f3)
  if (!l || !r) return false;
  auto l2 = as_implies(l->rhs);
  auto r1 = as_implies(r->lhs);
  auto r2 = as_implies(r->rhs);
  return l2 && r1 && r2 && r1->lhs == l->lhs && r1->rhs == l2->lhs && r2->lhs == l->lhs && r2->rhs == l2->rhs;
}

inline bool is_p3(const Pattern& p) {
  auto top = as_implies(p);
  if (!top) return false;
  auto l = as_implies(top->lhs);  // ~b -> ~a
  auto r = as_implies(top->rhs);  // a -> b
  if (!l || !r || l->lhs.kind() != Kind::Not || l->rhs.kind() != Kind::Not) return false;
  return l->lhs.child(0) == r->rhs && l->rhs.child(0) == r->lhs;
}

inline void conjunct_leaves(const Pattern& p, std::vector<Pattern>& out) {
  if (p.kind() == Kind::And) {
    conjunct_leaves(p.child(0), out);
    conjunct_leaves(p.child(1), out);
    return;
  }
  out.push_back(p);
}

}  // namespace detail

/// Truth-table validity over abstracted atoms.
inline bool check_tautology(const Pattern& phi, std::size_t budget = 16) {
  detail::Atoms atoms;
  atoms.collect(phi);
  if (atoms.size() > budget || atoms.size() >= 63) {
    throw TautologyBudgetExceeded(std::to_string(atoms.size()) + " atoms exceed the budget of " + std::to_string(budget));
  }
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << atoms.size()); ++m) {
    if (!atoms.eval(phi, m)) return false;
  }
  return true;
}

/// Whether the conjunction of the premises propositionally entails the conclusion.
inline bool propositionally_entails(const std::vector<Pattern>& premises, const Pattern& conclusion, std::size_t budget) {
  if (premises.empty() && (detail::is_p1(conclusion) || detail::is_p2(conclusion) || detail::is_p3(conclusion))) {
    return true;
  }
  // Conjunct containment settles the common elimination/introduction steps.
  std::vector<Pattern> have, want;
  for (const auto& p : premises) detail::conjunct_leaves(p, have);
  detail::conjunct_leaves(conclusion, want);
  std::unordered_map<Pattern, bool, PatternHash> known;
  for (const auto& h : have) known.emplace(h, true);
  if (std::all_of(want.begin(), want.end(), [&](const Pattern& w) { return known.count(w) != 0; })) return true;

  detail::Atoms atoms;
  for (const auto& p : premises) atoms.collect(p);
  atoms.collect(conclusion);
  if (atoms.size() > budget || atoms.size() >= 63) {
    throw TautologyBudgetExceeded(std::to_string(atoms.size()) + " atoms exceed the budget of " + std::to_string(budget));
  }
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << atoms.size()); ++m) {
    bool all = std::all_of(premises.begin(), premises.end(), [&](const Pattern& p) { return atoms.eval(p, m); });
    if (all && !atoms.eval(conclusion, m)) return false;
  }
  return true;
}

namespace detail {

/// One-sided matching of an axiom schema: its free variables stand for
/// term patterns, its binders match binders of the same sort.
class SchemaMatcher {
 public:
  explicit SchemaMatcher(const CheckerConfig& cfg) : cfg_(cfg) {}

  bool match(const Pattern& schema, const Pattern& target) {
    theta_.clear();
    bound_.clear();
    return rec(schema, target);
  }

 private:
  bool rec(const Pattern& s, const Pattern& t) {
    if (s.sort() != t.sort()) return false;
    if (s.is_var()) {
      for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
        if (it->first == s.variable()) return t.is_var() && t.variable() == it->second;
      }
      if (!is_term_pattern(cfg_.sig, t)) return false;
      for (const auto& v : free_vars(t)) {
        for (const auto& [sb, tb] : bound_) {
          if (tb == v) return false;
        }
      }
      auto [it, inserted] = theta_.try_emplace(s.variable(), t);
      return inserted || it->second == t;
    }
    if (s.kind() != t.kind()) return false;
    if (s.kind() == Kind::App && (s.symbol() != t.symbol() || s.children().size() != t.children().size())) return false;
    if (s.kind() == Kind::Exists) {
      if (s.variable().sort != t.variable().sort) return false;
      bound_.emplace_back(s.variable(), t.variable());
      bool ok = rec(s.child(0), t.child(0));
      bound_.pop_back();
      return ok;
    }
    for (std::size_t i = 0; i < s.children().size(); ++i) {
      if (!rec(s.child(i), t.child(i))) return false;
    }
    return true;
  }

  const CheckerConfig& cfg_;
  std::map<Variable, Pattern> theta_;
  std::vector<std::pair<Variable, Variable>> bound_;
};

inline bool functional_in(const CheckerConfig& cfg, const Pattern& t) {
  if (!is_term_pattern(cfg.sig, t)) return false;
  if (t.is_app() && !cfg.axioms.find(functionality_tag(t.symbol()))) return false;
  for (const auto& c : t.children()) {
    if (!functional_in(cfg, c)) return false;
  }
  return true;
}

/// Expected result of a derived unification rule, or an error message.
struct DeltaCheck {
  std::optional<Pattern> result;
  std::string error;
};

inline DeltaCheck delta_result(const CheckerConfig& cfg, const Pattern& src, int delta, std::size_t pos) {
  const Sort s = src.sort();
  auto parts = right_conjuncts(src);
  std::optional<Pattern> frame;
  std::size_t start = 0;
  if (!as_equals(parts[0])) {
    frame = parts[0];
    start = 1;
  }
  std::vector<Pattern> eqs(parts.begin() + static_cast<std::ptrdiff_t>(start), parts.end());
  for (const auto& e : eqs) {
    if (!as_equals(e)) return {std::nullopt, "premise is not a frame followed by equalities"};
  }
  if (pos >= eqs.size()) return {std::nullopt, "position out of range"};
  auto eq = *as_equals(eqs[pos]);
  std::vector<Pattern> next = eqs;
  switch (delta) {
    case 1:
      if (!(eq.lhs == eq.rhs)) return {std::nullopt, "Delete on an equality with different sides"};
      next.erase(next.begin() + static_cast<std::ptrdiff_t>(pos));
      break;
    case 2: {
      const Pattern& a = eq.lhs;
      const Pattern& b = eq.rhs;
      if (!a.is_app() || !b.is_app() || is_ceil(a) || is_ceil(b) || a.symbol() != b.symbol() ||
          a.children().empty() || a.children().size() != b.children().size()) {
        return {std::nullopt, "Decomposition needs f(...) = f(...)"};
      }
      const SymbolDecl* d = cfg.sig.find(a.symbol());
      if (!d || !d->injective) return {std::nullopt, "Decomposition on a non-injective symbol"};
      if (!cfg.axioms.find(injectivity_tag(d->name, d->result, s))) {
        return {std::nullopt, "injectivity axiom for " + d->name + " is not in the axiom set"};
      }
      std::vector<Pattern> sub;
      for (std::size_t k = 0; k < a.children().size(); ++k) sub.push_back(equals(a.child(k), b.child(k), s));
      next.erase(next.begin() + static_cast<std::ptrdiff_t>(pos));
      next.insert(next.begin() + static_cast<std::ptrdiff_t>(pos), sub.begin(), sub.end());
      break;
    }
    case 3:
      if (!eq.lhs.is_app() || is_ceil(eq.lhs) || !eq.rhs.is_var()) return {std::nullopt, "Orient needs f(...) = x"};
      next[pos] = equals(eq.rhs, eq.lhs, s);
      break;
    case 4: {
      if (!eq.lhs.is_var() || occurs(eq.lhs.variable(), eq.rhs)) return {std::nullopt, "Elimination needs x = t, x not in t"};
      bool used = false;
      for (std::size_t i = 0; i < next.size(); ++i) {
        if (i == pos) continue;
        used = used || free_vars(next[i]).count(eq.lhs.variable()) != 0;
        next[i] = subst_in_pattern(next[i], eq.rhs, eq.lhs.variable());
      }
      if (!used) return {std::nullopt, "Elimination variable does not occur in the other equalities"};
      break;
    }
    default:
      return {std::nullopt, "unknown derived rule"};
  }
  std::vector<Pattern> all;
  if (frame) all.push_back(*frame);
  all.insert(all.end(), next.begin(), next.end());
  return {conj_all(all, s), ""};
}

}  // namespace detail

/// Checks every line of the certificate; reports the first rejected line.
inline CheckReport verify(const Certificate& cert, const CheckerConfig& cfg) {
  if (cfg.tautology_budget < 1) throw Error("tautology budget must be at least 1");
  auto reject = [](std::optional<std::size_t> line, std::string why) { return CheckReport{false, line, std::move(why)}; };
  if (cert.lines.empty()) return reject(std::nullopt, "certificate has no lines");
  for (const auto& h : cert.hypotheses) {
    try {
      check_well_sorted(cfg.sig, h);
    } catch (const Error& e) {
      return reject(std::nullopt, std::string("hypothesis: ") + e.what());
    }
  }
  for (std::size_t k = 0; k < cert.lines.size(); ++k) {
    const ProofLine& line = cert.lines[k];
    if (line.index != k + 1) return reject(line.index, "line numbers must be consecutive from 1");
    try {
      check_well_sorted(cfg.sig, line.formula);
      if (line.why.context) check_well_sorted(cfg.sig, *line.why.context);
    } catch (const Error& e) {
      return reject(line.index, e.what());
    }
  }

  detail::SchemaMatcher matcher(cfg);
  for (const ProofLine& line : cert.lines) {
    const Justification& j = line.why;
    const Pattern& f = line.formula;
    auto fail = [&](const std::string& why) { return reject(line.index, std::string(just_name(j.rule)) + ": " + why); };
    for (auto p : j.premises) {
      if (p < 1 || p >= line.index) return fail("premise " + std::to_string(p) + " is not an earlier line");
    }
    auto premise = [&](std::size_t i) -> const Pattern& { return cert.lines[j.premises.at(i) - 1].formula; };
    auto arity = [&](std::size_t n) { return j.premises.size() == n; };
    bool derived = j.rule == Just::DerivedDelta || j.rule == Just::PropFpattForward ||
                   j.rule == Just::PropFpattBackward || j.rule == Just::EqSymmetry;
    if (derived && !cfg.allow_derived) return fail("derived rules are disabled; expand the certificate");

    try {
      switch (j.rule) {
        case Just::Hypothesis:
          if (std::find(cert.hypotheses.begin(), cert.hypotheses.end(), f) == cert.hypotheses.end()) {
            return fail("formula is not a hypothesis");
          }
          break;
        case Just::Axiom: {
          const Axiom* ax = cfg.axioms.find(j.tag);
          if (!ax) return fail("axiom " + j.tag + " is not in the axiom set");
          if (!matcher.match(ax->formula, f)) return fail("formula is not an instance of " + j.tag);
          break;
        }
        case Just::Tautology: {
          std::vector<Pattern> prem;
          for (std::size_t i = 0; i < j.premises.size(); ++i) prem.push_back(premise(i));
          if (!propositionally_entails(prem, f, cfg.tautology_budget)) return fail("not a propositional consequence");
          break;
        }
        case Just::ModusPonens: {
          if (!arity(2)) return fail("needs two premises");
          auto imp = as_implies(premise(1));
          if (!imp || !(imp->lhs == premise(0)) || !(imp->rhs == f)) return fail("second premise is not (first -> this)");
          break;
        }
        case Just::EqualityIntro: {
          auto e = as_equals(f);
          if (!arity(0) || !e || !(e->lhs == e->rhs)) return fail("expected phi = phi");
          break;
        }
        case Just::EqualityElim: {
          if (!j.context || !j.hole) return fail("context and hole are required");
          const Pattern& C = *j.context;
          const Variable& h = *j.hole;
          if (arity(2)) {
            auto e = as_equals(premise(0));
            if (!e) return fail("first premise is not an equality");
            if (e->lhs.sort() != h.sort) return fail("hole sort differs from the equality operands");
            if (!(subst_in_pattern(C, e->lhs, h) == premise(1))) return fail("second premise is not C[lhs/h]");
            if (!(subst_in_pattern(C, e->rhs, h) == f)) return fail("formula is not C[rhs/h]");
          } else if (arity(0)) {
            auto imp = as_implies(f);
            if (!imp || imp->lhs.kind() != Kind::And) return fail("expected (a = b /\\ C[a/h]) -> C[b/h]");
            auto e = as_equals(imp->lhs.child(0));
            if (!e || e->lhs.sort() != h.sort) return fail("expected an equality of the hole's sort");
            if (!(subst_in_pattern(C, e->lhs, h) == imp->lhs.child(1))) return fail("antecedent is not C[a/h]");
            if (!(subst_in_pattern(C, e->rhs, h) == imp->rhs)) return fail("consequent is not C[b/h]");
          } else {
            return fail("needs zero or two premises");
          }
          break;
        }
        case Just::MembershipEquality: {
          if (!arity(1)) return fail("needs one premise");
          bool found = false;
          const Pattern& src = premise(0);
          for_each_subpattern(src, [&](const Path& path, const Pattern& q) {
            if (found) return;
            auto m = as_member(q);
            if (!m || m->lhs.sort() != m->rhs.sort()) return;
            if (!detail::functional_in(cfg, m->lhs) || !detail::functional_in(cfg, m->rhs)) return;
            found = replace_at(src, path, equals(m->lhs, m->rhs, q.sort())) == f;
          });
          if (!found) return fail("no membership of term patterns rewrites the premise into this line");
          break;
        }
        case Just::DefinednessDef: {
          if (!arity(1) || !(premise(0) == f)) return fail("unfolding must leave the formula unchanged");
          bool has_member = false;
          for_each_subpattern(f, [&](const Path&, const Pattern& q) { has_member = has_member || as_member(q).has_value(); });
          if (!has_member) return fail("formula contains no membership");
          break;
        }
        case Just::DefinednessIntro: {
          if (!arity(1) || !is_ceil(f) || !(f.child(0) == premise(0))) return fail("expected |_ premise _|");
          if (!cfg.axioms.find(definedness_tag(premise(0).sort(), f.sort()))) return fail("definedness axiom is missing");
          break;
        }
        case Just::DerivedDelta: {
          if (!arity(1)) return fail("needs one premise");
          auto r = detail::delta_result(cfg, premise(0), j.delta, j.position);
          if (!r.result) return fail(r.error);
          if (!(*r.result == f)) return fail("formula differs from the rule's result");
          break;
        }
        case Just::PropFpattForward: {
          const Pattern& src = premise(0);
          if (!arity(1) || src.kind() != Kind::And) return fail("premise must be a conjunction");
          const Pattern& a = src.child(0);
          const Pattern& b = src.child(1);
          if (!detail::functional_in(cfg, a) || !detail::functional_in(cfg, b)) return fail("conjuncts must be functional term patterns");
          if (!(conj(a, equals(a, b, a.sort())) == f)) return fail("expected a /\\ (a = b)");
          break;
        }
        case Just::PropFpattBackward: {
          const Pattern& src = premise(0);
          if (!arity(1) || src.kind() != Kind::And) return fail("premise must be a conjunction");
          const Pattern& a = src.child(0);
          auto e = as_equals(src.child(1));
          if (!e || !(e->lhs == a) || src.child(1).sort() != a.sort()) return fail("premise must be a /\\ (a = b)");
          if (!detail::functional_in(cfg, a) || !detail::functional_in(cfg, e->rhs)) return fail("operands must be functional term patterns");
          if (!(conj(a, e->rhs) == f)) return fail("expected a /\\ b");
          break;
        }
        case Just::EqSymmetry: {
          auto e = arity(1) ? as_equals(premise(0)) : std::nullopt;
          if (!e || !(equals(e->rhs, e->lhs, premise(0).sort()) == f)) return fail("expected the swapped equality");
          break;
        }
      }
    } catch (const TautologyBudgetExceeded& e) {
      return fail(e.what());
    } catch (const Error& e) {
      return fail(e.what());
    }
  }
  if (!cert.conclusion || !(*cert.conclusion == cert.lines.back().formula)) {
    return reject(cert.lines.back().index, "conclusion differs from the last line");
  }
  return {};
}

}  // namespace mlunify
