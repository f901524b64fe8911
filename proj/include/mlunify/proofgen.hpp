#pragma once

// Certificate generation. Stage 1 follows the unification trace through the
// derived rules; Stage 2 rebuilds t1 /\ t2 from t1 /\ phi^sigma by equality
// elimination. With `expand`, derived steps are replaced by their bodies.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

#include "mlunify/certificate.hpp"
#include "mlunify/encoder.hpp"
#include "mlunify/unifier.hpp"

namespace mlunify {

struct GenOptions {
  bool expand = false;
};

/// Schematic data of a derived-rule instance. The unification rules use
/// phi /\ (lhs = rhs); the functional-conjunction rules use lhs and rhs only.
struct RuleInstance {
  std::optional<Pattern> phi;
  Pattern lhs;
  Pattern rhs;
};

namespace detail {

inline Justification just(Just r, std::vector<std::size_t> premises = {}, std::string tag = {}) {
  Justification j;
  j.rule = r;
  j.premises = std::move(premises);
  j.tag = std::move(tag);
  return j;
}

inline Justification elim_just(std::vector<std::size_t> premises, Pattern context, Variable hole) {
  Justification j = just(Just::EqualityElim, std::move(premises));
  j.context = std::move(context);
  j.hole = std::move(hole);
  return j;
}

/// A variable named `base` of sort s that does not occur in `avoid`.
inline Variable unused_variable(const std::string& base, const Sort& s, const std::set<Variable>& avoid) {
  Variable v{base, s};
  bool taken = std::any_of(avoid.begin(), avoid.end(), [&](const Variable& a) { return a.name == base; });
  return taken ? fresh_variable(v, avoid) : v;
}

/// The conjunction frame /\ e1 /\ ... /\ en, right-nested.
inline Pattern assemble(const std::optional<Pattern>& frame, const std::vector<Pattern>& eqs, const Sort& s) {
  std::vector<Pattern> parts;
  if (frame) parts.push_back(*frame);
  parts.insert(parts.end(), eqs.begin(), eqs.end());
  return conj_all(parts, s);
}

/// a /\ b  to  a /\ (a = b), from line L.
inline std::size_t emit_fpatt_forward(Certificate& c, std::size_t L, const Pattern& a, const Pattern& b, bool expand) {
  const Sort& s = a.sort();
  Pattern eq = equals(a, b, s);
  Pattern goal = conj(a, eq);
  if (!expand) return c.add(goal, just(Just::PropFpattForward, {L}));
  Pattern ab = c.formula(L);
  Pattern ceil_ab = defined(ab, s);
  std::size_t ii = c.add(ceil_ab, just(Just::DefinednessIntro, {L}, definedness_tag(s, s)));
  std::size_t iii = c.add(implies(ceil_ab, implies(ab, ceil_ab)), just(Just::Tautology, {}, "P1"));
  std::size_t iv = c.add(implies(ab, ceil_ab), just(Just::ModusPonens, {ii, iii}));
  std::size_t v = c.add(implies(ab, ceil_ab), just(Just::DefinednessDef, {iv}));
  std::size_t vi = c.add(implies(ab, eq), just(Just::MembershipEquality, {v}));
  std::size_t vii = c.add(implies(ab, a), just(Just::Tautology, {}, "AND-ELIM"));
  std::size_t viii = c.add(implies(ab, goal), just(Just::Tautology, {vi, vii}, "AND-INTRO"));
  return c.add(goal, just(Just::ModusPonens, {L, viii}));
}

/// a /\ (a = b)  to  a /\ b, from line L.
inline std::size_t emit_fpatt_backward(Certificate& c, std::size_t L, const Pattern& a, const Pattern& b, bool expand) {
  const Sort& s = a.sort();
  Pattern goal = conj(a, b);
  if (!expand) return c.add(goal, just(Just::PropFpattBackward, {L}));
  Pattern src = c.formula(L);
  Pattern eq = equals(a, b, s);
  std::set<Variable> avoid = all_vars(src);
  Variable h = unused_variable("h", s, avoid);
  std::size_t ii = c.add(eq, just(Just::Tautology, {L}, "AND-ELIM"));
  std::size_t iii = c.add(a, just(Just::Tautology, {L}, "AND-ELIM"));
  std::size_t iv = c.add(b, elim_just({ii, iii}, var(h), h));
  std::size_t v = c.add(goal, just(Just::Tautology, {iii, iv}, "AND-INTRO"));
  std::size_t vi = c.add(implies(goal, implies(src, goal)), just(Just::Tautology, {}, "P1"));
  std::size_t vii = c.add(implies(src, goal), just(Just::ModusPonens, {v, vi}));
  return c.add(goal, just(Just::ModusPonens, {L, vii}));
}

struct DeltaResult {
  std::size_t line;
  std::vector<Pattern> eqs;
};

/// Applies a unification-rule simulation to the conjunct eqs[pos] of line L,
/// whose formula is frame /\ eqs. Elimination never rewrites the frame.
inline DeltaResult emit_delta(Certificate& c, const Signature& sig, std::size_t L, const std::optional<Pattern>& frame,
                              const std::vector<Pattern>& eqs, std::size_t pos, DerivedRule rule, bool expand,
                              bool primitive_symmetry) {
  const Sort s = c.formula(L).sort();
  auto view = as_equals(eqs.at(pos));
  if (!view) throw BadInstantiation("selected conjunct is not an equality");
  const Pattern& a = view->lhs;
  const Pattern& b = view->rhs;
  std::vector<Pattern> others = eqs;
  others.erase(others.begin() + static_cast<std::ptrdiff_t>(pos));

  std::vector<Pattern> next = eqs;
  std::vector<Pattern> parts;
  switch (rule) {
    case DerivedRule::Delete:
      if (!(a == b)) throw BadInstantiation("Delete needs identical sides");
      next = others;
      break;
    case DerivedRule::Decomposition: {
      if (!a.is_app() || !b.is_app() || a.symbol() != b.symbol() || a.children().size() != b.children().size()) {
        throw BadInstantiation("Decomposition needs one head symbol on both sides");
      }
      const SymbolDecl& d = sig.symbol(a.symbol());
      if (!d.injective || d.arity.empty()) throw BadInstantiation("Decomposition needs an injective symbol of positive arity");
      for (std::size_t k = 0; k < a.children().size(); ++k) parts.push_back(equals(a.child(k), b.child(k), s));
      next.erase(next.begin() + static_cast<std::ptrdiff_t>(pos));
      next.insert(next.begin() + static_cast<std::ptrdiff_t>(pos), parts.begin(), parts.end());
      break;
    }
    case DerivedRule::Orient:
      if (!a.is_app() || !b.is_var()) throw BadInstantiation("Orient needs f(...) = x");
      next[pos] = equals(b, a, s);
      break;
    case DerivedRule::Elimination: {
      if (!a.is_var() || occurs(a.variable(), b)) throw BadInstantiation("Elimination needs x = t with x not in t");
      bool used = false;
      for (auto& e : next) {
        if (&e == &next[pos]) continue;
        used = used || free_vars(e).count(a.variable()) != 0;
        e = subst_in_pattern(e, b, a.variable());
      }
      if (!used) throw BadInstantiation("Elimination needs x to occur in the other conjuncts");
      break;
    }
    default:
      throw BadInstantiation("not a unification rule");
  }
  Pattern result = assemble(frame, next, s);

  if (!expand) {
    Justification j = just(Just::DerivedDelta, {L});
    j.delta = static_cast<int>(rule);
    j.position = pos;
    return {c.add(result, j), next};
  }

  const Pattern& E = eqs[pos];
  if (rule == DerivedRule::Delete) return {c.add(result, just(Just::Tautology, {L}, "AND-ELIM")), next};

  if (rule == DerivedRule::Elimination) {
    const Variable& x = a.variable();
    Pattern rest = conj_all(others, s);
    Pattern rest_t = subst_in_pattern(rest, b, x);
    std::size_t ii = c.add(rest, just(Just::Tautology, {L}, "AND-ELIM"));
    std::size_t iii = c.add(E, just(Just::Tautology, {L}, "AND-ELIM"));
    std::size_t iv = c.add(rest, just(Just::Tautology, {ii}, "SUBST-IDENTITY"));
    std::size_t v = c.add(conj(E, rest), just(Just::Tautology, {iii, iv}, "AND-INTRO"));
    std::size_t vi = c.add(implies(conj(E, rest), rest_t), elim_just({}, rest, x));
    std::size_t vii = c.add(rest_t, just(Just::ModusPonens, {v, vi}));
    std::vector<std::size_t> prem = frame ? std::vector<std::size_t>{L, vii, iii} : std::vector<std::size_t>{vii, iii};
    return {c.add(result, just(Just::Tautology, prem, "AND-INTRO")), next};
  }

  Pattern rest = assemble(frame, others, s);
  std::size_t ii = c.add(rest, just(Just::Tautology, {L}, "AND-ELIM"));
  std::size_t iii = c.add(E, just(Just::Tautology, {L}, "AND-ELIM"));
  std::size_t got;
  if (rule == DerivedRule::Decomposition) {
    const SymbolDecl& d = sig.symbol(a.symbol());
    Pattern sub = conj_all(parts, s);
    std::size_t iv = c.add(implies(E, sub), just(Just::Axiom, {}, injectivity_tag(d.name, d.result, s)));
    got = c.add(sub, just(Just::ModusPonens, {iii, iv}));
  } else if (primitive_symmetry) {
    std::set<Variable> avoid = all_vars(E);
    Variable h = unused_variable("h", a.sort(), avoid);
    std::size_t refl = c.add(equals(a, a, s), just(Just::EqualityIntro));
    got = c.add(equals(b, a, s), elim_just({iii, refl}, equals(var(h), a, s), h));
  } else {
    got = c.add(equals(b, a, s), just(Just::EqSymmetry, {iii}));
  }
  return {c.add(result, just(Just::Tautology, {ii, got}, "AND-INTRO")), next};
}

inline DerivedRule derived_for(Rule r) {
  switch (r) {
    case Rule::Delete: return DerivedRule::Delete;
    case Rule::Decomposition: return DerivedRule::Decomposition;
    case Rule::Orient: return DerivedRule::Orient;
    case Rule::Elimination: return DerivedRule::Elimination;
    default: throw NotSolved();
  }
}

/// Leftmost (pre-order) path of a variable bound by sigma.
inline std::optional<Path> first_bound_occurrence(const Pattern& t, const Substitution& sigma) {
  std::optional<Path> found;
  for_each_subpattern(t, [&](const Path& p, const Pattern& q) {
    if (!found && q.is_var() && sigma.lookup(q.variable())) found = p;
  });
  return found;
}

}  // namespace detail

/// Certificate for t1 /\ t2 -> t1 /\ phi^sigma driven by the unification trace.
inline Certificate gen_stage1(const Signature& sig, const Pattern& t1, const Pattern& t2,
                              const UnificationOutcome& outcome, const GenOptions& opts = {}) {
  const auto* solved = std::get_if<Solved>(&outcome);
  if (!solved) throw NotSolved();
  const Sort s = t1.sort();
  Certificate c;
  c.mode = CertMode::Stage1;
  c.hypotheses = {conj(t1, t2)};
  std::size_t L = c.add(c.hypotheses[0], detail::just(Just::Hypothesis));
  L = detail::emit_fpatt_forward(c, L, t1, t2, opts.expand);
  std::vector<Pattern> eqs = {equals(t1, t2, s)};
  for (const auto& step : solved->trace) {
    auto r = detail::emit_delta(c, sig, L, t1, eqs, step.position, detail::derived_for(step.rule), opts.expand, true);
    L = r.line;
    eqs = std::move(r.eqs);
    std::vector<Pattern> expected;
    for (const auto& e : step.result.equations()) expected.push_back(equals(e.lhs, e.rhs, s));
    if (expected != eqs) throw std::logic_error("certificate diverged from the unification trace");
  }
  if (!solved->mgu.empty()) {
    Pattern goal = conjoin_with_structure(t1, phi_of_subst(solved->mgu, s));
    if (!(goal == c.formula(L))) c.add(goal, detail::just(Just::Tautology, {L}, "AC-REARRANGE"));
  }
  return c;
}

inline Certificate gen_stage1(const Signature& sig, const Pattern& t1, const Pattern& t2, const GenOptions& opts = {}) {
  return gen_stage1(sig, t1, t2, unify(t1, t2), opts);
}

/// Certificate for t1 /\ phi^sigma -> t1 /\ t2.
inline Certificate gen_stage2(const Signature& sig, const Pattern& t1, const Pattern& t2, const Substitution& sigma,
                              const GenOptions& opts = {}) {
  (void)sig;
  if (t1.sort() != t2.sort()) throw SortMismatch("terms of sorts " + t1.sort().name + " and " + t2.sort().name);
  Pattern common = apply_subst(t1, sigma);
  if (!(common == apply_subst(t2, sigma))) throw NotMgu("substitution does not unify the terms");
  if (!(compose(sigma, sigma) == sigma)) throw NotMgu("substitution is not idempotent");
  std::set<Variable> vars = free_vars(t1);
  for (const auto& v : free_vars(t2)) vars.insert(v);
  for (const auto& [x, u] : sigma.bindings()) {
    if (!vars.count(x)) throw NotMgu("substitution binds " + x.name + ", which occurs in neither term");
  }

  const Sort s = t1.sort();
  Pattern phi = phi_of_subst(sigma, s).formula;
  Certificate c;
  c.mode = CertMode::Stage2;
  c.hypotheses = {conj(t1, phi)};
  std::size_t hyp = c.add(c.hypotheses[0], detail::just(Just::Hypothesis));
  std::size_t t1_line = c.add(t1, detail::just(Just::Tautology, {hyp}, "AND-ELIM"));

  std::map<Variable, std::size_t> binding_line;
  if (sigma.size() == 1) {
    binding_line[sigma.bindings().begin()->first] = c.add(phi, detail::just(Just::Tautology, {hyp}, "AND-ELIM"));
  } else if (sigma.size() > 1) {
    auto it = sigma.bindings().begin();
    Pattern cur = phi;
    std::size_t cur_line = c.add(phi, detail::just(Just::Tautology, {hyp}, "AND-ELIM"));
    while (cur.kind() == Kind::And) {
      binding_line[it->first] = c.add(cur.child(0), detail::just(Just::Tautology, {cur_line}, "AND-ELIM"));
      ++it;
      cur = cur.child(1);
      cur_line = c.add(cur, detail::just(Just::Tautology, {cur_line}, "AND-ELIM"));
    }
    binding_line[it->first] = cur_line;
  }

  std::size_t r1 = c.add(equals(t1, t1, s), detail::just(Just::EqualityIntro));
  std::size_t r2 = t1 == t2 ? r1 : c.add(equals(t2, t2, s), detail::just(Just::EqualityIntro));

  std::set<Variable> avoid = all_vars(t1);
  for (const auto& v : all_vars(t2)) avoid.insert(v);
  for (const auto& [x, u] : sigma.bindings()) {
    for (const auto& v : all_vars(u)) avoid.insert(v);
  }

  auto rewrite = [&](const Pattern& side, std::size_t line) {
    Pattern cur = side;
    while (auto path = detail::first_bound_occurrence(cur, sigma)) {
      const Variable& x = at(cur, *path).variable();
      Variable h = detail::unused_variable("h", x.sort, avoid);
      Pattern ctx = equals(replace_at(cur, *path, var(h)), side, s);
      Pattern next = replace_at(cur, *path, *sigma.lookup(x));
      line = c.add(equals(next, side, s), detail::elim_just({binding_line.at(x), line}, ctx, h));
      cur = next;
    }
    return line;
  };
  std::size_t left1 = rewrite(t1, r1);
  std::size_t left2 = t1 == t2 ? left1 : rewrite(t2, r2);

  std::size_t joined = left1;
  if (!(t1 == t2)) {
    Variable h = detail::unused_variable("h", s, avoid);
    joined = c.add(equals(t1, t2, s), detail::elim_just({left1, left2}, equals(var(h), t2, s), h));
  }
  std::size_t intro = c.add(conj(t1, equals(t1, t2, s)), detail::just(Just::Tautology, {t1_line, joined}, "AND-INTRO"));
  detail::emit_fpatt_backward(c, intro, t1, t2, opts.expand);
  return c;
}

/// Body of a derived rule for one instance, from its hypothesis to its
/// conclusion, using base justifications only (Orient keeps EqSymmetry).
inline Certificate expand_derived_rule(DerivedRule rule, const Signature& sig, const RuleInstance& inst) {
  if (inst.lhs.sort() != inst.rhs.sort()) throw BadInstantiation("sides of different sorts");
  if (!is_term_pattern(sig, inst.lhs) || !is_term_pattern(sig, inst.rhs)) {
    throw BadInstantiation("sides must be term patterns");
  }
  Certificate c;
  c.mode = CertMode::DerivedRuleExpansion;
  if (rule == DerivedRule::FpattForward || rule == DerivedRule::FpattBackward) {
    const Sort& s = inst.lhs.sort();
    Pattern hyp = rule == DerivedRule::FpattForward ? conj(inst.lhs, inst.rhs) : conj(inst.lhs, equals(inst.lhs, inst.rhs, s));
    c.hypotheses = {hyp};
    std::size_t L = c.add(hyp, detail::just(Just::Hypothesis));
    if (rule == DerivedRule::FpattForward) detail::emit_fpatt_forward(c, L, inst.lhs, inst.rhs, true);
    else detail::emit_fpatt_backward(c, L, inst.lhs, inst.rhs, true);
    return c;
  }
  if (!inst.phi) throw BadInstantiation("the rule needs a context pattern phi");
  const Sort s = inst.phi->sort();
  Pattern eq = equals(inst.lhs, inst.rhs, s);
  c.hypotheses = {conj(*inst.phi, eq)};
  std::size_t L = c.add(c.hypotheses[0], detail::just(Just::Hypothesis));
  detail::emit_delta(c, sig, L, std::nullopt, {*inst.phi, eq}, 1, rule, true, false);
  return c;
}

}  // namespace mlunify
