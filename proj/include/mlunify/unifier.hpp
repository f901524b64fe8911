#pragma once

// Rule-based syntactic unification (Delete, Decomposition, Symbol clash,
// Orient, Occurs check, Elimination) with a recorded trace.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mlunify/kernel.hpp"

namespace mlunify {

struct Equation {
  Pattern lhs;
  Pattern rhs;

  friend bool operator==(const Equation&, const Equation&) = default;
};

/// An ordered list of equations, or the failure problem.
class Problem {
 public:
  Problem() = default;
  explicit Problem(std::vector<Equation> eqs) : eqs_(std::move(eqs)) {
    for (const auto& e : eqs_) {
      if (e.lhs.sort() != e.rhs.sort()) {
        throw SortMismatch("equation sides have sorts " + e.lhs.sort().name + " and " + e.rhs.sort().name);
      }
      if (!is_term(e.lhs) || !is_term(e.rhs)) throw NotATerm("unification equations relate terms");
    }
  }

  static Problem failure() {
    Problem p;
    p.bottom_ = true;
    return p;
  }

  bool is_bottom() const noexcept { return bottom_; }
  const std::vector<Equation>& equations() const noexcept { return eqs_; }

  friend bool operator==(const Problem&, const Problem&) = default;

 private:
  std::vector<Equation> eqs_;
  bool bottom_ = false;
};

enum class Rule { Delete, Decomposition, SymbolClash, Orient, OccursCheck, Elimination };

inline std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::Delete: return "Delete";
    case Rule::Decomposition: return "Decomposition";
    case Rule::SymbolClash: return "SymbolClash";
    case Rule::Orient: return "Orient";
    case Rule::OccursCheck: return "OccursCheck";
    case Rule::Elimination: return "Elimination";
  }
  return "?";
}

struct TraceStep {
  Rule rule;
  Equation selected;
  std::size_t position;  // index of the selected equation in the predecessor
  Problem result;
};

struct Solved {
  Substitution mgu;
  std::vector<TraceStep> trace;
};

struct Failed {
  Rule reason;  // SymbolClash or OccursCheck
  Equation witness;
  std::vector<TraceStep> trace;
};

using UnificationOutcome = std::variant<Solved, Failed>;

namespace detail {

inline bool occurs_in_term(const Variable& x, const Pattern& t) {
  if (t.is_var()) return t.variable() == x;
  for (const auto& c : t.children()) {
    if (occurs_in_term(x, c)) return true;
  }
  return false;
}

inline bool occurs_elsewhere(const Variable& x, const std::vector<Equation>& eqs, std::size_t skip) {
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (i != skip && (occurs_in_term(x, eqs[i].lhs) || occurs_in_term(x, eqs[i].rhs))) return true;
  }
  return false;
}

inline bool applicable(Rule r, const std::vector<Equation>& eqs, std::size_t i) {
  const Equation& e = eqs[i];
  switch (r) {
    case Rule::Delete:
      return e.lhs == e.rhs;
    case Rule::Decomposition:
      return e.lhs.is_app() && e.rhs.is_app() && e.lhs.symbol() == e.rhs.symbol() &&
             e.lhs.children().size() == e.rhs.children().size() && !(e.lhs == e.rhs);
    case Rule::SymbolClash:
      return e.lhs.is_app() && e.rhs.is_app() &&
             (e.lhs.symbol() != e.rhs.symbol() || e.lhs.children().size() != e.rhs.children().size());
    case Rule::Orient:
      return e.lhs.is_app() && e.rhs.is_var();
    case Rule::OccursCheck:
      return e.lhs.is_var() && e.rhs.is_app() && occurs_in_term(e.lhs.variable(), e.rhs);
    case Rule::Elimination:
      return e.lhs.is_var() && !occurs_in_term(e.lhs.variable(), e.rhs) &&
             occurs_elsewhere(e.lhs.variable(), eqs, i);
  }
  return false;
}

}  // namespace detail

/// Applies `r` to the equation at `pos`. The caller guarantees applicability.
inline Problem apply_rule(const Problem& p, Rule r, std::size_t pos) {
  if (p.is_bottom()) throw AlreadyFailed();
  std::vector<Equation> eqs = p.equations();
  const Equation e = eqs.at(pos);
  if (!detail::applicable(r, eqs, pos)) {
    throw Error(std::string(rule_name(r)) + " does not apply at position " + std::to_string(pos));
  }
  switch (r) {
    case Rule::SymbolClash:
    case Rule::OccursCheck:
      return Problem::failure();
    case Rule::Delete:
      eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(pos));
      break;
    case Rule::Decomposition: {
      std::vector<Equation> parts;
      for (std::size_t k = 0; k < e.lhs.children().size(); ++k) parts.push_back({e.lhs.child(k), e.rhs.child(k)});
      eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(pos));
      eqs.insert(eqs.begin() + static_cast<std::ptrdiff_t>(pos), parts.begin(), parts.end());
      break;
    }
    case Rule::Orient:
      eqs[pos] = Equation{e.rhs, e.lhs};
      break;
    case Rule::Elimination: {
      Substitution s;
      s.bind(e.lhs.variable(), e.rhs);
      for (std::size_t k = 0; k < eqs.size(); ++k) {
        if (k != pos) eqs[k] = Equation{apply_subst(eqs[k].lhs, s), apply_subst(eqs[k].rhs, s)};
      }
      break;
    }
  }
  return Problem(std::move(eqs));
}

/// One deterministic rule application, or nothing when no rule applies.
/// Failure rules are tried first; each rule picks its leftmost equation.
inline std::optional<TraceStep> step(const Problem& p) {
  if (p.is_bottom()) throw AlreadyFailed();
  const auto& eqs = p.equations();
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    for (Rule r : {Rule::SymbolClash, Rule::OccursCheck}) {
      if (detail::applicable(r, eqs, i)) return TraceStep{r, eqs[i], i, Problem::failure()};
    }
  }
  for (Rule r : {Rule::Delete, Rule::Decomposition, Rule::Orient, Rule::Elimination}) {
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      if (detail::applicable(r, eqs, i)) return TraceStep{r, eqs[i], i, apply_rule(p, r, i)};
    }
  }
  return std::nullopt;
}

inline bool is_solved_form(const Problem& p) {
  if (p.is_bottom()) return true;
  const auto& eqs = p.equations();
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (!eqs[i].lhs.is_var()) return false;
    const Variable& x = eqs[i].lhs.variable();
    if (detail::occurs_in_term(x, eqs[i].rhs) || detail::occurs_elsewhere(x, eqs, i)) return false;
  }
  return true;
}

/// The substitution {x1 -> t1, ..., xn -> tn} of a solved form.
inline Substitution substitution_of(const Problem& p) {
  if (p.is_bottom() || !is_solved_form(p)) throw Error("problem is not in solved form");
  Substitution s;
  for (const auto& e : p.equations()) s.bind(e.lhs.variable(), e.rhs);
  return s;
}

struct UnifyOptions {
  std::size_t max_steps = 10000;
};

inline UnificationOutcome unify_problem(Problem p, const UnifyOptions& opts = {}) {
  std::vector<TraceStep> trace;
  while (auto s = step(p)) {
    if (trace.size() >= opts.max_steps) {
      throw StepLimitExceeded("unification exceeded " + std::to_string(opts.max_steps) + " steps");
    }
    trace.push_back(*s);
    if (s->result.is_bottom()) {
      Rule reason = s->rule;
      Equation witness = s->selected;
      return Failed{reason, witness, std::move(trace)};
    }
    p = s->result;
  }
  return Solved{substitution_of(p), std::move(trace)};
}

inline UnificationOutcome unify(const Pattern& t1, const Pattern& t2, const UnifyOptions& opts = {}) {
  if (t1.sort() != t2.sort()) throw SortMismatch("cannot unify terms of sorts " + t1.sort().name + " and " + t2.sort().name);
  return unify_problem(Problem({Equation{t1, t2}}), opts);
}

inline bool is_unifier(const Problem& p, const Substitution& theta) {
  if (p.is_bottom()) return false;
  for (const auto& e : p.equations()) {
    if (!(apply_subst(e.lhs, theta) == apply_subst(e.rhs, theta))) return false;
  }
  return true;
}

/// Checks unifiers(p) = unifiers(s.result) on the given candidates.
inline bool unifiers_preserved(const Problem& p, const TraceStep& s, const std::vector<Substitution>& candidates) {
  for (const auto& theta : candidates) {
    if (is_unifier(p, theta) != is_unifier(s.result, theta)) return false;
  }
  return true;
}

/// Re-applies a trace from `initial`; returns the final problem, or nothing
/// if some step does not reproduce its recorded result.
inline std::optional<Problem> replay(const Problem& initial, const std::vector<TraceStep>& trace) {
  Problem cur = initial;
  for (const auto& s : trace) {
    if (cur.is_bottom() || s.position >= cur.equations().size() || !(cur.equations()[s.position] == s.selected)) {
      return std::nullopt;
    }
    Problem next = apply_rule(cur, s.rule, s.position);
    if (!(next == s.result)) return std::nullopt;
    cur = std::move(next);
  }
  return cur;
}

inline std::set<Variable> vars_of(const Problem& p) {
  std::set<Variable> out;
  for (const auto& e : p.equations()) {
    for (const auto& v : free_vars(e.lhs)) out.insert(v);
    for (const auto& v : free_vars(e.rhs)) out.insert(v);
  }
  return out;
}

}  // namespace mlunify
