#pragma once

// Predicate encodings of unification problems and substitutions, and the
// axiom set for definedness, functionality and injectivity.

#include <string>
#include <vector>

#include "mlunify/syntax.hpp"
#include "mlunify/unifier.hpp"

namespace mlunify {

/// A predicate together with the sort it is asserted at.
struct PredicatePattern {
  Pattern formula;
  Sort sort;
};

/// Conjunction of the equations v_i = u_i in problem order. The failure
/// problem encodes as bottom and the empty problem as top.
inline PredicatePattern phi_of_problem(const Problem& p, const Sort& at) {
  if (p.is_bottom()) return {bottom(at), at};
  std::vector<Pattern> parts;
  for (const auto& e : p.equations()) parts.push_back(equals(e.lhs, e.rhs, at));
  return {conj_all(parts, at), at};
}

/// Conjunction of x_i = u_i in lexicographic variable order.
inline PredicatePattern phi_of_subst(const Substitution& sigma, const Sort& at) {
  std::vector<Pattern> parts;
  for (const auto& [x, t] : sigma.bindings()) parts.push_back(equals(var(x), t, at));
  return {conj_all(parts, at), at};
}

/// t /\ phi.
inline Pattern conjoin_with_structure(const Pattern& t, const PredicatePattern& phi) {
  if (t.sort() != phi.sort || phi.formula.sort() != t.sort()) {
    throw SortMismatch("structural term has sort " + t.sort().name + " but the constraint is asserted at " +
                       phi.sort.name);
  }
  return conj(t, phi.formula);
}

inline std::string definedness_tag(const Sort& inner, const Sort& outer) {
  return "definedness(" + inner.name + "," + outer.name + ")";
}
inline std::string functionality_tag(const std::string& f) { return "functionality(" + f + ")"; }

/// Injectivity is asserted once per sort the equalities may live in; the
/// instance at the symbol's own result sort carries the plain tag.
inline std::string injectivity_tag(const std::string& f, const Sort& result, const Sort& outer) {
  return result == outer ? "injectivity(" + f + ")" : "injectivity(" + f + ")@" + outer.name;
}

enum class AxiomKind { Definedness, Functionality, Injectivity };

struct Axiom {
  AxiomKind kind;
  std::string symbol;  // functionality and injectivity
  Sort inner;          // definedness; result sort for injectivity
  Sort outer;          // definedness; sort the equalities are asserted at for injectivity
  Pattern formula;

  std::string tag() const {
    switch (kind) {
      case AxiomKind::Definedness: return definedness_tag(inner, outer);
      case AxiomKind::Functionality: return functionality_tag(symbol);
      case AxiomKind::Injectivity: return injectivity_tag(symbol, inner, outer);
    }
    return "?";
  }
};

class AxiomSet {
 public:
  void add(Axiom a) { axioms_.push_back(std::move(a)); }

  const Axiom* find(const std::string& tag) const {
    for (const auto& a : axioms_) {
      if (a.tag() == tag) return &a;
    }
    return nullptr;
  }

  /// Removes the axiom with the given tag; returns whether one was removed.
  bool remove(const std::string& tag) {
    for (auto it = axioms_.begin(); it != axioms_.end(); ++it) {
      if (it->tag() == tag) {
        axioms_.erase(it);
        return true;
      }
    }
    return false;
  }

  const std::vector<Axiom>& axioms() const noexcept { return axioms_; }
  std::size_t size() const noexcept { return axioms_.size(); }

 private:
  std::vector<Axiom> axioms_;
};

/// |_ x _| for every sort pair, exists y . f(x1..xn) = y for every
/// functional symbol, and f(x1..xn) = f(y1..yn) -> x1 = y1 /\ ... for every
/// injective symbol of positive arity and every sort of the equalities.
inline AxiomSet generate_axioms(const Signature& sig) {
  AxiomSet out;
  for (const auto& s1 : sig.sorts()) {
    for (const auto& s2 : sig.sorts()) {
      out.add(Axiom{AxiomKind::Definedness, "", s1, s2, defined(var("x", s1), s2)});
    }
  }
  for (const auto& d : sig.symbols()) {
    if (!d.functional) continue;
    std::vector<Pattern> xs;
    for (std::size_t i = 0; i < d.arity.size(); ++i) {
      std::string name = d.arity.size() == 1 ? "x" : "x" + std::to_string(i + 1);
      xs.push_back(var(name, d.arity[i]));
    }
    Variable y{"y", d.result};
    Pattern f = app(sig, d.name, xs);
    out.add(Axiom{AxiomKind::Functionality, d.name, {}, {}, exists(y, equals(f, var(y), d.result))});
  }
  for (const auto& d : sig.symbols()) {
    if (!d.injective || d.arity.empty()) continue;
    std::vector<Pattern> xs, ys;
    for (std::size_t i = 0; i < d.arity.size(); ++i) {
      xs.push_back(var("x" + std::to_string(i + 1), d.arity[i]));
      ys.push_back(var("y" + std::to_string(i + 1), d.arity[i]));
    }
    auto instance = [&](const Sort& outer) {
      std::vector<Pattern> eqs;
      for (std::size_t i = 0; i < xs.size(); ++i) eqs.push_back(equals(xs[i], ys[i], outer));
      Pattern lhs = equals(app(sig, d.name, xs), app(sig, d.name, ys), outer);
      out.add(Axiom{AxiomKind::Injectivity, d.name, d.result, outer, implies(lhs, conj_all(eqs, outer))});
    };
    instance(d.result);
    for (const auto& s : sig.sorts()) {
      if (s != d.result) instance(s);
    }
  }
  return out;
}

/// One axiom per line in qualified syntax, tagged by a trailing comment.
inline std::string export_axioms(const AxiomSet& axioms) {
  std::string out;
  for (const auto& a : axioms.axioms()) out += to_string(a.formula, PrintStyle::Qualified) + "  # " + a.tag() + "\n";
  return out;
}

}  // namespace mlunify
