#pragma once

// Many-sorted signatures, the matching-logic pattern AST, term patterns,
// substitutions and capture-avoiding substitution on full patterns.

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlunify/errors.hpp"

namespace mlunify {

struct Sort {
  std::string name;

  auto operator<=>(const Sort&) const = default;
};

/// Variables are identified by the pair (name, sort).
struct Variable {
  std::string name;
  Sort sort;

  auto operator<=>(const Variable&) const = default;
};

struct SymbolDecl {
  std::string name;
  std::vector<Sort> arity;
  Sort result;
  bool functional = false;
  bool injective = false;
};

class Signature {
 public:
  void add_sort(Sort s) {
    if (has_sort(s)) throw SignatureError("duplicate sort: " + s.name);
    sorts_.push_back(std::move(s));
  }

  void add_symbol(SymbolDecl d) {
    if (d.name.empty() || d.name.front() == '#') throw SignatureError("invalid symbol name: " + d.name);
    if (index_.count(d.name)) throw SignatureError("duplicate symbol (overloading is not supported): " + d.name);
    for (const auto& s : d.arity) {
      if (!has_sort(s)) throw SignatureError("symbol " + d.name + " uses undeclared sort " + s.name);
    }
    if (!has_sort(d.result)) throw SignatureError("symbol " + d.name + " uses undeclared sort " + d.result.name);
    if (d.injective && !d.functional) throw SignatureError("injective symbol must be functional: " + d.name);
    index_.emplace(d.name, symbols_.size());
    symbols_.push_back(std::move(d));
  }

  bool has_sort(const Sort& s) const { return std::find(sorts_.begin(), sorts_.end(), s) != sorts_.end(); }

  const SymbolDecl* find(std::string_view name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &symbols_[it->second];
  }

  const SymbolDecl& symbol(std::string_view name) const {
    if (const auto* d = find(name)) return *d;
    throw UnknownSymbol(std::string(name));
  }

  const std::vector<Sort>& sorts() const noexcept { return sorts_; }
  const std::vector<SymbolDecl>& symbols() const noexcept { return symbols_; }

 private:
  std::vector<Sort> sorts_;
  std::vector<SymbolDecl> symbols_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

enum class Kind { Var, App, Not, And, Exists };

/// Reserved symbol for the definedness construct; interpreted structurally.
inline constexpr std::string_view kCeilSymbol = "#ceil";
/// Reserved binder name used by the desugared top pattern.
inline constexpr std::string_view kTopBinder = "#top";

/// Immutable, shareable pattern node handle. Every node carries its sort;
/// construction through the free functions below enforces well-sortedness.
class Pattern {
 public:
  Kind kind() const noexcept { return node_->kind; }
  const Sort& sort() const noexcept { return node_->sort; }
  /// The variable of a Var node, or the binder of an Exists node.
  const Variable& variable() const noexcept { return node_->var; }
  const std::string& symbol() const noexcept { return node_->symbol; }
  const std::vector<Pattern>& children() const noexcept { return node_->children; }
  const Pattern& child(std::size_t i) const { return node_->children.at(i); }
  std::size_t hash() const noexcept { return node_->hash; }

  bool is_var() const noexcept { return kind() == Kind::Var; }
  bool is_app() const noexcept { return kind() == Kind::App; }

  friend bool operator==(const Pattern& a, const Pattern& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash) return false;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    return x.kind == y.kind && x.sort == y.sort && x.var == y.var && x.symbol == y.symbol &&
           x.children == y.children;
  }

  static Pattern make_var(Variable v) {
    Sort s = v.sort;
    return Pattern(Kind::Var, std::move(s), std::move(v), {}, {});
  }

  static Pattern make_app(std::string symbol, std::vector<Pattern> args, Sort result) {
    return Pattern(Kind::App, std::move(result), {}, std::move(symbol), std::move(args));
  }

  static Pattern make_not(Pattern p) {
    Sort s = p.sort();
    return Pattern(Kind::Not, std::move(s), {}, {}, {std::move(p)});
  }

  static Pattern make_and(Pattern a, Pattern b) {
    if (a.sort() != b.sort()) throw IllSorted("conjunction of sorts " + a.sort().name + " and " + b.sort().name);
    Sort s = a.sort();
    return Pattern(Kind::And, std::move(s), {}, {}, {std::move(a), std::move(b)});
  }

  static Pattern make_exists(Variable v, Pattern body) {
    Sort s = body.sort();
    return Pattern(Kind::Exists, std::move(s), std::move(v), {}, {std::move(body)});
  }

 private:
  struct Node {
    Kind kind;
    Sort sort;
    Variable var;
    std::string symbol;
    std::vector<Pattern> children;
    std::size_t hash;
  };

  Pattern(Kind k, Sort s, Variable v, std::string sym, std::vector<Pattern> kids) {
    std::size_t h = static_cast<std::size_t>(k) * 0x9e3779b97f4a7c15ULL;
    auto mix = [&h](std::size_t x) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    std::hash<std::string> hs;
    mix(hs(s.name));
    mix(hs(v.name));
    mix(hs(v.sort.name));
    mix(hs(sym));
    for (const auto& c : kids) mix(c.hash());
    node_ = std::make_shared<const Node>(Node{k, std::move(s), std::move(v), std::move(sym), std::move(kids), h});
  }

  std::shared_ptr<const Node> node_;
};

using TermPattern = Pattern;

struct PatternHash {
  std::size_t operator()(const Pattern& p) const noexcept { return p.hash(); }
};

// ---------------------------------------------------------------------------
// Constructors for the five primitives and the derived constructs.

inline Pattern var(Variable v) { return Pattern::make_var(std::move(v)); }
inline Pattern var(std::string name, Sort s) { return Pattern::make_var(Variable{std::move(name), std::move(s)}); }

inline Pattern app(const Signature& sig, std::string_view name, std::vector<Pattern> args = {}) {
  const SymbolDecl& d = sig.symbol(name);
  if (args.size() != d.arity.size()) {
    throw IllSorted(d.name + " expects " + std::to_string(d.arity.size()) + " arguments, got " +
                    std::to_string(args.size()));
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].sort() != d.arity[i]) {
      throw IllSorted("argument " + std::to_string(i + 1) + " of " + d.name + " has sort " + args[i].sort().name +
                      ", expected " + d.arity[i].name);
    }
  }
  return Pattern::make_app(d.name, std::move(args), d.result);
}

inline Pattern neg(Pattern p) { return Pattern::make_not(std::move(p)); }
inline Pattern conj(Pattern a, Pattern b) { return Pattern::make_and(std::move(a), std::move(b)); }
inline Pattern exists(Variable v, Pattern body) { return Pattern::make_exists(std::move(v), std::move(body)); }

/// Definedness ceil(p) lifted to the outer sort.
inline Pattern defined(Pattern inner, Sort outer) {
  return Pattern::make_app(std::string(kCeilSymbol), {std::move(inner)}, std::move(outer));
}

inline Pattern top(const Sort& s) {
  Variable v{std::string(kTopBinder), s};
  return exists(v, var(v));
}
inline Pattern bottom(const Sort& s) { return neg(top(s)); }
inline Pattern disj(Pattern a, Pattern b) { return neg(conj(neg(std::move(a)), neg(std::move(b)))); }
inline Pattern implies(Pattern a, Pattern b) { return disj(neg(std::move(a)), std::move(b)); }
inline Pattern iff(const Pattern& a, const Pattern& b) { return conj(implies(a, b), implies(b, a)); }

inline Pattern equals(const Pattern& a, const Pattern& b, const Sort& outer) {
  return neg(defined(neg(iff(a, b)), outer));
}
inline Pattern equals(const Pattern& a, const Pattern& b) { return equals(a, b, a.sort()); }

inline Pattern member(Pattern a, Pattern b, Sort outer) { return defined(conj(std::move(a), std::move(b)), std::move(outer)); }

/// Right-nested conjunction; the empty conjunction is top of the given sort.
inline Pattern conj_all(const std::vector<Pattern>& parts, const Sort& s) {
  if (parts.empty()) return top(s);
  Pattern acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = conj(parts[i], acc);
  return acc;
}

/// Flattens the right spine of a conjunction: a /\ (b /\ c) -> [a, b, c].
inline std::vector<Pattern> right_conjuncts(const Pattern& p) {
  std::vector<Pattern> out;
  const Pattern* cur = &p;
  while (cur->kind() == Kind::And) {
    out.push_back(cur->child(0));
    cur = &cur->child(1);
  }
  out.push_back(*cur);
  return out;
}

// ---------------------------------------------------------------------------
// Recognizers for derived shapes.

struct BinaryView {
  Pattern lhs;
  Pattern rhs;
};

inline bool is_ceil(const Pattern& p) { return p.is_app() && p.symbol() == kCeilSymbol; }

inline bool is_top(const Pattern& p) {
  return p.kind() == Kind::Exists && p.variable().name == kTopBinder && p.child(0).is_var() &&
         p.child(0).variable() == p.variable();
}

inline bool is_bottom(const Pattern& p) { return p.kind() == Kind::Not && is_top(p.child(0)); }

inline std::optional<BinaryView> as_or(const Pattern& p) {
  if (p.kind() != Kind::Not) return std::nullopt;
  const Pattern& c = p.child(0);
  if (c.kind() != Kind::And || c.child(0).kind() != Kind::Not || c.child(1).kind() != Kind::Not) return std::nullopt;
  return BinaryView{c.child(0).child(0), c.child(1).child(0)};
}

inline std::optional<BinaryView> as_implies(const Pattern& p) {
  auto o = as_or(p);
  if (!o || o->lhs.kind() != Kind::Not) return std::nullopt;
  return BinaryView{o->lhs.child(0), o->rhs};
}

inline std::optional<BinaryView> as_iff(const Pattern& p) {
  if (p.kind() != Kind::And) return std::nullopt;
  auto l = as_implies(p.child(0));
  auto r = as_implies(p.child(1));
  if (!l || !r || !(l->lhs == r->rhs) || !(l->rhs == r->lhs)) return std::nullopt;
  return l;
}

inline std::optional<BinaryView> as_equals(const Pattern& p) {
  if (p.kind() != Kind::Not || !is_ceil(p.child(0))) return std::nullopt;
  const Pattern& inner = p.child(0).child(0);
  if (inner.kind() != Kind::Not) return std::nullopt;
  return as_iff(inner.child(0));
}

inline std::optional<BinaryView> as_member(const Pattern& p) {
  if (!is_ceil(p) || p.child(0).kind() != Kind::And) return std::nullopt;
  return BinaryView{p.child(0).child(0), p.child(0).child(1)};
}

// ---------------------------------------------------------------------------
// Structural utilities.

/// Rebuilds a node with new children of identical sorts.
inline Pattern with_children(const Pattern& p, std::vector<Pattern> kids) {
  if (kids.size() != p.children().size()) throw IllSorted("child count changed while rebuilding");
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (kids[i].sort() != p.child(i).sort()) throw IllSorted("child sort changed while rebuilding");
  }
  switch (p.kind()) {
    case Kind::Var: return p;
    case Kind::App: return Pattern::make_app(p.symbol(), std::move(kids), p.sort());
    case Kind::Not: return Pattern::make_not(std::move(kids[0]));
    case Kind::And: return Pattern::make_and(std::move(kids[0]), std::move(kids[1]));
    case Kind::Exists: return Pattern::make_exists(p.variable(), std::move(kids[0]));
  }
  return p;
}

using Path = std::vector<std::size_t>;

inline const Pattern& at(const Pattern& p, const Path& path) {
  const Pattern* cur = &p;
  for (auto i : path) cur = &cur->child(i);
  return *cur;
}

inline Pattern replace_at(const Pattern& p, const Path& path, const Pattern& replacement, std::size_t depth = 0) {
  if (depth == path.size()) {
    if (replacement.sort() != p.sort()) throw IllSorted("replacement changes the sort");
    return replacement;
  }
  auto kids = p.children();
  kids.at(path[depth]) = replace_at(p.child(path[depth]), path, replacement, depth + 1);
  return with_children(p, std::move(kids));
}

/// Pre-order enumeration of (path, subpattern).
template <typename Fn>
void for_each_subpattern(const Pattern& p, Fn&& fn) {
  Path path;
  auto rec = [&](auto&& self, const Pattern& q) -> void {
    fn(static_cast<const Path&>(path), q);
    for (std::size_t i = 0; i < q.children().size(); ++i) {
      path.push_back(i);
      self(self, q.child(i));
      path.pop_back();
    }
  };
  rec(rec, p);
}

inline std::size_t node_count(const Pattern& p) {
  std::size_t n = 1;
  for (const auto& c : p.children()) n += node_count(c);
  return n;
}

inline bool is_term(const Pattern& p) {
  if (p.is_var()) return true;
  if (!p.is_app() || is_ceil(p)) return false;
  return std::all_of(p.children().begin(), p.children().end(), [](const Pattern& c) { return is_term(c); });
}

/// A term whose symbols are all declared functional.
inline bool is_term_pattern(const Signature& sig, const Pattern& p) {
  if (p.is_var()) return true;
  if (!p.is_app() || is_ceil(p)) return false;
  const SymbolDecl* d = sig.find(p.symbol());
  if (!d || !d->functional) return false;
  return std::all_of(p.children().begin(), p.children().end(),
                     [&](const Pattern& c) { return is_term_pattern(sig, c); });
}

/// Validates a pattern against a signature (symbols exist, arities match).
inline void check_well_sorted(const Signature& sig, const Pattern& p) {
  if (p.is_app() && !is_ceil(p)) {
    const SymbolDecl& d = sig.symbol(p.symbol());
    if (d.arity.size() != p.children().size() || d.result != p.sort()) throw IllSorted("bad use of " + d.name);
    for (std::size_t i = 0; i < d.arity.size(); ++i) {
      if (p.child(i).sort() != d.arity[i]) throw IllSorted("bad argument sort for " + d.name);
    }
  }
  if (p.is_var() || p.kind() == Kind::Exists) {
    if (!sig.has_sort(p.variable().sort)) throw IllSorted("undeclared sort " + p.variable().sort.name);
  }
  for (const auto& c : p.children()) check_well_sorted(sig, c);
}

inline const Sort& sort_of(const Pattern& p) { return p.sort(); }

inline void collect_free_vars(const Pattern& p, std::set<Variable>& bound, std::set<Variable>& out) {
  switch (p.kind()) {
    case Kind::Var:
      if (!bound.count(p.variable())) out.insert(p.variable());
      return;
    case Kind::Exists: {
      bool inserted = bound.insert(p.variable()).second;
      collect_free_vars(p.child(0), bound, out);
      if (inserted) bound.erase(p.variable());
      return;
    }
    default:
      for (const auto& c : p.children()) collect_free_vars(c, bound, out);
  }
}

inline std::set<Variable> free_vars(const Pattern& p) {
  std::set<Variable> bound, out;
  collect_free_vars(p, bound, out);
  return out;
}

/// Every variable occurring in the pattern, free or bound (binders included).
inline void collect_all_vars(const Pattern& p, std::set<Variable>& out) {
  if (p.is_var() || p.kind() == Kind::Exists) out.insert(p.variable());
  for (const auto& c : p.children()) collect_all_vars(c, out);
}

inline std::set<Variable> all_vars(const Pattern& p) {
  std::set<Variable> out;
  collect_all_vars(p, out);
  return out;
}

inline bool occurs(const Variable& x, const Pattern& p) {
  if (p.is_var()) return p.variable() == x;
  if (p.kind() == Kind::Exists && p.variable() == x) return false;
  return std::any_of(p.children().begin(), p.children().end(), [&](const Pattern& c) { return occurs(x, c); });
}

/// A variable named after `base` with a numeric suffix above every suffix
/// already used for the same stem in `avoid`.
inline Variable fresh_variable(const Variable& base, const std::set<Variable>& avoid) {
  auto split = [](const std::string& name) {
    std::size_t end = name.size();
    while (end > 0 && name[end - 1] >= '0' && name[end - 1] <= '9') --end;
    unsigned long suffix = 0;
    if (end < name.size()) std::from_chars(name.data() + end, name.data() + name.size(), suffix);
    return std::pair{name.substr(0, end), suffix};
  };
  auto [stem, base_suffix] = split(base.name);
  if (stem.empty()) stem = "v";
  unsigned long top_suffix = base_suffix;
  for (const auto& v : avoid) {
    auto [s, n] = split(v.name);
    if (s == stem) top_suffix = std::max(top_suffix, n);
  }
  return Variable{stem + std::to_string(top_suffix + 1), base.sort};
}

/// phi[t/x] with capture avoidance.
inline Pattern subst_in_pattern(const Pattern& phi, const Pattern& t, const Variable& x) {
  if (t.sort() != x.sort) throw SortMismatch("cannot substitute a " + t.sort().name + " pattern for " + x.name);
  auto rec = [&](auto&& self, const Pattern& p) -> Pattern {
    switch (p.kind()) {
      case Kind::Var:
        return p.variable() == x ? t : p;
      case Kind::Exists: {
        const Variable& y = p.variable();
        if (y == x || !occurs(x, p.child(0))) return p;
        if (free_vars(t).count(y)) {
          std::set<Variable> avoid = all_vars(p.child(0));
          collect_all_vars(t, avoid);
          avoid.insert(x);
          avoid.insert(y);
          Variable renamed = fresh_variable(y, avoid);
          Pattern body = subst_in_pattern(p.child(0), var(renamed), y);
          return exists(renamed, self(self, body));
        }
        return exists(y, self(self, p.child(0)));
      }
      default: {
        std::vector<Pattern> kids;
        kids.reserve(p.children().size());
        bool changed = false;
        for (const auto& c : p.children()) {
          kids.push_back(self(self, c));
          changed = changed || !(kids.back() == c);
        }
        return changed ? with_children(p, std::move(kids)) : p;
      }
    }
  };
  return rec(rec, phi);
}

// ---------------------------------------------------------------------------
// Substitutions over term patterns.

class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<Variable, Pattern>> bindings) {
    for (const auto& [x, t] : bindings) bind(x, t);
  }

  /// Adds or overwrites x |-> t; the identity binding x |-> x is dropped.
  void bind(const Variable& x, const Pattern& t) {
    if (x.sort != t.sort()) throw SortMismatch("binding " + x.name + ":" + x.sort.name + " to a " + t.sort().name);
    if (!is_term(t)) throw NotATerm("binding for " + x.name);
    if (t.is_var() && t.variable() == x) {
      map_.erase(x);
      return;
    }
    map_.insert_or_assign(x, t);
  }

  std::optional<Pattern> lookup(const Variable& x) const {
    auto it = map_.find(x);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<Variable, Pattern>& bindings() const noexcept { return map_; }
  bool empty() const noexcept { return map_.empty(); }
  std::size_t size() const noexcept { return map_.size(); }

  friend bool operator==(const Substitution& a, const Substitution& b) { return a.map_ == b.map_; }

 private:
  std::map<Variable, Pattern> map_;
};

inline Pattern apply_subst(const Pattern& t, const Substitution& sigma) {
  if (t.is_var()) {
    auto b = sigma.lookup(t.variable());
    return b ? *b : t;
  }
  if (!t.is_app() || is_ceil(t)) throw NotATerm("substitution applies to terms only");
  if (t.children().empty() || sigma.empty()) return t;
  std::vector<Pattern> kids;
  kids.reserve(t.children().size());
  for (const auto& c : t.children()) kids.push_back(apply_subst(c, sigma));
  return Pattern::make_app(t.symbol(), std::move(kids), t.sort());
}

/// (x)(sigma eta) = ((x)sigma)eta.
inline Substitution compose(const Substitution& sigma, const Substitution& eta) {
  Substitution out;
  for (const auto& [x, t] : sigma.bindings()) out.bind(x, apply_subst(t, eta));
  for (const auto& [x, t] : eta.bindings()) {
    if (!sigma.lookup(x)) out.bind(x, t);
  }
  return out;
}

/// One-sided syntactic matching of `pattern` onto `target`, extending theta.
inline bool match_term(const Pattern& pattern, const Pattern& target, std::map<Variable, Pattern>& theta) {
  if (pattern.sort() != target.sort()) return false;
  if (pattern.is_var()) {
    auto [it, inserted] = theta.try_emplace(pattern.variable(), target);
    return inserted || it->second == target;
  }
  if (!target.is_app() || pattern.symbol() != target.symbol() ||
      pattern.children().size() != target.children().size()) {
    return false;
  }
  for (std::size_t i = 0; i < pattern.children().size(); ++i) {
    if (!match_term(pattern.child(i), target.child(i), theta)) return false;
  }
  return true;
}

/// sigma <= eta on probe: exists theta with x sigma theta = x eta for every probe x.
inline bool more_general(const Substitution& sigma, const Substitution& eta, const std::set<Variable>& probe) {
  std::map<Variable, Pattern> theta;
  for (const auto& x : probe) {
    if (!match_term(apply_subst(var(x), sigma), apply_subst(var(x), eta), theta)) return false;
  }
  return true;
}

}  // namespace mlunify
