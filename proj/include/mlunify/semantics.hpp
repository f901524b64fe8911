#pragma once

// Finite models with powerset-valued interpretations, pattern evaluation
// under valuations, and satisfaction checks by exhaustive enumeration.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlunify/encoder.hpp"
#include "mlunify/syntax.hpp"

namespace mlunify {

/// Subset of a carrier, one bit per element.
using ElementSet = std::uint64_t;

inline constexpr std::size_t kMaxCarrier = 64;

inline ElementSet full_set(std::size_t n) { return n >= 64 ? ~ElementSet{0} : (ElementSet{1} << n) - 1; }

class FiniteModel {
 public:
  FiniteModel() = default;
  explicit FiniteModel(Signature sig) : sig_(std::move(sig)) {}

  const Signature& signature() const noexcept { return sig_; }

  void set_carrier(const Sort& s, std::vector<std::string> elements) {
    if (!sig_.has_sort(s)) throw ModelError("carrier for undeclared sort " + s.name);
    if (elements.empty()) throw ModelError("carrier of " + s.name + " must be nonempty");
    if (elements.size() > kMaxCarrier) throw CarrierTooLarge("carrier of " + s.name + " exceeds 64 elements");
    std::set<std::string> seen(elements.begin(), elements.end());
    if (seen.size() != elements.size()) throw ModelError("duplicate element in carrier of " + s.name);
    carriers_[s] = std::move(elements);
    interp_.clear();
    defined_.clear();
  }

  bool has_carrier(const Sort& s) const { return carriers_.count(s) != 0; }

  const std::vector<std::string>& carrier(const Sort& s) const {
    auto it = carriers_.find(s);
    if (it == carriers_.end()) throw ModelError("no carrier for sort " + s.name);
    return it->second;
  }

  std::size_t size(const Sort& s) const { return carrier(s).size(); }

  std::size_t element(const Sort& s, std::string_view name) const {
    const auto& c = carrier(s);
    auto it = std::find(c.begin(), c.end(), name);
    if (it == c.end()) throw ModelError("element " + std::string(name) + " is not in the carrier of " + s.name);
    return static_cast<std::size_t>(it - c.begin());
  }

  /// Number of argument tuples of a symbol.
  std::size_t tuple_count(const SymbolDecl& d) const {
    std::size_t n = 1;
    for (const auto& a : d.arity) n *= size(a);
    return n;
  }

  /// Mixed-radix index of an argument tuple, first argument most significant.
  std::size_t tuple_index(const SymbolDecl& d, const std::vector<std::size_t>& args) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < d.arity.size(); ++i) idx = idx * size(d.arity[i]) + args.at(i);
    return idx;
  }

  std::vector<std::size_t> tuple_at(const SymbolDecl& d, std::size_t idx) const {
    std::vector<std::size_t> args(d.arity.size());
    for (std::size_t i = d.arity.size(); i-- > 0;) {
      args[i] = idx % size(d.arity[i]);
      idx /= size(d.arity[i]);
    }
    return args;
  }

  void set(const std::string& symbol, const std::vector<std::size_t>& args, ElementSet value) {
    const SymbolDecl& d = sig_.symbol(symbol);
    auto& table = interp_[symbol];
    if (table.empty()) {
      table.assign(tuple_count(d), 0);
      defined_[symbol].assign(tuple_count(d), false);
    }
    if ((value & ~full_set(size(d.result))) != 0) throw ModelError("value outside the carrier of " + d.result.name);
    std::size_t i = tuple_index(d, args);
    table.at(i) = value;
    defined_[symbol][i] = true;
  }

  ElementSet get(const std::string& symbol, std::size_t tuple) const {
    auto it = interp_.find(symbol);
    if (it == interp_.end()) throw UnknownSymbol(symbol);
    return it->second.at(tuple);
  }

  const std::vector<ElementSet>& table(const std::string& symbol) const {
    auto it = interp_.find(symbol);
    if (it == interp_.end()) throw UnknownSymbol(symbol);
    return it->second;
  }

  /// Throws ModelError unless every sort has a carrier and every symbol is
  /// interpreted on every argument tuple.
  void validate() const {
    for (const auto& s : sig_.sorts()) carrier(s);
    for (const auto& d : sig_.symbols()) {
      auto it = defined_.find(d.name);
      if (it == defined_.end()) throw ModelError("symbol " + d.name + " is not interpreted");
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        if (!it->second[i]) {
          std::string tuple;
          for (auto a : tuple_at(d, i)) tuple += (tuple.empty() ? "" : ", ") + std::to_string(a);
          throw ModelError("missing interpretation of " + d.name + " at tuple (" + tuple + ")");
        }
      }
    }
  }

 private:
  Signature sig_;
  std::map<Sort, std::vector<std::string>> carriers_;
  std::map<std::string, std::vector<ElementSet>> interp_;
  std::map<std::string, std::vector<bool>> defined_;
};

/// Variable assignment, by element index within the variable's carrier.
using Valuation = std::map<Variable, std::size_t>;

struct EvalOptions {
  std::uint64_t budget = 1'000'000;  // maximum number of valuations enumerated
};

namespace detail {

/// A pattern compiled against a model: shared subpatterns are merged and
/// subpatterns that cannot see a bound variable are cached per valuation.
class Program {
 public:
  Program(const FiniteModel& m, const std::vector<Pattern>& roots) : m_(m) {
    for (const auto& r : roots) collect_binders(r);
    for (const auto& r : roots) roots_.push_back(compile(r));
    for (const auto& r : roots) {
      for (const auto& v : free_vars(r)) free_.insert(v);
    }
    env_.assign(slots_.size(), 0);
    memo_.assign(nodes_.size(), 0);
    stamp_.assign(nodes_.size(), 0);
  }

  const std::set<Variable>& free() const noexcept { return free_; }

  void assign(const Variable& v, std::size_t element) {
    auto it = slots_.find(v);
    if (it != slots_.end()) env_[it->second] = element;
  }

  /// Invalidates cached values; call after changing the valuation.
  void next_valuation() { ++epoch_; }

  ElementSet eval_root(std::size_t i) { return eval(roots_.at(i)); }

  std::size_t sort_size(std::size_t root) const { return nodes_[roots_.at(root)].size; }

 private:
  enum class Op { Var, App, Ceil, Not, And, Exists };

  struct Node {
    Op op;
    std::size_t size;                    // carrier size of the node's sort
    std::size_t slot = 0;                // Var, Exists
    const SymbolDecl* decl = nullptr;    // App
    const std::vector<ElementSet>* table = nullptr;
    std::vector<std::size_t> radix;      // App argument carrier sizes; Exists domain size
    std::vector<std::size_t> kids;
    bool cacheable = false;
  };

  void collect_binders(const Pattern& p) {
    if (p.kind() == Kind::Exists) binders_.insert(p.variable());
    for (const auto& c : p.children()) collect_binders(c);
  }

  std::size_t slot_of(const Variable& v) {
    auto [it, inserted] = slots_.try_emplace(v, slots_.size());
    if (inserted) m_.size(v.sort);
    return it->second;
  }

  std::size_t compile(const Pattern& p) {
    if (auto it = ids_.find(p); it != ids_.end()) return it->second;
    Node n;
    n.size = m_.size(p.sort());
    switch (p.kind()) {
      case Kind::Var:
        n.op = Op::Var;
        n.slot = slot_of(p.variable());
        break;
      case Kind::App:
        if (is_ceil(p)) {
          n.op = Op::Ceil;
        } else {
          n.op = Op::App;
          n.decl = &m_.signature().symbol(p.symbol());
          n.table = &m_.table(p.symbol());
          for (const auto& a : n.decl->arity) n.radix.push_back(m_.size(a));
        }
        break;
      case Kind::Not: n.op = Op::Not; break;
      case Kind::And: n.op = Op::And; break;
      case Kind::Exists:
        n.op = Op::Exists;
        n.slot = slot_of(p.variable());
        n.radix = {m_.size(p.variable().sort)};
        break;
    }
    for (const auto& c : p.children()) n.kids.push_back(compile(c));
    auto fv = free_vars(p);
    n.cacheable = std::none_of(fv.begin(), fv.end(), [&](const Variable& v) { return binders_.count(v) != 0; });
    nodes_.push_back(std::move(n));
    ids_.emplace(p, nodes_.size() - 1);
    return nodes_.size() - 1;
  }

  ElementSet eval(std::size_t id) {
    const Node& n = nodes_[id];
    if (n.cacheable && stamp_[id] == epoch_) return memo_[id];
    ElementSet r = 0;
    switch (n.op) {
      case Op::Var:
        r = ElementSet{1} << env_[n.slot];
        break;
      case Op::Ceil:
        r = eval(n.kids[0]) != 0 ? full_set(n.size) : 0;
        break;
      case Op::Not:
        r = full_set(n.size) & ~eval(n.kids[0]);
        break;
      case Op::And:
        r = eval(n.kids[0]);
        if (r != 0) r &= eval(n.kids[1]);
        break;
      case Op::Exists: {
        std::size_t saved = env_[n.slot];
        for (std::size_t v = 0; v < n.radix[0]; ++v) {
          env_[n.slot] = v;
          r |= eval(n.kids[0]);
        }
        env_[n.slot] = saved;
        break;
      }
      case Op::App: {
        std::vector<ElementSet> args;
        args.reserve(n.kids.size());
        for (auto k : n.kids) {
          args.push_back(eval(k));
          if (args.back() == 0) break;
        }
        if (args.size() == n.kids.size()) r = image(n, args);
        break;
      }
    }
    if (n.cacheable) {
      stamp_[id] = epoch_;
      memo_[id] = r;
    }
    return r;
  }

  /// Union of the interpretation over every tuple drawn from `args`.
  ElementSet image(const Node& n, const std::vector<ElementSet>& args) const {
    if (args.empty()) return (*n.table)[0];
    ElementSet out = 0;
    std::vector<std::size_t> pick(args.size());
    auto rec = [&](auto&& self, std::size_t i, std::size_t idx) -> void {
      if (i == args.size()) {
        out |= (*n.table)[idx];
        return;
      }
      for (ElementSet rest = args[i]; rest != 0; rest &= rest - 1) {
        std::size_t e = static_cast<std::size_t>(std::countr_zero(rest));
        self(self, i + 1, idx * n.radix[i] + e);
      }
    };
    rec(rec, 0, 0);
    return out;
  }

  const FiniteModel& m_;
  std::set<Variable> binders_;
  std::set<Variable> free_;
  std::map<Variable, std::size_t> slots_;
  std::unordered_map<Pattern, std::size_t, PatternHash> ids_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> roots_;
  std::vector<std::size_t> env_;
  std::vector<ElementSet> memo_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 1;
};

/// Calls fn() once per valuation of the program's free variables; stops
/// early when fn returns false. Returns false iff stopped early.
template <typename Fn>
bool for_each_valuation(const FiniteModel& m, Program& prog, const EvalOptions& opts, Fn&& fn) {
  std::vector<Variable> vars(prog.free().begin(), prog.free().end());
  std::vector<std::size_t> radix;
  std::uint64_t total = 1;
  for (const auto& v : vars) {
    radix.push_back(m.size(v.sort));
    if (total > opts.budget / radix.back() + 1) {
      throw CarrierTooLarge("valuation space exceeds the budget of " + std::to_string(opts.budget));
    }
    total *= radix.back();
  }
  if (total > opts.budget) throw CarrierTooLarge("valuation space exceeds the budget of " + std::to_string(opts.budget));
  std::vector<std::size_t> cur(vars.size(), 0);
  for (std::uint64_t k = 0; k < total; ++k) {
    for (std::size_t i = 0; i < vars.size(); ++i) prog.assign(vars[i], cur[i]);
    prog.next_valuation();
    if (!fn()) return false;
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (++cur[i] < radix[i]) break;
      cur[i] = 0;
    }
  }
  return true;
}

}  // namespace detail

/// The extension of a valuation to a pattern.
inline ElementSet eval(const FiniteModel& m, const Valuation& rho, const Pattern& phi) {
  detail::Program prog(m, {phi});
  for (const auto& v : prog.free()) {
    auto it = rho.find(v);
    if (it == rho.end()) throw UnassignedVariable(v.name);
    if (it->second >= m.size(v.sort)) throw ModelError("valuation of " + v.name + " is outside its carrier");
    prog.assign(v, it->second);
  }
  return prog.eval_root(0);
}

/// Element names of a set, in carrier order.
inline std::vector<std::string> element_names(const FiniteModel& m, const Sort& s, ElementSet set) {
  std::vector<std::string> out;
  const auto& c = m.carrier(s);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (set >> i & 1) out.push_back(c[i]);
  }
  return out;
}

inline std::string format_set(const FiniteModel& m, const Sort& s, ElementSet set) {
  std::string out = "{";
  for (const auto& e : element_names(m, s, set)) out += (out.size() > 1 ? ", " : "") + e;
  return out + "}";
}

inline bool satisfies(const FiniteModel& m, const Pattern& phi, const EvalOptions& opts = {}) {
  detail::Program prog(m, {phi});
  ElementSet all = full_set(prog.sort_size(0));
  return detail::for_each_valuation(m, prog, opts, [&] { return prog.eval_root(0) == all; });
}

/// Inclusion of the two extensions under every valuation.
inline bool implication_holds(const FiniteModel& m, const Pattern& a, const Pattern& b, const EvalOptions& opts = {}) {
  if (a.sort() != b.sort()) throw SortMismatch("implication between sorts " + a.sort().name + " and " + b.sort().name);
  detail::Program prog(m, {a, b});
  return detail::for_each_valuation(m, prog, opts, [&] {
    ElementSet x = prog.eval_root(0);
    return (x & ~prog.eval_root(1)) == 0;
  });
}

/// Equality of the two extensions under every valuation.
inline bool equivalence_holds(const FiniteModel& m, const Pattern& a, const Pattern& b, const EvalOptions& opts = {}) {
  if (a.sort() != b.sort()) throw SortMismatch("equivalence between sorts " + a.sort().name + " and " + b.sort().name);
  detail::Program prog(m, {a, b});
  return detail::for_each_valuation(m, prog, opts, [&] { return prog.eval_root(0) == prog.eval_root(1); });
}

/// Whether the pattern evaluates to the empty set or the full carrier under every valuation.
inline bool is_predicate_in(const FiniteModel& m, const Pattern& phi, const EvalOptions& opts = {}) {
  detail::Program prog(m, {phi});
  ElementSet all = full_set(prog.sort_size(0));
  return detail::for_each_valuation(m, prog, opts, [&] {
    ElementSet v = prog.eval_root(0);
    return v == 0 || v == all;
  });
}

// ---------------------------------------------------------------------------
// Audits.

inline bool audit_functional(const FiniteModel& m) {
  for (const auto& d : m.signature().symbols()) {
    if (!d.functional) continue;
    for (ElementSet v : m.table(d.name)) {
      if (std::popcount(v) != 1) return false;
    }
  }
  return true;
}

inline bool audit_injective(const FiniteModel& m) {
  for (const auto& d : m.signature().symbols()) {
    if (!d.injective) continue;
    const auto& t = m.table(d.name);
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = i + 1; j < t.size(); ++j) {
        if ((t[i] & t[j]) != 0) return false;
      }
    }
  }
  return true;
}

inline bool audit_axioms(const FiniteModel& m, const AxiomSet& axioms, const EvalOptions& opts = {}) {
  return std::all_of(axioms.axioms().begin(), axioms.axioms().end(),
                     [&](const Axiom& a) { return satisfies(m, a.formula, opts); });
}

/// Every element of every sort is in the image of some symbol of that sort.
inline bool audit_no_junk(const FiniteModel& m) {
  for (const auto& s : m.signature().sorts()) {
    ElementSet covered = 0;
    for (const auto& d : m.signature().symbols()) {
      if (d.result != s) continue;
      for (ElementSet v : m.table(d.name)) covered |= v;
    }
    if (covered != full_set(m.size(s))) return false;
  }
  return true;
}

/// Distinct symbols of one result sort have disjoint images.
inline bool audit_no_confusion_different(const FiniteModel& m) {
  const auto& syms = m.signature().symbols();
  for (std::size_t i = 0; i < syms.size(); ++i) {
    for (std::size_t j = i + 1; j < syms.size(); ++j) {
      if (syms[i].result != syms[j].result) continue;
      ElementSet a = 0, b = 0;
      for (ElementSet v : m.table(syms[i].name)) a |= v;
      for (ElementSet v : m.table(syms[j].name)) b |= v;
      if ((a & b) != 0) return false;
    }
  }
  return true;
}

/// Every symbol maps distinct argument tuples to disjoint sets.
inline bool audit_no_confusion_same(const FiniteModel& m) {
  for (const auto& d : m.signature().symbols()) {
    const auto& t = m.table(d.name);
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = i + 1; j < t.size(); ++j) {
        if ((t[i] & t[j]) != 0) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Model construction.

/// One sort s, one element a, and f : s -> s with f(a) = {a}.
inline FiniteModel occurs_check_countermodel() {
  Signature sig;
  sig.add_sort(Sort{"s"});
  sig.add_symbol(SymbolDecl{"f", {Sort{"s"}}, Sort{"s"}, true, true});
  FiniteModel m(sig);
  m.set_carrier(Sort{"s"}, {"a"});
  m.set("f", {0}, 1);
  return m;
}

/// Random model with the given carrier size per sort. Functional symbols
/// get singleton values, injective ones injective maps, and the remaining
/// symbols arbitrary subsets.
inline FiniteModel random_injective_model(const Signature& sig, const std::map<Sort, std::size_t>& sizes,
                                          std::uint64_t seed) {
  FiniteModel m(sig);
  for (const auto& s : sig.sorts()) {
    auto it = sizes.find(s);
    if (it == sizes.end() || it->second == 0) throw ModelError("no carrier size for sort " + s.name);
    std::vector<std::string> elems;
    for (std::size_t i = 0; i < it->second; ++i) elems.push_back("e" + std::to_string(i));
    m.set_carrier(s, std::move(elems));
  }
  std::mt19937_64 rng(seed);
  for (const auto& d : sig.symbols()) {
    std::size_t n = m.tuple_count(d);
    std::size_t k = m.size(d.result);
    std::vector<ElementSet> values(n);
    if (d.injective) {
      if (n > k) {
        throw NoInjectiveInterpretation(d.name + " has " + std::to_string(n) + " argument tuples but only " +
                                        std::to_string(k) + " possible results");
      }
      std::vector<std::size_t> targets(k);
      std::iota(targets.begin(), targets.end(), 0);
      std::shuffle(targets.begin(), targets.end(), rng);
      for (std::size_t i = 0; i < n; ++i) values[i] = ElementSet{1} << targets[i];
    } else if (d.functional) {
      std::uniform_int_distribution<std::size_t> pick(0, k - 1);
      for (auto& v : values) v = ElementSet{1} << pick(rng);
    } else {
      std::uniform_int_distribution<ElementSet> pick(0, full_set(k));
      for (auto& v : values) v = pick(rng);
    }
    for (std::size_t i = 0; i < n; ++i) m.set(d.name, m.tuple_at(d, i), values[i]);
  }
  return m;
}

/// Every sort gets exactly `carrier_size` elements.
inline FiniteModel random_injective_model(const Signature& sig, std::size_t carrier_size, std::uint64_t seed) {
  if (carrier_size == 0 || carrier_size > kMaxCarrier) throw CarrierTooLarge("carrier size must be in 1..64");
  std::map<Sort, std::size_t> sizes;
  for (const auto& s : sig.sorts()) sizes[s] = carrier_size;
  return random_injective_model(sig, sizes, seed);
}

/// Picks per-sort carrier sizes in 1..max_carrier from the seed so that
/// every injective symbol fits; returns nothing if no draw succeeds.
inline std::optional<std::map<Sort, std::size_t>> feasible_carrier_sizes(const Signature& sig, std::size_t max_carrier,
                                                                         std::uint64_t seed, int attempts = 64) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(1, max_carrier);
  for (int a = 0; a < attempts; ++a) {
    std::map<Sort, std::size_t> sizes;
    for (const auto& s : sig.sorts()) sizes[s] = pick(rng);
    bool ok = true;
    for (const auto& d : sig.symbols()) {
      if (!d.injective) continue;
      std::size_t n = 1;
      for (const auto& s : d.arity) n *= sizes[s];
      ok = ok && n <= sizes[d.result];
    }
    if (ok) return sizes;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Model files.

namespace detail {

inline std::vector<std::string> split_elements(const std::string& braced, std::size_t lineno) {
  std::string s = trim(braced);
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') {
    throw ParseError("line " + std::to_string(lineno) + ": expected a set {e1, e2, ...}");
  }
  std::vector<std::string> out;
  std::string body = s.substr(1, s.size() - 2);
  std::istringstream in(body);
  for (std::string item; std::getline(in, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

/// Reads a model file. Sort and symbol declarations may be embedded; when
/// absent, `base` provides the signature.
inline FiniteModel parse_model(std::string_view text, const Signature* base = nullptr) {
  std::vector<std::pair<std::size_t, std::string>> rest;
  Signature sig;
  bool embedded = false;
  {
    std::istringstream in{std::string(text)};
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
      ++lineno;
      std::string t = detail::trim(detail::strip_comment(line));
      if (t.empty()) continue;
      auto ws = detail::words(t);
      if (ws[0] == "sort" || ws[0] == "symbol") {
        detail::parse_signature_line(sig, t, lineno);
        embedded = true;
      } else {
        rest.emplace_back(lineno, t);
      }
    }
  }
  if (!embedded) {
    if (!base) throw ParseError("model file declares no signature and none was supplied");
    sig = *base;
  }
  FiniteModel m(sig);
  for (const auto& [lineno, t] : rest) {
    auto fail = [&](const std::string& msg) { return ParseError("line " + std::to_string(lineno) + ": " + msg); };
    auto eq = t.find('=');
    if (eq == std::string::npos) throw fail("expected 'carrier S = {...}' or 'f(args) = {...}'");
    std::string lhs = detail::trim(t.substr(0, eq));
    auto values = detail::split_elements(t.substr(eq + 1), lineno);
    auto ws = detail::words(lhs);
    if (ws.size() == 2 && ws[0] == "carrier") {
      if (m.has_carrier(Sort{ws[1]})) throw fail("duplicate carrier for " + ws[1]);
      m.set_carrier(Sort{ws[1]}, values);
      continue;
    }
    std::string name = lhs;
    std::vector<std::string> args;
    if (auto lp = lhs.find('('); lp != std::string::npos) {
      if (lhs.back() != ')') throw fail("unbalanced parentheses");
      name = detail::trim(lhs.substr(0, lp));
      std::istringstream in(lhs.substr(lp + 1, lhs.size() - lp - 2));
      for (std::string a; std::getline(in, a, ',');) args.push_back(detail::trim(a));
      if (args.size() == 1 && args[0].empty()) args.clear();
    }
    const SymbolDecl* d = sig.find(name);
    if (!d) throw fail("unknown symbol " + name);
    if (args.size() != d->arity.size()) throw fail("wrong number of arguments for " + name);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < args.size(); ++i) idx.push_back(m.element(d->arity[i], args[i]));
    ElementSet v = 0;
    for (const auto& e : values) v |= ElementSet{1} << m.element(d->result, e);
    m.set(name, idx, v);
  }
  m.validate();
  return m;
}

/// Renders a model in the file format, signature included.
inline std::string to_string(const FiniteModel& m) {
  std::string out = to_string(m.signature());
  for (const auto& s : m.signature().sorts()) {
    out += "carrier " + s.name + " = {";
    const auto& c = m.carrier(s);
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? ", " : "") + c[i];
    out += "}\n";
  }
  for (const auto& d : m.signature().symbols()) {
    const auto& t = m.table(d.name);
    for (std::size_t i = 0; i < t.size(); ++i) {
      out += d.name;
      if (!d.arity.empty()) {
        out += "(";
        auto args = m.tuple_at(d, i);
        for (std::size_t k = 0; k < args.size(); ++k) out += (k ? ", " : "") + m.carrier(d.arity[k])[args[k]];
        out += ")";
      }
      out += " = " + format_set(m, d.result, t[i]) + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracles built from the equalities of the soundness argument.

/// t1 /\ t2 equals both t1 /\ phi^sigma and t2 /\ phi^sigma in the model.
inline bool soundness_holds(const FiniteModel& m, const Pattern& t1, const Pattern& t2, const Substitution& sigma,
                           const EvalOptions& opts = {}) {
  PredicatePattern phi = phi_of_subst(sigma, t1.sort());
  Pattern lhs = conj(t1, t2);
  return equivalence_holds(m, lhs, conjoin_with_structure(t1, phi), opts) &&
         equivalence_holds(m, lhs, conjoin_with_structure(t2, phi), opts);
}

}  // namespace mlunify
