#pragma once

// Textual syntax: pattern parser with sort inference, pretty printer that
// re-sugars derived constructs, and the signature file format.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mlunify/kernel.hpp"

namespace mlunify {

/// Sorts supplied by the caller for variables written without annotation.
using SortEnv = std::map<std::string, Sort, std::less<>>;

namespace detail {

enum class Tok {
  Ident, LParen, RParen, Comma, Colon, Dot, Tilde, And, Or, Implies, Iff, Eq, In, Exists,
  CeilOpen, CeilClose, Top, Bottom, LBrace, RBrace, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view w) { return s.substr(i, w.size()) == w; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t at = i;
    auto push = [&](Tok k, std::size_t len) {
      out.push_back({k, std::string(s.substr(i, len)), at});
      i += len;
    };
    if (starts("<->")) push(Tok::Iff, 3);
    else if (starts("->")) push(Tok::Implies, 2);
    else if (starts("/\\")) push(Tok::And, 2);
    else if (starts("\\/")) push(Tok::Or, 2);
    else if (starts("|_")) push(Tok::CeilOpen, 2);
    else if (starts("_|")) push(Tok::CeilClose, 2);
    else if (starts("\\top")) push(Tok::Top, 4);
    else if (starts("\\bottom")) push(Tok::Bottom, 7);
    else if (c == '(') push(Tok::LParen, 1);
    else if (c == ')') push(Tok::RParen, 1);
    else if (c == ',') push(Tok::Comma, 1);
    else if (c == ':') push(Tok::Colon, 1);
    else if (c == '.') push(Tok::Dot, 1);
    else if (c == '~') push(Tok::Tilde, 1);
    else if (c == '=') push(Tok::Eq, 1);
    else if (c == '{') push(Tok::LBrace, 1);
    else if (c == '}') push(Tok::RBrace, 1);
    else if (ident_char(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j]) && !(s[j] == '_' && j + 1 < s.size() && s[j + 1] == '|')) ++j;
      std::string word(s.substr(i, j - i));
      Tok k = word == "exists" ? Tok::Exists : word == "in" ? Tok::In : Tok::Ident;
      out.push_back({k, word, at});
      i = j;
    } else {
      throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(i));
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

enum class RawKind { Ident, Call, Not, And, Or, Implies, Iff, Eq, In, Exists, Ceil, Top, Bottom };

struct Raw {
  RawKind kind;
  std::string name;                 // identifier, symbol or binder
  std::optional<std::string> sort;  // annotation or outer-sort qualifier
  std::vector<Raw> kids;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Raw parse_all() {
    Raw r = expr(0);
    expect(Tok::End, "end of input");
    return r;
  }

 private:
  static int prec(Tok t) {
    switch (t) {
      case Tok::Iff: return 30;
      case Tok::Implies: return 40;
      case Tok::Or: return 50;
      case Tok::And: return 60;
      case Tok::Eq:
      case Tok::In: return 70;
      default: return -1;
    }
  }

  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  Token expect(Tok k, const char* what) {
    if (peek().kind != k) {
      throw ParseError(std::string("expected ") + what + " at offset " + std::to_string(peek().pos) +
                       (peek().text.empty() ? "" : ", found '" + peek().text + "'"));
    }
    return take();
  }

  std::optional<std::string> qualifier() {
    if (!accept(Tok::LBrace)) return std::nullopt;
    std::string s = expect(Tok::Ident, "sort name").text;
    expect(Tok::RBrace, "'}'");
    return s;
  }

  Raw expr(int min_prec) {
    Raw lhs = unary();
    for (;;) {
      Tok op = peek().kind;
      int p = prec(op);
      if (p < 0 || p < min_prec) return lhs;
      take();
      std::optional<std::string> q;
      if (op == Tok::Eq || op == Tok::In) q = qualifier();
      bool right_assoc = op != Tok::Eq && op != Tok::In;
      Raw rhs = expr(right_assoc ? p : p + 1);
      RawKind k = op == Tok::And ? RawKind::And
                  : op == Tok::Or ? RawKind::Or
                  : op == Tok::Implies ? RawKind::Implies
                  : op == Tok::Iff ? RawKind::Iff
                  : op == Tok::Eq ? RawKind::Eq
                                  : RawKind::In;
      lhs = Raw{k, "", q, {std::move(lhs), std::move(rhs)}};
    }
  }

  Raw unary() {
    if (accept(Tok::Tilde)) return Raw{RawKind::Not, "", std::nullopt, {unary()}};
    if (accept(Tok::Exists)) {
      std::string name = expect(Tok::Ident, "bound variable").text;
      std::optional<std::string> s;
      if (accept(Tok::Colon)) s = expect(Tok::Ident, "sort name").text;
      expect(Tok::Dot, "'.'");
      return Raw{RawKind::Exists, name, s, {expr(0)}};
    }
    return primary();
  }

  Raw primary() {
    if (accept(Tok::LParen)) {
      Raw r = expr(0);
      expect(Tok::RParen, "')'");
      return r;
    }
    if (accept(Tok::CeilOpen)) {
      Raw inner = expr(0);
      expect(Tok::CeilClose, "'_|'");
      return Raw{RawKind::Ceil, "", qualifier(), {std::move(inner)}};
    }
    if (accept(Tok::Top)) return Raw{RawKind::Top, "", qualifier(), {}};
    if (accept(Tok::Bottom)) return Raw{RawKind::Bottom, "", qualifier(), {}};
    Token id = expect(Tok::Ident, "pattern");
    if (accept(Tok::LParen)) {
      Raw call{RawKind::Call, id.text, std::nullopt, {}};
      if (!accept(Tok::RParen)) {
        do call.kids.push_back(expr(0));
        while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
      }
      return call;
    }
    Raw r{RawKind::Ident, id.text, std::nullopt, {}};
    if (accept(Tok::Colon)) r.sort = expect(Tok::Ident, "sort name").text;
    return r;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

class Elaborator {
 public:
  Elaborator(const Signature& sig, const SortEnv& user) : sig_(sig), user_(user) {}

  Pattern run(const Raw& r, const std::optional<Sort>& expected) {
    collect_hints(r);
    for (const auto& [name, sorts] : hints_) {
      if (sorts.size() == 1) env_.emplace(name, *sorts.begin());
    }
    for (const auto& [name, s] : user_) env_.insert_or_assign(name, s);
    return elab(r, expected);
  }

 private:
  Sort sort_named(const std::string& n) const {
    Sort s{n};
    if (!sig_.has_sort(s)) throw IllSorted("undeclared sort " + n);
    return s;
  }

  bool is_constant(const Raw& r) const {
    if (r.kind != RawKind::Ident || r.sort) return false;
    const SymbolDecl* d = sig_.find(r.name);
    return d && d->arity.empty();
  }

  void collect_hints(const Raw& r) {
    if (r.kind == RawKind::Ident && r.sort) hints_[r.name].insert(Sort{*r.sort});
    if (r.kind == RawKind::Exists && r.sort) hints_[r.name].insert(Sort{*r.sort});
    if (r.kind == RawKind::Call) {
      if (const SymbolDecl* d = sig_.find(r.name); d && d->arity.size() == r.kids.size()) {
        for (std::size_t i = 0; i < r.kids.size(); ++i) {
          const Raw& k = r.kids[i];
          if (k.kind == RawKind::Ident && !k.sort && !is_constant(k)) hints_[k.name].insert(d->arity[i]);
        }
      }
    }
    for (const auto& k : r.kids) collect_hints(k);
  }

  std::optional<Sort> single_sort() const {
    if (sig_.sorts().size() == 1) return sig_.sorts().front();
    return std::nullopt;
  }

  std::optional<Sort> var_sort(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->name == name) return it->sort;
    }
    if (auto it = env_.find(name); it != env_.end()) return it->second;
    return std::nullopt;
  }

  std::optional<Sort> guess(const Raw& r) {
    switch (r.kind) {
      case RawKind::Ident:
        if (r.sort) return sort_named(*r.sort);
        if (is_constant(r)) return sig_.symbol(r.name).result;
        return var_sort(r.name);
      case RawKind::Call:
        return sig_.symbol(r.name).result;
      case RawKind::Not:
        return guess(r.kids[0]);
      case RawKind::And:
      case RawKind::Or:
      case RawKind::Implies:
      case RawKind::Iff:
        if (auto s = guess(r.kids[0])) return s;
        return guess(r.kids[1]);
      case RawKind::Exists: {
        scope_.push_back(Variable{r.name, binder_sort(r)});
        auto s = guess(r.kids[0]);
        scope_.pop_back();
        return s;
      }
      case RawKind::Eq:
      case RawKind::In:
      case RawKind::Ceil:
      case RawKind::Top:
      case RawKind::Bottom:
        if (r.sort) return sort_named(*r.sort);
        return std::nullopt;
    }
    return std::nullopt;
  }

  Sort binder_sort(const Raw& r) const {
    if (r.sort) return sort_named(*r.sort);
    if (auto it = env_.find(r.name); it != env_.end()) return it->second;
    if (auto s = single_sort()) return *s;
    throw ParseError("cannot infer the sort of bound variable " + r.name);
  }

  Sort resolve(const Raw& r, const std::optional<Sort>& expected, const char* what) {
    if (expected) return *expected;
    if (auto s = guess(r)) return *s;
    if (auto s = single_sort()) return *s;
    throw ParseError(std::string("cannot infer the sort of ") + what);
  }

  Sort inner_sort(const Raw& a, const Raw& b) {
    if (auto s = guess(a)) return *s;
    if (auto s = guess(b)) return *s;
    if (auto s = single_sort()) return *s;
    throw ParseError("cannot infer the operand sort of an equality, membership or definedness");
  }

  Pattern elab(const Raw& r, const std::optional<Sort>& expected) {
    switch (r.kind) {
      case RawKind::Ident: {
        if (is_constant(r)) return app(sig_, r.name);
        if (r.sort) return var(r.name, sort_named(*r.sort));
        if (auto s = var_sort(r.name)) return var(r.name, *s);
        if (expected) return var(r.name, *expected);
        if (auto s = single_sort()) return var(r.name, *s);
        throw ParseError("cannot infer the sort of variable " + r.name + "; annotate it as " + r.name + ":Sort");
      }
      case RawKind::Call: {
        const SymbolDecl& d = sig_.symbol(r.name);
        if (d.arity.size() != r.kids.size()) {
          throw IllSorted(d.name + " expects " + std::to_string(d.arity.size()) + " arguments, got " +
                          std::to_string(r.kids.size()));
        }
        std::vector<Pattern> args;
        for (std::size_t i = 0; i < r.kids.size(); ++i) args.push_back(elab(r.kids[i], d.arity[i]));
        return app(sig_, d.name, std::move(args));
      }
      case RawKind::Not:
        return neg(elab(r.kids[0], resolve(r, expected, "a negation")));
      case RawKind::And:
      case RawKind::Or:
      case RawKind::Implies:
      case RawKind::Iff: {
        Sort s = resolve(r, expected, "a connective");
        Pattern a = elab(r.kids[0], s);
        Pattern b = elab(r.kids[1], s);
        if (r.kind == RawKind::And) return conj(a, b);
        if (r.kind == RawKind::Or) return disj(a, b);
        if (r.kind == RawKind::Implies) return implies(a, b);
        return iff(a, b);
      }
      case RawKind::Exists: {
        Variable x{r.name, binder_sort(r)};
        scope_.push_back(x);
        Sort s = resolve(r.kids[0], expected, "an existential body");
        Pattern body = elab(r.kids[0], s);
        scope_.pop_back();
        return exists(x, body);
      }
      case RawKind::Eq:
      case RawKind::In: {
        Sort inner = inner_sort(r.kids[0], r.kids[1]);
        Pattern a = elab(r.kids[0], inner);
        Pattern b = elab(r.kids[1], inner);
        Sort outer = r.sort ? sort_named(*r.sort) : expected ? *expected : inner;
        return r.kind == RawKind::Eq ? equals(a, b, outer) : member(a, b, outer);
      }
      case RawKind::Ceil: {
        Sort inner = inner_sort(r.kids[0], r.kids[0]);
        Pattern a = elab(r.kids[0], inner);
        Sort outer = r.sort ? sort_named(*r.sort) : expected ? *expected : inner;
        return defined(a, outer);
      }
      case RawKind::Top:
      case RawKind::Bottom: {
        Sort s = r.sort ? sort_named(*r.sort) : resolve(r, expected, "\\top or \\bottom");
        return r.kind == RawKind::Top ? top(s) : bottom(s);
      }
    }
    throw ParseError("unreachable");
  }

  const Signature& sig_;
  const SortEnv& user_;
  std::map<std::string, std::set<Sort>> hints_;
  SortEnv env_;
  std::vector<Variable> scope_;
};

}  // namespace detail

/// Parses a pattern. Unannotated variables take their sort from the
/// environment, from another annotated occurrence, from the argument
/// position they occupy, from the surrounding context, or from the only
/// sort of the signature, in that order.
inline Pattern parse_pattern(const Signature& sig, std::string_view text, const SortEnv& env = {},
                             std::optional<Sort> expected = std::nullopt) {
  detail::Raw raw = detail::Parser(text).parse_all();
  Pattern p = detail::Elaborator(sig, env).run(raw, expected);
  check_well_sorted(sig, p);
  return p;
}

inline Pattern parse_term(const Signature& sig, std::string_view text, const SortEnv& env = {}) {
  Pattern p = parse_pattern(sig, text, env);
  if (!is_term(p)) throw NotATerm(std::string(text));
  return p;
}

// ---------------------------------------------------------------------------
// Printing.

enum class PrintStyle {
  Plain,      // x, a = b
  Qualified,  // x:Nat, a ={Nat} b; parses back to the identical pattern
};

namespace detail {

class Printer {
 public:
  explicit Printer(PrintStyle style) : q_(style == PrintStyle::Qualified) {}

  std::string print(const Pattern& p, int min_prec = 0) {
    int own = 100;
    std::string s = render(p, own);
    bool paren = own < min_prec || (own == 10 && min_prec > 0);
    return paren ? "(" + s + ")" : s;
  }

 private:
  std::string suffix(const Sort& s) const { return q_ ? "{" + s.name + "}" : ""; }

  std::string variable(const Variable& v) const { return q_ ? v.name + ":" + v.sort.name : v.name; }

  std::string binary(const Pattern& a, const char* op, const Pattern& b, int p, bool right_assoc) {
    return print(a, p + 1) + " " + op + " " + print(b, right_assoc ? p : p + 1);
  }

  std::string render(const Pattern& p, int& own) {
    switch (p.kind()) {
      case Kind::Var:
        return variable(p.variable());
      case Kind::App: {
        if (auto m = as_member(p)) {
          own = 70;
          return print(m->lhs, 71) + " in" + suffix(p.sort()) + " " + print(m->rhs, 71);
        }
        if (is_ceil(p)) return "|_ " + print(p.child(0)) + " _|" + suffix(p.sort());
        if (p.children().empty()) return p.symbol();
        std::string s = p.symbol() + "(";
        for (std::size_t i = 0; i < p.children().size(); ++i) {
          if (i) s += ", ";
          s += print(p.child(i));
        }
        return s + ")";
      }
      case Kind::Not: {
        if (auto e = as_equals(p)) {
          own = 70;
          return print(e->lhs, 71) + " =" + suffix(p.sort()) + " " + print(e->rhs, 71);
        }
        if (is_bottom(p)) return "\\bottom" + suffix(p.sort());
        if (auto i = as_implies(p)) {
          own = 40;
          return binary(i->lhs, "->", i->rhs, 40, true);
        }
        if (auto o = as_or(p)) {
          own = 50;
          return binary(o->lhs, "\\/", o->rhs, 50, true);
        }
        own = 90;
        return "~" + print(p.child(0), 90);
      }
      case Kind::And: {
        if (auto i = as_iff(p)) {
          own = 30;
          return binary(i->lhs, "<->", i->rhs, 30, true);
        }
        own = 60;
        return binary(p.child(0), "/\\", p.child(1), 60, true);
      }
      case Kind::Exists: {
        if (is_top(p)) return "\\top" + suffix(p.sort());
        own = 10;
        return "exists " + variable(p.variable()) + " . " + print(p.child(0));
      }
    }
    return "?";
  }

  bool q_;
};

}  // namespace detail

inline std::string to_string(const Pattern& p, PrintStyle style = PrintStyle::Plain) {
  return detail::Printer(style).print(p);
}

inline std::string to_string(const Substitution& s, PrintStyle style = PrintStyle::Plain) {
  std::string out = "{";
  bool first = true;
  for (const auto& [x, t] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += (style == PrintStyle::Qualified ? x.name + ":" + x.sort.name : x.name) + " -> " + to_string(t, style);
  }
  return out + "}";
}

inline std::ostream& operator<<(std::ostream& os, const Pattern& p) { return os << to_string(p); }

// ---------------------------------------------------------------------------
// Signature files.

namespace detail {

inline std::string strip_comment(const std::string& line) {
  std::size_t cut = line.find('#');
  std::size_t slash = line.find("//");
  if (slash < cut) cut = slash;
  return cut == std::string::npos ? line : line.substr(0, cut);
}

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

/// Handles one `sort ...` or `symbol ...` line; returns false for other lines.
inline bool parse_signature_line(Signature& sig, const std::string& raw_line, std::size_t lineno) {
  std::string line = trim(strip_comment(raw_line));
  auto fail = [&](const std::string& msg) {
    return ParseError("line " + std::to_string(lineno) + ": " + msg);
  };
  auto ws = words(line);
  if (ws.empty()) return true;
  if (ws[0] == "sort") {
    if (ws.size() < 2) throw fail("sort declaration without a name");
    for (std::size_t i = 1; i < ws.size(); ++i) sig.add_sort(Sort{ws[i]});
    return true;
  }
  if (ws[0] != "symbol") return false;
  std::string body = trim(line.substr(6));
  SymbolDecl d;
  if (auto lb = body.find('['); lb != std::string::npos) {
    auto rb = body.find(']', lb);
    if (rb == std::string::npos) throw fail("unterminated attribute list");
    std::string attrs = body.substr(lb + 1, rb - lb - 1);
    for (char& c : attrs) {
      if (c == ',') c = ' ';
    }
    for (const auto& a : words(attrs)) {
      if (a == "functional") d.functional = true;
      else if (a == "injective") d.injective = true;
      else throw fail("unknown attribute " + a);
    }
    body = trim(body.substr(0, lb));
  }
  auto colon = body.find(':');
  if (colon == std::string::npos) throw fail("expected 'symbol name : sorts -> sort'");
  d.name = trim(body.substr(0, colon));
  if (d.name.empty() || words(d.name).size() != 1) throw fail("bad symbol name");
  std::string type = body.substr(colon + 1);
  auto arrow = type.find("->");
  if (arrow == std::string::npos) {
    auto rs = words(type);
    if (rs.size() != 1) throw fail("constant declaration needs exactly one result sort");
    d.result = Sort{rs[0]};
  } else {
    for (const auto& a : words(type.substr(0, arrow))) d.arity.push_back(Sort{a});
    auto rs = words(type.substr(arrow + 2));
    if (rs.size() != 1) throw fail("expected exactly one result sort");
    d.result = Sort{rs[0]};
  }
  try {
    sig.add_symbol(std::move(d));
  } catch (const SignatureError& e) {
    throw fail(e.what());
  }
  return true;
}

}  // namespace detail

inline Signature parse_signature(std::string_view text) {
  Signature sig;
  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (!detail::parse_signature_line(sig, line, lineno)) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 'sort' or 'symbol'");
    }
  }
  return sig;
}

inline std::string to_string(const Signature& sig) {
  std::string out;
  for (const auto& s : sig.sorts()) out += "sort " + s.name + "\n";
  for (const auto& d : sig.symbols()) {
    out += "symbol " + d.name + " :";
    for (const auto& a : d.arity) out += " " + a.name;
    out += " -> " + d.result.name;
    if (d.functional) out += d.injective ? " [functional, injective]" : " [functional]";
    out += "\n";
  }
  return out;
}

}  // namespace mlunify
