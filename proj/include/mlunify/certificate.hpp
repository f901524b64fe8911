#pragma once

// Proof certificates: numbered Hilbert-style lines with structured
// justifications, plus JSON and tabular text renderings.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mlunify/syntax.hpp"

namespace mlunify {

enum class Just {
  Hypothesis,
  Axiom,              // instance of a tagged axiom
  Tautology,          // propositional consequence of the premise lines
  ModusPonens,        // premises (i, j) with line j = line i -> this
  EqualityIntro,      // phi = phi
  EqualityElim,       // (i, j): i is a = b, j is C[a/h], this is C[b/h]; no premises: the implication form
  MembershipEquality, // one |_ a /\ b _| of line i rewritten to a = b, for term patterns a, b
  DefinednessDef,     // unfolding of a in b as |_ a /\ b _|
  DefinednessIntro,   // |_ line i _|
  DerivedDelta,       // Delete, Decomposition, Orient or Elimination on the conjunct at `position`
  PropFpattForward,   // a /\ b  to  a /\ (a = b)
  PropFpattBackward,  // a /\ (a = b)  to  a /\ b
  EqSymmetry,         // a = b  to  b = a
};

inline constexpr std::string_view just_name(Just j) {
  switch (j) {
    case Just::Hypothesis: return "Hypothesis";
    case Just::Axiom: return "Axiom";
    case Just::Tautology: return "Tautology";
    case Just::ModusPonens: return "ModusPonens";
    case Just::EqualityIntro: return "EqualityIntro";
    case Just::EqualityElim: return "EqualityElim";
    case Just::MembershipEquality: return "MembershipEquality";
    case Just::DefinednessDef: return "DefinednessDef";
    case Just::DefinednessIntro: return "DefinednessIntro";
    case Just::DerivedDelta: return "DerivedDelta";
    case Just::PropFpattForward: return "PropFpattForward";
    case Just::PropFpattBackward: return "PropFpattBackward";
    case Just::EqSymmetry: return "EqSymmetry";
  }
  return "?";
}

inline std::optional<Just> just_from_name(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Just::EqSymmetry); ++i) {
    if (just_name(static_cast<Just>(i)) == s) return static_cast<Just>(i);
  }
  return std::nullopt;
}

/// Derived rules; the first four mirror the unification rules they simulate.
enum class DerivedRule { Delete = 1, Decomposition = 2, Orient = 3, Elimination = 4, FpattForward, FpattBackward };

inline std::string_view derived_rule_name(DerivedRule r) {
  switch (r) {
    case DerivedRule::Delete: return "Delete";
    case DerivedRule::Decomposition: return "Decomposition";
    case DerivedRule::Orient: return "Orient";
    case DerivedRule::Elimination: return "Elimination";
    case DerivedRule::FpattForward: return "FpattForward";
    case DerivedRule::FpattBackward: return "FpattBackward";
  }
  return "?";
}

struct Justification {
  Just rule = Just::Hypothesis;
  std::vector<std::size_t> premises;  // 1-based line indices
  std::string tag;                    // axiom tag or tautology schema id
  int delta = 0;                      // DerivedDelta: 1..4
  std::size_t position = 0;           // DerivedDelta: 0-based conjunct index after the frame
  std::optional<Pattern> context;     // EqualityElim
  std::optional<Variable> hole;       // EqualityElim
};

struct ProofLine {
  std::size_t index;
  Pattern formula;
  Justification why;
};

enum class CertMode { Stage1, Stage2, DerivedRuleExpansion };

inline std::string_view mode_name(CertMode m) {
  switch (m) {
    case CertMode::Stage1: return "stage1";
    case CertMode::Stage2: return "stage2";
    case CertMode::DerivedRuleExpansion: return "derived-rule-expansion";
  }
  return "?";
}

struct Certificate {
  std::vector<Pattern> hypotheses;
  std::vector<ProofLine> lines;
  std::optional<Pattern> conclusion;
  CertMode mode = CertMode::Stage1;

  /// Appends a line and returns its index.
  std::size_t add(Pattern formula, Justification why) {
    lines.push_back(ProofLine{lines.size() + 1, std::move(formula), std::move(why)});
    conclusion = lines.back().formula;
    return lines.size();
  }

  const Pattern& formula(std::size_t index) const { return lines.at(index - 1).formula; }
};

// ---------------------------------------------------------------------------
// JSON.

inline nlohmann::json to_json(const Justification& j) {
  nlohmann::json out{{"rule", just_name(j.rule)}, {"premises", j.premises}};
  if (!j.tag.empty()) out["tag"] = j.tag;
  if (j.rule == Just::DerivedDelta) {
    out["delta"] = j.delta;
    out["position"] = j.position;
  }
  if (j.context) out["context"] = to_string(*j.context, PrintStyle::Qualified);
  if (j.hole) out["hole"] = j.hole->name + ":" + j.hole->sort.name;
  return out;
}

inline nlohmann::json to_json(const Certificate& c) {
  nlohmann::json hyps = nlohmann::json::array();
  for (const auto& h : c.hypotheses) hyps.push_back(to_string(h, PrintStyle::Qualified));
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& l : c.lines) {
    lines.push_back({{"index", l.index}, {"formula", to_string(l.formula, PrintStyle::Qualified)}, {"justification", to_json(l.why)}});
  }
  nlohmann::json out{{"mode", mode_name(c.mode)}, {"hypotheses", hyps}, {"lines", lines}};
  out["conclusion"] = c.conclusion ? nlohmann::json(to_string(*c.conclusion, PrintStyle::Qualified)) : nlohmann::json();
  return out;
}

/// Reads a certificate. Unknown rule names raise ParseError.
inline Certificate certificate_from_json(const Signature& sig, const nlohmann::json& in) {
  try {
    Certificate c;
    std::string mode = in.at("mode").get<std::string>();
    if (mode == "stage1") c.mode = CertMode::Stage1;
    else if (mode == "stage2") c.mode = CertMode::Stage2;
    else if (mode == "derived-rule-expansion") c.mode = CertMode::DerivedRuleExpansion;
    else throw ParseError("unknown certificate mode " + mode);
    for (const auto& h : in.at("hypotheses")) c.hypotheses.push_back(parse_pattern(sig, h.get<std::string>()));
    for (const auto& l : in.at("lines")) {
      const auto& jj = l.at("justification");
      Justification j;
      std::string rule = jj.at("rule").get<std::string>();
      auto r = just_from_name(rule);
      if (!r) throw ParseError("unsupported rule " + rule);
      j.rule = *r;
      j.premises = jj.value("premises", std::vector<std::size_t>{});
      j.tag = jj.value("tag", std::string{});
      j.delta = jj.value("delta", 0);
      j.position = jj.value("position", std::size_t{0});
      if (jj.contains("context")) j.context = parse_pattern(sig, jj.at("context").get<std::string>());
      if (jj.contains("hole")) {
        std::string h = jj.at("hole").get<std::string>();
        auto colon = h.find(':');
        if (colon == std::string::npos) throw ParseError("hole must be written name:Sort");
        j.hole = Variable{h.substr(0, colon), Sort{h.substr(colon + 1)}};
      }
      c.lines.push_back(ProofLine{l.at("index").get<std::size_t>(), parse_pattern(sig, l.at("formula").get<std::string>()), j});
    }
    if (!in.at("conclusion").is_null()) c.conclusion = parse_pattern(sig, in.at("conclusion").get<std::string>());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Text rendering.

inline std::string roman(std::size_t n) {
  static const std::pair<std::size_t, const char*> table[] = {{1000, "m"}, {900, "cm"}, {500, "d"}, {400, "cd"},
                                                              {100, "c"},  {90, "xc"},  {50, "l"},  {40, "xl"},
                                                              {10, "x"},   {9, "ix"},   {5, "v"},   {4, "iv"},
                                                              {1, "i"}};
  std::string out;
  for (const auto& [v, s] : table) {
    while (n >= v) {
      out += s;
      n -= v;
    }
  }
  return out;
}

inline std::string justification_label(const Justification& j) {
  std::string refs;
  for (auto p : j.premises) refs += (refs.empty() ? "" : ", ") + roman(p);
  auto with = [&](std::string head) { return refs.empty() ? head : head + ": " + refs; };
  switch (j.rule) {
    case Just::Hypothesis: return "hypothesis";
    case Just::Axiom: return "axiom " + j.tag;
    case Just::Tautology: return with(j.tag.empty() ? "propositional" : "propositional (" + j.tag + ")");
    case Just::ModusPonens: return with("modus ponens");
    case Just::EqualityIntro: return "equality introduction";
    case Just::EqualityElim: return with("equality elimination");
    case Just::MembershipEquality: return with("membership equality");
    case Just::DefinednessDef: return with("definition of in");
    case Just::DefinednessIntro: return with("definedness");
    case Just::DerivedDelta: return with(std::string(derived_rule_name(static_cast<DerivedRule>(j.delta))));
    case Just::PropFpattForward: return with("functional conjunction (->)");
    case Just::PropFpattBackward: return with("functional conjunction (<-)");
    case Just::EqSymmetry: return with("symmetry of =");
  }
  return "?";
}

inline std::string render_text(const Certificate& c) {
  std::vector<std::string> nums, forms, whys;
  std::size_t wn = 0, wf = 0;
  for (const auto& l : c.lines) {
    nums.push_back(roman(l.index));
    forms.push_back(to_string(l.formula));
    whys.push_back(justification_label(l.why));
    wn = std::max(wn, nums.back().size());
    wf = std::max(wf, forms.back().size());
  }
  std::string out = "# " + std::string(mode_name(c.mode)) + "\n";
  for (std::size_t i = 0; i < c.lines.size(); ++i) {
    out += nums[i] + std::string(wn - nums[i].size() + 2, ' ') + forms[i] + std::string(wf - forms[i].size() + 4, ' ') +
           whys[i] + "\n";
  }
  return out;
}

}  // namespace mlunify
