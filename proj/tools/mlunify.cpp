#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mlunify/mlunify.hpp"

using namespace mlunify;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kSemantic = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string equation_text(const Equation& e) { return to_string(e.lhs) + " = " + to_string(e.rhs); }

std::string fail_label(Rule r) { return r == Rule::OccursCheck ? "occurs-check" : "symbol-clash"; }

nlohmann::json trace_json(const std::vector<TraceStep>& trace) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : trace) {
    nlohmann::json after = nlohmann::json::array();
    if (s.result.is_bottom()) {
      after = "bottom";
    } else {
      for (const auto& e : s.result.equations()) after.push_back(equation_text(e));
    }
    out.push_back({{"rule", rule_name(s.rule)},
                   {"equation", equation_text(s.selected)},
                   {"position", s.position},
                   {"problem_after", after}});
  }
  return out;
}

EvalOptions eval_options() {
  EvalOptions opts;
  if (const char* b = std::getenv("MLUNIFY_BUDGET")) {
    try {
      opts.budget = std::stoull(b);
    } catch (const std::exception&) {
      throw Error(std::string("MLUNIFY_BUDGET is not a number: ") + b);
    }
  }
  return opts;
}

struct UnifyArgs {
  std::string sig, t1, t2;
  bool trace = false;
  std::size_t max_steps = 10000;
};

int run_unify(const UnifyArgs& a) {
  Signature sig = parse_signature(read_file(a.sig));
  Pattern t1 = parse_term(sig, a.t1), t2 = parse_term(sig, a.t2);
  auto outcome = unify(t1, t2, UnifyOptions{a.max_steps});
  int code = kOk;
  const std::vector<TraceStep>* trace = nullptr;
  if (auto* s = std::get_if<Solved>(&outcome)) {
    std::cout << "MGU: " << to_string(s->mgu) << "\n";
    trace = &s->trace;
  } else {
    const auto& f = std::get<Failed>(outcome);
    std::cout << "FAIL: " << fail_label(f.reason) << " " << equation_text(f.witness) << "\n";
    trace = &f.trace;
    code = kSemantic;
  }
  if (a.trace) std::cout << trace_json(*trace).dump(2) << "\n";
  return code;
}

struct CertifyArgs {
  std::string sig, t1, t2, stage = "both", out;
  bool expand = false;
};

int run_certify(const CertifyArgs& a) {
  Signature sig = parse_signature(read_file(a.sig));
  Pattern t1 = parse_term(sig, a.t1), t2 = parse_term(sig, a.t2);
  auto outcome = unify(t1, t2);
  if (auto* f = std::get_if<Failed>(&outcome)) {
    std::cerr << "not unifiable: " << fail_label(f->reason) << " " << equation_text(f->witness) << "\n";
    return kSemantic;
  }
  const auto& solved = std::get<Solved>(outcome);
  GenOptions opts{a.expand};
  std::vector<std::pair<std::string, Certificate>> certs;
  if (a.stage == "1" || a.stage == "both") certs.emplace_back("stage1", gen_stage1(sig, t1, t2, outcome, opts));
  if (a.stage == "2" || a.stage == "both") certs.emplace_back("stage2", gen_stage2(sig, t1, t2, solved.mgu, opts));

  if (!a.out.empty()) {
    for (const auto& [name, c] : certs) {
      write_file(a.out + "." + name + ".json", to_json(c).dump(2) + "\n");
      write_file(a.out + "." + name + ".txt", render_text(c));
      std::cout << "wrote " << a.out << "." << name << ".json\n";
    }
    return kOk;
  }
  if (certs.size() == 1) {
    std::cout << to_json(certs[0].second).dump(2) << "\n";
  } else {
    nlohmann::json both;
    for (const auto& [name, c] : certs) both[name] = to_json(c);
    std::cout << both.dump(2) << "\n";
  }
  return kOk;
}

struct CheckArgs {
  std::string cert, sig;
  bool no_derived = false;
  std::size_t budget = 16;
};

int run_check(const CheckArgs& a) {
  Signature sig = parse_signature(read_file(a.sig));
  nlohmann::json in;
  try {
    in = nlohmann::json::parse(read_file(a.cert));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("certificate is not JSON: ") + e.what());
  }
  CheckerConfig cfg = default_config(sig);
  cfg.allow_derived = !a.no_derived;
  cfg.tautology_budget = a.budget;

  // A single certificate, or an object holding stage1 and stage2.
  std::vector<std::pair<std::string, nlohmann::json>> docs;
  if (in.contains("lines")) {
    docs.emplace_back("", in);
  } else {
    for (const char* k : {"stage1", "stage2"}) {
      if (in.contains(k)) docs.emplace_back(k, in.at(k));
    }
    if (docs.empty()) throw ParseError("no certificate found in " + a.cert);
  }
  bool all = true;
  nlohmann::json reports;
  for (const auto& [name, doc] : docs) {
    CheckReport r = verify(certificate_from_json(sig, doc), cfg);
    all = all && r.ok;
    if (name.empty()) reports = to_json(r);
    else reports[name] = to_json(r);
  }
  std::cout << reports.dump(2) << "\n";
  return all ? kOk : kError;
}

struct EvalArgs {
  std::string model, sig, pattern;
  std::size_t random_size = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> vals;
  std::vector<std::string> theorem1;
};

FiniteModel load_model(const EvalArgs& a) {
  if (!a.model.empty()) {
    if (a.sig.empty()) return parse_model(read_file(a.model));
    Signature sig = parse_signature(read_file(a.sig));
    return parse_model(read_file(a.model), &sig);
  }
  if (a.sig.empty()) throw Error("--random-model needs --sig");
  Signature sig = parse_signature(read_file(a.sig));
  try {
    return random_injective_model(sig, a.random_size, a.seed);
  } catch (const NoInjectiveInterpretation& e) {
    // Fall back to smaller carriers on which every injective symbol fits.
    auto sizes = feasible_carrier_sizes(sig, a.random_size, a.seed);
    if (!sizes) throw;
    std::cerr << "note: " << e.what() << "; using smaller carriers\n";
    return random_injective_model(sig, *sizes, a.seed);
  }
}

int run_eval(const EvalArgs& a) {
  if (a.model.empty() && a.random_size == 0) throw Error("give --model or --random-model");
  FiniteModel m = load_model(a);
  const Signature& sig = m.signature();
  EvalOptions opts = eval_options();

  if (!a.theorem1.empty()) {
    Pattern t1 = parse_term(sig, a.theorem1[0]), t2 = parse_term(sig, a.theorem1[1]);
    auto outcome = unify(t1, t2);
    if (auto* f = std::get_if<Failed>(&outcome)) {
      std::cout << "NOT UNIFIABLE: " << fail_label(f->reason) << " " << equation_text(f->witness) << "\n";
      return kSemantic;
    }
    bool ok = soundness_holds(m, t1, t2, std::get<Solved>(outcome).mgu, opts);
    std::cout << (ok ? "EQUIVALENT" : "NOT EQUIVALENT") << "\n";
    return ok ? kOk : kSemantic;
  }

  if (a.pattern.empty()) throw Error("no pattern given");
  Pattern phi = parse_pattern(sig, a.pattern);
  if (a.vals.empty()) {
    bool ok = satisfies(m, phi, opts);
    std::cout << (ok ? "SATISFIED" : "NOT SATISFIED") << "\n";
    return ok ? kOk : kSemantic;
  }
  Valuation rho;
  auto fv = free_vars(phi);
  for (const auto& v : a.vals) {
    auto eq = v.find('=');
    if (eq == std::string::npos) throw Error("valuation entries are written x=a, got " + v);
    std::string name = v.substr(0, eq), elem = v.substr(eq + 1);
    bool found = false;
    for (const auto& x : fv) {
      if (x.name == name) {
        rho[x] = m.element(x.sort, elem);
        found = true;
      }
    }
    if (!found) throw Error("variable " + name + " does not occur free in the pattern");
  }
  std::cout << format_set(m, phi.sort(), eval(m, rho, phi)) << "\n";
  return kOk;
}

int run_axioms(const std::string& sig_path) {
  std::cout << export_axioms(generate_axioms(parse_signature(read_file(sig_path))));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unification in matching logic: solve, certify, check and model-check"};
  app.require_subcommand(1);

  UnifyArgs ua;
  auto* unify_cmd = app.add_subcommand("unify", "Compute a most general unifier");
  unify_cmd->add_option("signature", ua.sig, "Signature file")->required();
  unify_cmd->add_option("t1", ua.t1, "First term")->required();
  unify_cmd->add_option("t2", ua.t2, "Second term")->required();
  unify_cmd->add_flag("--trace", ua.trace, "Print the rule trace as JSON");
  unify_cmd->add_option("--max-steps", ua.max_steps, "Step budget");

  CertifyArgs ca;
  auto* certify_cmd = app.add_subcommand("certify", "Generate proof certificates");
  certify_cmd->add_option("signature", ca.sig, "Signature file")->required();
  certify_cmd->add_option("t1", ca.t1, "First term")->required();
  certify_cmd->add_option("t2", ca.t2, "Second term")->required();
  certify_cmd->add_option("--stage", ca.stage, "1, 2 or both")->check(CLI::IsMember({"1", "2", "both"}));
  certify_cmd->add_flag("--expand", ca.expand, "Inline derived-rule bodies");
  certify_cmd->add_option("--out", ca.out, "Write PREFIX.stageN.json and PREFIX.stageN.txt");

  CheckArgs ka;
  auto* check_cmd = app.add_subcommand("check", "Verify a certificate");
  check_cmd->add_option("certificate", ka.cert, "Certificate JSON")->required();
  check_cmd->add_option("signature", ka.sig, "Signature file")->required();
  check_cmd->add_flag("--no-derived", ka.no_derived, "Reject derived rules");
  check_cmd->add_option("--budget", ka.budget, "Maximum atoms in a tautology check");

  EvalArgs ea;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a pattern in a finite model");
  eval_cmd->add_option("pattern", ea.pattern, "Pattern");
  eval_cmd->add_option("--model", ea.model, "Model file");
  eval_cmd->add_option("--sig", ea.sig, "Signature file (for --random-model or models without one)");
  eval_cmd->add_option("--random-model", ea.random_size, "Random injective model with carriers of at most this size");
  eval_cmd->add_option("--seed", ea.seed, "Random seed");
  eval_cmd->add_option("--val", ea.vals, "Valuation entry x=a");
  eval_cmd->add_option("--theorem1", ea.theorem1, "Check the soundness equivalences for two terms")->expected(2);

  std::string axioms_sig;
  auto* axioms_cmd = app.add_subcommand("axioms", "Print the generated axioms");
  axioms_cmd->add_option("signature", axioms_sig, "Signature file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*unify_cmd) return run_unify(ua);
    if (*certify_cmd) return run_certify(ca);
    if (*check_cmd) return run_check(ka);
    if (*eval_cmd) return run_eval(ea);
    if (*axioms_cmd) return run_axioms(axioms_sig);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
