#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "acsolve/analysis.hpp"
#include "acsolve/desugar.hpp"
#include "acsolve/grounder.hpp"
#include "acsolve/interpretation.hpp"
#include "acsolve/parser.hpp"
#include "acsolve/printer.hpp"
#include "acsolve/provenance.hpp"
#include "acsolve/solver.hpp"

using namespace acsolve;

namespace {

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitRejected = 3;
constexpr int kExitBudget = 4;

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct Options {
  std::string mode = "strong";
  long maxModels = -1;
  size_t budgetInstances = 1000000;
  std::string format = "text";
  bool dumpGround = false;
};

SolveConfig solveConfig(const Options& o) {
  SolveConfig cfg;
  cfg.mode = o.mode == "weak" ? EqMode::Weak : EqMode::Strong;
  if (o.maxModels >= 0) cfg.maxModels = static_cast<size_t>(o.maxModels);
  if (const char* t = std::getenv("AC_SOLVE_THREADS")) cfg.threads = std::atoi(t);
  return cfg;
}

struct Prepared {
  Program program;
  AnalysisReport report;
  std::vector<Atom> edb;
};

Prepared prepare(const std::string& programPath, const std::string& edbPath) {
  Prepared p;
  p.program = desugarProgram(parseProgram(readFile(programPath)));
  if (!edbPath.empty()) p.edb = parseFacts(readFile(edbPath));
  p.report = checkSafety(p.program);
  return p;
}

// Ground and safe-decidable programs are solvable outright; safe-general
// ones go through the bounded value closure and may exhaust it.
void gateSolvable(const Prepared& p) {
  if (p.report.fragment == Fragment::Unsafe) {
    std::string detail = "program is unsafe";
    for (size_t i = 0; i < p.report.rules.size(); ++i)
      if (!p.report.rules[i].safe) {
        detail = "rule " + std::to_string(i + 1) + ": " + p.report.rules[i].violation;
        break;
      }
    throw UnsupportedError(detail + "; only safe programs are accepted");
  }
  if (p.report.fragment == Fragment::SafeGeneral) {
    std::cerr << "note: value invention or unrestricted head constraints present; "
                 "satisfiability is undecidable for this fragment in general. "
                 "Attempting the bounded value closure (the decidable fragment is "
                 "safe programs without value invention whose head constraints are "
                 "domain restricted).\n";
  }
}

void printModels(const SolveResult& res, const Options& opts) {
  if (opts.format == "json") {
    nlohmann::json j;
    j["satisfiable"] = !res.models.empty();
    j["models"] = nlohmann::json::array();
    for (const auto& m : res.models) {
      nlohmann::json jm = nlohmann::json::array();
      for (const auto& a : m) jm.push_back(a.str());
      j["models"].push_back(std::move(jm));
    }
    std::cout << j.dump(2) << '\n';
    return;
  }
  for (const auto& m : res.models) {
    bool first = true;
    for (const auto& a : m) {
      if (!first) std::cout << ' ';
      std::cout << a.str();
      first = false;
    }
    std::cout << '\n';
  }
  std::cout << (res.models.empty() ? "UNSATISFIABLE" : "SATISFIABLE") << '\n';
}

int runSolve(const std::string& file, const std::string& edb, const Options& opts) {
  Prepared p = prepare(file, edb);
  gateSolvable(p);
  GroundConfig gcfg;
  gcfg.instanceBudget = opts.budgetInstances;
  GroundProgram g = groundProgram(p.program, p.edb, gcfg);
  for (const auto& w : g.warnings) std::cerr << "warning: " << w << '\n';
  if (opts.dumpGround) std::cout << dumpGround(g);
  SolveResult res = enumerateEquilibrium(g, solveConfig(opts));
  printModels(res, opts);
  return res.models.empty() ? kExitUnsat : kExitSat;
}

int runCheck(const std::string& file, const std::string& edb,
             const std::string& modelFile, const Options& opts) {
  Prepared p = prepare(file, edb);
  if (p.report.fragment == Fragment::Unsafe)
    throw UnsupportedError("program is unsafe; model checking needs a safe program");
  NamedInterpretation ni = parseInterpretation(readFile(modelFile));
  if (ni.hereSection && ni.here != ni.there)
    throw UnsupportedError("equilibrium checking expects a total interpretation");
  GroundConfig gcfg;
  gcfg.instanceBudget = opts.budgetInstances;
  GroundProgram g = groundProgram(p.program, p.edb, gcfg);
  bool eq = checkEquilibrium(g, ni.there, solveConfig(opts));
  if (opts.format == "json") {
    nlohmann::json j;
    j["equilibrium"] = eq;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << (eq ? "equilibrium model" : "not an equilibrium model") << '\n';
  }
  return eq ? kExitSat : kExitUnsat;
}

int runAnalyze(const std::string& file, const std::string& edb, const Options& opts) {
  Prepared p = prepare(file, edb);
  std::cout << (opts.format == "json" ? p.report.toJson() + "\n" : p.report.toText());
  return 0;
}

int runSeq(const std::string& f1, const std::string& f2, const Options& opts) {
  Program p1 = parseProgram(readFile(f1));
  Program p2 = parseProgram(readFile(f2));
  for (const auto* p : {&p1, &p2}) {
    auto rep = checkSafety(desugarProgram(*p));
    if (rep.fragment == Fragment::Unsafe || rep.fragment == Fragment::SafeGeneral)
      throw UnsupportedError(
          "strong equivalence is decided for the ground and safe-decidable "
          "fragments only; it is undecidable once value invention is allowed");
  }
  SEResult r = strongEquivalence(p1, p2, solveConfig(opts));
  if (opts.format == "json") {
    nlohmann::json j;
    j["equivalent"] = r.equivalent;
    if (r.witness) {
      nlohmann::json w;
      w["here"] = nlohmann::json::array();
      for (const auto& a : r.witness->first) w["here"].push_back(a.str());
      w["there"] = nlohmann::json::array();
      for (const auto& a : r.witness->second) w["there"].push_back(a.str());
      w["satisfied_by"] = r.firstSatisfiesWitness ? "first" : "second";
      j["witness"] = std::move(w);
    }
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  if (r.equivalent) {
    std::cout << "strongly equivalent\n";
  } else {
    std::cout << "not strongly equivalent\n";
    std::cout << "witness (an HT-model of the "
              << (r.firstSatisfiesWitness ? "first" : "second") << " program only):\n";
    std::cout << printInterpretation(r.witness->first, r.witness->second);
  }
  return 0;
}

int runProv(const std::string& file, const std::string& edbPath,
            const std::string& ringName, long maxLeaves, const Options& opts) {
  const Semiring* ring = lookupSemiring(ringName);
  if (!ring) throw UnsupportedError("unknown semiring '" + ringName + "'");
  DatalogProgram d = parseDatalog(readFile(file));
  EdbLabels edb;
  if (!edbPath.empty()) edb = parseEdbLabels(readFile(edbPath), *ring);
  ProvenanceTable table = computeProvenance(d, edb, *ring, maxLeaves);
  std::cout << (opts.format == "json" ? table.toJson() + "\n" : table.toText());
  return table.converged ? 0 : kExitBudget;
}

int runGround(const std::string& file, const std::string& edb, const Options& opts) {
  Prepared p = prepare(file, edb);
  GroundConfig gcfg;
  gcfg.instanceBudget = opts.budgetInstances;
  GroundProgram g = groundProgram(p.program, p.edb, gcfg);
  for (const auto& w : g.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << dumpGround(g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ac-solve: answer set programming with algebraic constraints"};
  app.require_subcommand(1);

  Options opts;
  std::string file, file2, edb, modelFile;
  std::string ringName = "nat-inf";
  long maxLeaves = 20;

  auto addCommon = [&](CLI::App* cmd, bool withEdb = true) {
    cmd->add_option("--mode", opts.mode, "weak|strong equilibria")
        ->check(CLI::IsMember({"weak", "strong"}));
    cmd->add_option("--max-models", opts.maxModels, "stop after N models");
    cmd->add_option("--budget-instances", opts.budgetInstances,
                    "grounding instance budget");
    cmd->add_option("--format", opts.format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    if (withEdb) cmd->add_option("--edb", edb, "fact file");
  };

  auto* solve = app.add_subcommand("solve", "enumerate equilibrium models");
  solve->add_option("file", file, "program (.acp)")->required();
  addCommon(solve);
  solve->add_flag("--dump-ground", opts.dumpGround, "emit the ground program first");

  auto* check = app.add_subcommand("check", "verify an equilibrium model");
  check->add_option("file", file, "program (.acp)")->required();
  check->add_option("--model", modelFile, "interpretation file")->required();
  addCommon(check);

  auto* analyze = app.add_subcommand("analyze", "safety and fragment report");
  analyze->add_option("file", file, "program (.acp)")->required();
  addCommon(analyze);

  auto* seq = app.add_subcommand("seq", "decide strong equivalence");
  seq->add_option("file1", file, "first program")->required();
  seq->add_option("file2", file2, "second program")->required();
  addCommon(seq, false);

  auto* prov = app.add_subcommand("prov", "semiring provenance of a datalog program");
  prov->add_option("file", file, "datalog program (.dl)")->required();
  prov->add_option("--edb", edb, "edb label file (atom = value lines)");
  prov->add_option("--semiring", ringName, "provenance semiring");
  prov->add_option("--max-leaves", maxLeaves, "leaf-count bound");
  prov->add_option("--format", opts.format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* ground = app.add_subcommand("ground", "dump the ground program");
  ground->add_option("file", file, "program (.acp)")->required();
  addCommon(ground);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return runSolve(file, edb, opts);
    if (check->parsed()) return runCheck(file, edb, modelFile, opts);
    if (analyze->parsed()) return runAnalyze(file, edb, opts);
    if (seq->parsed()) return runSeq(file, file2, opts);
    if (prov->parsed()) return runProv(file, edb, ringName, maxLeaves, opts);
    if (ground->parsed()) return runGround(file, edb, opts);
  } catch (const ParseError& e) {
    std::cerr << "error: parse: " << e.what() << '\n';
    return kExitParse;
  } catch (const BudgetError& e) {
    std::cerr << "error: budget: " << e.what() << '\n';
    return kExitBudget;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: rejected: " << e.what() << '\n';
    return kExitRejected;
  } catch (const TypeError& e) {
    std::cerr << "error: rejected: " << e.what() << '\n';
    return kExitRejected;
  } catch (const EvalError& e) {
    std::cerr << "error: rejected: " << e.what() << '\n';
    return kExitRejected;
  } catch (const std::exception& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
