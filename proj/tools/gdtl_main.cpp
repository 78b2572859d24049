// gdtl: command-line driver for checking, normalizing, elaborating, and
// running .gdtl programs, plus the property suite.
//
// Exit codes: 0 success/value, 1 type error, 2 runtime error, 3 parse error,
// 4 fuel exhausted, 5 property counterexample found.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdtl/evidence.hpp"
#include "gdtl/harness.hpp"
#include "gdtl/parse.hpp"
#include "gdtl/pretty.hpp"
#include "gdtl/static_lang.hpp"
#include "gdtl/typecheck.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitTypeError = 1;
constexpr int kExitRuntimeErr = 2;
constexpr int kExitParseError = 3;
constexpr int kExitFuel = 4;
constexpr int kExitCounterexample = 5;

struct Options {
  bool jsonOut = false;
  bool traceOut = false;
  bool staticPipeline = false;
  long fuel = 100000;
  long normFuel = gdtl::kDefaultNormFuel;
  bool fuelSet = false;  // true when --fuel was passed explicitly
};

void emit(const Options& opt, const json& j, const std::string& human) {
  if (opt.jsonOut)
    std::cout << j.dump() << "\n";
  else if (!human.empty())
    std::cout << human << "\n";
}

int parseFailure(const Options& opt, const gdtl::ParseResult& r, const std::string& path) {
  for (const auto& d : r.diagnostics)
    std::cerr << path << ":" << d.line << ":" << d.column << ": " << d.message << "\n";
  if (opt.jsonOut) {
    std::string msg = r.diagnostics.empty() ? "parse error" : r.diagnostics.front().message;
    std::cout << json{{"status", "parse-error"}, {"error", {{"message", msg}}}}.dump() << "\n";
  }
  return kExitParseError;
}

int typeFailure(const Options& opt, const gdtl::TypeError& te) {
  std::cerr << "type error: " << te.what() << "\n";
  if (opt.jsonOut)
    std::cout << json{{"status", "type-error"}, {"error", {{"message", te.what()}}}}.dump()
              << "\n";
  return kExitTypeError;
}

int normFuelFailure(const Options& opt) {
  std::cerr << "fuel exhausted during normalization\n";
  if (opt.jsonOut)
    std::cout << json{{"status", "fuel"}, {"fuelUsed", opt.normFuel}}.dump() << "\n";
  return kExitFuel;
}

// Loads a file and returns its main expression, or an exit code on failure.
std::variant<gdtl::TermPtr, int> loadMain(const Options& opt, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << path << ": cannot open file\n";
    if (opt.jsonOut)
      std::cout << json{{"status", "parse-error"}, {"error", {{"message", "cannot open file"}}}}
                       .dump()
                << "\n";
    return kExitParseError;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  gdtl::ParseResult r = gdtl::parse(ss.str(), path);
  if (!r.ok()) return parseFailure(opt, r, path);
  if (!r.file->main) {
    std::cerr << path << ": file has no main expression\n";
    if (opt.jsonOut)
      std::cout
          << json{{"status", "parse-error"}, {"error", {{"message", "no main expression"}}}}
                 .dump()
          << "\n";
    return kExitParseError;
  }
  return r.file->main;
}

int cmdCheck(const Options& opt, const std::string& path) {
  auto loaded = loadMain(opt, path);
  if (auto* rc = std::get_if<int>(&loaded)) return *rc;
  gdtl::TermPtr t = std::get<gdtl::TermPtr>(loaded);
  try {
    gdtl::CanonPtr U;
    if (opt.staticPipeline) {
      if (!gdtl::slang::isStaticTerm(t))
        throw gdtl::TypeError("program is not in the static fragment");
      U = gdtl::slang::ssynthNorm(gdtl::Context{}, t).second;
    } else {
      U = gdtl::normSynth(gdtl::Context{}, t, opt.normFuel).second;
    }
    std::string ty = gdtl::prettyCanon(U);
    emit(opt, json{{"status", "ok"}, {"type", ty}}, ty);
    return kExitOk;
  } catch (const gdtl::TypeError& te) {
    return typeFailure(opt, te);
  } catch (const gdtl::FuelExhausted&) {
    return normFuelFailure(opt);
  }
}

int cmdNorm(const Options& opt, const std::string& path) {
  auto loaded = loadMain(opt, path);
  if (auto* rc = std::get_if<int>(&loaded)) return *rc;
  gdtl::TermPtr t = std::get<gdtl::TermPtr>(loaded);
  try {
    auto [u, U] = opt.staticPipeline
                      ? gdtl::slang::ssynthNorm(gdtl::Context{}, t)
                      : gdtl::normSynth(gdtl::Context{}, t, opt.normFuel);
    std::string val = gdtl::prettyCanon(u);
    emit(opt, json{{"status", "ok"}, {"value", val}, {"type", gdtl::prettyCanon(U)}}, val);
    return kExitOk;
  } catch (const gdtl::TypeError& te) {
    return typeFailure(opt, te);
  } catch (const gdtl::FuelExhausted&) {
    return normFuelFailure(opt);
  }
}

int cmdElab(const Options& opt, const std::string& path) {
  auto loaded = loadMain(opt, path);
  if (auto* rc = std::get_if<int>(&loaded)) return *rc;
  gdtl::TermPtr t = std::get<gdtl::TermPtr>(loaded);
  try {
    auto [e, U] = gdtl::elabSynth(gdtl::Context{}, t, opt.normFuel);
    std::string val = gdtl::prettyEv(e);
    emit(opt, json{{"status", "ok"}, {"value", val}, {"type", gdtl::prettyCanon(U)}}, val);
    return kExitOk;
  } catch (const gdtl::TypeError& te) {
    return typeFailure(opt, te);
  } catch (const gdtl::FuelExhausted&) {
    return normFuelFailure(opt);
  }
}

int cmdRun(const Options& opt, const std::string& path) {
  auto loaded = loadMain(opt, path);
  if (auto* rc = std::get_if<int>(&loaded)) return *rc;
  gdtl::TermPtr t = std::get<gdtl::TermPtr>(loaded);
  if (opt.staticPipeline) {
    try {
      if (!gdtl::slang::isStaticTerm(t))
        throw gdtl::TypeError("program is not in the static fragment");
      gdtl::slang::ssynthNorm(gdtl::Context{}, t);
      gdtl::slang::SStep out = gdtl::slang::srun(t, opt.fuel);
      if (out.cls == gdtl::slang::StepClass::Value) {
        std::string val = gdtl::prettyTerm(out.term);
        if (opt.traceOut) std::cout << "VALUE\n";
        emit(opt, json{{"status", "ok"}, {"value", val}}, val);
        return kExitOk;
      }
      if (opt.traceOut) std::cout << "FUEL\n";
      if (opt.jsonOut)
        std::cout << json{{"status", "fuel"}, {"fuelUsed", opt.fuel}}.dump() << "\n";
      std::cerr << "fuel exhausted\n";
      return kExitFuel;
    } catch (const gdtl::TypeError& te) {
      return typeFailure(opt, te);
    } catch (const gdtl::FuelExhausted&) {
      return normFuelFailure(opt);
    }
  }
  try {
    auto [e, U] = gdtl::elabSynth(gdtl::Context{}, t, opt.normFuel);
    auto trace = [&](const char* rule, const gdtl::EvTermPtr& state) {
      if (opt.traceOut) std::cout << rule << " | " << gdtl::prettyEv(state) << "\n";
    };
    gdtl::RunResult r = gdtl::run(e, opt.fuel, trace);
    switch (r.status) {
      case gdtl::RunResult::Value: {
        if (opt.traceOut) std::cout << "VALUE\n";
        std::string val = gdtl::prettyTerm(gdtl::stripEv(r.term));
        emit(opt, json{{"status", "ok"}, {"value", val}, {"steps", r.steps}}, val);
        return kExitOk;
      }
      case gdtl::RunResult::Err: {
        if (opt.traceOut) std::cout << "ERR\n";
        std::string left = r.errLeft ? gdtl::prettyCanon(r.errLeft) : "?";
        std::string right = r.errRight ? gdtl::prettyCanon(r.errRight) : "?";
        std::cerr << "runtime type error: ⟨" << left << "⟩ ⊓ ⟨" << right << "⟩ undefined\n";
        if (opt.jsonOut)
          std::cout << json{{"status", "err"}, {"error", {{"left", left}, {"right", right}}}}
                           .dump()
                    << "\n";
        return kExitRuntimeErr;
      }
      case gdtl::RunResult::Fuel:
      default: {
        if (opt.traceOut) std::cout << "FUEL\n";
        std::cerr << "fuel exhausted after " << r.steps << " steps\n";
        if (opt.jsonOut)
          std::cout << json{{"status", "fuel"}, {"fuelUsed", r.steps}}.dump() << "\n";
        return kExitFuel;
      }
    }
  } catch (const gdtl::TypeError& te) {
    return typeFailure(opt, te);
  } catch (const gdtl::FuelExhausted&) {
    return normFuelFailure(opt);
  }
}

int cmdProps(const Options& opt, long seed, long count) {
  gdtl::harness::Report rep = gdtl::harness::checkGuarantees(seed, count, opt.fuel);
  if (opt.jsonOut) {
    std::cout << rep.toJsonLines();
  } else {
    for (const auto& e : rep.entries) {
      std::cout << e.seed << " " << e.property << " "
                << (e.ok ? "ok" : "counterexample: " + e.counterexample) << "\n";
    }
    std::cout << rep.entries.size() << " checks, " << rep.counterexampleCount()
              << " counterexamples\n";
  }
  return rep.counterexampleCount() == 0 ? kExitOk : kExitCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gdtl: a gradual dependently-typed language"};
  app.require_subcommand(1);

  Options opt;
  if (const char* env = std::getenv("GDTL_FUEL")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) opt.fuel = v;
  }

  app.add_flag("--json", opt.jsonOut, "emit machine-readable JSON on stdout");
  auto* fuelOpt =
      app.add_option("--fuel", opt.fuel, "runtime step budget (default 100000)");
  app.add_option("--norm-fuel", opt.normFuel,
                 "normalization budget for type-level reduction (default 10000)");
  auto* staticFlag = app.add_flag("--static", opt.staticPipeline);
  staticFlag->group("");  // hidden from help

  std::string file;
  long seed = 0, count = 100;

  // Let global flags (--json, --fuel, ...) appear after the subcommand too.
  app.fallthrough();
  CLI::App* check = app.add_subcommand("check", "typecheck a file and print its type");
  check->fallthrough();
  check->add_option("FILE", file)->required();
  CLI::App* norm = app.add_subcommand("norm", "print the canonical normal form");
  norm->fallthrough();
  norm->add_option("FILE", file)->required();
  CLI::App* elab = app.add_subcommand("elab", "print the elaborated evidence term");
  elab->fallthrough();
  elab->add_option("FILE", file)->required();
  CLI::App* run = app.add_subcommand("run", "execute a file");
  run->fallthrough();
  run->add_option("FILE", file)->required();
  run->add_flag("--trace", opt.traceOut, "print one line per machine step");
  CLI::App* props = app.add_subcommand("props", "run the property suite");
  props->fallthrough();
  props->add_option("--seed", seed, "base seed (default 0)");
  props->add_option("--count", count, "number of generated cases (default 100)");

  CLI11_PARSE(app, argc, argv);
  opt.fuelSet = fuelOpt->count() > 0;
  (void)opt.fuelSet;  // the flag already overrode the env default via CLI11

  if (check->parsed()) return cmdCheck(opt, file);
  if (norm->parsed()) return cmdNorm(opt, file);
  if (elab->parsed()) return cmdElab(opt, file);
  if (run->parsed()) return cmdRun(opt, file);
  if (props->parsed()) return cmdProps(opt, seed, count);
  return kExitOk;
}
