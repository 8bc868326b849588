// Command-line front end over the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dopt/dopt.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

int report_status(dopt_status status) {
  std::cerr << "dopt: " << dopt_status_name(status) << ": " << dopt_last_error() << "\n";
  return status == DOPT_ERR_INTERNAL ? kExitInternal : kExitUsage;
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "dopt: cannot write " << out_path << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

// Owns a C string from the library.
struct CString {
  char* p = nullptr;
  ~CString() { dopt_string_free(p); }
};

struct InstanceHandle {
  dopt_instance* p = nullptr;
  ~InstanceHandle() { dopt_instance_free(p); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D-optimal design: relaxation, rounding and certificates"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a random instance as JSON");
  std::size_t gm = 2, gn = 8, gk = 4;
  std::string gmode = "without_reps", family = "gaussian", gout;
  std::uint64_t gseed = 0;
  gen->add_option("-m,--m", gm, "dimension")->capture_default_str();
  gen->add_option("-n,--n", gn, "number of experiments")->capture_default_str();
  gen->add_option("-k,--k", gk, "budget")->capture_default_str();
  gen->add_option("--mode", gmode, "without_reps | with_reps")
      ->check(CLI::IsMember({"without_reps", "with_reps"}))
      ->capture_default_str();
  gen->add_option("--family", family, "gaussian | correlated | duplicated-basis")
      ->check(CLI::IsMember({"gaussian", "correlated", "duplicated-basis"}))
      ->capture_default_str();
  gen->add_option("--seed", gseed, "RNG seed")->capture_default_str();
  gen->add_option("--out", gout, "output path (stdout when omitted)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve the relaxation and round it");
  std::string instance_path, sout;
  std::vector<std::string> schemes;
  dopt_solve_options sopts;
  dopt_solve_options_default(&sopts);
  solve->add_option("--instance", instance_path, "instance JSON")->required();
  solve->add_option("--scheme", schemes,
                    "sample-|derand- followed by proportional|asymptotic|repetitions; "
                    "repeatable; default: every scheme matching the mode")
      ->delimiter(',');
  solve->add_option("--eps", sopts.eps, "inflation for the asymptotic scheme")->capture_default_str();
  solve->add_option("--trials", sopts.trials, "best-of-T for samplers")->capture_default_str();
  solve->add_option("--seed", sopts.seed, "RNG seed; trial t uses seed xor t")->capture_default_str();
  solve->add_option("--rel-tol", sopts.rel_tol, "Frank-Wolfe gap tolerance (times m)")->capture_default_str();
  solve->add_option("--max-iters", sopts.max_iters, "solver iteration cap")->capture_default_str();
  solve->add_option("--out", sout, "report path (stdout when omitted)");

  // verify
  auto* verify = app.add_subcommand("verify", "run the oracle-backed property suite");
  dopt_verify_options vopts;
  dopt_verify_options_default(&vopts);
  bool as_json = false, inject = false;
  verify->add_option("--max-n", vopts.max_n, "largest n of a random instance")->capture_default_str();
  verify->add_option("--max-m", vopts.max_m, "largest dimension m")->capture_default_str();
  verify->add_option("--max-k", vopts.max_k, "largest budget k")->capture_default_str();
  verify->add_option("--instances", vopts.num_instances, "number of random instances")->capture_default_str();
  verify->add_option("--seed", vopts.seed, "base seed; instance i uses seed xor i")->capture_default_str();
  verify->add_flag("--json", as_json, "print the summary as JSON");
  verify->add_flag("--inject-fault", inject, "perturb H to check that the suite catches it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (gen->parsed()) {
    InstanceHandle inst;
    const dopt_mode mode = gmode == "with_reps" ? DOPT_WITH_REPS : DOPT_WITHOUT_REPS;
    if (dopt_status s = dopt_generate(gm, gn, gk, mode, family.c_str(), gseed, &inst.p)) {
      return report_status(s);
    }
    CString json;
    if (dopt_status s = dopt_instance_to_json(inst.p, &json.p)) return report_status(s);
    return emit(json.p, gout);
  }

  if (solve->parsed()) {
    InstanceHandle inst;
    if (dopt_status s = dopt_instance_load(instance_path.c_str(), &inst.p)) return report_status(s);
    std::string joined;
    for (const auto& s : schemes) joined += (joined.empty() ? "" : ",") + s;
    sopts.schemes = joined.c_str();
    CString report;
    if (dopt_status s = dopt_solve(inst.p, &sopts, &report.p)) return report_status(s);
    return emit(report.p, sout);
  }

  vopts.corrupt_h = inject ? 1 : 0;
  int passed = 0;
  CString json, table;
  if (dopt_status s = dopt_verify(&vopts, &passed, &json.p, &table.p)) return report_status(s);
  std::cout << (as_json ? json.p : table.p);
  return passed ? kExitOk : kExitVerifyFailed;
}
