#include "dopt/dopt.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "dopt/derand.hpp"
#include "dopt/model.hpp"
#include "dopt/relaxation.hpp"
#include "dopt/run.hpp"
#include "dopt/sampling.hpp"
#include "dopt/verify.hpp"

struct dopt_instance {
  dopt::Instance inst;
};

struct dopt_relaxation {
  dopt::FractionalDesign frac;
};

namespace {

thread_local std::string g_last_error;

dopt_status to_status(dopt::ErrorCode code) { return static_cast<dopt_status>(code); }

dopt_status fail(dopt_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes and the thread-local
// error message.
template <typename F>
dopt_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return DOPT_OK;
  } catch (const dopt::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DOPT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DOPT_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dopt::Mode to_mode(dopt_mode mode) {
  switch (mode) {
    case DOPT_WITHOUT_REPS: return dopt::Mode::kWithoutRepetitions;
    case DOPT_WITH_REPS: return dopt::Mode::kWithRepetitions;
  }
  throw dopt::Error(dopt::ErrorCode::kInvalidParams, "unknown mode");
}

dopt::SchemeChoice to_choice(dopt_scheme scheme) {
  switch (scheme) {
    case DOPT_SAMPLE_PROPORTIONAL: return {false, dopt::Scheme::kProportional};
    case DOPT_DERAND_PROPORTIONAL: return {true, dopt::Scheme::kProportional};
    case DOPT_SAMPLE_ASYMPTOTIC: return {false, dopt::Scheme::kAsymptotic};
    case DOPT_DERAND_ASYMPTOTIC: return {true, dopt::Scheme::kAsymptotic};
    case DOPT_SAMPLE_REPETITIONS: return {false, dopt::Scheme::kRepetitions};
    case DOPT_DERAND_REPETITIONS: return {true, dopt::Scheme::kRepetitions};
  }
  throw dopt::Error(dopt::ErrorCode::kInvalidParams, "unknown scheme");
}

#define DOPT_REQUIRE(ptr)                                                     \
  do {                                                                        \
    if ((ptr) == nullptr) return fail(DOPT_ERR_NULL_ARGUMENT, #ptr " is NULL"); \
  } while (0)

}  // namespace

extern "C" {

const char* dopt_last_error(void) { return g_last_error.c_str(); }

const char* dopt_status_name(dopt_status status) {
  switch (status) {
    case DOPT_OK: return "OK";
    case DOPT_ERR_NULL_ARGUMENT: return "NullArgument";
    case DOPT_ERR_INTERNAL: return "Internal";
    default: break;
  }
  if (status >= DOPT_ERR_INVALID_INDEX && status <= DOPT_ERR_IO) {
    return dopt::error_code_name(static_cast<dopt::ErrorCode>(status));
  }
  return "Unknown";
}

void dopt_string_free(char* s) { std::free(s); }

dopt_status dopt_instance_create(const double* vectors, size_t n, size_t m, size_t k,
                                 dopt_mode mode, dopt_instance** out) {
  DOPT_REQUIRE(vectors);
  DOPT_REQUIRE(out);
  return guarded([&] {
    std::vector<std::vector<double>> rows(n);
    for (size_t i = 0; i < n; ++i) rows[i].assign(vectors + i * m, vectors + (i + 1) * m);
    *out = new dopt_instance{dopt::Instance(std::move(rows), k, to_mode(mode))};
  });
}

dopt_status dopt_instance_from_json(const char* text, dopt_instance** out) {
  DOPT_REQUIRE(text);
  DOPT_REQUIRE(out);
  return guarded([&] { *out = new dopt_instance{dopt::instance_from_json(text)}; });
}

dopt_status dopt_instance_load(const char* path, dopt_instance** out) {
  DOPT_REQUIRE(path);
  DOPT_REQUIRE(out);
  return guarded([&] { *out = new dopt_instance{dopt::load_instance(path)}; });
}

dopt_status dopt_instance_to_json(const dopt_instance* inst, char** out) {
  DOPT_REQUIRE(inst);
  DOPT_REQUIRE(out);
  return guarded([&] { *out = copy_string(dopt::instance_to_json(inst->inst)); });
}

void dopt_instance_free(dopt_instance* inst) { delete inst; }

dopt_status dopt_instance_shape(const dopt_instance* inst, size_t* n, size_t* m, size_t* k,
                                dopt_mode* mode) {
  DOPT_REQUIRE(inst);
  if (n) *n = inst->inst.n();
  if (m) *m = inst->inst.m();
  if (k) *k = inst->inst.k();
  if (mode) {
    *mode = inst->inst.mode() == dopt::Mode::kWithRepetitions ? DOPT_WITH_REPS : DOPT_WITHOUT_REPS;
  }
  g_last_error.clear();
  return DOPT_OK;
}

dopt_status dopt_generate(size_t m, size_t n, size_t k, dopt_mode mode, const char* family,
                          uint64_t seed, dopt_instance** out) {
  DOPT_REQUIRE(family);
  DOPT_REQUIRE(out);
  return guarded([&] {
    *out = new dopt_instance{
        dopt::generate_instance(m, n, k, to_mode(mode), dopt::parse_family(family), seed)};
  });
}

dopt_status dopt_objective(const dopt_instance* inst, const size_t* members, size_t count,
                           double* value) {
  DOPT_REQUIRE(inst);
  DOPT_REQUIRE(value);
  if (count > 0) DOPT_REQUIRE(members);
  return guarded([&] {
    *value = dopt::objective_of_design(inst->inst, std::span<const size_t>(members, count));
  });
}

dopt_status dopt_objective_weights(const dopt_instance* inst, const double* x, size_t len,
                                   double* value) {
  DOPT_REQUIRE(inst);
  DOPT_REQUIRE(x);
  DOPT_REQUIRE(value);
  return guarded(
      [&] { *value = dopt::objective_of_weights(inst->inst, std::span<const double>(x, len)); });
}

dopt_status dopt_relax(const dopt_instance* inst, size_t max_iters, double rel_tol,
                       dopt_relaxation** out) {
  DOPT_REQUIRE(inst);
  DOPT_REQUIRE(out);
  return guarded([&] {
    dopt::SolverConfig cfg;
    if (max_iters > 0) cfg.max_iters = max_iters;
    if (rel_tol > 0.0) cfg.rel_tol = rel_tol;
    *out = new dopt_relaxation{dopt::solve_relaxation(inst->inst, cfg)};
  });
}

void dopt_relaxation_free(dopt_relaxation* relax) { delete relax; }

dopt_status dopt_relaxation_result(const dopt_relaxation* relax, double* weights, double* value,
                                   int* converged, double* gap) {
  DOPT_REQUIRE(relax);
  const auto& f = relax->frac;
  if (weights) std::copy(f.weights.begin(), f.weights.end(), weights);
  if (value) *value = f.value;
  if (converged) *converged = f.converged ? 1 : 0;
  if (gap) *gap = f.gap;
  g_last_error.clear();
  return DOPT_OK;
}

dopt_status dopt_round(const dopt_instance* inst, const dopt_relaxation* relax,
                       dopt_scheme scheme, double eps, uint64_t seed, size_t* members,
                       double* value) {
  DOPT_REQUIRE(inst);
  DOPT_REQUIRE(relax);
  DOPT_REQUIRE(members);
  return guarded([&] {
    const dopt::SchemeChoice choice = to_choice(scheme);
    const auto& in = inst->inst;
    const auto& f = relax->frac;
    dopt::Design d;
    if (choice.derandomized) {
      switch (choice.scheme) {
        case dopt::Scheme::kProportional: d = dopt::derandomize_proportional(in, f); break;
        case dopt::Scheme::kAsymptotic: d = dopt::derandomize_asymptotic(in, f, eps); break;
        case dopt::Scheme::kRepetitions: d = dopt::derandomize_repetitions(in, f); break;
      }
    } else {
      switch (choice.scheme) {
        case dopt::Scheme::kProportional: d = dopt::sample_proportional(f, in, {seed}); break;
        case dopt::Scheme::kAsymptotic: d = dopt::sample_bernoulli_fill(f, in, eps, {seed}); break;
        case dopt::Scheme::kRepetitions: d = dopt::sample_with_repetitions(f, in, {seed}); break;
      }
    }
    std::copy(d.members.begin(), d.members.end(), members);
    if (value) *value = d.value;
  });
}

void dopt_solve_options_default(dopt_solve_options* opts) {
  if (opts == nullptr) return;
  const dopt::SolveOptions defaults;
  opts->schemes = nullptr;
  opts->eps = defaults.eps;
  opts->trials = defaults.trials;
  opts->seed = defaults.seed;
  opts->rel_tol = defaults.solver.rel_tol;
  opts->max_iters = defaults.solver.max_iters;
}

dopt_status dopt_solve(const dopt_instance* inst, const dopt_solve_options* opts,
                       char** report_json) {
  DOPT_REQUIRE(inst);
  DOPT_REQUIRE(opts);
  DOPT_REQUIRE(report_json);
  return guarded([&] {
    dopt::SolveOptions so;
    if (opts->schemes != nullptr) {
      std::stringstream list(opts->schemes);
      std::string item;
      while (std::getline(list, item, ',')) {
        if (!item.empty()) so.schemes.push_back(dopt::parse_scheme(item));
      }
    }
    so.eps = opts->eps;
    so.trials = opts->trials;
    so.seed = opts->seed;
    so.solver.rel_tol = opts->rel_tol;
    so.solver.max_iters = opts->max_iters;
    if (!(so.solver.rel_tol > 0.0) || so.solver.max_iters == 0) {
      throw dopt::Error(dopt::ErrorCode::kInvalidParams, "rel_tol and max_iters must be positive");
    }
    *report_json = copy_string(dopt::run_solve(inst->inst, so));
  });
}

void dopt_verify_options_default(dopt_verify_options* opts) {
  if (opts == nullptr) return;
  const dopt::VerifyOptions defaults;
  opts->max_n = defaults.max_n;
  opts->max_m = defaults.max_m;
  opts->max_k = defaults.max_k;
  opts->num_instances = defaults.num_instances;
  opts->seed = defaults.seed;
  opts->corrupt_h = 0;
}

dopt_status dopt_verify(const dopt_verify_options* opts, int* passed, char** summary_json,
                        char** table) {
  DOPT_REQUIRE(opts);
  DOPT_REQUIRE(passed);
  return guarded([&] {
    dopt::VerifyOptions vo;
    vo.max_n = opts->max_n;
    vo.max_m = opts->max_m;
    vo.max_k = opts->max_k;
    vo.num_instances = opts->num_instances;
    vo.seed = opts->seed;
    vo.corrupt_h = opts->corrupt_h != 0;
    const dopt::VerifySummary summary = dopt::run_verify(vo);
    *passed = summary.ok() ? 1 : 0;
    std::unique_ptr<char, decltype(&std::free)> json(
        summary_json ? copy_string(summary.to_json()) : nullptr, &std::free);
    if (table) *table = copy_string(summary.table());
    if (summary_json) *summary_json = json.release();
  });
}

}  // extern "C"
