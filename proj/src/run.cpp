#include "dopt/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dopt/derand.hpp"
#include "dopt/sampling.hpp"
#include "json.hpp"

namespace dopt {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json certificate_json(const std::optional<ApproximationCertificate>& cert) {
  if (!cert) return nullptr;
  Json j;
  j["scheme"] = scheme_name(cert->scheme);
  j["alpha"] = cert->alpha;
  j["eps"] = optional_number(cert->eps);
  j["regime_threshold"] = optional_number(cert->regime_threshold);
  j["regime_floor"] = optional_number(cert->regime_floor);
  j["regime_met"] = cert->regime_met;
  return j;
}

std::optional<ApproximationCertificate> certificate_for(const Instance& inst, Scheme scheme,
                                                        double eps) {
  switch (scheme) {
    case Scheme::kProportional: return ratio_without_reps(inst.m(), inst.n(), inst.k(), eps);
    case Scheme::kAsymptotic: return ratio_asymptotic(inst.m(), inst.n(), inst.k(), eps);
    case Scheme::kRepetitions: {
      ApproximationCertificate c = ratio_with_reps(inst.m(), inst.k(), eps);
      c.n = inst.n();
      return c;
    }
  }
  return std::nullopt;
}

Design apply_scheme(const Instance& inst, const FractionalDesign& frac, SchemeChoice choice,
                    double eps, std::uint64_t seed) {
  if (choice.derandomized) {
    switch (choice.scheme) {
      case Scheme::kProportional: return derandomize_proportional(inst, frac);
      case Scheme::kAsymptotic: return derandomize_asymptotic(inst, frac, eps);
      case Scheme::kRepetitions: return derandomize_repetitions(inst, frac);
    }
  }
  switch (choice.scheme) {
    case Scheme::kProportional: return sample_proportional(frac, inst, {seed});
    case Scheme::kAsymptotic: return sample_bernoulli_fill(frac, inst, eps, {seed});
    case Scheme::kRepetitions: return sample_with_repetitions(frac, inst, {seed});
  }
  throw Error(ErrorCode::kInvalidParams, "unknown scheme");
}

Mode mode_of(Scheme scheme) {
  return scheme == Scheme::kRepetitions ? Mode::kWithRepetitions : Mode::kWithoutRepetitions;
}

}  // namespace

const char* family_name(Family family) {
  switch (family) {
    case Family::kGaussian: return "gaussian";
    case Family::kCorrelated: return "correlated";
    case Family::kDuplicatedBasis: return "duplicated-basis";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "gaussian") return Family::kGaussian;
  if (name == "correlated") return Family::kCorrelated;
  if (name == "duplicated-basis") return Family::kDuplicatedBasis;
  throw Error(ErrorCode::kParseError, "unknown family '" + name + "'");
}

Instance generate_instance(std::size_t m, std::size_t n, std::size_t k, Mode mode,
                           Family family, std::uint64_t seed) {
  if (!(m >= 1 && m <= k && k <= n)) {
    throw Error(ErrorCode::kInvalidParams, "need n >= k >= m >= 1");
  }
  CounterRng rng({seed});
  std::vector<std::vector<double>> vectors(n, std::vector<double>(m, 0.0));
  if (family == Family::kDuplicatedBasis) {
    for (std::size_t i = 0; i < n; ++i) vectors[i][i % m] = 1.0;
    return Instance(std::move(vectors), k, mode);
  }
  for (auto& row : vectors) {
    for (double& v : row) v = rng.next_gaussian();
  }
  if (family == Family::kCorrelated) {
    // Gram-Schmidt on a gaussian square gives a random orthogonal Q.
    std::vector<std::vector<double>> q(m, std::vector<double>(m));
    for (auto& col : q) {
      for (;;) {
        for (double& v : col) v = rng.next_gaussian();
        for (const auto* prev = q.data(); prev != &col; ++prev) {
          double dot = 0.0;
          for (std::size_t r = 0; r < m; ++r) dot += (*prev)[r] * col[r];
          for (std::size_t r = 0; r < m; ++r) col[r] -= dot * (*prev)[r];
        }
        double norm = 0.0;
        for (double v : col) norm += v * v;
        norm = std::sqrt(norm);
        if (norm > 1e-8) {
          for (double& v : col) v /= norm;
          break;
        }
      }
    }
    for (auto& row : vectors) {
      std::vector<double> mixed(m, 0.0);
      for (std::size_t c = 0; c < m; ++c) {
        double acc = 0.0;
        for (std::size_t r = 0; r < m; ++r) acc += row[r] * q[c][r];
        mixed[c] = acc / static_cast<double>(c + 1);
      }
      row = std::move(mixed);
    }
  }
  return Instance(std::move(vectors), k, mode);
}

std::string SchemeChoice::name() const {
  return std::string(derandomized ? "derand-" : "sample-") + scheme_name(scheme);
}

SchemeChoice parse_scheme(const std::string& name) {
  const auto dash = name.find('-');
  if (dash != std::string::npos) {
    const std::string kind = name.substr(0, dash);
    const std::string rest = name.substr(dash + 1);
    if (kind == "sample" || kind == "derand") {
      for (Scheme s : {Scheme::kProportional, Scheme::kAsymptotic, Scheme::kRepetitions}) {
        if (rest == scheme_name(s)) return {kind == "derand", s};
      }
    }
  }
  throw Error(ErrorCode::kParseError, "unknown scheme '" + name + "'");
}

std::vector<SchemeChoice> schemes_for_mode(Mode mode) {
  if (mode == Mode::kWithRepetitions) {
    return {{false, Scheme::kRepetitions}, {true, Scheme::kRepetitions}};
  }
  return {{false, Scheme::kProportional},
          {true, Scheme::kProportional},
          {false, Scheme::kAsymptotic},
          {true, Scheme::kAsymptotic}};
}

std::string run_solve(const Instance& inst, const SolveOptions& opts) {
  if (opts.trials == 0) throw Error(ErrorCode::kInvalidParams, "trials must be >= 1");
  if (!(opts.eps > 0.0 && opts.eps < 1.0)) {
    throw Error(ErrorCode::kInvalidParams, "eps must lie in (0, 1)");
  }
  const std::vector<SchemeChoice> schemes =
      opts.schemes.empty() ? schemes_for_mode(inst.mode()) : opts.schemes;
  for (const SchemeChoice& c : schemes) {
    if (mode_of(c.scheme) != inst.mode()) {
      throw Error(ErrorCode::kModeViolation,
                  c.name() + " does not apply to a " + mode_name(inst.mode()) + " instance");
    }
  }

  Json report;
  Json summary;
  summary["m"] = inst.m();
  summary["n"] = inst.n();
  summary["k"] = inst.k();
  summary["mode"] = mode_name(inst.mode());
  report["instance"] = summary;
  report["seed"] = opts.seed;
  report["eps"] = opts.eps;

  const auto solve_start = Clock::now();
  const FractionalDesign frac = solve_relaxation(inst, opts.solver);
  Json relax;
  relax["value"] = frac.value;
  relax["converged"] = frac.converged;
  relax["gap"] = frac.gap;
  relax["iterations"] = frac.iterations;
  relax["weights"] = frac.weights;
  relax["time_ms"] = elapsed_ms(solve_start);
  report["relaxation"] = relax;

  Json results = Json::array();
  for (const SchemeChoice& choice : schemes) {
    const auto start = Clock::now();
    const std::size_t trials = choice.derandomized ? 1 : opts.trials;
    Design best;
    best.value = -1.0;
    std::vector<double> objectives;
    for (std::size_t t = 0; t < trials; ++t) {
      Design d = apply_scheme(inst, frac, choice, opts.eps, opts.seed ^ t);
      objectives.push_back(d.value);
      if (d.value > best.value) best = std::move(d);
    }
    Json r;
    r["scheme"] = choice.name();
    r["members"] = best.members;
    r["objective"] = best.value;
    r["ratio"] = best.value / frac.value;
    r["certificate"] = certificate_json(certificate_for(inst, choice.scheme, opts.eps));
    r["trials"] = trials;
    r["trial_objectives"] = objectives;
    r["time_ms"] = elapsed_ms(start);
    results.push_back(std::move(r));
  }
  report["results"] = std::move(results);
  return report.dump(2) + "\n";
}

}  // namespace dopt
