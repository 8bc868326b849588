#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dopt/bounds.hpp"
#include "dopt/model.hpp"
#include "dopt/relaxation.hpp"

namespace dopt {

enum class Family { kGaussian, kCorrelated, kDuplicatedBasis };

const char* family_name(Family family);
Family parse_family(const std::string& name);

// gaussian: i.i.d. N(0,1) entries. correlated: gaussian rows times Q diag(1, 1/2,
// ..., 1/m) for a random rotation Q. duplicated-basis: a_i = e_{i mod m}.
// Deterministic in seed.
Instance generate_instance(std::size_t m, std::size_t n, std::size_t k, Mode mode,
                           Family family, std::uint64_t seed);

// A rounding scheme as named on the command line, e.g. "derand-proportional".
struct SchemeChoice {
  bool derandomized = false;
  Scheme scheme = Scheme::kProportional;
  std::string name() const;
};

SchemeChoice parse_scheme(const std::string& name);
// Every scheme usable in the given mode, samplers first.
std::vector<SchemeChoice> schemes_for_mode(Mode mode);

struct SolveOptions {
  // Empty means every scheme compatible with the instance mode.
  std::vector<SchemeChoice> schemes;
  // Inflation for the asymptotic scheme; also the regime parameter reported in
  // the other certificates.
  double eps = 0.5;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  SolverConfig solver;
};

// Solves the relaxation and rounds it with each requested scheme. The RunReport
// comes back as JSON text with a stable key order and a trailing newline.
// Throws ModeViolation for a scheme that does not fit the instance.
std::string run_solve(const Instance& inst, const SolveOptions& opts);

}  // namespace dopt
