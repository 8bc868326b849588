#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dopt {

struct VerifyOptions {
  std::size_t max_n = 8;
  std::size_t max_m = 3;
  std::size_t max_k = 6;
  std::size_t num_instances = 50;
  std::uint64_t seed = 0;
  // Negative control: perturb the proportional conditional expectation by a
  // relative 1e-6 before it is compared with the oracle.
  bool corrupt_h = false;
};

struct CheckTally {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  // Largest violation seen, in the check's own units (0 when none).
  double worst = 0.0;
};

struct VerifySummary {
  std::size_t instances = 0;
  std::vector<CheckTally> checks;
  // One line per failed (instance, check), naming the instance seed for replay.
  std::vector<std::string> failures;

  bool ok() const;
  std::string to_json() const;
  std::string table() const;
};

// Randomized oracle-backed property suite: Cauchy-Binet identities, relaxation
// feasibility and dominance, the sequential sampling law, positive correlation,
// conditional-expectation agreement for all three schemes, greedy monotonicity
// and the guarantee floors. Every check runs once per instance.
VerifySummary run_verify(const VerifyOptions& opts);

}  // namespace dopt
