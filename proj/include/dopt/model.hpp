#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dopt/error.hpp"

namespace dopt {

enum class Mode { kWithoutRepetitions, kWithRepetitions };

const char* mode_name(Mode mode);
Mode parse_mode(const std::string& name);

// A D-optimal design problem: n experiment vectors in R^m, budget k.
// Immutable once constructed; construction validates n >= k >= m >= 1,
// finite entries and full column rank of the n x m design matrix.
class Instance {
 public:
  Instance(std::vector<std::vector<double>> vectors, std::size_t k, Mode mode);

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return m_; }
  std::size_t k() const noexcept { return k_; }
  Mode mode() const noexcept { return mode_; }

  std::span<const double> vector(std::size_t i) const {
    return {data_.data() + i * m_, m_};
  }
  // Row-major n x m.
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t k_ = 0;
  Mode mode_ = Mode::kWithoutRepetitions;
  std::vector<double> data_;
};

// Continuous relaxation solution.
struct FractionalDesign {
  std::vector<double> weights;
  double value = 0.0;
  Mode mode = Mode::kWithoutRepetitions;
  bool converged = true;
  double gap = 0.0;
  std::size_t iterations = 0;
};

// Chosen experiments, sorted ascending; repeats only with repetitions.
struct Design {
  std::vector<std::size_t> members;
  double value = 0.0;

  std::size_t multiplicity(std::size_t i) const;
};

// [det(sum_{i in members} a_i a_i^T)]^{1/m}; 0 when the sum is singular.
double objective_of_design(const Instance& inst,
                           std::span<const std::size_t> members);

// [det(sum_i x_i a_i a_i^T)]^{1/m}; 0 when singular.
double objective_of_weights(const Instance& inst, std::span<const double> x);

// Sorts and validates the members against the instance mode, then evaluates f.
Design make_design(const Instance& inst, std::vector<std::size_t> members);

// {"m","n","k","mode","vectors"} as documented in docs/formats.md.
Instance instance_from_json(const std::string& text);
Instance load_instance(const std::string& path);
std::string instance_to_json(const Instance& inst);

}  // namespace dopt
