#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dopt/model.hpp"

namespace dopt {

struct RngSeed {
  std::uint64_t seed = 0;
};

// SplitMix64 used as a counter-based stream: draw i returns
// mix64(seed + (i + 1) * 0x9E3779B97F4A7C15). Bit-identical on every platform.
class CounterRng {
 public:
  explicit CounterRng(RngSeed seed) : state_(seed.seed) {}

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double next_double();
  // Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t next_below(std::uint64_t bound);
  // Standard normal (Box-Muller, one value per call).
  double next_gaussian();

 private:
  std::uint64_t state_;
};

// Probability that the sequential scheme includes the first remaining index,
// given its weight `head`, the weights of the indices after it, and the number of
// slots still to fill: head * e_{need-1}(tail) / e_need(head, tail).
double proportional_inclusion_probability(double head, std::span<const double> tail,
                                          std::size_t need);

// Inclusion probability the sequential sampler uses for index j with `need`
// slots left: 1 once the remaining indices are all needed, 0 when nothing is.
double proportional_step_probability(std::span<const double> x, std::size_t j,
                                     std::size_t need);
// Probability that the sequential sampler returns exactly `members`, obtained by
// multiplying its step probabilities along the path.
double proportional_path_probability(std::span<const double> x, std::size_t k,
                                     std::span<const std::size_t> members);
// k-subset with Pr[S] proportional to prod_{j in S} x_j. Without repetitions only.
Design sample_proportional(const FractionalDesign& frac, const Instance& inst, RngSeed seed);

// Independent inclusion with probability x_i/(1+eps), redrawn while the set has
// more than k members (at most kMaxRejections times, then sample_proportional),
// then greedily completed to size k.
inline constexpr std::size_t kMaxRejections = 1000000;
Design sample_bernoulli_fill(const FractionalDesign& frac, const Instance& inst, double eps,
                             RngSeed seed);

// Result of the inflated-Bernoulli stage alone (before the greedy completion).
struct BernoulliDraw {
  std::vector<std::size_t> members;
  std::size_t attempts = 0;
  bool fell_back = false;
};
BernoulliDraw draw_bernoulli_stage(std::span<const double> x, std::size_t k, double eps,
                                   CounterRng& rng);

// Adds argmax_j f(S + j) (lowest index on ties) until |S| = k. When every
// candidate has f = 0 the largest leverage a_j^T (M + 1e-8 I)^{-1} a_j is used.
std::vector<std::size_t> greedy_fill(const Instance& inst, std::vector<std::size_t> members);

// k independent categorical draws with Pr{i} = x_i / k.
Design sample_with_repetitions(const FractionalDesign& frac, const Instance& inst,
                               RngSeed seed);

// Uniform k-subset of the multiset holding q x_i copies of each index i.
Design sample_expanded(const FractionalDesign& frac, const Instance& inst, std::size_t q,
                       RngSeed seed);

// q x_i rounded to integers; throws NotRationalized when some q x_i is off an
// integer by more than 1e-9 or the counts do not sum to q k.
std::vector<std::size_t> expanded_copy_counts(std::span<const double> x, std::size_t k,
                                              std::size_t q);

}  // namespace dopt
