#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dopt/model.hpp"

namespace dopt {

// Coefficients c_0..c_max_degree of
//   N(t) = prod_{i not in S} (1 + w_i t) * det(A_S + sum_{i not in S} w_i t / (1 + w_i t) a_i a_i^T),
// where A_S = sum_{i in S} a_i a_i^T. c_r = sum over r-subsets U of the
// complement of prod_U w * det(A_S + A_U). N is evaluated on a circle and each
// coefficient is recovered at its own radius (see symfun::contour_coefficients).
std::vector<double> completion_coefficients(const Instance& inst, std::span<const double> w,
                                            std::span<const std::size_t> base,
                                            std::size_t max_degree);

// E[det(sum_{i in S} a_i a_i^T) | base in S] under Pr[S] ~ prod_{j in S} x_j, |S| = k.
// Throws UnreachableCondition when a member of base has weight 0 or no completion
// has positive weight.
double cond_exp_proportional(const Instance& inst, const FractionalDesign& frac,
                             std::span<const std::size_t> base);

// Same, under independent inclusion with probability x_i/(1+eps) conditioned on
// |S| <= k. Uses the odds z_i = x_i/(1+eps-x_i). Same unreachable rule for
// zero-weight members.
double cond_exp_asymptotic(const Instance& inst, const FractionalDesign& frac, double eps,
                           std::span<const std::size_t> base);

// E[det] when the multiset `base` fills |base| of the k draws and the other
// k-|base| draws are i.i.d. with Pr{i} = x_i/k:
//   sum_{r=0}^{min(k-s,m)} (k-s)! / (k^r (k-s-r)!) * [t^r] det(t M(x) + A_base).
double cond_exp_repetitions(const Instance& inst, const FractionalDesign& frac,
                            std::span<const std::size_t> base);

using ConditionalExpectationFn = std::function<double(std::span<const std::size_t>)>;

struct GreedyStep {
  std::vector<std::size_t> base;
  double base_value = 0.0;
  // One entry per index; NaN where the candidate is not allowed or unreachable.
  std::vector<double> candidate_values;
  std::size_t chosen = 0;
  bool leverage_fallback = false;
};

struct GreedyTrace {
  std::vector<GreedyStep> steps;
};

// Method of conditional expectations: starting from the empty set, add the
// candidate maximizing h(S + j) (lowest index on ties) until |S| = k. When every
// candidate value is zero the largest leverage score of A_S + 1e-8 I decides.
Design derandomize_greedy(const Instance& inst, bool allow_repeats,
                          const ConditionalExpectationFn& h, GreedyTrace* trace = nullptr);

Design derandomize_proportional(const Instance& inst, const FractionalDesign& frac,
                                GreedyTrace* trace = nullptr);
Design derandomize_asymptotic(const Instance& inst, const FractionalDesign& frac, double eps,
                              GreedyTrace* trace = nullptr);
Design derandomize_repetitions(const Instance& inst, const FractionalDesign& frac,
                               GreedyTrace* trace = nullptr);

}  // namespace dopt
