#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dopt/linalg.hpp"
#include "dopt/model.hpp"

// Brute-force references for small instances. Deliberately naive: Gram sums are
// accumulated directly and determinants use cofactor expansion, so nothing here
// shares a code path with the algorithms it checks.
namespace dopt::oracle {

inline constexpr double kMaxStates = 1e6;

// Exact distribution over designs (sorted member lists).
struct ExactLaw {
  std::vector<std::vector<std::size_t>> support;
  std::vector<double> probs;
  // Set for laws made of k i.i.d. draws (Pr{i} per draw); such laws condition by
  // fixing draws rather than by containment.
  std::vector<double> draw_probs;
  std::size_t draws = 0;

  double probability_of(std::span<const std::size_t> members) const;
};

double det_by_cofactor(const linalg::SquareMatrix& a);
double gram_determinant(const Instance& inst, std::span<const std::size_t> members);

// argmax f over all feasible designs; ties go to the lexicographically smallest.
Design brute_force_optimum(const Instance& inst);

// Pr[S] proportional to prod_{j in S} x_j over k-subsets, k = round(sum x).
ExactLaw exact_law_proportional(std::span<const double> x);
// k i.i.d. draws with Pr{i} = x_i / k.
ExactLaw exact_law_multinomial(std::span<const double> x, std::size_t k);
// Independent inclusion with probability x_i/(1+eps), conditioned on |S| <= k.
ExactLaw exact_law_bernoulli_conditioned(std::span<const double> x, double eps, std::size_t k);
// Uniform k-subset of the multiset with q x_i copies of index i.
ExactLaw exact_law_expanded(std::span<const double> x, std::size_t k, std::size_t q);

// Subset laws: sum_{R containing S} Pr[R] det(A_R) / Pr[S contained in R].
// Draw laws: S occupies |S| draws, the remaining draws follow draw_probs.
double exact_conditional_expectation(const ExactLaw& law, const Instance& inst,
                                     std::span<const std::size_t> base);

double expected_determinant(const ExactLaw& law, const Instance& inst);

// Pr[T contained in S] under a subset law.
double inclusion_probability(const ExactLaw& law, std::span<const std::size_t> subset);

double total_variation(const ExactLaw& a, const ExactLaw& b);

// Finite-q conditional expectation for the copy-expanded law, S fixed as
// specific copies: exact enumeration, and the coefficient formula
//   sum_r q^r C(qk-s-r, k-s-r) / C(qk-s, k-s) [t^r] det((t/q) sum_{copies not in S} a a^T + A_S).
double expanded_conditional_expectation(const Instance& inst, std::span<const double> x,
                                        std::size_t q, std::span<const std::size_t> base);
double expanded_conditional_expectation_formula(const Instance& inst,
                                                std::span<const double> x, std::size_t q,
                                                std::span<const std::size_t> base);

// Helpers for enumeration.
std::vector<std::vector<std::size_t>> all_subsets_of_size(std::size_t n, std::size_t r);
std::vector<std::vector<std::size_t>> all_multisets_of_size(std::size_t n, std::size_t r);

}  // namespace dopt::oracle
