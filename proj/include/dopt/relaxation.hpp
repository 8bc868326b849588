#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dopt/model.hpp"

namespace dopt {

struct SolverConfig {
  std::size_t max_iters = 2000;
  // Stop once the Frank-Wolfe gap on log det is <= rel_tol * m.
  double rel_tol = 1e-7;
  // Ridge added to M(x) while it is singular at the current iterate.
  double ridge = 1e-8;
};

// Maximizes log det(sum_i x_i a_i a_i^T) over {sum x = k, x >= 0} (and x <= 1
// without repetitions). Pairwise Frank-Wolfe: each iteration moves mass from the
// support coordinate with the smallest gradient to the free coordinate with the
// largest, with an exact line search along that edge. The returned gap is the
// classic Frank-Wolfe gap <grad, v - x> for the vertex v of
// linear_maximization_oracle.
FractionalDesign solve_relaxation(const Instance& inst, const SolverConfig& cfg = {});

// Vertex of the feasible region maximizing <grad, v>. Ties go to the lowest index.
std::vector<double> linear_maximization_oracle(std::span<const double> grad, std::size_t k,
                                               Mode mode);

// Gradient of log det M(x): the leverage scores a_i^T M(x)^{-1} a_i.
std::vector<double> log_det_gradient(const Instance& inst, std::span<const double> x);

// <grad, v - x> at x.
double frank_wolfe_gap(const Instance& inst, std::span<const double> x, std::size_t k,
                       Mode mode);

}  // namespace dopt
