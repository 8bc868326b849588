#include "dopt/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dopt/linalg.hpp"

namespace dopt {

std::vector<double> linear_maximization_oracle(std::span<const double> grad, std::size_t k,
                                               Mode mode) {
  const std::size_t n = grad.size();
  std::vector<double> v(n, 0.0);
  if (n == 0 || k == 0) return v;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return grad[a] > grad[b]; });
  if (mode == Mode::kWithRepetitions) {
    v[order.front()] = static_cast<double>(k);
  } else {
    for (std::size_t i = 0; i < std::min(k, n); ++i) v[order[i]] = 1.0;
  }
  return v;
}

std::vector<double> log_det_gradient(const Instance& inst, std::span<const double> x) {
  return linalg::leverage_scores(inst, x);
}

namespace {

double gap_from_gradient(std::span<const double> grad, std::span<const double> x,
                         std::size_t k, Mode mode) {
  const std::vector<double> v = linear_maximization_oracle(grad, k, mode);
  double gap = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) gap += grad[i] * (v[i] - x[i]);
  return gap;
}

double bilinear(const linalg::Lu<double>& lu, std::span<const double> a,
                std::span<const double> b) {
  const std::vector<double> z = lu.solve(b);
  double s = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) s += a[r] * z[r];
  return s;
}

}  // namespace

double frank_wolfe_gap(const Instance& inst, std::span<const double> x, std::size_t k,
                       Mode mode) {
  return gap_from_gradient(log_det_gradient(inst, x), x, k, mode);
}

FractionalDesign solve_relaxation(const Instance& inst, const SolverConfig& cfg) {
  if (cfg.max_iters == 0 || !(cfg.rel_tol > 0.0) || cfg.ridge < 0.0) {
    throw Error(ErrorCode::kInvalidParams, "solver config: max_iters and rel_tol must be positive");
  }
  if (linalg::numerical_rank(inst.data(), inst.n(), inst.m()) < inst.m()) {
    throw Error(ErrorCode::kInfeasibleRank, "instance is rank deficient");
  }
  const std::size_t n = inst.n();
  const std::size_t m = inst.m();
  const std::size_t k = inst.k();
  const Mode mode = inst.mode();
  const bool capped = mode == Mode::kWithoutRepetitions;
  const double target = cfg.rel_tol * static_cast<double>(m);

  std::vector<double> x(n, static_cast<double>(k) / static_cast<double>(n));
  double ridge = 0.0;
  FractionalDesign out;
  out.mode = mode;
  out.converged = false;

  for (std::size_t iter = 0;; ++iter) {
    linalg::SquareMatrix gram = linalg::gram(inst, x);
    linalg::Lu<double> lu(gram);
    if (lu.singular()) {
      ridge = std::max(ridge, std::max(cfg.ridge, 1e-300));
      for (;;) {
        linalg::SquareMatrix reg = gram;
        for (std::size_t r = 0; r < m; ++r) reg(r, r) += ridge;
        lu = linalg::Lu<double>(reg);
        if (!lu.singular()) break;
        ridge *= 10.0;
      }
    } else if (ridge > 0.0 && iter % 100 == 0) {
      ridge *= 0.1;
      if (ridge < 1e-300) ridge = 0.0;
    }

    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = std::max(0.0, bilinear(lu, inst.vector(i), inst.vector(i)));
    }
    out.gap = gap_from_gradient(grad, x, k, mode);
    out.iterations = iter;
    if (out.gap <= target && ridge == 0.0) {
      out.converged = true;
      break;
    }
    if (iter >= cfg.max_iters) break;

    // Best improving edge: toward the free coordinate with largest gradient,
    // away from the support coordinate with smallest gradient.
    std::size_t up = n, down = n;
    for (std::size_t i = 0; i < n; ++i) {
      if ((!capped || x[i] < 1.0) && (up == n || grad[i] > grad[up])) up = i;
      if (x[i] > 0.0 && (down == n || grad[i] < grad[down])) down = i;
    }
    if (up == n || down == n || up == down || grad[up] <= grad[down]) {
      // No improving exchange exists; the gap is at rounding level.
      out.converged = ridge == 0.0;
      break;
    }
    const double max_step = capped ? std::min(x[down], 1.0 - x[up]) : x[down];
    const double alpha = grad[up];
    const double beta = grad[down];
    const double cross = bilinear(lu, inst.vector(up), inst.vector(down));
    // det(M + s(a_u a_u^T - a_d a_d^T)) / det M = 1 + s(alpha - beta) + s^2 (cross^2 - alpha beta)
    const double curvature = alpha * beta - cross * cross;
    double step = max_step;
    if (curvature > 0.0) step = std::min(max_step, (alpha - beta) / (2.0 * curvature));
    if (!(step > 0.0)) {
      out.converged = ridge == 0.0;
      break;
    }
    if (step >= max_step) {
      step = max_step;
      if (step == x[down]) {
        x[up] += x[down];
        x[down] = 0.0;
      } else {
        x[down] -= step;
        x[up] = 1.0;
      }
    } else {
      x[up] += step;
      x[down] -= step;
    }
  }

  if (capped) {
    for (double& v : x) v = std::clamp(v, 0.0, 1.0);
  } else {
    for (double& v : x) v = std::max(v, 0.0);
  }
  out.value = objective_of_weights(inst, x);
  out.weights = std::move(x);
  return out;
}

}  // namespace dopt
