#include <cmath>
#include <random>

#include "doctest.h"
#include "dopt/oracle.hpp"
#include "dopt/relaxation.hpp"
#include "support.hpp"

using dopt::Instance;
using dopt::Mode;

namespace {

double log_det_ref(const testref::Rows& rows, const std::vector<double>& x) {
  return std::log(testref::leibniz_det(testref::weighted_gram(rows, x)));
}

void check_feasible(const dopt::FractionalDesign& d, const Instance& inst) {
  double total = 0.0;
  for (double v : d.weights) {
    total += v;
    CHECK(v >= -1e-12);
    if (inst.mode() == Mode::kWithoutRepetitions) CHECK(v <= 1.0 + 1e-12);
  }
  CHECK(std::abs(total - static_cast<double>(inst.k())) <= 1e-9 * static_cast<double>(inst.k()));
}

}  // namespace

TEST_SUITE("relaxation") {

TEST_CASE("basis instance: the only feasible point") {
  const Instance basis({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3, Mode::kWithoutRepetitions);
  const auto d = dopt::solve_relaxation(basis);
  for (double v : d.weights) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("symmetric-3 instance in both modes") {
  for (Mode mode : {Mode::kWithoutRepetitions, Mode::kWithRepetitions}) {
    const Instance inst({{1, 0}, {0, 1}, {1, 1}}, 2, mode);
    const auto d = dopt::solve_relaxation(inst);
    CHECK(d.converged);
    CHECK(std::abs(d.value - std::sqrt(4.0 / 3.0)) <= 1e-5);
    for (double v : d.weights) CHECK(v == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
    CHECK(d.value == doctest::Approx(dopt::objective_of_weights(inst, d.weights)).epsilon(1e-15));
  }
}

TEST_CASE("linear maximization oracle examples") {
  const std::vector<double> g = {3, 1, 2};
  CHECK(dopt::linear_maximization_oracle(g, 2, Mode::kWithoutRepetitions) == std::vector<double>{1, 0, 1});
  CHECK(dopt::linear_maximization_oracle(g, 2, Mode::kWithRepetitions) == std::vector<double>{2, 0, 0});
  const std::vector<double> flat = {5, 5, 5};
  CHECK(dopt::linear_maximization_oracle(flat, 2, Mode::kWithoutRepetitions) == std::vector<double>{1, 1, 0});
  CHECK(dopt::linear_maximization_oracle(flat, 2, Mode::kWithRepetitions) == std::vector<double>{2, 0, 0});
}

TEST_CASE("rank deficient and bad config") {
  const Instance inst({{1, 0}, {0, 1}, {1, 1}}, 2, Mode::kWithoutRepetitions);
  dopt::SolverConfig cfg;
  cfg.max_iters = 0;
  try {
    dopt::solve_relaxation(inst, cfg);
    FAIL("expected InvalidParams");
  } catch (const dopt::Error& e) {
    CHECK(e.code() == dopt::ErrorCode::kInvalidParams);
  }
}

TEST_CASE("non-convergence is flagged, not thrown") {
  std::mt19937_64 gen(20);
  const Instance inst(testref::random_rows(gen, 30, 4), 6, Mode::kWithoutRepetitions);
  dopt::SolverConfig cfg;
  cfg.max_iters = 2;
  cfg.rel_tol = 1e-14;
  const auto d = dopt::solve_relaxation(inst, cfg);
  CHECK_FALSE(d.converged);
  check_feasible(d, inst);
}

TEST_CASE("feasibility, certified gap and dominance on random instances") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + trial % 3, n = m + 1 + trial % 6, k = m + trial % (n - m + 1);
    const Mode mode = trial % 2 ? Mode::kWithRepetitions : Mode::kWithoutRepetitions;
    const Instance inst(testref::random_rows(gen, n, m), k, mode);
    const dopt::SolverConfig cfg;
    const auto d = dopt::solve_relaxation(inst, cfg);
    CAPTURE(trial);
    CHECK(d.converged);
    check_feasible(d, inst);
    CHECK(d.gap <= cfg.rel_tol * static_cast<double>(m));
    CHECK(dopt::frank_wolfe_gap(inst, d.weights, k, mode) == doctest::Approx(d.gap).epsilon(1e-6));
    const auto best = dopt::oracle::brute_force_optimum(inst);
    CHECK(d.value >= best.value - 1e-8);
  }
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 gen(22);
  const double h = 1e-5;
  for (int point = 0; point < 20; ++point) {
    const std::size_t m = 2 + point % 3, n = m + 3;
    const auto rows = testref::random_rows(gen, n, m);
    const Instance inst(rows, m, Mode::kWithoutRepetitions);
    const auto x = testref::random_capped_weights(gen, n, m);
    const auto grad = dopt::log_det_gradient(inst, x);
    for (std::size_t i = 0; i < n; ++i) {
      auto up = x, down = x;
      up[i] += h;
      down[i] -= h;
      const double fd = (log_det_ref(rows, up) - log_det_ref(rows, down)) / (2 * h);
      CHECK(testref::rel_err(grad[i], fd) <= 1e-4);
    }
  }
}

}  // TEST_SUITE
