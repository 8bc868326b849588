#include <cmath>
#include <random>

#include "doctest.h"
#include "dopt/linalg.hpp"
#include "dopt/model.hpp"
#include "support.hpp"

using dopt::Instance;
using dopt::Mode;
namespace la = dopt::linalg;

namespace {

la::SquareMatrix from_rows(const testref::Rows& rows) {
  la::SquareMatrix a(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows.size(); ++c) a(r, c) = rows[r][c];
  }
  return a;
}

testref::Rows to_rows(const la::SquareMatrix& a) {
  testref::Rows rows(a.order(), std::vector<double>(a.order()));
  for (std::size_t r = 0; r < a.order(); ++r) {
    for (std::size_t c = 0; c < a.order(); ++c) rows[r][c] = a(r, c);
  }
  return rows;
}

la::SquareMatrix random_square(std::mt19937_64& gen, std::size_t order) {
  return from_rows(testref::random_rows(gen, order, order));
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("gram examples") {
  const Instance inst({{1, 0}, {0, 1}, {1, 1}}, 2, Mode::kWithoutRepetitions);
  const std::vector<double> e3 = {0, 0, 1};
  const auto g3 = la::gram(inst, e3);
  CHECK(to_rows(g3) == testref::Rows{{1, 1}, {1, 1}});
  const std::vector<double> ones = {1, 1, 1};
  CHECK(to_rows(la::gram(inst, ones)) == testref::Rows{{2, 1}, {1, 2}});

  const Instance basis({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3, Mode::kWithoutRepetitions);
  const std::vector<double> all = {1, 1, 1};
  CHECK(to_rows(la::gram(basis, all)) == to_rows(la::SquareMatrix::identity(3)));
}

TEST_CASE("gram is exactly symmetric") {
  std::mt19937_64 gen(4);
  const Instance inst(testref::random_rows(gen, 9, 5), 5, Mode::kWithoutRepetitions);
  const std::vector<double> x = testref::random_capped_weights(gen, 9, 5);
  const auto g = la::gram(inst, x);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 5; ++c) CHECK(g(r, c) == g(c, r));
  }
}

TEST_CASE("determinant examples") {
  CHECK(la::determinant(la::SquareMatrix::identity(3)) == 1.0);
  CHECK(la::determinant(from_rows({{2, 0}, {0, 3}})) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(la::determinant(from_rows({{2, 1}, {1, 1}})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(la::determinant(from_rows({{0, 1}, {1, 0}})) == doctest::Approx(-1.0).epsilon(1e-15));
  // Singular beyond the 1e-12 pivot cutoff: exactly zero.
  CHECK(la::determinant(from_rows({{1, 2}, {2, 4 + 1e-14}})) == 0.0);
  CHECK(la::Lu<double>(from_rows({{1, 2}, {2, 4}})).singular());
}

TEST_CASE("determinant agrees with Leibniz expansion up to order 5") {
  std::mt19937_64 gen(5);
  for (std::size_t order = 1; order <= 5; ++order) {
    for (int trial = 0; trial < 20; ++trial) {
      const la::SquareMatrix a = random_square(gen, order);
      CHECK(testref::rel_err(la::determinant(a), testref::leibniz_det(to_rows(a))) < 1e-10);
    }
  }
}

TEST_CASE("det(AB) = det(A) det(B)") {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t order = 1 + trial % 6;
    const la::SquareMatrix a = random_square(gen, order), b = random_square(gen, order);
    const double lhs = la::determinant(la::multiply(a, b));
    CHECK(testref::rel_err(lhs, la::determinant(a) * la::determinant(b)) < 1e-9);
  }
}

TEST_CASE("LU solve") {
  std::mt19937_64 gen(7);
  const la::SquareMatrix a = random_square(gen, 6);
  const std::vector<double> b = {1, -2, 3, 0.5, 0, 4};
  const auto x = la::Lu<double>(a).solve(b);
  for (std::size_t r = 0; r < 6; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < 6; ++c) acc += a(r, c) * x[c];
    CHECK(acc == doctest::Approx(b[r]).epsilon(1e-10));
  }
}

TEST_CASE("leverage score examples") {
  const Instance basis({{1, 0}, {0, 1}}, 2, Mode::kWithoutRepetitions);
  const std::vector<double> ones = {1, 1};
  for (double s : la::leverage_scores(basis, ones)) CHECK(s == doctest::Approx(1.0));

  // M = (2/3)[[2,1],[1,2]] and M^{-1} = [[1,-1/2],[-1/2,1]], so every score is
  // 1, as it has to be at an interior optimum of the relaxation.
  const Instance inst({{1, 0}, {0, 1}, {1, 1}}, 2, Mode::kWithoutRepetitions);
  const std::vector<double> x(3, 2.0 / 3.0);
  const auto s = la::leverage_scores(inst, x);
  CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s[2] == doctest::Approx(1.0).epsilon(1e-12));

  // Off the optimum: x = (1, 1/2, 1/2), M = [[3/2,1/2],[1/2,1]], det 5/4,
  // M^{-1} = (4/5)[[1,-1/2],[-1/2,3/2]] gives scores (4/5, 6/5, 6/5).
  const std::vector<double> y = {1.0, 0.5, 0.5};
  const auto sy = la::leverage_scores(inst, y);
  CHECK(sy[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(sy[1] == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(sy[2] == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(x[0] * s[0] + x[1] * s[1] + x[2] * s[2] == doctest::Approx(2.0).epsilon(1e-12));

  std::vector<double> scaled(3, 2.0 * 2.0 / 3.0);
  const auto s2 = la::leverage_scores(inst, scaled);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s2[i] == doctest::Approx(s[i] / 2.0).epsilon(1e-12));

  const std::vector<double> only_first = {1, 0, 0};
  try {
    la::leverage_scores(inst, only_first);
    FAIL("expected SingularGram");
  } catch (const dopt::Error& e) {
    CHECK(e.code() == dopt::ErrorCode::kSingularGram);
  }
}

TEST_CASE("trace identity sum x_i score_i = m") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 1 + trial % 5, n = m + 4;
    const Instance inst(testref::random_rows(gen, n, m), m, Mode::kWithoutRepetitions);
    const auto x = testref::random_capped_weights(gen, n, m);
    const auto s = la::leverage_scores(inst, x);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(s[i] >= 0.0);
      total += x[i] * s[i];
    }
    CHECK(total == doctest::Approx(static_cast<double>(m)).epsilon(1e-8));
  }
}

TEST_CASE("numerical rank") {
  const std::vector<double> full = {1, 0, 0, 1, 1, 1};
  CHECK(la::numerical_rank(full, 3, 2) == 2);
  const std::vector<double> deficient = {1, 2, 2, 4, 3, 6};
  CHECK(la::numerical_rank(deficient, 3, 2) == 1);
  const std::vector<double> nearly = {1, 2, 2, 4 + 1e-13, 3, 6};
  CHECK(la::numerical_rank(nearly, 3, 2) == 1);
  const std::vector<double> zero(6, 0.0);
  CHECK(la::numerical_rank(zero, 3, 2) == 0);
}

}  // TEST_SUITE
