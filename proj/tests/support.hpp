#pragma once

// Test-side references. Nothing here calls into the library's linear algebra,
// symmetric functions or enumeration, so agreement is meaningful.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "dopt/model.hpp"

namespace testref {

using Rows = std::vector<std::vector<double>>;

// Leibniz formula over all permutations; fine up to order 6 or so.
inline double leibniz_det(const Rows& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1.0;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double total = 0.0;
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    double term = (inversions % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) term *= a[i][perm[i]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline Rows gram(const Rows& vectors, const std::vector<std::size_t>& members) {
  const std::size_t m = vectors.front().size();
  Rows g(m, std::vector<double>(m, 0.0));
  for (std::size_t i : members) {
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) g[r][c] += vectors[i][r] * vectors[i][c];
    }
  }
  return g;
}

inline Rows weighted_gram(const Rows& vectors, const std::vector<double>& x) {
  const std::size_t m = vectors.front().size();
  Rows g(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) g[r][c] += x[i] * vectors[i][r] * vectors[i][c];
    }
  }
  return g;
}

inline double gram_det(const Rows& vectors, const std::vector<std::size_t>& members) {
  return leibniz_det(gram(vectors, members));
}

// Subsets of {0..n-1} with exactly r members, by bitmask, in increasing mask order.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != r) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    out.push_back(s);
  }
  return out;
}

inline double elem_sym_brute(const std::vector<double>& w, std::size_t r) {
  double total = 0.0;
  for (const auto& s : subsets(w.size(), r)) {
    double p = 1.0;
    for (std::size_t i : s) p *= w[i];
    total += p;
  }
  return total;
}

// Pr[S] = prod_{S} x / sum over k-subsets, for a sorted k-subset S.
inline double eq5_probability(const std::vector<double>& x, std::size_t k,
                              const std::vector<std::size_t>& s) {
  double num = 1.0;
  for (std::size_t i : s) num *= x[i];
  return num / elem_sym_brute(x, k);
}

inline Rows random_rows(std::mt19937_64& gen, std::size_t n, std::size_t m) {
  std::normal_distribution<double> normal;
  Rows v(n, std::vector<double>(m));
  for (auto& row : v) {
    for (double& e : row) e = normal(gen);
  }
  return v;
}

// Random point of {sum x = k, 0 < x < 1} (k < n): random mass transfers between
// pairs, starting from the uniform point, keeping every entry in [0.02, 0.98].
inline std::vector<double> random_capped_weights(std::mt19937_64& gen, std::size_t n,
                                                 std::size_t k) {
  std::vector<double> x(n, static_cast<double>(k) / static_cast<double>(n));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int step = 0; step < 40 * static_cast<int>(n); ++step) {
    const std::size_t i = pick(gen), j = pick(gen);
    if (i == j) continue;
    const double room = std::min(0.98 - x[i], x[j] - 0.02);
    if (room <= 0.0) continue;
    const double t = room * u(gen);
    x[i] += t;
    x[j] -= t;
  }
  return x;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace testref
