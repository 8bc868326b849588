#include "dopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "dopt/bounds.hpp"
#include "dopt/symfun.hpp"

namespace dopt::oracle {

namespace {

void require_states(double count, const char* what) {
  if (count > kMaxStates) {
    throw Error(ErrorCode::kTooLarge,
                std::string(what) + ": " + std::to_string(count) + " states exceed the cap");
  }
}

double count_subsets(std::size_t n, std::size_t r) {
  return std::round(std::exp(log_binomial(static_cast<double>(n), static_cast<double>(r))));
}

double count_multisets(std::size_t n, std::size_t r) {
  if (n == 0) return r == 0 ? 1.0 : 0.0;
  return count_subsets(n + r - 1, r);
}

double log_factorial(std::size_t v) { return std::lgamma(static_cast<double>(v) + 1.0); }

std::size_t rounded_k(std::span<const double> x) {
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  return static_cast<std::size_t>(std::llround(total));
}

double cofactor_rec(const std::vector<double>& a, std::size_t order) {
  if (order == 1) return a[0];
  if (order == 2) return a[0] * a[3] - a[1] * a[2];
  double det = 0.0;
  std::vector<double> minor((order - 1) * (order - 1));
  for (std::size_t col = 0; col < order; ++col) {
    if (a[col] == 0.0) continue;
    std::size_t w = 0;
    for (std::size_t r = 1; r < order; ++r) {
      for (std::size_t c = 0; c < order; ++c) {
        if (c != col) minor[w++] = a[r * order + c];
      }
    }
    const double sign = (col % 2 == 0) ? 1.0 : -1.0;
    det += sign * a[col] * cofactor_rec(minor, order - 1);
  }
  return det;
}

}  // namespace

double ExactLaw::probability_of(std::span<const std::size_t> members) const {
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (std::equal(support[i].begin(), support[i].end(), members.begin(), members.end())) {
      return probs[i];
    }
  }
  return 0.0;
}

std::vector<std::vector<std::size_t>> all_subsets_of_size(std::size_t n, std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  if (r > n) return out;
  require_states(count_subsets(n, r), "subset enumeration");
  std::vector<std::size_t> cur(r);
  std::iota(cur.begin(), cur.end(), std::size_t{0});
  for (;;) {
    out.push_back(cur);
    std::size_t i = r;
    while (i > 0 && cur[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::vector<std::vector<std::size_t>> all_multisets_of_size(std::size_t n, std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  if (n == 0) {
    if (r == 0) out.emplace_back();
    return out;
  }
  require_states(count_multisets(n, r), "multiset enumeration");
  std::vector<std::size_t> cur(r, 0);
  for (;;) {
    out.push_back(cur);
    std::size_t i = r;
    while (i > 0 && cur[i - 1] == n - 1) --i;
    if (i == 0) break;
    const std::size_t v = cur[i - 1] + 1;
    for (std::size_t j = i - 1; j < r; ++j) cur[j] = v;
  }
  return out;
}

double det_by_cofactor(const linalg::SquareMatrix& a) {
  if (a.order() > 6) return linalg::Lu<double>(a).raw_determinant();
  return cofactor_rec(std::vector<double>(a.entries().begin(), a.entries().end()), a.order());
}

double gram_determinant(const Instance& inst, std::span<const std::size_t> members) {
  const std::size_t m = inst.m();
  linalg::SquareMatrix g(m);
  for (std::size_t i : members) {
    const auto a = inst.vector(i);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) g(r, c) += a[r] * a[c];
    }
  }
  return det_by_cofactor(g);
}

Design brute_force_optimum(const Instance& inst) {
  const bool repeats = inst.mode() == Mode::kWithRepetitions;
  const auto candidates = repeats ? all_multisets_of_size(inst.n(), inst.k())
                                  : all_subsets_of_size(inst.n(), inst.k());
  Design best;
  best.value = -1.0;
  for (const auto& c : candidates) {
    const double det = std::max(0.0, gram_determinant(inst, c));
    const double v = std::pow(det, 1.0 / static_cast<double>(inst.m()));
    if (v > best.value * (1.0 + 1e-12) || best.value < 0.0) {
      best.value = v;
      best.members = c;
    }
  }
  return best;
}

ExactLaw exact_law_proportional(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n > 12) throw Error(ErrorCode::kTooLarge, "exact laws need n <= 12");
  const std::size_t k = rounded_k(x);
  ExactLaw law;
  double total = 0.0;
  for (auto& s : all_subsets_of_size(n, k)) {
    double p = 1.0;
    for (std::size_t i : s) p *= x[i];
    if (p <= 0.0) continue;
    law.support.push_back(std::move(s));
    law.probs.push_back(p);
    total += p;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::kUnreachableCondition, "all subsets have weight 0");
  for (double& p : law.probs) p /= total;
  return law;
}

ExactLaw exact_law_multinomial(std::span<const double> x, std::size_t k) {
  const std::size_t n = x.size();
  if (n > 12) throw Error(ErrorCode::kTooLarge, "exact laws need n <= 12");
  ExactLaw law;
  law.draws = k;
  law.draw_probs.resize(n);
  for (std::size_t i = 0; i < n; ++i) law.draw_probs[i] = x[i] / static_cast<double>(k);
  for (auto& s : all_multisets_of_size(n, k)) {
    std::vector<std::size_t> count(n, 0);
    for (std::size_t i : s) ++count[i];
    double logp = log_factorial(k);
    bool zero = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (count[i] == 0) continue;
      if (law.draw_probs[i] <= 0.0) {
        zero = true;
        break;
      }
      logp += static_cast<double>(count[i]) * std::log(law.draw_probs[i]) - log_factorial(count[i]);
    }
    if (zero) continue;
    law.support.push_back(std::move(s));
    law.probs.push_back(std::exp(logp));
  }
  return law;
}

ExactLaw exact_law_bernoulli_conditioned(std::span<const double> x, double eps, std::size_t k) {
  const std::size_t n = x.size();
  if (n > 12) throw Error(ErrorCode::kTooLarge, "exact laws need n <= 12");
  ExactLaw law;
  double total = 0.0;
  for (std::size_t size = 0; size <= std::min(k, n); ++size) {
    for (auto& s : all_subsets_of_size(n, size)) {
      std::vector<bool> in(n, false);
      for (std::size_t i : s) in[i] = true;
      double p = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double q = x[i] / (1.0 + eps);
        p *= in[i] ? q : 1.0 - q;
      }
      if (p <= 0.0) continue;
      law.support.push_back(std::move(s));
      law.probs.push_back(p);
      total += p;
    }
  }
  for (double& p : law.probs) p /= total;
  return law;
}

ExactLaw exact_law_expanded(std::span<const double> x, std::size_t k, std::size_t q) {
  const std::size_t n = x.size();
  std::vector<std::size_t> copies(n);
  std::size_t total_copies = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scaled = static_cast<double>(q) * x[i];
    if (std::abs(scaled - std::round(scaled)) > 1e-9) {
      throw Error(ErrorCode::kNotRationalized, "q x_i must be integral");
    }
    copies[i] = static_cast<std::size_t>(std::llround(scaled));
    total_copies += copies[i];
  }
  const double log_all = log_binomial(static_cast<double>(total_copies), static_cast<double>(k));
  ExactLaw law;
  for (auto& s : all_multisets_of_size(n, k)) {
    std::vector<std::size_t> count(n, 0);
    for (std::size_t i : s) ++count[i];
    double logp = -log_all;
    bool zero = false;
    for (std::size_t i = 0; i < n && !zero; ++i) {
      if (count[i] > copies[i]) zero = true;
      else logp += log_binomial(static_cast<double>(copies[i]), static_cast<double>(count[i]));
    }
    if (zero) continue;
    law.support.push_back(std::move(s));
    law.probs.push_back(std::exp(logp));
  }
  return law;
}

namespace {

bool contains_multiset(const std::vector<std::size_t>& outer,
                       std::span<const std::size_t> inner_sorted) {
  return std::includes(outer.begin(), outer.end(), inner_sorted.begin(), inner_sorted.end());
}

}  // namespace

double exact_conditional_expectation(const ExactLaw& law, const Instance& inst,
                                     std::span<const std::size_t> base) {
  std::vector<std::size_t> sorted(base.begin(), base.end());
  std::sort(sorted.begin(), sorted.end());
  if (!law.draw_probs.empty()) {
    if (sorted.size() > law.draws) {
      throw Error(ErrorCode::kInvalidParams, "conditioning multiset larger than the draw count");
    }
    for (std::size_t i : sorted) {
      if (!(law.draw_probs[i] > 0.0)) {
        throw Error(ErrorCode::kUnreachableCondition, "conditioning on a zero-probability draw");
      }
    }
    const std::size_t rest = law.draws - sorted.size();
    const std::size_t n = law.draw_probs.size();
    double value = 0.0;
    for (const auto& u : all_multisets_of_size(n, rest)) {
      std::vector<std::size_t> count(n, 0);
      for (std::size_t i : u) ++count[i];
      double logp = log_factorial(rest);
      bool zero = false;
      for (std::size_t i = 0; i < n && !zero; ++i) {
        if (count[i] == 0) continue;
        if (law.draw_probs[i] <= 0.0) zero = true;
        else logp += static_cast<double>(count[i]) * std::log(law.draw_probs[i]) - log_factorial(count[i]);
      }
      if (zero) continue;
      std::vector<std::size_t> full = sorted;
      full.insert(full.end(), u.begin(), u.end());
      value += std::exp(logp) * gram_determinant(inst, full);
    }
    return value;
  }
  double mass = 0.0;
  double value = 0.0;
  for (std::size_t i = 0; i < law.support.size(); ++i) {
    if (!contains_multiset(law.support[i], sorted)) continue;
    mass += law.probs[i];
    value += law.probs[i] * gram_determinant(inst, law.support[i]);
  }
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::kUnreachableCondition, "conditioning event has probability 0");
  }
  return value / mass;
}

double expected_determinant(const ExactLaw& law, const Instance& inst) {
  double value = 0.0;
  for (std::size_t i = 0; i < law.support.size(); ++i) {
    value += law.probs[i] * gram_determinant(inst, law.support[i]);
  }
  return value;
}

double inclusion_probability(const ExactLaw& law, std::span<const std::size_t> subset) {
  std::vector<std::size_t> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  double mass = 0.0;
  for (std::size_t i = 0; i < law.support.size(); ++i) {
    if (contains_multiset(law.support[i], sorted)) mass += law.probs[i];
  }
  return mass;
}

double total_variation(const ExactLaw& a, const ExactLaw& b) {
  std::map<std::vector<std::size_t>, double> diff;
  for (std::size_t i = 0; i < a.support.size(); ++i) diff[a.support[i]] += a.probs[i];
  for (std::size_t i = 0; i < b.support.size(); ++i) diff[b.support[i]] -= b.probs[i];
  double tv = 0.0;
  for (const auto& [key, d] : diff) tv += std::abs(d);
  return 0.5 * tv;
}

namespace {

std::vector<std::size_t> remaining_copies(std::span<const double> x, std::size_t q,
                                          std::span<const std::size_t> base) {
  std::vector<std::size_t> copies(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double scaled = static_cast<double>(q) * x[i];
    if (std::abs(scaled - std::round(scaled)) > 1e-9) {
      throw Error(ErrorCode::kNotRationalized, "q x_i must be integral");
    }
    copies[i] = static_cast<std::size_t>(std::llround(scaled));
  }
  for (std::size_t i : base) {
    if (copies[i] == 0) {
      throw Error(ErrorCode::kUnreachableCondition, "not enough copies for the conditioning set");
    }
    --copies[i];
  }
  return copies;
}

}  // namespace

double expanded_conditional_expectation(const Instance& inst, std::span<const double> x,
                                        std::size_t q, std::span<const std::size_t> base) {
  const std::size_t k = inst.k();
  const std::vector<std::size_t> copies = remaining_copies(x, q, base);
  const std::size_t pool = std::accumulate(copies.begin(), copies.end(), std::size_t{0});
  const std::size_t rest = k - base.size();
  const double log_all = log_binomial(static_cast<double>(pool), static_cast<double>(rest));
  double value = 0.0;
  for (const auto& u : all_multisets_of_size(inst.n(), rest)) {
    std::vector<std::size_t> count(inst.n(), 0);
    for (std::size_t i : u) ++count[i];
    double logp = -log_all;
    bool zero = false;
    for (std::size_t i = 0; i < inst.n() && !zero; ++i) {
      if (count[i] > copies[i]) zero = true;
      else logp += log_binomial(static_cast<double>(copies[i]), static_cast<double>(count[i]));
    }
    if (zero) continue;
    std::vector<std::size_t> full(base.begin(), base.end());
    full.insert(full.end(), u.begin(), u.end());
    value += std::exp(logp) * gram_determinant(inst, full);
  }
  return value;
}

double expanded_conditional_expectation_formula(const Instance& inst,
                                                std::span<const double> x, std::size_t q,
                                                std::span<const std::size_t> base) {
  const std::size_t m = inst.m();
  const std::size_t k = inst.k();
  const std::size_t s = base.size();
  const std::vector<std::size_t> copies = remaining_copies(x, q, base);
  const double qd = static_cast<double>(q);

  linalg::SquareMatrix pool(m), fixed(m);
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const auto a = inst.vector(i);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) pool(r, c) += static_cast<double>(copies[i]) * a[r] * a[c];
    }
  }
  for (std::size_t i : base) {
    const auto a = inst.vector(i);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) fixed(r, c) += a[r] * a[c];
    }
  }
  // det((t/q) pool + fixed) has degree <= m; interpolate on 1..m+1.
  std::vector<std::pair<double, double>> points;
  for (double t : symfun::positive_integer_nodes(m)) {
    linalg::SquareMatrix b(m);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) b(r, c) = (t / qd) * pool(r, c) + fixed(r, c);
    }
    points.emplace_back(t, det_by_cofactor(b));
  }
  const symfun::PolynomialCoeffs poly = symfun::interpolate(points);

  const double rest = static_cast<double>(k - s);
  const double pool_size = qd * static_cast<double>(k) - static_cast<double>(s);
  const double log_den = log_binomial(pool_size, rest);
  double value = 0.0;
  for (std::size_t r = 0; r <= std::min(k - s, m); ++r) {
    const double rd = static_cast<double>(r);
    const double factor =
        std::exp(rd * std::log(qd) + log_binomial(pool_size - rd, rest - rd) - log_den);
    value += factor * poly.coeffs[r];
  }
  return value;
}

}  // namespace dopt::oracle
