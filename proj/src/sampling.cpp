#include "dopt/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dopt/linalg.hpp"
#include "dopt/symfun.hpp"
#include "select.hpp"

namespace dopt {

std::uint64_t CounterRng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::next_below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidParams, "next_below needs a positive bound");
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

double CounterRng::next_gaussian() {
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

void require_mode(const FractionalDesign& frac, const Instance& inst, Mode mode,
                  const char* who) {
  if (inst.mode() != mode || frac.mode != mode) {
    throw Error(ErrorCode::kModeViolation,
                std::string(who) + " requires mode " + mode_name(mode));
  }
  if (frac.weights.size() != inst.n()) {
    throw Error(ErrorCode::kDimensionError, "fractional design length must equal n");
  }
}

}  // namespace

double proportional_inclusion_probability(double head, std::span<const double> tail,
                                          std::size_t need) {
  if (need == 0) return 0.0;
  const std::size_t top = std::min(need, tail.size());
  const std::vector<double> e = symfun::elem_sym_prefix(tail, top);
  const double e_tail_need = need <= tail.size() ? e[need] : 0.0;
  const double e_tail_less = e[need - 1];
  const double denom = e_tail_need + head * e_tail_less;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::kUnreachableCondition,
                "no remaining subset of the required size has positive weight");
  }
  return std::clamp(head * e_tail_less / denom, 0.0, 1.0);
}

double proportional_step_probability(std::span<const double> x, std::size_t j,
                                     std::size_t need) {
  if (need == 0) return 0.0;
  if (x.size() - j <= need) return 1.0;
  return proportional_inclusion_probability(x[j], x.subspan(j + 1), need);
}

double proportional_path_probability(std::span<const double> x, std::size_t k,
                                     std::span<const std::size_t> members) {
  std::vector<bool> in(x.size(), false);
  for (std::size_t i : members) in.at(i) = true;
  double prob = 1.0;
  std::size_t taken = 0;
  for (std::size_t j = 0; j < x.size() && prob > 0.0; ++j) {
    const double p = proportional_step_probability(x, j, k - taken);
    if (in[j]) {
      prob *= p;
      ++taken;
    } else {
      prob *= 1.0 - p;
    }
  }
  return taken == k ? prob : 0.0;
}

Design sample_proportional(const FractionalDesign& frac, const Instance& inst, RngSeed seed) {
  require_mode(frac, inst, Mode::kWithoutRepetitions, "sample_proportional");
  const std::size_t k = inst.k();
  const std::span<const double> x = frac.weights;
  CounterRng rng(seed);
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  for (std::size_t j = 0; j < x.size() && chosen.size() < k; ++j) {
    const double p = proportional_step_probability(x, j, k - chosen.size());
    if (p >= 1.0 || rng.next_double() < p) chosen.push_back(j);
  }
  return make_design(inst, std::move(chosen));
}

BernoulliDraw draw_bernoulli_stage(std::span<const double> x, std::size_t k, double eps,
                                   CounterRng& rng) {
  BernoulliDraw draw;
  for (draw.attempts = 1; draw.attempts <= kMaxRejections; ++draw.attempts) {
    draw.members.clear();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (rng.next_double() < x[i] / (1.0 + eps)) draw.members.push_back(i);
    }
    if (draw.members.size() <= k) return draw;
  }
  draw.attempts = kMaxRejections;
  draw.fell_back = true;
  draw.members.clear();
  return draw;
}

std::vector<std::size_t> greedy_fill(const Instance& inst, std::vector<std::size_t> members) {
  const std::size_t n = inst.n();
  const bool repeats = inst.mode() == Mode::kWithRepetitions;
  while (members.size() < inst.k()) {
    std::vector<bool> allowed(n, true);
    if (!repeats) {
      for (std::size_t i : members) allowed[i] = false;
    }
    const linalg::SquareMatrix base = linalg::gram_of_members(inst, members);
    std::vector<double> dets(n, 0.0);
    bool any_positive = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (!allowed[j]) continue;
      linalg::SquareMatrix g = base;
      linalg::add_outer(g, inst.vector(j), 1.0);
      for (std::size_t r = 0; r < g.order(); ++r) {
        for (std::size_t c = 0; c < r; ++c) g(r, c) = g(c, r);
      }
      dets[j] = std::max(0.0, linalg::determinant(g));
      any_positive = any_positive || dets[j] > 0.0;
    }
    std::size_t pick;
    if (any_positive) {
      pick = detail::argmax_lowest(dets, allowed);
    } else {
      linalg::SquareMatrix reg = base;
      for (std::size_t r = 0; r < reg.order(); ++r) reg(r, r) += 1e-8;
      pick = detail::argmax_lowest(linalg::leverage_scores(inst, reg), allowed);
    }
    members.push_back(pick);
  }
  std::sort(members.begin(), members.end());
  return members;
}

Design sample_bernoulli_fill(const FractionalDesign& frac, const Instance& inst, double eps,
                             RngSeed seed) {
  require_mode(frac, inst, Mode::kWithoutRepetitions, "sample_bernoulli_fill");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorCode::kInvalidParams, "eps must lie in (0, 1)");
  }
  CounterRng rng(seed);
  BernoulliDraw draw = draw_bernoulli_stage(frac.weights, inst.k(), eps, rng);
  if (draw.fell_back) return sample_proportional(frac, inst, seed);
  return make_design(inst, greedy_fill(inst, std::move(draw.members)));
}

Design sample_with_repetitions(const FractionalDesign& frac, const Instance& inst,
                               RngSeed seed) {
  require_mode(frac, inst, Mode::kWithRepetitions, "sample_with_repetitions");
  const auto& x = frac.weights;
  double total = 0.0;
  for (double v : x) total += v;
  if (!(total > 0.0)) throw Error(ErrorCode::kInvalidParams, "weights sum to zero");
  CounterRng rng(seed);
  std::vector<std::size_t> chosen;
  chosen.reserve(inst.k());
  for (std::size_t draw = 0; draw < inst.k(); ++draw) {
    const double u = rng.next_double() * total;
    double acc = 0.0;
    std::size_t pick = x.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] <= 0.0) continue;
      acc += x[i];
      pick = i;
      if (u < acc) break;
    }
    chosen.push_back(pick);
  }
  return make_design(inst, std::move(chosen));
}

std::vector<std::size_t> expanded_copy_counts(std::span<const double> x, std::size_t k,
                                              std::size_t q) {
  if (q == 0) throw Error(ErrorCode::kInvalidParams, "q must be positive");
  std::vector<std::size_t> counts(x.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double scaled = static_cast<double>(q) * x[i];
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-9 || rounded < 0.0) {
      throw Error(ErrorCode::kNotRationalized,
                  "q * x_" + std::to_string(i) + " = " + std::to_string(scaled) +
                      " is not an integer");
    }
    counts[i] = static_cast<std::size_t>(rounded);
    total += counts[i];
  }
  if (total != q * k) {
    throw Error(ErrorCode::kNotRationalized, "expanded copies do not total q * k");
  }
  return counts;
}

Design sample_expanded(const FractionalDesign& frac, const Instance& inst, std::size_t q,
                       RngSeed seed) {
  require_mode(frac, inst, Mode::kWithRepetitions, "sample_expanded");
  const std::vector<std::size_t> counts = expanded_copy_counts(frac.weights, inst.k(), q);
  std::vector<std::size_t> copies;
  copies.reserve(q * inst.k());
  for (std::size_t i = 0; i < counts.size(); ++i) copies.insert(copies.end(), counts[i], i);
  CounterRng rng(seed);
  const std::size_t k = inst.k();
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t j = t + static_cast<std::size_t>(rng.next_below(copies.size() - t));
    std::swap(copies[t], copies[j]);
  }
  copies.resize(k);
  return make_design(inst, std::move(copies));
}

}  // namespace dopt
