#include "dopt/derand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "dopt/bounds.hpp"
#include "dopt/linalg.hpp"
#include "dopt/symfun.hpp"
#include "select.hpp"

namespace dopt {

namespace {

using Complex = std::complex<double>;

void check_frac(const Instance& inst, const FractionalDesign& frac, Mode mode) {
  if (inst.mode() != mode) {
    throw Error(ErrorCode::kModeViolation,
                std::string("conditional expectation requires mode ") + mode_name(mode));
  }
  if (frac.weights.size() != inst.n()) {
    throw Error(ErrorCode::kDimensionError, "fractional design length must equal n");
  }
}

std::vector<bool> membership(const Instance& inst, std::span<const std::size_t> base) {
  std::vector<bool> in(inst.n(), false);
  for (std::size_t i : base) {
    if (i >= inst.n()) {
      throw Error(ErrorCode::kInvalidIndex, "index " + std::to_string(i) + " out of range");
    }
    if (in[i]) throw Error(ErrorCode::kModeViolation, "duplicate index in a set");
    in[i] = true;
  }
  return in;
}

void check_base_size(const Instance& inst, std::span<const std::size_t> base) {
  if (base.size() > inst.k()) {
    throw Error(ErrorCode::kInvalidParams, "conditioning set is larger than k");
  }
}

// A member with weight 0 is never sampled, so conditioning on it is vacuous.
void check_reachable_members(const FractionalDesign& frac, std::span<const std::size_t> base) {
  for (std::size_t i : base) {
    if (!(frac.weights[i] > 0.0)) {
      throw Error(ErrorCode::kUnreachableCondition,
                  "index " + std::to_string(i) + " has weight 0 and is never sampled");
    }
  }
}

double binomial(double a, double b) {
  const double lb = log_binomial(a, b);
  return std::isfinite(lb) ? std::exp(lb) : 0.0;
}

linalg::ComplexMatrix to_complex(const linalg::SquareMatrix& a) {
  std::vector<Complex> entries(a.entries().begin(), a.entries().end());
  return linalg::ComplexMatrix(a.order(), std::move(entries));
}

double trace_of(const linalg::SquareMatrix& a) {
  double t = 0.0;
  for (std::size_t r = 0; r < a.order(); ++r) t += a(r, r);
  return t;
}

// Each wanted coefficient is read from the contour that minimizes its error
// bound; contours with equal radius are shared.
std::vector<double> coefficients_by_radius(const symfun::ComplexFunction& p,
                                           std::size_t degree,
                                           std::span<const double> magnitude,
                                           const std::vector<std::size_t>& wanted,
                                           std::size_t out_size) {
  std::vector<double> out(out_size, 0.0);
  std::map<double, std::vector<double>> cache;
  for (std::size_t r : wanted) {
    const double radius = symfun::contour_radius(magnitude, r);
    auto it = cache.find(radius);
    if (it == cache.end()) {
      it = cache.emplace(radius, symfun::contour_coefficients(p, degree, radius)).first;
    }
    out[r] = it->second[r];
  }
  return out;
}

}  // namespace

std::vector<double> completion_coefficients(const Instance& inst, std::span<const double> w,
                                            std::span<const std::size_t> base,
                                            std::size_t max_degree) {
  if (w.size() != inst.n()) {
    throw Error(ErrorCode::kDimensionError, "weight vector length must equal n");
  }
  const std::vector<bool> in_base = membership(inst, base);
  const std::size_t m = inst.m();
  const std::size_t s = base.size();

  std::vector<std::size_t> active;
  std::vector<double> active_w;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    if (!in_base[i] && w[i] > 0.0) {
      active.push_back(i);
      active_w.push_back(w[i]);
    }
  }
  const std::size_t degree = active.size();
  const linalg::SquareMatrix a_base = linalg::gram_of_members(inst, base);

  // |c_j| <= e_j(w) ((tr A_S + j max|a|^2) / m)^m by AM-GM on the eigenvalues.
  // The bound stays positive for coefficients that vanish exactly, which is
  // where the rounding noise of the evaluations lives.
  double widest = 0.0;
  for (std::size_t i : active) {
    double sq = 0.0;
    for (double v : inst.vector(i)) sq += v * v;
    widest = std::max(widest, sq);
  }
  const double base_trace = trace_of(a_base);
  const double md = static_cast<double>(m);
  std::vector<double> magnitude = symfun::elem_sym_prefix(active_w, degree);
  for (std::size_t j = 0; j <= degree; ++j) {
    magnitude[j] *= std::pow((base_trace + static_cast<double>(j) * widest) / md, md);
  }

  std::vector<std::size_t> wanted;
  const std::size_t top = std::min(max_degree, degree);
  for (std::size_t r = 0; r <= top; ++r) {
    if (s + r >= m && r > 0) wanted.push_back(r);
  }

  const linalg::ComplexMatrix base_c = to_complex(a_base);
  auto evaluate = [&](Complex t) {
    linalg::ComplexMatrix b = base_c;
    Complex prod{1.0, 0.0};
    for (std::size_t idx = 0; idx < active.size(); ++idx) {
      const Complex wt = active_w[idx] * t;
      const Complex one_plus = 1.0 + wt;
      prod *= one_plus;
      const Complex coef = wt / one_plus;
      const auto a = inst.vector(active[idx]);
      for (std::size_t r = 0; r < m; ++r) {
        const Complex cr = coef * a[r];
        for (std::size_t c = r; c < m; ++c) b(r, c) += cr * a[c];
      }
    }
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < r; ++c) b(r, c) = b(c, r);
    }
    return prod * linalg::Lu<Complex>(std::move(b)).raw_determinant();
  };

  std::vector<double> out =
      coefficients_by_radius(evaluate, degree, magnitude, wanted, max_degree + 1);
  if (s >= m) out[0] = std::max(0.0, linalg::determinant(a_base));
  return out;
}

double cond_exp_proportional(const Instance& inst, const FractionalDesign& frac,
                             std::span<const std::size_t> base) {
  check_frac(inst, frac, Mode::kWithoutRepetitions);
  check_base_size(inst, base);
  const std::vector<bool> in_base = membership(inst, base);
  check_reachable_members(frac, base);
  const std::size_t remaining = inst.k() - base.size();
  if (remaining == 0) {
    return std::max(0.0, linalg::determinant(linalg::gram_of_members(inst, base)));
  }
  std::vector<double> rest;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    if (!in_base[i]) rest.push_back(frac.weights[i]);
  }
  const double denom = remaining <= rest.size() ? symfun::elem_sym(rest, remaining) : 0.0;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::kUnreachableCondition,
                "no completion of the conditioning set has positive probability");
  }
  const double numer = completion_coefficients(inst, frac.weights, base, remaining)[remaining];
  return std::max(0.0, numer / denom);
}

double cond_exp_asymptotic(const Instance& inst, const FractionalDesign& frac, double eps,
                           std::span<const std::size_t> base) {
  check_frac(inst, frac, Mode::kWithoutRepetitions);
  check_base_size(inst, base);
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidParams, "eps must be positive");
  const std::vector<bool> in_base = membership(inst, base);
  check_reachable_members(frac, base);
  const std::size_t remaining = inst.k() - base.size();
  if (remaining == 0) {
    return std::max(0.0, linalg::determinant(linalg::gram_of_members(inst, base)));
  }
  std::vector<double> odds(inst.n());
  std::vector<double> rest;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const double x = std::clamp(frac.weights[i], 0.0, 1.0);
    odds[i] = x / (1.0 + eps - x);
    if (!in_base[i]) rest.push_back(odds[i]);
  }
  const std::vector<double> e =
      symfun::elem_sym_prefix(rest, std::min(remaining, rest.size()));
  double denom = 0.0;
  for (double v : e) denom += v;
  const std::vector<double> c = completion_coefficients(inst, odds, base, remaining);
  double numer = 0.0;
  for (double v : c) numer += v;
  return std::max(0.0, numer / denom);
}

double cond_exp_repetitions(const Instance& inst, const FractionalDesign& frac,
                            std::span<const std::size_t> base) {
  check_frac(inst, frac, Mode::kWithRepetitions);
  check_base_size(inst, base);
  const std::size_t m = inst.m();
  const std::size_t k = inst.k();
  const std::size_t s = base.size();
  const std::size_t remaining = k - s;
  const linalg::SquareMatrix a_base = linalg::gram_of_members(inst, base);
  if (remaining == 0) return std::max(0.0, linalg::determinant(a_base));

  const linalg::SquareMatrix info = linalg::gram(inst, frac.weights);
  const std::size_t top = std::min(remaining, m);

  // Mixed-discriminant bound |c_r| <= C(m, r) (tr M / m)^r (tr A_S / m)^{m-r}.
  const double md = static_cast<double>(m);
  const double info_scale = trace_of(info) / md;
  const double base_scale = trace_of(a_base) / md;
  std::vector<double> magnitude(m + 1);
  for (std::size_t r = 0; r <= m; ++r) {
    const double rd = static_cast<double>(r);
    magnitude[r] = binomial(md, rd) * std::pow(info_scale, rd) * std::pow(base_scale, md - rd);
  }
  std::vector<std::size_t> wanted;
  for (std::size_t r = 1; r <= top; ++r) {
    if (s + r >= m) wanted.push_back(r);
  }
  const linalg::ComplexMatrix info_c = to_complex(info);
  const linalg::ComplexMatrix base_c = to_complex(a_base);
  auto evaluate = [&](Complex t) {
    linalg::ComplexMatrix b = base_c;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) b(r, c) += t * info_c(r, c);
    }
    return linalg::Lu<Complex>(std::move(b)).raw_determinant();
  };
  const std::vector<double> c = coefficients_by_radius(evaluate, m, magnitude, wanted, top + 1);

  double value = s >= m ? std::max(0.0, linalg::determinant(a_base)) : 0.0;
  double factor = 1.0;
  const double kd = static_cast<double>(k);
  for (std::size_t r = 1; r <= top; ++r) {
    factor *= static_cast<double>(remaining - (r - 1)) / kd;
    value += factor * c[r];
  }
  return std::max(0.0, value);
}

Design derandomize_greedy(const Instance& inst, bool allow_repeats,
                          const ConditionalExpectationFn& h, GreedyTrace* trace) {
  const std::size_t n = inst.n();
  const std::size_t m = inst.m();
  double max_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double v : inst.vector(i)) s += v * v;
    max_norm = std::max(max_norm, s);
  }
  // Upper bound on any determinant reachable by a k-member design.
  const double det_scale = std::pow(static_cast<double>(inst.k()) * max_norm / static_cast<double>(m),
                                    static_cast<double>(m));
  const double zero_level = 1e-14 * det_scale;

  std::vector<std::size_t> chosen;
  while (chosen.size() < inst.k()) {
    std::vector<bool> allowed(n, true);
    if (!allow_repeats) {
      for (std::size_t i : chosen) allowed[i] = false;
    }
    std::vector<double> values(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<bool> valid(n, false);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> candidate = chosen;
    candidate.push_back(0);
    for (std::size_t j = 0; j < n; ++j) {
      if (!allowed[j]) continue;
      candidate.back() = j;
      std::vector<std::size_t> sorted = candidate;
      std::sort(sorted.begin(), sorted.end());
      try {
        values[j] = h(sorted);
        valid[j] = true;
        best = std::max(best, values[j]);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kUnreachableCondition) throw;
      }
    }
    GreedyStep step;
    std::size_t pick;
    if (best > zero_level) {
      pick = detail::argmax_lowest(values, valid);
    } else {
      linalg::SquareMatrix reg = linalg::gram_of_members(inst, chosen);
      for (std::size_t r = 0; r < m; ++r) reg(r, r) += 1e-8;
      pick = detail::argmax_lowest(linalg::leverage_scores(inst, reg), allowed);
      step.leverage_fallback = true;
    }
    if (trace != nullptr) {
      step.base = chosen;
      std::sort(step.base.begin(), step.base.end());
      try {
        step.base_value = h(step.base);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kUnreachableCondition) throw;
        step.base_value = std::numeric_limits<double>::quiet_NaN();
      }
      step.candidate_values = values;
      step.chosen = pick;
      trace->steps.push_back(std::move(step));
    }
    chosen.push_back(pick);
  }
  return make_design(inst, std::move(chosen));
}

Design derandomize_proportional(const Instance& inst, const FractionalDesign& frac,
                                GreedyTrace* trace) {
  check_frac(inst, frac, Mode::kWithoutRepetitions);
  return derandomize_greedy(
      inst, false,
      [&](std::span<const std::size_t> s) { return cond_exp_proportional(inst, frac, s); },
      trace);
}

Design derandomize_asymptotic(const Instance& inst, const FractionalDesign& frac, double eps,
                              GreedyTrace* trace) {
  check_frac(inst, frac, Mode::kWithoutRepetitions);
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidParams, "eps must be positive");
  return derandomize_greedy(
      inst, false,
      [&](std::span<const std::size_t> s) { return cond_exp_asymptotic(inst, frac, eps, s); },
      trace);
}

Design derandomize_repetitions(const Instance& inst, const FractionalDesign& frac,
                               GreedyTrace* trace) {
  check_frac(inst, frac, Mode::kWithRepetitions);
  return derandomize_greedy(
      inst, true,
      [&](std::span<const std::size_t> s) { return cond_exp_repetitions(inst, frac, s); },
      trace);
}

}  // namespace dopt
