#include "dopt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "dopt/error.hpp"

namespace dopt {

const char* scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kProportional: return "proportional";
    case Scheme::kAsymptotic: return "asymptotic";
    case Scheme::kRepetitions: return "repetitions";
  }
  return "unknown";
}

double log_binomial(double a, double b) {
  if (b < 0.0 || b > a) return -std::numeric_limits<double>::infinity();
  return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

namespace {

void check_order(std::size_t m, std::size_t n, std::size_t k) {
  if (!(m >= 1 && m <= k && k <= n)) {
    throw Error(ErrorCode::kInvalidParams, "need 1 <= m <= k <= n");
  }
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::kInvalidParams, "eps must lie in (0, 1)");
}

}  // namespace

double g_without_reps_objective(std::size_t m, std::size_t n, std::size_t k, double y) {
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  const double rest = static_cast<double>(n - m);
  const double log_base = log_binomial(rest, kd - md);
  double total = 0.0;
  for (std::size_t tau = 0; tau <= m; ++tau) {
    const double td = static_cast<double>(tau);
    const double lb = log_binomial(rest, kd - td);
    if (!std::isfinite(lb)) continue;
    const double power_rest = m == tau ? 0.0 : (md - td) * std::log(rest);
    const double log_coef =
        lb - power_rest - log_base + log_binomial(md, td) - td * std::log(md);
    total += std::exp(log_coef) * std::pow(kd - y, md - td) * std::pow(y, td);
  }
  return total;
}

double g_without_reps(std::size_t m, std::size_t n, std::size_t k) {
  check_order(m, n, k);
  const double lo = static_cast<double>(m) * static_cast<double>(k) / static_cast<double>(n);
  const double hi = static_cast<double>(m);
  auto f = [&](double y) { return g_without_reps_objective(m, n, k, y); };
  double best = std::max(f(lo), f(hi));
  if (hi - lo <= 0.0) return best;

  constexpr int kSeeds = 1024;
  const double h = (hi - lo) / kSeeds;
  int best_idx = 0;
  double best_seed = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kSeeds; ++i) {
    const double v = f(lo + h * i);
    if (v > best_seed) {
      best_seed = v;
      best_idx = i;
    }
  }
  double a = lo + h * std::max(0, best_idx - 1);
  double b = lo + h * std::min(kSeeds, best_idx + 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return std::max({best, best_seed, fc, fd, f(0.5 * (a + b))});
}

ApproximationCertificate ratio_without_reps(std::size_t m, std::size_t n, std::size_t k,
                                            std::optional<double> eps_tilde) {
  const double g = g_without_reps(m, n, k);
  ApproximationCertificate cert;
  cert.scheme = Scheme::kProportional;
  cert.m = m;
  cert.n = n;
  cert.k = k;
  cert.alpha = std::min(1.0, std::pow(g, -1.0 / static_cast<double>(m)));
  if (cert.alpha < std::exp(-1.0) - 1e-12) {
    throw Error(ErrorCode::kInvalidParams, "correlation bound fell below 1/e");
  }
  if (eps_tilde) {
    check_eps(*eps_tilde);
    cert.eps = eps_tilde;
    cert.regime_threshold = static_cast<double>(m - 1) / (2.0 * *eps_tilde);
    cert.regime_floor = 0.5 - *eps_tilde;
    cert.regime_met = static_cast<double>(k) >= *cert.regime_threshold;
  }
  return cert;
}

std::size_t threshold_asymptotic(std::size_t m, double eps) {
  check_eps(eps);
  const double md = static_cast<double>(m);
  const double value = 4.0 * md / eps + (12.0 / (eps * eps)) * std::log(1.0 / eps);
  return static_cast<std::size_t>(std::ceil(value));
}

std::optional<ApproximationCertificate> ratio_asymptotic(std::size_t m, std::size_t n,
                                                         std::size_t k, double eps) {
  check_order(m, n, k);
  check_eps(eps);
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  const double margin = eps * kd - (1.0 + eps) * md;
  if (margin <= 0.0) return std::nullopt;
  const double tail = std::exp(-margin * margin / (kd * (2.0 + eps) * (1.0 + eps)));
  ApproximationCertificate cert;
  cert.scheme = Scheme::kAsymptotic;
  cert.m = m;
  cert.n = n;
  cert.k = k;
  cert.eps = eps;
  cert.alpha = std::pow(1.0 - tail, 1.0 / md) / (1.0 + eps);
  cert.regime_threshold = static_cast<double>(threshold_asymptotic(m, eps));
  cert.regime_floor = 1.0 - eps;
  cert.regime_met = kd >= *cert.regime_threshold;
  return cert;
}

double g_with_reps(std::size_t m, std::size_t k) {
  if (m < 1 || m > k) throw Error(ErrorCode::kInvalidParams, "need 1 <= m <= k");
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  return std::exp((std::lgamma(kd - md + 1.0) + md * std::log(kd) - std::lgamma(kd + 1.0)) / md);
}

double repetition_factor(std::size_t m, std::size_t k) {
  return std::pow(g_with_reps(m, k), -static_cast<double>(m));
}

ApproximationCertificate ratio_with_reps(std::size_t m, std::size_t k,
                                         std::optional<double> eps_query) {
  ApproximationCertificate cert;
  cert.scheme = Scheme::kRepetitions;
  cert.m = m;
  cert.k = k;
  cert.alpha = std::min(1.0, 1.0 / g_with_reps(m, k));
  if (eps_query) {
    check_eps(*eps_query);
    cert.eps = eps_query;
    cert.regime_threshold = static_cast<double>(m - 1) / *eps_query;
    cert.regime_floor = 1.0 - *eps_query;
    cert.regime_met = static_cast<double>(k) >= *cert.regime_threshold;
  }
  return cert;
}

}  // namespace dopt
