#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace dopt {

enum class Scheme { kProportional, kAsymptotic, kRepetitions };

const char* scheme_name(Scheme scheme);

// Guaranteed ratio f(S) >= alpha * relaxation value for one rounding scheme.
struct ApproximationCertificate {
  Scheme scheme = Scheme::kProportional;
  double alpha = 1.0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::optional<double> eps;
  // The large-k regime attached to the scheme: k >= regime_threshold implies
  // alpha >= regime_floor.
  std::optional<double> regime_threshold;
  std::optional<double> regime_floor;
  bool regime_met = false;
};

// max over y in [mk/n, m] of
//   sum_tau C(n-m, k-tau) / ((n-m)^{m-tau} C(n-m, k-m)) * C(m, tau) / m^tau
//           * (k - y)^{m-tau} * y^tau.
// Grid of 1024 seeds plus golden-section refinement and both endpoints.
double g_without_reps(std::size_t m, std::size_t n, std::size_t k);

// The polynomial maximized by g_without_reps, evaluated at y.
double g_without_reps_objective(std::size_t m, std::size_t n, std::size_t k, double y);

// alpha = g_without_reps^{-1/m} (always >= 1/e). With eps_tilde, also reports the
// regime k >= (m-1)/(2 eps_tilde) => alpha >= 0.5 - eps_tilde.
ApproximationCertificate ratio_without_reps(std::size_t m, std::size_t n, std::size_t k,
                                            std::optional<double> eps_tilde = std::nullopt);

// ceil(4m/eps + (12/eps^2) ln(1/eps)).
std::size_t threshold_asymptotic(std::size_t m, double eps);

// Lower bound on alpha for inflated-Bernoulli rounding:
//   alpha^m >= (1+eps)^{-m} (1 - exp(-(eps k - (1+eps) m)^2 / (k (2+eps)(1+eps)))),
// meaningful once eps k > (1+eps) m. nullopt outside that range.
std::optional<ApproximationCertificate> ratio_asymptotic(std::size_t m, std::size_t n,
                                                         std::size_t k, double eps);

// [(k-m)! k^m / k!]^{1/m}, in log-gamma form.
double g_with_reps(std::size_t m, std::size_t k);

// alpha = 1 / g_with_reps; regime k >= (m-1)/eps => alpha >= 1 - eps.
ApproximationCertificate ratio_with_reps(std::size_t m, std::size_t k,
                                         std::optional<double> eps_query = std::nullopt);

// k! / ((k-m)! k^m), the with-repetitions floor on E[f^m] / f(x)^m.
double repetition_factor(std::size_t m, std::size_t k);

// Natural log of the binomial coefficient; -inf when b > a.
double log_binomial(double a, double b);

}  // namespace dopt
