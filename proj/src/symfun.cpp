#include "dopt/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dopt::symfun {

double PolynomialCoeffs::evaluate(double t) const {
  double acc = 0.0;
  for (std::size_t r = coeffs.size(); r-- > 0;) acc = acc * t + coeffs[r];
  return acc;
}

std::vector<double> elem_sym_prefix(std::span<const double> weights, std::size_t r_max) {
  if (r_max > weights.size()) {
    throw Error(ErrorCode::kInvalidOrder,
                "order " + std::to_string(r_max) + " exceeds weight count " +
                    std::to_string(weights.size()));
  }
  std::vector<double> e(r_max + 1, 0.0);
  e[0] = 1.0;
  std::size_t seen = 0;
  for (double w : weights) {
    ++seen;
    const std::size_t top = std::min(seen, r_max);
    for (std::size_t r = top; r >= 1; --r) e[r] += w * e[r - 1];
  }
  return e;
}

double elem_sym(std::span<const double> weights, std::size_t r) {
  return elem_sym_prefix(weights, r)[r];
}

PolynomialCoeffs interpolate(std::span<const std::pair<double, double>> points) {
  std::vector<double> nodes, values;
  nodes.reserve(points.size());
  values.reserve(points.size());
  for (const auto& [t, v] : points) {
    nodes.push_back(t);
    values.push_back(v);
  }
  return PolynomialCoeffs{interpolate_monomial<double>(nodes, values)};
}

std::vector<double> positive_integer_nodes(std::size_t degree) {
  std::vector<double> nodes(degree + 1);
  for (std::size_t j = 0; j <= degree; ++j) nodes[j] = static_cast<double>(j + 1);
  return nodes;
}

std::vector<double> contour_coefficients(const ComplexFunction& p, std::size_t degree,
                                         double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::kDegenerateNodes, "contour radius must be positive and finite");
  }
  const std::size_t count = degree + 1;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(count);
  const double offset = step / 4.0;
  std::vector<std::complex<double>> values(count);
  for (std::size_t j = 0; j < count; ++j) {
    values[j] = p(std::polar(radius, offset + step * static_cast<double>(j)));
  }
  std::vector<double> coeffs(count);
  double scale = 1.0;
  for (std::size_t r = 0; r < count; ++r) {
    std::complex<double> acc{};
    for (std::size_t j = 0; j < count; ++j) {
      // Reduce the angle index mod count before multiplying to keep it exact.
      const std::size_t idx = (r * j) % count;
      const double angle = -(static_cast<double>(r) * offset + step * static_cast<double>(idx));
      acc += values[j] * std::polar(1.0, angle);
    }
    coeffs[r] = acc.real() / (static_cast<double>(count) * scale);
    scale *= radius;
  }
  return coeffs;
}

double contour_radius(std::span<const double> magnitude, std::size_t r) {
  std::vector<std::pair<double, double>> terms;  // (log |c_j|, j - r)
  for (std::size_t j = 0; j < magnitude.size(); ++j) {
    if (magnitude[j] > 0.0) {
      terms.emplace_back(std::log(magnitude[j]),
                         static_cast<double>(j) - static_cast<double>(r));
    }
  }
  if (terms.empty()) return 1.0;
  // log sum_j |c_j| R^{j-r} is convex in u = log R.
  auto cost = [&](double u) {
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& [lm, d] : terms) hi = std::max(hi, lm + d * u);
    double s = 0.0;
    for (const auto& [lm, d] : terms) s += std::exp(lm + d * u - hi);
    return hi + std::log(s);
  };
  // Keep |u| bounded so that radius^degree stays representable.
  const double degree = static_cast<double>(magnitude.size());
  double lo = -std::min(20.0, 300.0 / degree);
  double hi = -lo;
  for (int it = 0; it < 200; ++it) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    if (cost(a) > cost(b)) {
      lo = a;
    } else {
      hi = b;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace dopt::symfun
