#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dopt/error.hpp"

namespace dopt::symfun {

// coeffs[r] is the coefficient of y^r.
struct PolynomialCoeffs {
  std::vector<double> coeffs{0.0};

  std::size_t degree() const noexcept { return coeffs.size() - 1; }
  double evaluate(double t) const;
};

// e_r(w) = sum over r-subsets of the product of their weights, via the
// O(t r) recurrence over prod_i (1 + w_i y).
double elem_sym(std::span<const double> weights, std::size_t r);

// (e_0, ..., e_{r_max}) from the same table.
std::vector<double> elem_sym_prefix(std::span<const double> weights, std::size_t r_max);

// Newton divided differences expanded to the monomial basis. Generic over the
// scalar so callers can run it in extended precision.
template <typename Real>
std::vector<Real> interpolate_monomial(std::span<const Real> nodes,
                                       std::span<const Real> values) {
  const std::size_t count = nodes.size();
  if (count == 0 || values.size() != count) {
    throw Error(ErrorCode::kDegenerateNodes, "interpolation needs matching nonempty node/value lists");
  }
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      if (nodes[i] == nodes[j]) {
        throw Error(ErrorCode::kDegenerateNodes, "duplicate interpolation abscissa");
      }
    }
  }
  std::vector<Real> dd(values.begin(), values.end());
  for (std::size_t order = 1; order < count; ++order) {
    for (std::size_t i = count - 1; i >= order; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - order]);
    }
  }
  // Horner-style expansion of the Newton form.
  std::vector<Real> poly(count, Real(0));
  for (std::size_t i = count; i-- > 0;) {
    for (std::size_t r = count - 1; r > 0; --r) {
      poly[r] = poly[r - 1] - nodes[i] * poly[r];
    }
    poly[0] = dd[i] - nodes[i] * poly[0];
  }
  return poly;
}

PolynomialCoeffs interpolate(std::span<const std::pair<double, double>> points);

// Nodes used for determinant polynomials evaluated on the real line: 1, ..., d+1.
std::vector<double> positive_integer_nodes(std::size_t degree);

using ComplexFunction = std::function<std::complex<double>(std::complex<double>)>;

// All coefficients of a polynomial of degree <= `degree`, recovered from its
// values at degree+1 points on the circle |t| = radius (discrete Fourier
// inversion). The node set is rotated so no node lies on the negative real axis.
// Absolute error of coefficient r is about eps * max_{|t|=radius}|p| / radius^r.
std::vector<double> contour_coefficients(const ComplexFunction& p, std::size_t degree,
                                         double radius);

// Radius minimizing the error bound sum_j |c_j| R^{j-r} for coefficient r, given
// upper bounds |c_j| on the coefficient magnitudes. Terms that are exactly zero
// but evaluated with rounding noise should still get a positive bound. Returns 1
// when every bound is zero.
double contour_radius(std::span<const double> magnitude, std::size_t r);

}  // namespace dopt::symfun
