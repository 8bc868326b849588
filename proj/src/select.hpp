#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace dopt::detail {

// Greedy selection rule shared by the fill and derandomization loops: the
// lowest allowed index whose value is within a relative 1e-12 of the allowed
// maximum. Returns values.size() when nothing is allowed.
inline std::size_t argmax_lowest(std::span<const double> values,
                                 const std::vector<bool>& allowed) {
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (allowed[j]) {
      best = std::max(best, values[j]);
      any = true;
    }
  }
  if (!any) return values.size();
  const double slack = 1e-12 * std::abs(best);
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (allowed[j] && values[j] >= best - slack) return j;
  }
  return values.size();
}

}  // namespace dopt::detail
