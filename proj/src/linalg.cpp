#include "dopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dopt/error.hpp"
#include "dopt/model.hpp"

namespace dopt::linalg {

namespace {

void check_order(std::size_t order) {
  if (order == 0 || order > kMaxOrder) {
    throw Error(ErrorCode::kDimensionError,
                "matrix order " + std::to_string(order) + " outside [1, " +
                    std::to_string(kMaxOrder) + "]");
  }
}

}  // namespace

template <typename T>
BasicSquareMatrix<T>::BasicSquareMatrix(std::size_t order)
    : order_(order), entries_(order * order, T{}) {
  check_order(order);
}

template <typename T>
BasicSquareMatrix<T>::BasicSquareMatrix(std::size_t order, std::vector<T> entries)
    : order_(order), entries_(std::move(entries)) {
  check_order(order);
  if (entries_.size() != order * order) {
    throw Error(ErrorCode::kDimensionError, "entry count does not match order");
  }
  for (const T& v : entries_) {
    if (!std::isfinite(std::abs(v))) {
      throw Error(ErrorCode::kDimensionError, "non-finite matrix entry");
    }
  }
}

template <typename T>
BasicSquareMatrix<T> BasicSquareMatrix<T>::identity(std::size_t order) {
  BasicSquareMatrix<T> out(order);
  for (std::size_t i = 0; i < order; ++i) out(i, i) = T{1};
  return out;
}

template <typename T>
BasicSquareMatrix<T>& BasicSquareMatrix<T>::operator+=(const BasicSquareMatrix& other) {
  if (other.order_ != order_) {
    throw Error(ErrorCode::kDimensionError, "order mismatch in matrix sum");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.order() != b.order()) {
    throw Error(ErrorCode::kDimensionError, "order mismatch in matrix product");
  }
  const std::size_t n = a.order();
  SquareMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      const double ail = a(i, l);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += ail * b(l, j);
    }
  }
  return out;
}

template <typename T>
Lu<T>::Lu(BasicSquareMatrix<T> matrix) : lu_(std::move(matrix)) {
  const std::size_t n = lu_.order();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});

  double max_row_norm = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < n; ++c) s += std::norm(lu_(r, c));
    max_row_norm = std::max(max_row_norm, std::sqrt(s));
  }
  const double cutoff = kPivotCutoff * max_row_norm;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(lu_(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(lu_(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu_(pivot, c), lu_(col, c));
      std::swap(perm_[pivot], perm_[col]);
      sign_ = -sign_;
    }
    if (best <= cutoff) singular_ = true;
    if (best == 0.0) continue;
    const T inv = T{1} / lu_(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const T factor = lu_(r, col) * inv;
      lu_(r, col) = factor;
      if (factor == T{}) continue;
      for (std::size_t c = col + 1; c < n; ++c) lu_(r, c) -= factor * lu_(col, c);
    }
  }
}

template <typename T>
T Lu<T>::raw_determinant() const {
  T det = static_cast<T>(static_cast<double>(sign_));
  for (std::size_t i = 0; i < lu_.order(); ++i) det *= lu_(i, i);
  return det;
}

template <typename T>
T Lu<T>::determinant() const {
  if (singular_) return T{};
  return raw_determinant();
}

template <typename T>
double Lu<T>::log_abs_determinant() const {
  if (singular_) return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (std::size_t i = 0; i < lu_.order(); ++i) acc += std::log(std::abs(lu_(i, i)));
  return acc;
}

template <typename T>
std::vector<T> Lu<T>::solve(std::span<const T> rhs) const {
  const std::size_t n = lu_.order();
  if (rhs.size() != n) {
    throw Error(ErrorCode::kDimensionError, "right-hand side length mismatch");
  }
  if (singular_) throw Error(ErrorCode::kSingularGram, "solve with singular matrix");
  std::vector<T> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    T acc = rhs[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) acc -= lu_(i, j) * y[j];
    y[i] = acc;
  }
  for (std::size_t i = n; i-- > 0;) {
    T acc = y[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= lu_(i, j) * y[j];
    y[i] = acc / lu_(i, i);
  }
  return y;
}

template class BasicSquareMatrix<double>;
template class BasicSquareMatrix<std::complex<double>>;
template class Lu<double>;
template class Lu<std::complex<double>>;

void add_outer(SquareMatrix& target, std::span<const double> a, double weight) {
  const std::size_t m = target.order();
  for (std::size_t r = 0; r < m; ++r) {
    const double wr = weight * a[r];
    if (wr == 0.0) continue;
    for (std::size_t c = r; c < m; ++c) target(r, c) += wr * a[c];
  }
}

namespace {

void mirror_upper(SquareMatrix& g) {
  for (std::size_t r = 0; r < g.order(); ++r) {
    for (std::size_t c = 0; c < r; ++c) g(r, c) = g(c, r);
  }
}

}  // namespace

SquareMatrix gram(const Instance& inst, std::span<const double> x) {
  if (x.size() != inst.n()) {
    throw Error(ErrorCode::kDimensionError, "weight vector length must equal n");
  }
  SquareMatrix g(inst.m());
  for (std::size_t i = 0; i < inst.n(); ++i) {
    if (!std::isfinite(x[i])) {
      throw Error(ErrorCode::kDimensionError, "non-finite weight");
    }
    if (x[i] != 0.0) add_outer(g, inst.vector(i), x[i]);
  }
  mirror_upper(g);
  return g;
}

SquareMatrix gram_of_members(const Instance& inst,
                             std::span<const std::size_t> members) {
  SquareMatrix g(inst.m());
  for (std::size_t i : members) {
    if (i >= inst.n()) {
      throw Error(ErrorCode::kInvalidIndex, "index " + std::to_string(i) + " out of range");
    }
    add_outer(g, inst.vector(i), 1.0);
  }
  mirror_upper(g);
  return g;
}

double determinant(const SquareMatrix& matrix) { return Lu<double>(matrix).determinant(); }

std::vector<double> leverage_scores(const Instance& inst, const SquareMatrix& m) {
  const Lu<double> lu(m);
  if (lu.singular()) {
    throw Error(ErrorCode::kSingularGram, "leverage scores need a nonsingular Gram matrix");
  }
  std::vector<double> scores(inst.n());
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const auto a = inst.vector(i);
    const std::vector<double> z = lu.solve(a);
    double s = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) s += a[r] * z[r];
    scores[i] = std::max(s, 0.0);
  }
  return scores;
}

std::vector<double> leverage_scores(const Instance& inst, std::span<const double> x) {
  return leverage_scores(inst, gram(inst, x));
}

std::size_t numerical_rank(std::span<const double> data, std::size_t rows,
                           std::size_t cols) {
  if (data.size() != rows * cols) {
    throw Error(ErrorCode::kDimensionError, "rank: data size mismatch");
  }
  std::vector<double> a(data.begin(), data.end());
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * cols + c]; };
  const std::size_t steps = std::min(rows, cols);
  double first_pivot = 0.0;
  std::size_t rank = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t pr = s, pc = s;
    double best = 0.0;
    for (std::size_t r = s; r < rows; ++r) {
      for (std::size_t c = s; c < cols; ++c) {
        if (std::abs(at(r, c)) > best) {
          best = std::abs(at(r, c));
          pr = r;
          pc = c;
        }
      }
    }
    if (s == 0) first_pivot = best;
    if (best == 0.0 || best <= kRankCutoff * first_pivot) break;
    ++rank;
    if (pr != s) {
      for (std::size_t c = 0; c < cols; ++c) std::swap(at(pr, c), at(s, c));
    }
    if (pc != s) {
      for (std::size_t r = 0; r < rows; ++r) std::swap(at(r, pc), at(r, s));
    }
    for (std::size_t r = s + 1; r < rows; ++r) {
      const double f = at(r, s) / at(s, s);
      if (f == 0.0) continue;
      for (std::size_t c = s; c < cols; ++c) at(r, c) -= f * at(s, c);
    }
  }
  return rank;
}

}  // namespace dopt::linalg
