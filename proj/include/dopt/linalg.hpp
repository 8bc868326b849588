#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dopt {

class Instance;

namespace linalg {

inline constexpr std::size_t kMaxOrder = 512;
inline constexpr double kPivotCutoff = 1e-12;
inline constexpr double kRankCutoff = 1e-10;

// Dense square matrix, row-major.
template <typename T>
class BasicSquareMatrix {
 public:
  BasicSquareMatrix() = default;
  explicit BasicSquareMatrix(std::size_t order);
  BasicSquareMatrix(std::size_t order, std::vector<T> entries);

  static BasicSquareMatrix identity(std::size_t order);

  std::size_t order() const noexcept { return order_; }
  T& operator()(std::size_t r, std::size_t c) { return entries_[r * order_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * order_ + c];
  }
  std::span<const T> entries() const noexcept { return entries_; }

  BasicSquareMatrix& operator+=(const BasicSquareMatrix& other);

 private:
  std::size_t order_ = 0;
  std::vector<T> entries_;
};

using SquareMatrix = BasicSquareMatrix<double>;
using ComplexMatrix = BasicSquareMatrix<std::complex<double>>;

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b);

// LU with partial pivoting. `singular()` reports whether some pivot fell
// under kPivotCutoff times the largest initial row norm.
template <typename T>
class Lu {
 public:
  explicit Lu(BasicSquareMatrix<T> matrix);

  bool singular() const noexcept { return singular_; }
  // Signed determinant; exactly zero when singular().
  T determinant() const;
  // Product of pivots regardless of the cutoff.
  T raw_determinant() const;
  // log|det|; -inf when singular().
  double log_abs_determinant() const;
  std::vector<T> solve(std::span<const T> rhs) const;

 private:
  BasicSquareMatrix<T> lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  bool singular_ = false;
};

extern template class BasicSquareMatrix<double>;
extern template class BasicSquareMatrix<std::complex<double>>;
extern template class Lu<double>;
extern template class Lu<std::complex<double>>;

// sum_i x_i a_i a_i^T, exactly symmetric.
SquareMatrix gram(const Instance& inst, std::span<const double> x);
// sum over a member list (repeats counted).
SquareMatrix gram_of_members(const Instance& inst,
                             std::span<const std::size_t> members);
void add_outer(SquareMatrix& target, std::span<const double> a, double weight);

double determinant(const SquareMatrix& matrix);

// a_i^T M(x)^{-1} a_i for every i. Throws SingularGram.
std::vector<double> leverage_scores(const Instance& inst,
                                    std::span<const double> x);
std::vector<double> leverage_scores(const Instance& inst, const SquareMatrix& m);

// Rank of a row-major rows x cols matrix by complete pivoting; pivots under
// kRankCutoff times the largest pivot count as zero.
std::size_t numerical_rank(std::span<const double> data, std::size_t rows,
                           std::size_t cols);

}  // namespace linalg
}  // namespace dopt
