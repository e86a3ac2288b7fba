#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

#include "permutope/rat.hpp"

namespace permutope {

using Vec = std::vector<Rat>;

/// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  RatMatrix(std::initializer_list<std::initializer_list<Rat>> rows);

  static RatMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static RatMatrix identity(std::size_t n);
  /// Every entry equal to `value`.
  static RatMatrix filled(std::size_t rows, std::size_t cols, const Rat& value);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rat& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Rat& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const Rat> entries() const { return entries_; }
  std::span<Rat> entries() { return entries_; }

  RatMatrix transpose() const;

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rat> entries_;
};

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator*(const Rat& s, const RatMatrix& a);
Vec operator*(const RatMatrix& a, std::span<const Rat> x);

std::ostream& operator<<(std::ostream& os, const RatMatrix& m);

/// A + s*I for square A.
RatMatrix shift_diagonal(const RatMatrix& a, const Rat& s);

/// Bijection of {0..n-1}. The matrix view M has M(image[j], j) = 1, so
/// M e_j = e_{image[j]} and M A M^T moves row/column i to image[i].
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> image);

  static Permutation identity(std::size_t n);
  /// From a 0-based cycle listing: cycle[0] -> cycle[1] -> ... -> cycle[0].
  /// Points not listed are fixed.
  static Permutation from_cycle(std::size_t n, std::span<const std::size_t> cycle);

  std::size_t size() const { return image_.size(); }
  std::size_t operator[](std::size_t i) const { return image_[i]; }
  const std::vector<std::size_t>& image() const { return image_; }

  Permutation inverse() const;
  /// Matrix product order: (p * q).matrix() == p.matrix() * q.matrix().
  friend Permutation operator*(const Permutation& p, const Permutation& q);
  Permutation power(std::size_t k) const;
  bool is_identity() const;
  /// True iff the permutation is a single n-cycle.
  bool is_cyclic() const;

  RatMatrix matrix() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> image_;
};

/// Block (i,j) of the result is a(i,j) * b; index (i,k) maps to i*n + k.
RatMatrix kron(const RatMatrix& a, const RatMatrix& b);

/// Column stacking, first column first.
Vec vec(const RatMatrix& x);
/// Inverse of vec for a rows x cols matrix.
RatMatrix unvec(std::span<const Rat> v, std::size_t rows, std::size_t cols);

/// tr(A B^T) = sum_ij a_ij b_ij.
Rat trace_inner(const RatMatrix& a, const RatMatrix& b);

inline constexpr std::size_t kDefaultPermutationCap = 10;

/// All n! permutations in lexicographic order of their image arrays.
std::vector<Permutation> enumerate_permutations(std::size_t n,
                                                std::size_t cap = kDefaultPermutationCap);

/// Visits permutations in the same order as enumerate_permutations and stops
/// early once `visit` returns true. Returns whether it stopped early.
bool for_each_permutation(std::size_t n, const std::function<bool(const Permutation&)>& visit,
                          std::size_t cap = kDefaultPermutationCap);

/// P A P^T by index permutation.
RatMatrix apply_similarity(const Permutation& p, const RatMatrix& a);
/// P A Q^T for A with p.size() rows and q.size() columns.
RatMatrix apply_equivalence(const Permutation& p, const RatMatrix& a, const Permutation& q);

}  // namespace permutope
