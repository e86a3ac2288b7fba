#include "permutope/ratmat.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

namespace permutope {
namespace {

void require_same_shape(const RatMatrix& a, const RatMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(what) + ": shapes " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
}

}  // namespace

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rat>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::filled(std::size_t rows, std::size_t cols, const Rat& value) {
  RatMatrix m(rows, cols);
  std::fill(m.entries_.begin(), m.entries_.end(), value);
  return m;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
  require_same_shape(a, b, "matrix sum");
  RatMatrix s = a;
  for (std::size_t i = 0; i < s.entries().size(); ++i) s.entries()[i] += b.entries()[i];
  return s;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
  require_same_shape(a, b, "matrix difference");
  RatMatrix s = a;
  for (std::size_t i = 0; i < s.entries().size(); ++i) s.entries()[i] -= b.entries()[i];
  return s;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product: inner dimensions differ");
  RatMatrix p(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rat& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) p(i, j) += aik * b(k, j);
    }
  }
  return p;
}

RatMatrix operator*(const Rat& s, const RatMatrix& a) {
  RatMatrix r = a;
  for (auto& e : r.entries()) e *= s;
  return r;
}

Vec operator*(const RatMatrix& a, std::span<const Rat> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector product");
  Vec y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0) y[i] += a(i, j) * x[j];
  return y;
}

std::ostream& operator<<(std::ostream& os, const RatMatrix& m) {
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? " [" : "[");
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << format_rat_short(m(r, c));
    os << ']';
  }
  return os << ']';
}

RatMatrix shift_diagonal(const RatMatrix& a, const Rat& s) {
  if (!a.is_square()) throw DimensionMismatch("diagonal shift of a non-square matrix");
  RatMatrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i) r(i, i) += s;
  return r;
}

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (std::size_t v : image_) {
    if (v >= image_.size() || seen[v]) throw std::invalid_argument("image is not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> image(n);
  std::iota(image.begin(), image.end(), std::size_t{0});
  return Permutation(std::move(image));
}

Permutation Permutation::from_cycle(std::size_t n, std::span<const std::size_t> cycle) {
  std::vector<std::size_t> image(n);
  std::iota(image.begin(), image.end(), std::size_t{0});
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (cycle[i] >= n) throw std::invalid_argument("cycle point out of range");
    image[cycle[i]] = cycle[(i + 1) % cycle.size()];
  }
  return Permutation(std::move(image));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
  return Permutation(std::move(inv));
}

Permutation operator*(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) throw DimensionMismatch("permutation product of different sizes");
  std::vector<std::size_t> image(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) image[j] = p[q[j]];
  return Permutation(std::move(image));
}

Permutation Permutation::power(std::size_t k) const {
  Permutation r = identity(size());
  for (std::size_t i = 0; i < k; ++i) r = *this * r;
  return r;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < image_.size(); ++i)
    if (image_[i] != i) return false;
  return true;
}

bool Permutation::is_cyclic() const {
  if (image_.empty()) return false;
  std::size_t len = 0;
  std::size_t v = 0;
  do {
    v = image_[v];
    ++len;
  } while (v != 0);
  return len == image_.size();
}

RatMatrix Permutation::matrix() const {
  RatMatrix m(size(), size());
  for (std::size_t j = 0; j < size(); ++j) m(image_[j], j) = 1;
  return m;
}

RatMatrix kron(const RatMatrix& a, const RatMatrix& b) {
  if (!a.is_square() || !b.is_square()) throw DimensionMismatch("kron expects square factors");
  const std::size_t m = a.rows();
  const std::size_t n = b.rows();
  RatMatrix c(m * n, m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (a(i, j) == 0) continue;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) c(i * n + k, j * n + l) = a(i, j) * b(k, l);
    }
  return c;
}

Vec vec(const RatMatrix& x) {
  Vec v;
  v.reserve(x.rows() * x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c)
    for (std::size_t r = 0; r < x.rows(); ++r) v.push_back(x(r, c));
  return v;
}

RatMatrix unvec(std::span<const Rat> v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) throw DimensionMismatch("unvec: length does not match shape");
  RatMatrix x(rows, cols);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) x(r, c) = v[c * rows + r];
  return x;
}

Rat trace_inner(const RatMatrix& a, const RatMatrix& b) {
  require_same_shape(a, b, "trace inner product");
  Rat s = 0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) s += a.entries()[i] * b.entries()[i];
  return s;
}

bool for_each_permutation(std::size_t n, const std::function<bool(const Permutation&)>& visit,
                          std::size_t cap) {
  if (n == 0) throw std::invalid_argument("permutations of an empty set");
  if (n > cap) {
    throw GuardExceeded("permutation enumeration of n=" + std::to_string(n) +
                        " exceeds cap " + std::to_string(cap));
  }
  std::vector<std::size_t> image(n);
  std::iota(image.begin(), image.end(), std::size_t{0});
  do {
    if (visit(Permutation(image))) return true;
  } while (std::next_permutation(image.begin(), image.end()));
  return false;
}

std::vector<Permutation> enumerate_permutations(std::size_t n, std::size_t cap) {
  std::vector<Permutation> all;
  for_each_permutation(
      n,
      [&](const Permutation& p) {
        all.push_back(p);
        return false;
      },
      cap);
  return all;
}

RatMatrix apply_similarity(const Permutation& p, const RatMatrix& a) {
  if (!a.is_square() || a.rows() != p.size()) {
    throw DimensionMismatch("similarity: permutation size does not match matrix");
  }
  return apply_equivalence(p, a, p);
}

RatMatrix apply_equivalence(const Permutation& p, const RatMatrix& a, const Permutation& q) {
  if (a.rows() != p.size() || a.cols() != q.size()) {
    throw DimensionMismatch("equivalence: permutation sizes do not match matrix");
  }
  RatMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(p[i], q[j]) = a(i, j);
  return r;
}

}  // namespace permutope
