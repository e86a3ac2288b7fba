#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "permutope/ratmat.hpp"

namespace permutope {

class NotAMember : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotCyclic : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Double index (i,k)(j,l) of an entry of an mn x mn matrix viewed as an
/// m x m array of n x n blocks.
struct VarIndex {
  std::size_t i = 0;
  std::size_t k = 0;
  std::size_t j = 0;
  std::size_t l = 0;

  friend bool operator==(const VarIndex&, const VarIndex&) = default;
};

struct BlockShape {
  std::size_t m = 0;
  std::size_t n = 0;

  std::size_t side() const { return m * n; }
  std::size_t num_vars() const { return side() * side(); }
  std::size_t flatten(const VarIndex& v) const { return (v.i * n + v.k) * side() + (v.j * n + v.l); }
  VarIndex unflatten(std::size_t flat) const;

  friend bool operator==(const BlockShape&, const BlockShape&) = default;
};

enum class Relation { Eq, Le };

struct Term {
  std::size_t var = 0;
  Rat coef;
};

using SparseObjective = std::vector<Term>;

struct Row {
  std::size_t id = 0;
  std::string label;
  std::vector<Term> terms;  // sorted by var, no zero coefficients
  Relation relation = Relation::Eq;
  Rat rhs;

  Rat evaluate(std::span<const Rat> x) const;
};

/// Affine rows over nonnegative variables x_0..x_{num_vars-1}.
class ConstraintSystem {
 public:
  explicit ConstraintSystem(std::size_t num_vars, std::optional<BlockShape> shape = std::nullopt);

  std::size_t num_vars() const { return num_vars_; }
  const std::optional<BlockShape>& shape() const { return shape_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  /// Every variable is implicitly constrained to be >= 0.
  bool nonneg() const { return true; }

  /// Duplicate variables are merged and zero coefficients dropped. Returns
  /// the ordinal id of the new row.
  std::size_t add_row(std::string label, std::vector<Term> terms, Relation relation, Rat rhs);
  /// Appends copies of all rows of `other`, renumbered.
  void append(const ConstraintSystem& other);

  std::size_t count(std::string_view label) const;

 private:
  std::size_t num_vars_;
  std::optional<BlockShape> shape_;
  std::vector<Row> rows_;
};

/// Which reference sum the second condition of the klcond group uses.
/// `Printed` follows the published formula verbatim (both conditions refer to
/// sum_j c_{(1,k)(j,l)}); `Symmetric` refers the column condition to
/// sum_j c_{(j,k)(1,l)}.
enum class KlcondVariant { Printed, Symmetric };

inline constexpr std::string_view kDscon = "dscon";
inline constexpr std::string_view kKlcond = "klcond";
inline constexpr std::string_view kIjcond = "ijcond";

/// Doubly stochastic rows for an `size` x `size` matrix: 2*size rows.
ConstraintSystem build_omega(std::size_t size);

/// dscon + klcond + ijcond: 2mn + (2m-2)n^2 + (2n-2)m^2 rows.
ConstraintSystem build_phi(std::size_t m, std::size_t n,
                           KlcondVariant variant = KlcondVariant::Printed);

/// dscon + ijcond: 2mn + (2n-2)m^2 rows.
ConstraintSystem build_theta(std::size_t m, std::size_t n);

struct LambdaMembership {
  bool member = false;
  Rat scale;  // common row/column sum when member
};

/// Nonnegative square matrix with every row and column sum equal.
LambdaMembership lambda_member(const RatMatrix& a, bool require_nonneg = true);

/// An mn x mn matrix as an m x m grid of n x n blocks.
class BlockMatrix {
 public:
  BlockMatrix(std::size_t m, std::size_t n);
  static BlockMatrix from_flat(const RatMatrix& c, std::size_t m, std::size_t n);

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  RatMatrix& block(std::size_t i, std::size_t j) { return blocks_[i * m_ + j]; }
  const RatMatrix& block(std::size_t i, std::size_t j) const { return blocks_[i * m_ + j]; }

  RatMatrix to_flat() const;

  friend bool operator==(const BlockMatrix&, const BlockMatrix&) = default;

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<RatMatrix> blocks_;
};

/// C_ij = weights(i,j) * blocks[i*m + j] with weights in Omega_m and every
/// block in Omega_n.
struct ThetaDecomposition {
  RatMatrix weights;
  std::vector<RatMatrix> blocks;

  const RatMatrix& block(std::size_t i, std::size_t j) const { return blocks[i * weights.rows() + j]; }
  BlockMatrix recompose() const;
};

/// Blocks with zero weight get the uniform doubly stochastic matrix.
ThetaDecomposition theta_decompose(const BlockMatrix& c);

/// (1/n) [P^i Q^j]_{i,j=1..n}. Both permutations must be single n-cycles,
/// checked as sum_{i=1..n} P^i == all-ones.
BlockMatrix rosenberg(const Permutation& p, const Permutation& q, std::size_t n);

struct Violation {
  static constexpr std::size_t kNonneg = static_cast<std::size_t>(-1);

  std::size_t row = kNonneg;  // row id, or kNonneg for a negative entry
  std::string label;
  std::size_t var = 0;  // offending variable when row == kNonneg
  Rat residual;         // lhs - rhs (or the negative entry itself)
};

struct CheckReport {
  std::vector<Violation> violations;
  bool feasible() const { return violations.empty(); }
};

CheckReport check_point(const ConstraintSystem& sys, std::span<const Rat> x);
/// Z in row-major order must supply exactly num_vars entries.
CheckReport check_point(const ConstraintSystem& sys, const RatMatrix& z);

std::string format_var(const ConstraintSystem& sys, std::size_t var);

/// One line per row: `<ordinal> <label> : <coef>*z[i,k,j,l] ... (=|<=) <rhs>`.
void write_system(std::ostream& os, const ConstraintSystem& sys);

}  // namespace permutope
