#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "permutope/polytope.hpp"

namespace permutope {

class ResourceCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Unbounded : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class PivotRule {
  /// Lowest-index entering column, lowest-index leaving basic variable.
  Bland,
  /// Most negative reduced cost, falling back to Bland after a run of
  /// degenerate pivots.
  DantzigBland,
  /// Most negative reduced cost with a lexicographic ratio test.
  Lexicographic,
};

inline constexpr std::size_t kDefaultPivotCap = 1'000'000;
inline constexpr const char* kPivotCapEnv = "PERMUTOPE_PIVOT_CAP";

struct LpOptions {
  std::size_t pivot_cap = kDefaultPivotCap;
  PivotRule rule = PivotRule::Lexicographic;
  /// Fix variables forced to zero by sign-definite rows (or row minus a
  /// multiple of a positive equality covering it) with zero right-hand side
  /// before pivoting. Certificates are lifted back to the full system.
  bool presolve = true;

  /// Defaults, with the pivot cap taken from PERMUTOPE_PIVOT_CAP when set.
  static LpOptions from_env();
};

enum class LpStatus { Feasible, Infeasible };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  /// x >= 0 satisfying every row; present iff Feasible.
  std::optional<Vec> witness;
  /// One multiplier per row; present iff Infeasible. See verify_farkas.
  std::optional<Vec> certificate;
  std::size_t pivots = 0;

  bool feasible() const { return status == LpStatus::Feasible; }
};

struct LpOptimum {
  Rat value;
  Vec argmax;
  std::size_t pivots = 0;
};

LpOutcome solve_feasibility(const ConstraintSystem& sys, const LpOptions& options = {});

/// Maximizes sum(coef * x[var]) over the system. Throws InfeasibleInput when
/// the system has no point and Unbounded if the objective is unbounded.
LpOptimum maximize(const ConstraintSystem& sys, const SparseObjective& objective,
                   const LpOptions& options = {});

struct CertificateCheck {
  bool ok = false;
  std::string detail;
};

/// Checks y proves infeasibility of {rows, x >= 0}: every column of y^T A is
/// >= 0, y_r >= 0 on <= rows, and y^T b < 0. Evaluated by plain dot products.
CertificateCheck verify_farkas(const ConstraintSystem& sys, std::span<const Rat> y);

Rat evaluate(const SparseObjective& objective, std::span<const Rat> x);

}  // namespace permutope
