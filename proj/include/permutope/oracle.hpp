#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "permutope/lp.hpp"
#include "permutope/polytope.hpp"
#include "permutope/ratmat.hpp"

namespace permutope {

inline constexpr std::size_t kSimilarityOracleCap = 8;
inline constexpr std::size_t kPairOracleCap = 6;
inline constexpr std::size_t kPsiVertexCap = 1200;
inline constexpr std::size_t kMaxcharCap = 4;
inline constexpr std::size_t kGraphEnumerationCap = 5;

/// Lexicographically first P with P A P^T == B.
std::optional<Permutation> oracle_exact_similarity(const RatMatrix& a, const RatMatrix& b,
                                                   std::size_t cap = kSimilarityOracleCap);

using PermutationPair = std::pair<Permutation, Permutation>;

/// First (P, Q) with B == P A Q^T; P permutes the rows, Q the columns.
std::optional<PermutationPair> oracle_exact_equivalence(const RatMatrix& a, const RatMatrix& b,
                                                        std::size_t cap = kPairOracleCap);

/// First P with P C P^T <= B entrywise.
std::optional<Permutation> oracle_exact_subgraph(const RatMatrix& c, const RatMatrix& b,
                                                 std::size_t cap = kSimilarityOracleCap);

struct PsiMembership {
  /// Vertices kron(P, Q) in the order of the weight variables: P over S_m
  /// outermost, both lexicographic.
  std::vector<PermutationPair> vertices;
  ConstraintSystem system{0};
  LpOutcome outcome;

  bool member() const { return outcome.feasible(); }
};

/// Is Z a convex combination of the m!n! matrices kron(P, Q)?
PsiMembership psi_membership(const RatMatrix& z, std::size_t m, std::size_t n,
                             std::size_t cap = kPsiVertexCap, const LpOptions& options = {});

/// Convex weights on kron(P, Q), P, Q in S_n, whose combination Z satisfies
/// the similarity rows Z vec(A + tI) = vec(B + tI).
PsiMembership psi_similarity(const RatMatrix& a, const RatMatrix& b, const Rat& t,
                             std::size_t cap = kPsiVertexCap, const LpOptions& options = {});

struct MaxcharSides {
  Rat lhs;  // max over P, Q of tr P(A+tI)Q^T (B+tI)^T
  Rat rhs;  // max over Psi vertices Y of vec(B+tI)^T Y vec(A+tI)
};

MaxcharSides maxchar_both_sides(const RatMatrix& a, const RatMatrix& b, const Rat& t,
                                std::size_t cap = kMaxcharCap);

struct Graph;

/// All labeled simple graphs on n vertices, ordered by edge bitmask over the
/// pairs (0,1), (0,2), ..., (n-2,n-1). With `classes_only`, keeps the first
/// graph of each isomorphism class.
std::vector<Graph> enumerate_graphs(std::size_t n, bool classes_only,
                                    std::size_t cap = kGraphEnumerationCap);

/// Vertices of {x >= 0 : rows} for a system of equality rows, by exhaustive
/// inspection of column bases. Sorted and distinct.
std::vector<Vec> enumerate_vertices(const ConstraintSystem& sys,
                                    std::size_t basis_cap = 1'000'000);

}  // namespace permutope
