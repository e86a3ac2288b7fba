#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "permutope/lp.hpp"
#include "permutope/polytope.hpp"
#include "permutope/ratmat.hpp"

namespace permutope {

struct Graph {
  std::size_t n = 0;
  bool directed = false;
  /// Undirected edges are stored once, as (min, max).
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  bool loops_allowed = false;

  Graph() = default;
  Graph(std::size_t n, bool directed, std::vector<std::pair<std::size_t, std::size_t>> edges);

  RatMatrix adjacency() const;
  std::size_t edge_count() const { return edges.size(); }
};

struct BipartiteGraph {
  RatMatrix incidence;  // n x m, entries 0 or 1

  explicit BipartiteGraph(RatMatrix incidence);
  std::size_t n() const { return incidence.rows(); }
  std::size_t m() const { return incidence.cols(); }
};

enum class Status { NotRelated, RelaxationFeasible, ExactWitness };

enum class Reason {
  DiagMultiset,
  OffdiagMultiset,
  TracePrecondition,
  LpInfeasible,
  OracleExhausted,
  OracleFound,
};

enum class Relax { Phi, Theta };
enum class Mode { RelaxOnly, RelaxThenOracle };
enum class Problem { Similarity, Equivalence, Subgraph };

std::string_view to_string(Status s);
std::string_view to_string(Reason r);
std::string_view to_string(Relax r);
std::string_view to_string(Problem p);
std::string_view to_string(KlcondVariant k);
Status status_from_string(std::string_view s);
Reason reason_from_string(std::string_view s);
Relax relax_from_string(std::string_view s);
Problem problem_from_string(std::string_view s);
KlcondVariant klcond_from_string(std::string_view s);

struct PipelineOptions {
  Mode mode = Mode::RelaxThenOracle;
  Relax relax = Relax::Phi;
  KlcondVariant klcond = KlcondVariant::Printed;
  LpOptions lp = LpOptions::from_env();
  std::size_t similarity_cap = 8;
  std::size_t pair_cap = 5;
};

struct Verdict {
  Problem problem = Problem::Similarity;
  Status status = Status::RelaxationFeasible;
  std::optional<Reason> reason;  // absent for RelaxationFeasible

  /// ExactWitness: P (similarity, subgraph) or the pair (P, Q) (equivalence).
  std::optional<Permutation> p;
  std::optional<Permutation> q;
  /// RelaxationFeasible: the LP point Z over the relaxed system.
  std::optional<Vec> assignment;
  /// NotRelated(LpInfeasible): Farkas multipliers over the relaxed system.
  std::optional<Vec> certificate;

  BlockShape shape;  // layout of assignment entries
  Relax relax = Relax::Phi;
  KlcondVariant klcond = KlcondVariant::Printed;
  Rat shift;  // t, or the subgraph shift 2^{n^2}; zero for equivalence
  /// Bipartite only: B was replaced by B^T in this branch.
  bool transposed = false;
  /// Bipartite m == n: one verdict per evaluated branch, B first.
  std::vector<Verdict> branches;

  std::size_t pivots = 0;
  double elapsed_ms = 0;
  std::vector<std::string> notes;

  bool conclusive() const { return status != Status::RelaxationFeasible; }
};

enum class MultisetSide { None, Diagonal, OffDiagonal };

/// First failing comparison of sorted diagonal then off-diagonal multisets.
MultisetSide precondition_multisets(const RatMatrix& a, const RatMatrix& b);

/// Smallest nonnegative integer t outside {a_ij - a_kk : i != j}.
Rat choose_t(const RatMatrix& a);

/// Phi (or Theta) over n x n blocks plus the n^2 rows
/// sum_{j,l} z_{(i,k)(j,l)} (A+tI)_{lj} = (B+tI)_{ki}.
ConstraintSystem similarity_system(const RatMatrix& a, const RatMatrix& b, const Rat& t,
                                   Relax relax = Relax::Phi,
                                   KlcondVariant klcond = KlcondVariant::Printed);

/// A, B are n x m. Phi over m x m blocks of n x n plus the mn rows
/// sum_{j,l} z_{(i,k)(j,l)} a_{lj} = b_{ki}.
ConstraintSystem equivalence_system(const RatMatrix& a, const RatMatrix& b,
                                    Relax relax = Relax::Phi,
                                    KlcondVariant klcond = KlcondVariant::Printed);

/// 2^{n^2}.
BigInt subgraph_shift(std::size_t n);

/// Phi over n x n blocks plus n^2 rows Z vec(C + sI) <= vec(B + sI).
ConstraintSystem subgraph_system(const RatMatrix& c, const RatMatrix& b, const Rat& shift,
                                 Relax relax = Relax::Phi,
                                 KlcondVariant klcond = KlcondVariant::Printed);

/// A with n - A.rows() isolated vertices appended.
RatMatrix pad_adjacency(const RatMatrix& a, std::size_t n);

Verdict permutational_similarity(const RatMatrix& a, const RatMatrix& b,
                                 const PipelineOptions& options = {});
Verdict permutational_equivalence(const RatMatrix& a, const RatMatrix& b,
                                  const PipelineOptions& options = {});
Verdict graph_isomorphism(const Graph& g1, const Graph& g2, const PipelineOptions& options = {});
Verdict bipartite_isomorphism(const BipartiteGraph& g, const BipartiteGraph& h,
                              const PipelineOptions& options = {});
/// g3 has at most as many vertices as g2.
Verdict subgraph_isomorphism(const Graph& g3, const Graph& g2, const PipelineOptions& options = {});

struct WitnessCheck {
  bool ok = false;
  std::string detail;
};

/// Re-checks a verdict against its inputs: A, B for similarity and
/// equivalence (B untransposed for bipartite verdicts), padded C and B for
/// subgraph verdicts.
WitnessCheck verify_witness(const Verdict& v, const RatMatrix& a, const RatMatrix& b);

}  // namespace permutope
