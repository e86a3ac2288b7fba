#include "permutope/iso.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <set>
#include <string>

#include "permutope/oracle.hpp"

namespace permutope {

Graph::Graph(std::size_t n_, bool directed_,
             std::vector<std::pair<std::size_t, std::size_t>> edges_in)
    : n(n_), directed(directed_), loops_allowed(directed_) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [u, v] : edges_in) {
    if (u >= n || v >= n) {
      throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") out of range for n=" + std::to_string(n));
    }
    if (u == v && !loops_allowed) {
      throw std::invalid_argument("self-loop at " + std::to_string(u) + " in undirected graph");
    }
    if (!directed && u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(u) + "," +
                                  std::to_string(v) + ")");
    }
    edges.emplace_back(u, v);
  }
}

RatMatrix Graph::adjacency() const {
  RatMatrix a(n, n);
  for (auto [u, v] : edges) {
    a(u, v) = 1;
    if (!directed) a(v, u) = 1;
  }
  return a;
}

BipartiteGraph::BipartiteGraph(RatMatrix m) : incidence(std::move(m)) {
  for (const auto& x : incidence.entries()) {
    if (x != 0 && x != 1) throw std::invalid_argument("incidence entries must be 0 or 1");
  }
}

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<E, N>& values, std::string_view what) {
  for (E v : values)
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(Status s) {
  switch (s) {
    case Status::NotRelated: return "NotRelated";
    case Status::RelaxationFeasible: return "RelaxationFeasible";
    case Status::ExactWitness: return "ExactWitness";
  }
  return "?";
}

std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::DiagMultiset: return "DiagMultiset";
    case Reason::OffdiagMultiset: return "OffdiagMultiset";
    case Reason::TracePrecondition: return "TracePrecondition";
    case Reason::LpInfeasible: return "LpInfeasible";
    case Reason::OracleExhausted: return "OracleExhausted";
    case Reason::OracleFound: return "OracleFound";
  }
  return "?";
}

std::string_view to_string(Relax r) { return r == Relax::Phi ? "phi" : "theta"; }

std::string_view to_string(Problem p) {
  switch (p) {
    case Problem::Similarity: return "similarity";
    case Problem::Equivalence: return "equivalence";
    case Problem::Subgraph: return "subgraph";
  }
  return "?";
}

std::string_view to_string(KlcondVariant k) {
  return k == KlcondVariant::Printed ? "printed" : "symmetric";
}

Status status_from_string(std::string_view s) {
  return parse_enum(s, std::array{Status::NotRelated, Status::RelaxationFeasible,
                                  Status::ExactWitness},
                    "status");
}

Reason reason_from_string(std::string_view s) {
  return parse_enum(s, std::array{Reason::DiagMultiset, Reason::OffdiagMultiset,
                                  Reason::TracePrecondition, Reason::LpInfeasible,
                                  Reason::OracleExhausted, Reason::OracleFound},
                    "reason");
}

Relax relax_from_string(std::string_view s) {
  return parse_enum(s, std::array{Relax::Phi, Relax::Theta}, "relaxation");
}

Problem problem_from_string(std::string_view s) {
  return parse_enum(s, std::array{Problem::Similarity, Problem::Equivalence, Problem::Subgraph},
                    "problem");
}

KlcondVariant klcond_from_string(std::string_view s) {
  return parse_enum(s, std::array{KlcondVariant::Printed, KlcondVariant::Symmetric}, "klcond");
}

namespace {

void require_same_square(const RatMatrix& a, const RatMatrix& b, std::string_view what) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw DimensionMismatch(std::string(what) + ": square matrices of equal size required");
  }
}

std::vector<Rat> sorted_part(const RatMatrix& a, bool diagonal) {
  std::vector<Rat> out;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if ((i == j) == diagonal) out.push_back(a(i, j));
  std::sort(out.begin(), out.end());
  return out;
}

ConstraintSystem base_system(std::size_t m, std::size_t n, Relax relax, KlcondVariant klcond) {
  return relax == Relax::Phi ? build_phi(m, n, klcond) : build_theta(m, n);
}

// Rows sum_{j,l} z_{(i,k)(j,l)} a_{lj} (rel) b_{ki}, for a with shape's n
// rows and m columns.
void add_product_rows(ConstraintSystem& sys, const BlockShape& s, const RatMatrix& a,
                      const RatMatrix& b, Relation rel, const char* label) {
  for (std::size_t i = 0; i < s.m; ++i) {
    for (std::size_t k = 0; k < s.n; ++k) {
      std::vector<Term> terms;
      for (std::size_t j = 0; j < s.m; ++j)
        for (std::size_t l = 0; l < s.n; ++l)
          if (a(l, j) != 0) terms.push_back({s.flatten({i, k, j, l}), a(l, j)});
      sys.add_row(label, std::move(terms), rel, b(k, i));
    }
  }
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Verdict fresh(Problem problem, BlockShape shape, const PipelineOptions& options) {
  Verdict v;
  v.problem = problem;
  v.shape = shape;
  v.relax = options.relax;
  v.klcond = options.klcond;
  return v;
}

Verdict refuted(Verdict v, Reason reason) {
  v.status = Status::NotRelated;
  v.reason = reason;
  return v;
}

// Returns true when the relaxation is feasible.
bool run_relaxation(Verdict& v, const ConstraintSystem& sys, const PipelineOptions& options) {
  LpOutcome out = solve_feasibility(sys, options.lp);
  v.pivots += out.pivots;
  if (!out.feasible()) {
    v.status = Status::NotRelated;
    v.reason = Reason::LpInfeasible;
    v.certificate = std::move(out.certificate);
    return false;
  }
  v.status = Status::RelaxationFeasible;
  v.reason.reset();
  v.assignment = std::move(out.witness);
  return true;
}

struct Found {
  Permutation p;
  std::optional<Permutation> q;
  RatMatrix lifted;  // the Psi vertex this witness induces
};

// Relaxation plus escalation. A witness found by enumeration lifts to a
// vertex of Psi, which is checked against the relaxed system in place of an
// LP; without a witness the LP decides between LpInfeasible and
// OracleExhausted.
template <typename Oracle>
void decide(Verdict& v, const ConstraintSystem& sys, const PipelineOptions& options,
            std::size_t size, std::size_t cap, Oracle oracle) {
  if (options.mode == Mode::RelaxOnly || size > cap) {
    if (run_relaxation(v, sys, options) && options.mode == Mode::RelaxThenOracle) {
      v.notes.push_back("oracle skipped: size " + std::to_string(size) + " exceeds cap " +
                        std::to_string(cap));
    }
    return;
  }
  if (std::optional<Found> hit = oracle()) {
    if (!check_point(sys, hit->lifted).feasible()) {
      throw std::logic_error("lifted witness violates the relaxed system");
    }
    v.status = Status::ExactWitness;
    v.reason = Reason::OracleFound;
    v.p = std::move(hit->p);
    v.q = std::move(hit->q);
    return;
  }
  if (run_relaxation(v, sys, options)) {
    v.status = Status::NotRelated;
    v.reason = Reason::OracleExhausted;
    v.assignment.reset();
  }
}

}  // namespace

MultisetSide precondition_multisets(const RatMatrix& a, const RatMatrix& b) {
  require_same_square(a, b, "precondition_multisets");
  if (sorted_part(a, true) != sorted_part(b, true)) return MultisetSide::Diagonal;
  if (sorted_part(a, false) != sorted_part(b, false)) return MultisetSide::OffDiagonal;
  return MultisetSide::None;
}

Rat choose_t(const RatMatrix& a) {
  if (!a.is_square()) throw DimensionMismatch("choose_t: square matrix required");
  std::set<Rat> forbidden;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j)
        for (std::size_t k = 0; k < a.rows(); ++k) forbidden.insert(a(i, j) - a(k, k));
  Rat t = 0;
  while (forbidden.count(t) != 0) t += 1;
  return t;
}

ConstraintSystem similarity_system(const RatMatrix& a, const RatMatrix& b, const Rat& t,
                                   Relax relax, KlcondVariant klcond) {
  require_same_square(a, b, "similarity_system");
  const std::size_t n = a.rows();
  ConstraintSystem sys = base_system(n, n, relax, klcond);
  add_product_rows(sys, BlockShape{n, n}, shift_diagonal(a, t), shift_diagonal(b, t),
                   Relation::Eq, "sim");
  return sys;
}

ConstraintSystem equivalence_system(const RatMatrix& a, const RatMatrix& b, Relax relax,
                                    KlcondVariant klcond) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("equivalence_system: matrices of equal shape required");
  }
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  ConstraintSystem sys = base_system(m, n, relax, klcond);
  add_product_rows(sys, BlockShape{m, n}, a, b, Relation::Eq, "equiv");
  return sys;
}

BigInt subgraph_shift(std::size_t n) {
  BigInt s = 1;
  s <<= static_cast<unsigned>(n * n);
  return s;
}

ConstraintSystem subgraph_system(const RatMatrix& c, const RatMatrix& b, const Rat& shift,
                                 Relax relax, KlcondVariant klcond) {
  require_same_square(c, b, "subgraph_system");
  const std::size_t n = c.rows();
  ConstraintSystem sys = base_system(n, n, relax, klcond);
  add_product_rows(sys, BlockShape{n, n}, shift_diagonal(c, shift), shift_diagonal(b, shift),
                   Relation::Le, "sub");
  return sys;
}

RatMatrix pad_adjacency(const RatMatrix& a, std::size_t n) {
  if (!a.is_square() || a.rows() > n) throw DimensionMismatch("pad_adjacency: cannot pad");
  RatMatrix out(n, n);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  return out;
}

Verdict permutational_similarity(const RatMatrix& a, const RatMatrix& b,
                                 const PipelineOptions& options) {
  const Stopwatch clock;
  require_same_square(a, b, "permutational_similarity");
  Verdict v = fresh(Problem::Similarity, BlockShape{a.rows(), a.rows()}, options);
  switch (precondition_multisets(a, b)) {
    case MultisetSide::Diagonal: v = refuted(std::move(v), Reason::DiagMultiset); break;
    case MultisetSide::OffDiagonal: v = refuted(std::move(v), Reason::OffdiagMultiset); break;
    case MultisetSide::None:
      v.shift = choose_t(a);
      decide(v, similarity_system(a, b, v.shift, options.relax, options.klcond), options,
             a.rows(), options.similarity_cap, [&]() -> std::optional<Found> {
               auto p = oracle_exact_similarity(a, b, options.similarity_cap);
               if (!p) return std::nullopt;
               const RatMatrix pm = p->matrix();
               return Found{*p, std::nullopt, kron(pm, pm)};
             });
      break;
  }
  v.elapsed_ms = clock.ms();
  return v;
}

Verdict permutational_equivalence(const RatMatrix& a, const RatMatrix& b,
                                  const PipelineOptions& options) {
  const Stopwatch clock;
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("permutational_equivalence: matrices of equal shape required");
  }
  Verdict v = fresh(Problem::Equivalence, BlockShape{a.cols(), a.rows()}, options);
  if (trace_inner(a, a) != trace_inner(b, b)) {
    v = refuted(std::move(v), Reason::TracePrecondition);
  } else {
    decide(v, equivalence_system(a, b, options.relax, options.klcond), options,
           std::max(a.rows(), a.cols()), options.pair_cap, [&]() -> std::optional<Found> {
             auto pq = oracle_exact_equivalence(a, b, options.pair_cap);
             if (!pq) return std::nullopt;
             RatMatrix lifted = kron(pq->second.matrix(), pq->first.matrix());
             return Found{std::move(pq->first), std::move(pq->second), std::move(lifted)};
           });
  }
  v.elapsed_ms = clock.ms();
  return v;
}

Verdict graph_isomorphism(const Graph& g1, const Graph& g2, const PipelineOptions& options) {
  if (g1.directed != g2.directed) {
    throw std::invalid_argument("graph_isomorphism: one graph is directed, the other is not");
  }
  if (g1.n != g2.n) throw DimensionMismatch("graph_isomorphism: vertex counts differ");
  return permutational_similarity(g1.adjacency(), g2.adjacency(), options);
}

Verdict bipartite_isomorphism(const BipartiteGraph& g, const BipartiteGraph& h,
                              const PipelineOptions& options) {
  if (g.n() != h.n() || g.m() != h.m()) {
    throw DimensionMismatch("bipartite_isomorphism: part sizes differ");
  }
  const Stopwatch clock;
  Verdict direct = permutational_equivalence(g.incidence, h.incidence, options);
  if (g.n() != g.m() || direct.status == Status::ExactWitness) return direct;

  Verdict swapped = permutational_equivalence(g.incidence, h.incidence.transpose(), options);
  swapped.transposed = true;

  Verdict out;
  if (swapped.status == Status::ExactWitness) {
    out = swapped;
  } else {
    out = fresh(Problem::Equivalence, direct.shape, options);
    if (direct.status == Status::NotRelated && swapped.status == Status::NotRelated) {
      out.status = Status::NotRelated;
      out.reason = direct.reason;
    } else {
      out.status = Status::RelaxationFeasible;
    }
  }
  out.pivots = direct.pivots + swapped.pivots;
  out.branches = {std::move(direct), std::move(swapped)};
  out.elapsed_ms = clock.ms();
  return out;
}

Verdict subgraph_isomorphism(const Graph& g3, const Graph& g2, const PipelineOptions& options) {
  if (g3.directed || g2.directed) {
    throw std::invalid_argument("subgraph_isomorphism: undirected graphs required");
  }
  if (g3.n > g2.n) {
    throw DimensionMismatch("subgraph_isomorphism: pattern has more vertices than host");
  }
  const Stopwatch clock;
  const std::size_t n = g2.n;
  Verdict v = fresh(Problem::Subgraph, BlockShape{n, n}, options);
  const RatMatrix c = pad_adjacency(g3.adjacency(), n);
  const RatMatrix b = g2.adjacency();
  v.shift = Rat(subgraph_shift(n));
  decide(v, subgraph_system(c, b, v.shift, options.relax, options.klcond), options, n,
         options.similarity_cap, [&]() -> std::optional<Found> {
           auto p = oracle_exact_subgraph(c, b, options.similarity_cap);
           if (!p) return std::nullopt;
           const RatMatrix pm = p->matrix();
           return Found{*p, std::nullopt, kron(pm, pm)};
         });
  v.elapsed_ms = clock.ms();
  return v;
}

namespace {

WitnessCheck fail(std::string detail) { return {false, std::move(detail)}; }

ConstraintSystem relaxed_system(const Verdict& v, const RatMatrix& a, const RatMatrix& b) {
  switch (v.problem) {
    case Problem::Similarity: return similarity_system(a, b, v.shift, v.relax, v.klcond);
    case Problem::Equivalence: return equivalence_system(a, b, v.relax, v.klcond);
    case Problem::Subgraph: return subgraph_system(a, b, v.shift, v.relax, v.klcond);
  }
  throw std::logic_error("unknown problem kind");
}

WitnessCheck check_exact(const Verdict& v, const RatMatrix& a, const RatMatrix& b) {
  if (!v.p) return fail("ExactWitness without a permutation");
  switch (v.problem) {
    case Problem::Similarity:
      if (v.p->size() != a.rows()) return fail("permutation has the wrong size");
      if (apply_similarity(*v.p, a) != b) return fail("P A P^T differs from B");
      return {true, "P A P^T == B"};
    case Problem::Equivalence:
      if (!v.q) return fail("equivalence witness lacks Q");
      if (v.p->size() != a.rows() || v.q->size() != a.cols()) {
        return fail("permutation sizes do not match A");
      }
      if (apply_equivalence(*v.p, a, *v.q) != b) return fail("P A Q^T differs from B");
      return {true, "P A Q^T == B"};
    case Problem::Subgraph: {
      if (v.p->size() != a.rows()) return fail("permutation has the wrong size");
      const RatMatrix moved = apply_similarity(*v.p, a);
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
          if (moved(i, j) > b(i, j)) {
            return fail("(P C P^T)(" + std::to_string(i) + "," + std::to_string(j) +
                        ") exceeds B");
          }
      return {true, "P C P^T <= B"};
    }
  }
  return fail("unknown problem kind");
}

WitnessCheck check_oracle_exhausted(const Verdict& v, const RatMatrix& a, const RatMatrix& b) {
  try {
    bool any = false;
    switch (v.problem) {
      case Problem::Similarity: any = oracle_exact_similarity(a, b).has_value(); break;
      case Problem::Equivalence: any = oracle_exact_equivalence(a, b).has_value(); break;
      case Problem::Subgraph: any = oracle_exact_subgraph(a, b).has_value(); break;
    }
    if (any) return fail("enumeration finds a witness");
    return {true, "enumeration finds no witness"};
  } catch (const GuardExceeded& e) {
    return fail(e.what());
  }
}

WitnessCheck check_refutation(const Verdict& v, const RatMatrix& a, const RatMatrix& b) {
  if (!v.reason) return fail("NotRelated without a reason");
  switch (*v.reason) {
    case Reason::DiagMultiset:
      if (precondition_multisets(a, b) != MultisetSide::Diagonal) {
        return fail("diagonal multisets do not differ first");
      }
      return {true, "diagonal multisets differ"};
    case Reason::OffdiagMultiset:
      if (precondition_multisets(a, b) != MultisetSide::OffDiagonal) {
        return fail("off-diagonal multisets do not differ first");
      }
      return {true, "off-diagonal multisets differ"};
    case Reason::TracePrecondition:
      if (trace_inner(a, a) == trace_inner(b, b)) return fail("tr AA^T == tr BB^T");
      return {true, "tr AA^T != tr BB^T"};
    case Reason::LpInfeasible: {
      if (!v.certificate) return fail("LpInfeasible without a certificate");
      const auto check = verify_farkas(relaxed_system(v, a, b), *v.certificate);
      return {check.ok, check.detail};
    }
    case Reason::OracleExhausted: return check_oracle_exhausted(v, a, b);
    case Reason::OracleFound: return fail("NotRelated with reason OracleFound");
  }
  return fail("unknown reason");
}

}  // namespace

WitnessCheck verify_witness(const Verdict& v, const RatMatrix& a, const RatMatrix& b) {
  for (std::size_t k = 0; k < v.branches.size(); ++k) {
    const WitnessCheck r = verify_witness(v.branches[k], a, b);
    if (!r.ok) return fail("branch " + std::to_string(k) + ": " + r.detail);
  }
  if (!v.branches.empty() && v.status != Status::ExactWitness) {
    const bool all_refuted = std::all_of(v.branches.begin(), v.branches.end(), [](const auto& x) {
      return x.status == Status::NotRelated;
    });
    if ((v.status == Status::NotRelated) != all_refuted) {
      return fail("combined status disagrees with its branches");
    }
    return {true, "every branch verified"};
  }

  const RatMatrix target = v.transposed ? b.transpose() : b;
  try {
    switch (v.status) {
      case Status::ExactWitness: return check_exact(v, a, target);
      case Status::NotRelated: return check_refutation(v, a, target);
      case Status::RelaxationFeasible: {
        if (!v.assignment) return fail("RelaxationFeasible without an assignment");
        const ConstraintSystem sys = relaxed_system(v, a, target);
        if (v.assignment->size() != sys.num_vars()) return fail("assignment has the wrong length");
        const CheckReport report = check_point(sys, *v.assignment);
        if (!report.feasible()) {
          const Violation& bad = report.violations.front();
          if (bad.row == Violation::kNonneg) {
            return fail("negative entry " + format_var(sys, bad.var));
          }
          return fail("row " + std::to_string(bad.row) + " (" + bad.label + ") off by " +
                      format_rat(bad.residual));
        }
        return {true, "assignment satisfies every row"};
      }
    }
  } catch (const std::invalid_argument& e) {
    return fail(e.what());
  }
  return fail("unknown status");
}

}  // namespace permutope
