#include "permutope/oracle.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "permutope/iso.hpp"

namespace permutope {

std::optional<Permutation> oracle_exact_similarity(const RatMatrix& a, const RatMatrix& b,
                                                   std::size_t cap) {
  if (!a.is_square() || a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("oracle: similarity needs square matrices of equal size");
  }
  std::optional<Permutation> found;
  for_each_permutation(
      a.rows(),
      [&](const Permutation& p) {
        if (apply_similarity(p, a) != b) return false;
        found = p;
        return true;
      },
      cap);
  return found;
}

std::optional<PermutationPair> oracle_exact_equivalence(const RatMatrix& a, const RatMatrix& b,
                                                        std::size_t cap) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("oracle: equivalence needs matrices of equal shape");
  }
  if (std::max(a.rows(), a.cols()) > cap) {
    throw GuardExceeded("oracle: pair enumeration beyond cap " + std::to_string(cap));
  }
  const auto cols = enumerate_permutations(a.cols(), cap);
  std::optional<PermutationPair> found;
  for_each_permutation(
      a.rows(),
      [&](const Permutation& p) {
        for (const auto& q : cols) {
          if (apply_equivalence(p, a, q) == b) {
            found.emplace(p, q);
            return true;
          }
        }
        return false;
      },
      cap);
  return found;
}

std::optional<Permutation> oracle_exact_subgraph(const RatMatrix& c, const RatMatrix& b,
                                                 std::size_t cap) {
  if (!c.is_square() || c.rows() != b.rows() || c.cols() != b.cols()) {
    throw DimensionMismatch("oracle: subgraph needs square matrices of equal size");
  }
  std::optional<Permutation> found;
  for_each_permutation(
      c.rows(),
      [&](const Permutation& p) {
        const RatMatrix moved = apply_similarity(p, c);
        const auto x = moved.entries();
        const auto y = b.entries();
        for (std::size_t e = 0; e < x.size(); ++e)
          if (x[e] > y[e]) return false;
        found = p;
        return true;
      },
      cap);
  return found;
}

namespace {

std::vector<PermutationPair> psi_vertices(std::size_t m, std::size_t n, std::size_t cap) {
  // m! * n! computed with early exit so large inputs cannot overflow.
  std::size_t count = 1;
  for (std::size_t f = 2; f <= m; ++f) count *= f;
  for (std::size_t f = 2; f <= n; ++f) {
    count *= f;
    if (count > cap) break;
  }
  if (count > cap || m > 10 || n > 10) {
    throw GuardExceeded("psi: " + std::to_string(m) + "!*" + std::to_string(n) +
                        "! vertices exceed cap " + std::to_string(cap));
  }
  std::vector<PermutationPair> out;
  const auto ps = enumerate_permutations(m);
  const auto qs = enumerate_permutations(n);
  for (const auto& p : ps)
    for (const auto& q : qs) out.emplace_back(p, q);
  return out;
}

void add_convexity(ConstraintSystem& sys) {
  std::vector<Term> terms;
  for (std::size_t v = 0; v < sys.num_vars(); ++v) terms.push_back({v, 1});
  sys.add_row("convex", std::move(terms), Relation::Eq, 1);
}

}  // namespace

PsiMembership psi_membership(const RatMatrix& z, std::size_t m, std::size_t n, std::size_t cap,
                             const LpOptions& options) {
  const std::size_t side = m * n;
  if (z.rows() != side || z.cols() != side) throw DimensionMismatch("psi: Z is not mn x mn");
  PsiMembership out;
  out.vertices = psi_vertices(m, n, cap);
  ConstraintSystem sys(out.vertices.size());

  // kron(P,Q) has a one at ((P[j], Q[l]), (j, l)).
  std::vector<std::vector<Term>> entry_terms(side * side);
  for (std::size_t v = 0; v < out.vertices.size(); ++v) {
    const auto& [p, q] = out.vertices[v];
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t l = 0; l < n; ++l) {
        const std::size_t r = p[j] * n + q[l];
        const std::size_t c = j * n + l;
        entry_terms[r * side + c].push_back({v, 1});
      }
    }
  }
  for (std::size_t e = 0; e < entry_terms.size(); ++e)
    sys.add_row("entry", std::move(entry_terms[e]), Relation::Eq, z.entries()[e]);
  add_convexity(sys);

  out.outcome = solve_feasibility(sys, options);
  out.system = std::move(sys);
  return out;
}

PsiMembership psi_similarity(const RatMatrix& a, const RatMatrix& b, const Rat& t,
                             std::size_t cap, const LpOptions& options) {
  if (!a.is_square() || a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("psi: similarity needs square matrices of equal size");
  }
  const std::size_t n = a.rows();
  const RatMatrix as = shift_diagonal(a, t);
  const RatMatrix bs = shift_diagonal(b, t);
  PsiMembership out;
  out.vertices = psi_vertices(n, n, cap);
  ConstraintSystem sys(out.vertices.size());

  std::vector<std::vector<Term>> row_terms(n * n);
  for (std::size_t v = 0; v < out.vertices.size(); ++v) {
    const Permutation pinv = out.vertices[v].first.inverse();
    const Permutation qinv = out.vertices[v].second.inverse();
    // Row (i,k) of kron(P,Q) vec(A') picks a'_{lj} with j = P^-1(i), l = Q^-1(k).
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const Rat& coef = as(qinv[k], pinv[i]);
        if (coef != 0) row_terms[i * n + k].push_back({v, coef});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      sys.add_row("sim", std::move(row_terms[i * n + k]), Relation::Eq, bs(k, i));
  add_convexity(sys);

  out.outcome = solve_feasibility(sys, options);
  out.system = std::move(sys);
  return out;
}

MaxcharSides maxchar_both_sides(const RatMatrix& a, const RatMatrix& b, const Rat& t,
                                std::size_t cap) {
  if (!a.is_square() || a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("maxchar: square matrices of equal size required");
  }
  const std::size_t n = a.rows();
  if (n > cap) throw GuardExceeded("maxchar: n=" + std::to_string(n) + " exceeds cap");
  const RatMatrix as = shift_diagonal(a, t);
  const RatMatrix bs = shift_diagonal(b, t);
  const auto perms = enumerate_permutations(n);

  MaxcharSides out;
  bool first = true;
  for (const auto& p : perms) {
    for (const auto& q : perms) {
      const Rat value = trace_inner(apply_equivalence(p, as, q), bs);
      if (first || value > out.lhs) out.lhs = value;
      first = false;
    }
  }

  const Vec va = vec(as);
  const Vec vb = vec(bs);
  std::vector<RatMatrix> mats;
  for (const auto& p : perms) mats.push_back(p.matrix());
  first = true;
  for (const auto& x : mats) {
    for (const auto& y : mats) {
      const Vec image = kron(x, y) * std::span<const Rat>(va);
      Rat value = 0;
      for (std::size_t e = 0; e < image.size(); ++e) value += vb[e] * image[e];
      if (first || value > out.rhs) out.rhs = value;
      first = false;
    }
  }
  return out;
}

std::vector<Graph> enumerate_graphs(std::size_t n, bool classes_only, std::size_t cap) {
  if (n == 0) throw std::invalid_argument("enumerate_graphs: n must be positive");
  if (n > cap) throw GuardExceeded("enumerate_graphs: n=" + std::to_string(n) + " exceeds cap");
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) slots.emplace_back(u, v);

  std::vector<Graph> out;
  std::vector<RatMatrix> reps;
  const std::size_t total = std::size_t{1} << slots.size();
  for (std::size_t mask = 0; mask < total; ++mask) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if ((mask >> s) & 1U) edges.push_back(slots[s]);
    Graph g(n, false, std::move(edges));
    if (classes_only) {
      const RatMatrix adj = g.adjacency();
      bool seen = false;
      for (std::size_t r = 0; r < reps.size() && !seen; ++r) {
        if (out[r].edge_count() != g.edge_count()) continue;
        seen = oracle_exact_similarity(reps[r], adj).has_value();
      }
      if (seen) continue;
      reps.push_back(adj);
    }
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

// Solves the square system m x = rhs exactly; nullopt when m is singular.
std::optional<Vec> solve_square(std::vector<Vec> m, Vec rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[c]);
    std::swap(rhs[piv], rhs[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const Rat f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  for (std::size_t r = 0; r < n; ++r) rhs[r] /= m[r][r];
  return rhs;
}

}  // namespace

std::vector<Vec> enumerate_vertices(const ConstraintSystem& sys, std::size_t basis_cap) {
  const std::size_t nv = sys.num_vars();
  std::vector<Vec> rows;
  Vec rhs;
  for (const auto& row : sys.rows()) {
    if (row.relation != Relation::Eq) {
      throw std::invalid_argument("enumerate_vertices: equality rows only");
    }
    Vec dense(nv);
    for (const auto& t : row.terms) dense[t.var] = t.coef;
    rows.push_back(std::move(dense));
    rhs.push_back(row.rhs);
  }

  // Row echelon form; keep the independent rows.
  std::size_t rank = 0;
  for (std::size_t c = 0; c < nv && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    std::swap(rhs[piv], rhs[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      const Rat f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < nv; ++k) rows[r][k] -= f * rows[rank][k];
      rhs[r] -= f * rhs[rank];
    }
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r)
    if (rhs[r] != 0) return {};
  rows.resize(rank);
  rhs.resize(rank);

  // C(nv, rank) column subsets.
  double subsets = 1;
  for (std::size_t i = 0; i < rank; ++i) subsets = subsets * double(nv - i) / double(i + 1);
  if (subsets > double(basis_cap)) {
    throw GuardExceeded("enumerate_vertices: too many candidate bases");
  }

  std::set<Vec> found;
  std::vector<bool> pick(nv, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(rank), true);
  do {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < nv; ++c)
      if (pick[c]) cols.push_back(c);
    std::vector<Vec> square(rank, Vec(rank));
    for (std::size_t r = 0; r < rank; ++r)
      for (std::size_t k = 0; k < rank; ++k) square[r][k] = rows[r][cols[k]];
    const auto basic = solve_square(std::move(square), rhs);
    if (!basic) continue;
    if (std::any_of(basic->begin(), basic->end(), [](const Rat& x) { return x < 0; })) continue;
    Vec x(nv);
    for (std::size_t k = 0; k < rank; ++k) x[cols[k]] = (*basic)[k];
    found.insert(std::move(x));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return {found.begin(), found.end()};
}

}  // namespace permutope
