#include <gtest/gtest.h>

#include <random>
#include <set>

#include "permutope/iso.hpp"
#include "permutope/oracle.hpp"
#include "permutope/polytope.hpp"

using namespace permutope;

namespace {

RatMatrix random_01(std::mt19937& rng, std::size_t rows, std::size_t cols) {
  RatMatrix m(rows, cols);
  for (auto& x : m.entries()) x = rng() % 2;
  return m;
}

RatMatrix random_int(std::mt19937& rng, std::size_t n) {
  RatMatrix m(n, n);
  for (auto& x : m.entries()) x = static_cast<int>(rng() % 7) - 3;
  return m;
}

Permutation random_perm(std::mt19937& rng, std::size_t n) {
  const auto all = enumerate_permutations(n);
  return all[rng() % all.size()];
}

// Canonical form: smallest edge bitmask over all relabelings.
unsigned canonical(const Graph& g) {
  unsigned best = ~0u;
  for (const auto& p : enumerate_permutations(g.n)) {
    unsigned mask = 0;
    for (auto [u, v] : g.edges) {
      std::size_t a = p.image()[u];
      std::size_t b = p.image()[v];
      if (a > b) std::swap(a, b);
      mask |= 1u << (a * g.n + b);
    }
    best = std::min(best, mask);
  }
  return best;
}

Vec flat(const RatMatrix& m) { return Vec(m.entries().begin(), m.entries().end()); }

}  // namespace

TEST(Oracle, SimilarityFindsRelabeling) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    const RatMatrix a = random_int(rng, n);
    const Permutation p = random_perm(rng, n);
    const RatMatrix b = apply_similarity(p, a);
    const auto found = oracle_exact_similarity(a, b);
    ASSERT_TRUE(found.has_value());
    EXPECT_EQ(apply_similarity(*found, a), b);
    EXPECT_LE(*found, p);  // lexicographically first
  }
  EXPECT_FALSE(oracle_exact_similarity(RatMatrix{{0, 1}, {0, 0}}, RatMatrix{{0, 1}, {1, 0}}));
  EXPECT_THROW(oracle_exact_similarity(RatMatrix::zeros(9, 9), RatMatrix::zeros(9, 9)),
               GuardExceeded);
}

TEST(Oracle, EquivalenceFindsRowAndColumnPermutations) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 2 + rng() % 3;
    const std::size_t cols = 2 + rng() % 3;
    const RatMatrix a = random_01(rng, rows, cols);
    const Permutation p = random_perm(rng, rows);
    const Permutation q = random_perm(rng, cols);
    const RatMatrix b = apply_equivalence(p, a, q);
    const auto found = oracle_exact_equivalence(a, b);
    ASSERT_TRUE(found.has_value());
    EXPECT_EQ(apply_equivalence(found->first, a, found->second), b);
  }
  EXPECT_FALSE(oracle_exact_equivalence(RatMatrix{{1, 1}, {0, 0}}, RatMatrix{{1, 0}, {0, 1}}));
}

TEST(Oracle, SubgraphDominance) {
  const RatMatrix path{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}};
  const RatMatrix tri{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  const auto found = oracle_exact_subgraph(path, tri);
  ASSERT_TRUE(found.has_value());
  const RatMatrix image = apply_similarity(*found, path);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_LE(image.entries()[i], tri.entries()[i]);
  EXPECT_FALSE(oracle_exact_subgraph(tri, path));
}

TEST(Psi, KronVerticesAreMembers) {
  for (std::size_t m = 1; m <= 3; ++m) {
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const auto& p : enumerate_permutations(m)) {
        for (const auto& q : enumerate_permutations(n)) {
          const auto res = psi_membership(kron(p.matrix(), q.matrix()), m, n);
          EXPECT_EQ(res.vertices.size(), enumerate_permutations(m).size() *
                                             enumerate_permutations(n).size());
          ASSERT_TRUE(res.member());
          EXPECT_TRUE(check_point(res.system, *res.outcome.witness).feasible());
        }
      }
    }
  }
}

TEST(Psi, VertexOrderIsOuterPInnerQ) {
  const auto res = psi_membership(RatMatrix::identity(6), 3, 2);
  ASSERT_EQ(res.vertices.size(), 12u);
  EXPECT_EQ(res.vertices[1].first, Permutation::identity(3));
  EXPECT_EQ(res.vertices[1].second, Permutation({1, 0}));
  EXPECT_EQ(res.vertices[2].first, Permutation({0, 2, 1}));
}

TEST(Psi, NonMembersCarryVerifiedCertificates) {
  RatMatrix z = RatMatrix::identity(4);
  z(0, 0) = 0;
  z(0, 1) = 1;
  const auto res = psi_membership(z, 2, 2);
  ASSERT_FALSE(res.member());
  EXPECT_TRUE(verify_farkas(res.system, *res.outcome.certificate).ok);
}

TEST(Psi, CyclicCounterexample) {
  const std::vector<std::size_t> pc{0, 2, 1, 3};
  const std::vector<std::size_t> qc{0, 1, 2, 3};
  const RatMatrix d4 =
      rosenberg(Permutation::from_cycle(4, pc), Permutation::from_cycle(4, qc), 4).to_flat();
  EXPECT_TRUE(check_point(build_phi(4, 4), d4).feasible());
  const auto res = psi_membership(d4, 4, 4);
  ASSERT_FALSE(res.member());
  EXPECT_TRUE(verify_farkas(res.system, *res.outcome.certificate).ok);

  const Permutation r = Permutation::from_cycle(3, std::vector<std::size_t>{0, 1, 2});
  for (const auto& p : {r, r.power(2)}) {
    for (const auto& q : {r, r.power(2)}) {
      const RatMatrix d3 = rosenberg(p, q, 3).to_flat();
      EXPECT_TRUE(check_point(build_phi(3, 3), d3).feasible());
      EXPECT_TRUE(psi_membership(d3, 3, 3).member());
    }
  }
}

TEST(Psi, SimilarityAgreesWithOracleOnSmallGraphs) {
  const auto graphs = enumerate_graphs(3, false);
  for (const auto& g : graphs) {
    for (const auto& h : graphs) {
      if (g.edge_count() != h.edge_count()) continue;
      const RatMatrix a = g.adjacency();
      const RatMatrix b = h.adjacency();
      const bool related = oracle_exact_similarity(a, b).has_value();
      const auto res = psi_similarity(a, b, choose_t(a));
      EXPECT_EQ(res.member(), related);
      if (!res.member()) EXPECT_TRUE(verify_farkas(res.system, *res.outcome.certificate).ok);
    }
  }
}

TEST(Maxchar, BothSidesAgree) {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const RatMatrix a = random_01(rng, 3, 3);
    const RatMatrix b = random_01(rng, 3, 3);
    const auto sides = maxchar_both_sides(a, b, 2);
    EXPECT_EQ(sides.lhs, sides.rhs);
  }
  EXPECT_THROW(maxchar_both_sides(RatMatrix(5, 5), RatMatrix(5, 5), 0), GuardExceeded);
}

TEST(Enumerate, GraphCountsMatchCanonicalForms) {
  const std::size_t labeled[] = {1, 1, 2, 8, 64, 1024};
  const std::size_t classes[] = {1, 1, 2, 4, 11, 34};
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto all = enumerate_graphs(n, false);
    EXPECT_EQ(all.size(), labeled[n]);
    std::set<unsigned> forms;
    for (const auto& g : all) forms.insert(canonical(g));
    EXPECT_EQ(forms.size(), classes[n]);
    const auto reps = enumerate_graphs(n, true);
    EXPECT_EQ(reps.size(), classes[n]);
    std::set<unsigned> rep_forms;
    for (const auto& g : reps) rep_forms.insert(canonical(g));
    EXPECT_EQ(rep_forms, forms);
  }
  EXPECT_THROW(enumerate_graphs(6, true), GuardExceeded);
}

TEST(Enumerate, VerticesOfPhiTwoByTwo) {
  const auto vertices = enumerate_vertices(build_phi(2, 2));
  std::set<Vec> expected;
  for (const auto& p : enumerate_permutations(2))
    for (const auto& q : enumerate_permutations(2)) expected.insert(flat(kron(p.matrix(), q.matrix())));
  EXPECT_EQ(std::set<Vec>(vertices.begin(), vertices.end()), expected);
  EXPECT_EQ(vertices.size(), 4u);
}

TEST(Enumerate, VerticesOfBirkhoff) {
  const auto vertices = enumerate_vertices(build_omega(3));
  ASSERT_EQ(vertices.size(), 6u);
  std::set<Vec> expected;
  for (const auto& p : enumerate_permutations(3)) expected.insert(flat(p.matrix()));
  EXPECT_EQ(std::set<Vec>(vertices.begin(), vertices.end()), expected);
}
