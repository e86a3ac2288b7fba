// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "permutope/iso.hpp"
#include "permutope/lp.hpp"
#include "permutope/oracle.hpp"
#include "permutope/polytope.hpp"
#include "permutope/sweep.hpp"

using namespace permutope;

namespace {

// Criterion 9 tallies every proof check made by criteria 1-8.
std::size_t g_checks = 0;
std::size_t g_check_failures = 0;

bool note_check(bool ok, const std::string& what) {
  ++g_checks;
  if (!ok) {
    ++g_check_failures;
    std::cerr << "  proof check failed: " << what << '\n';
  }
  return ok;
}

bool checked(const Verdict& v, const RatMatrix& a, const RatMatrix& b, const std::string& what) {
  const WitnessCheck c = verify_witness(v, a, b);
  return note_check(c.ok, what + ": " + c.detail);
}

bool checked_lp(const ConstraintSystem& sys, const LpOutcome& out, const std::string& what) {
  if (out.feasible()) return note_check(check_point(sys, *out.witness).feasible(), what);
  const CertificateCheck c = verify_farkas(sys, *out.certificate);
  return note_check(c.ok, what + ": " + c.detail);
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::size_t phi_rows(std::size_t m, std::size_t n) {
  return 2 * m * n + (2 * n - 2) * m * m + (2 * m - 2) * n * n;
}

std::size_t theta_rows(std::size_t m, std::size_t n) { return 2 * m * n + (2 * n - 2) * m * m; }

std::size_t cli_line_count(const std::string& args) {
  const std::string cmd = std::string(PERMUTOPE_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return 0;
  std::size_t lines = 0;
  for (int c; (c = std::fgetc(pipe)) != EOF;) lines += c == '\n';
  const int status = ::pclose(pipe);
  return WIFEXITED(status) && WEXITSTATUS(status) == 0 ? lines : 0;
}

Outcome constraint_counts() {
  Outcome o;
  std::ostringstream d;
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 3}, {4, 4}}) {
    const std::size_t phi = build_phi(m, n).size();
    const std::size_t theta = build_theta(m, n).size();
    const std::string mn = std::to_string(m) + " " + std::to_string(n);
    const std::size_t cli_phi = cli_line_count("emit " + mn + " phi");
    const std::size_t cli_theta = cli_line_count("emit " + mn + " theta");
    const bool ok = phi == phi_rows(m, n) && theta == theta_rows(m, n) && cli_phi == phi &&
                    cli_theta == theta;
    o.pass = o.pass && ok;
    d << "(" << m << "," << n << ") phi " << cli_phi << " theta " << cli_theta << "; ";
  }
  o.detail = d.str();
  return o;
}

Outcome vertices_of_phi22() {
  const auto vertices = enumerate_vertices(build_phi(2, 2));
  std::set<Vec> expected;
  for (const auto& p : enumerate_permutations(2)) {
    for (const auto& q : enumerate_permutations(2)) {
      const RatMatrix k = kron(p.matrix(), q.matrix());
      expected.insert(Vec(k.entries().begin(), k.entries().end()));
    }
  }
  const std::set<Vec> got(vertices.begin(), vertices.end());
  for (const Vec& v : vertices) note_check(check_point(build_phi(2, 2), v).feasible(), "phi22 vertex");
  return {got == expected && vertices.size() == 4,
          std::to_string(vertices.size()) + " vertices, all of the form kron(P,Q): " +
              (got == expected ? "yes" : "no")};
}

Outcome rosenberg_counterexample() {
  Outcome o;
  const std::vector<std::size_t> pc{0, 2, 1, 3};
  const std::vector<std::size_t> qc{0, 1, 2, 3};
  const RatMatrix d4 =
      rosenberg(Permutation::from_cycle(4, pc), Permutation::from_cycle(4, qc), 4).to_flat();
  const bool in_phi = check_point(build_phi(4, 4), d4).feasible();
  const PsiMembership psi = psi_membership(d4, 4, 4);
  const bool refuted = !psi.member() && checked_lp(psi.system, psi.outcome, "psi n=4");
  o.pass = in_phi && refuted && psi.vertices.size() == 576;
  std::ostringstream d;
  d << "n=4 phi " << (in_phi ? "member" : "VIOLATED") << ", psi over " << psi.vertices.size()
    << " vertices " << (psi.member() ? "FEASIBLE" : "infeasible (certificate verified)");

  const Permutation r = Permutation::from_cycle(3, std::vector<std::size_t>{0, 1, 2});
  std::size_t feasible = 0;
  for (const auto& p : {r, r.power(2)}) {
    for (const auto& q : {r, r.power(2)}) {
      const RatMatrix d3 = rosenberg(p, q, 3).to_flat();
      const PsiMembership m3 = psi_membership(d3, 3, 3);
      if (m3.member() && check_point(build_phi(3, 3), d3).feasible() &&
          checked_lp(m3.system, m3.outcome, "psi n=3"))
        ++feasible;
    }
  }
  o.pass = o.pass && feasible == 4;
  d << "; n=3 feasible " << feasible << "/4";
  o.detail = d.str();
  return o;
}

Outcome soundness_sweeps() {
  Outcome o;
  std::ostringstream d;
  for (std::size_t n : {4, 5}) {
    const SweepReport report = run_sweep(n, PipelineOptions{});
    for (const auto& pair : report.pairs) note_check(pair.verified, "sweep pair");
    const std::size_t expected = report.classes * (report.classes + 1) / 2;
    o.pass = o.pass && report.sound() && report.pairs.size() == expected;
    d << "n=" << n << ": " << report.pairs.size() << " pairs, "
      << report.count(Agreement::Isomorphic) << " isomorphic, "
      << report.count(Agreement::Refuted) << " refuted, "
      << report.count(Agreement::Inconclusive) << " inconclusive, "
      << report.count(Agreement::SoundnessViolation) << " violations; ";
  }
  o.detail = d.str();
  return o;
}

RatMatrix random_rational(std::mt19937& rng, std::size_t rows, std::size_t cols) {
  RatMatrix m(rows, cols);
  for (auto& x : m.entries()) x = Rat(static_cast<int>(rng() % 41) - 20, 1 + rng() % 12);
  return m;
}

Outcome vec_kron_identity() {
  std::mt19937 rng(2024);
  std::size_t vec_ok = 0;
  std::size_t mixed_ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 4;
    const std::size_t n = 1 + rng() % 4;
    const RatMatrix a = random_rational(rng, m, m);
    const RatMatrix b = random_rational(rng, n, n);
    const RatMatrix x = random_rational(rng, n, m);
    const Vec vx = vec(x);
    if (vec(b * x * a.transpose()) == kron(a, b) * std::span<const Rat>(vx)) ++vec_ok;
    const RatMatrix c = random_rational(rng, m, m);
    const RatMatrix d = random_rational(rng, n, n);
    if (kron(a, b) * kron(c, d) == kron(a * c, b * d)) ++mixed_ok;
  }
  return {vec_ok == 200 && mixed_ok == 200,
          "vec " + std::to_string(vec_ok) + "/200, mixed product " + std::to_string(mixed_ok) + "/200"};
}

Outcome max_trace_equality() {
  std::mt19937 rng(77);
  std::size_t equal = 0;
  for (int trial = 0; trial < 20; ++trial) {
    RatMatrix a(3, 3);
    RatMatrix b(3, 3);
    for (auto& x : a.entries()) x = rng() % 2;
    for (auto& x : b.entries()) x = rng() % 2;
    const MaxcharSides s = maxchar_both_sides(a, b, 2);
    if (s.lhs == s.rhs) ++equal;
  }
  return {equal == 20, std::to_string(equal) + "/20 pairs equal"};
}

Outcome t_selection() {
  // Group all 512 matrices by their (diagonal, off-diagonal) multisets; only
  // pairs within a group pass the preconditions.
  std::map<std::pair<std::vector<Rat>, std::vector<Rat>>, std::vector<RatMatrix>> groups;
  for (unsigned mask = 0; mask < 512; ++mask) {
    RatMatrix a(3, 3);
    std::vector<Rat> diag;
    std::vector<Rat> off;
    for (std::size_t x = 0; x < 9; ++x) {
      a.entries()[x] = (mask >> x) & 1;
      (x / 3 == x % 3 ? diag : off).push_back(a.entries()[x]);
    }
    std::sort(diag.begin(), diag.end());
    std::sort(off.begin(), off.end());
    groups[{diag, off}].push_back(a);
  }
  const auto perms = enumerate_permutations(3);
  std::size_t pairs = 0;
  std::size_t agree = 0;
  for (const auto& [key, mats] : groups) {
    for (const auto& a : mats) {
      const Rat t = choose_t(a);
      const RatMatrix as = shift_diagonal(a, t);
      std::set<std::vector<Rat>> similar;
      std::set<std::vector<Rat>> shifted;
      for (const auto& p : perms) {
        const RatMatrix s = apply_similarity(p, a);
        similar.emplace(s.entries().begin(), s.entries().end());
        for (const auto& q : perms) {
          const RatMatrix e = apply_equivalence(p, as, q);
          shifted.emplace(e.entries().begin(), e.entries().end());
        }
      }
      for (const auto& b : mats) {
        if (precondition_multisets(a, b) != MultisetSide::None) continue;
        const RatMatrix bs = shift_diagonal(b, t);
        const bool lhs = similar.count(std::vector<Rat>(b.entries().begin(), b.entries().end())) > 0;
        const bool rhs = shifted.count(std::vector<Rat>(bs.entries().begin(), bs.entries().end())) > 0;
        ++pairs;
        agree += lhs == rhs;
      }
    }
  }
  return {agree == pairs && pairs > 0,
          std::to_string(agree) + "/" + std::to_string(pairs) + " precondition-passing pairs agree"};
}

Graph complete(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph(n, false, e);
}

Outcome subgraph_checks() {
  Outcome o;
  std::ostringstream d;
  const Graph tri = complete(3);
  const Graph k4 = complete(4);
  const Graph p4(4, false, {{0, 1}, {1, 2}, {2, 3}});
  const RatMatrix c = pad_adjacency(tri.adjacency(), 4);

  const Verdict into_k4 = subgraph_isomorphism(tri, k4);
  const bool k4_ok = into_k4.status == Status::ExactWitness &&
                     checked(into_k4, c, k4.adjacency(), "triangle into K4");
  const Verdict into_p4 = subgraph_isomorphism(tri, p4);
  const bool oracle_none = !oracle_exact_subgraph(c, p4.adjacency()).has_value();
  const bool p4_ok = oracle_none && into_p4.status != Status::ExactWitness &&
                     checked(into_p4, c, p4.adjacency(), "triangle into P4");
  bool bound = true;
  BigInt factorial = 1;
  for (std::size_t n = 1; n <= 12; ++n) {
    factorial *= n;
    bound = bound && factorial * factorial < subgraph_shift(n);
  }
  o.pass = k4_ok && p4_ok && bound;
  d << "triangle->K4 " << to_string(into_k4.status) << ", triangle->P4 "
    << to_string(into_p4.status);
  if (into_p4.reason) d << "(" << to_string(*into_p4.reason) << ")";
  d << " oracle " << (oracle_none ? "none" : "FOUND") << ", shift bound n=1..12 "
    << (bound ? "holds" : "FAILS");
  o.detail = d.str();
  return o;
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  struct Criterion {
    int id;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, 1, constraint_counts},        {2, 5, vertices_of_phi22},
      {3, 60, rosenberg_counterexample}, {4, 1800, soundness_sweeps},
      {5, 10, vec_kron_identity},        {6, 60, max_trace_equality},
      {7, 300, t_selection},             {8, 10, subgraph_checks},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    all = all && pass;
    std::printf("criterion %d: %s (%.2fs of %.0fs) %s%s\n", c.id, pass ? "PASS" : "FAIL", secs,
                c.budget_s, o.detail.c_str(), in_time ? "" : " [over time budget]");
    std::fflush(stdout);
  }
  const bool integrity = g_check_failures == 0 && g_checks > 0;
  all = all && integrity;
  std::printf("criterion 9: %s %zu proof checks, %zu failures\n", integrity ? "PASS" : "FAIL",
              g_checks, g_check_failures);
  return all ? 0 : 1;
}
