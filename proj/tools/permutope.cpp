// Command-line front end for the permutation-polytope decision pipelines.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "permutope/io.hpp"
#include "permutope/iso.hpp"
#include "permutope/oracle.hpp"
#include "permutope/polytope.hpp"
#include "permutope/sweep.hpp"

using namespace permutope;

namespace {

constexpr int kExitConclusive = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUnsound = 3;
constexpr std::size_t kEmitCap = 8;

struct Flags {
  std::string mode = "exact";
  std::string relax = "phi";
  std::string klcond = "printed";

  PipelineOptions options() const {
    PipelineOptions o;
    o.mode = mode == "relax" ? Mode::RelaxOnly : Mode::RelaxThenOracle;
    o.relax = relax_from_string(relax);
    o.klcond = klcond_from_string(klcond);
    return o;
  }
};

void add_pipeline_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--mode", flags.mode, "relax: relaxation only; exact: escalate to enumeration")
      ->check(CLI::IsMember({"relax", "exact"}));
  cmd->add_option("--relax", flags.relax, "relaxation polytope")
      ->check(CLI::IsMember({"phi", "theta"}));
  cmd->add_option("--klcond", flags.klcond, "klcond column reference")
      ->check(CLI::IsMember({"printed", "symmetric"}));
}

int emit_verdict(const Verdict& v) {
  std::cout << verdict_to_json(v) << '\n';
  return v.conclusive() ? kExitConclusive : kExitInconclusive;
}

// "1,3,2,4" (1-based) -> 0-based cycle listing.
std::vector<std::size_t> parse_cycle(const std::string& text, std::size_t n) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    const std::size_t v = std::stoul(item);
    if (v < 1 || v > n) throw std::invalid_argument("cycle entry " + item + " outside 1.." + std::to_string(n));
    out.push_back(v - 1);
  }
  return out;
}

std::string format_cycle(const std::vector<std::size_t>& cycle) {
  std::string s;
  for (std::size_t v : cycle) s += (s.empty() ? "" : ",") + std::to_string(v + 1);
  return s;
}

int run_counterexample(std::size_t n, std::string pcycle, std::string qcycle) {
  if (n < 2) throw std::invalid_argument("counterexample: n must be at least 2");
  std::vector<std::size_t> p_default{0};
  if (n >= 3) p_default.insert(p_default.end(), {2, 1});
  else p_default.push_back(1);
  for (std::size_t v = 3; v < n; ++v) p_default.push_back(v);
  std::vector<std::size_t> q_default;
  for (std::size_t v = 0; v < n; ++v) q_default.push_back(v);

  const auto pc = pcycle.empty() ? p_default : parse_cycle(pcycle, n);
  const auto qc = qcycle.empty() ? q_default : parse_cycle(qcycle, n);
  const Permutation p = Permutation::from_cycle(n, pc);
  const Permutation q = Permutation::from_cycle(n, qc);
  const RatMatrix d = rosenberg(p, q, n).to_flat();

  nlohmann::json out;
  out["n"] = n;
  out["p_cycle"] = format_cycle(pc);
  out["q_cycle"] = format_cycle(qc);
  const CheckReport phi = check_point(build_phi(n, n), d);
  out["phi"] = {{"member", phi.feasible()}, {"violations", phi.violations.size()}};

  if (n > 4) {
    out["psi"] = {{"member", nullptr}, {"note", "vertex enumeration beyond cap"}};
  } else {
    const PsiMembership psi = psi_membership(d, n, n, kPsiVertexCap, LpOptions::from_env());
    nlohmann::json j{{"member", psi.member()}, {"pivots", psi.outcome.pivots}};
    if (psi.member()) {
      nlohmann::json weights = nlohmann::json::array();
      const Vec& w = *psi.outcome.witness;
      for (std::size_t v = 0; v < w.size(); ++v) {
        if (w[v] == 0) continue;
        weights.push_back({psi.vertices[v].first.image(), psi.vertices[v].second.image(),
                           format_rat(w[v])});
      }
      j["weights"] = weights;
      j["recombines"] = check_point(psi.system, w).feasible();
    } else {
      const CertificateCheck check = verify_farkas(psi.system, *psi.outcome.certificate);
      j["certificate_verified"] = check.ok;
      j["certificate_detail"] = check.detail;
    }
    out["psi"] = j;
  }
  std::cout << out.dump() << '\n';
  return kExitConclusive;
}

int run_sweep_command(std::size_t n, const Flags& flags, std::size_t threads) {
  const SweepReport report = run_sweep(n, flags.options(), threads);
  write_sweep_csv(std::cout, report);
  std::cerr << "classes " << report.classes << ", pairs " << report.pairs.size() << ": "
            << report.count(Agreement::Isomorphic) << " isomorphic, "
            << report.count(Agreement::Refuted) << " refuted, "
            << report.count(Agreement::Inconclusive) << " inconclusive, "
            << report.count(Agreement::SoundnessViolation) << " soundness violations, "
            << report.unverified() << " unverified\n";
  return report.sound() ? kExitConclusive : kExitUnsound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permutation-polytope relaxations for graph isomorphism and relatives"};
  app.require_subcommand(1);

  Flags flags;
  std::string first;
  std::string second;

  auto* iso = app.add_subcommand("iso", "graph isomorphism of two graph files");
  iso->add_option("g1", first)->required();
  iso->add_option("g2", second)->required();
  add_pipeline_flags(iso, flags);

  auto* bipiso = app.add_subcommand("bipiso", "bipartite isomorphism of two incidence matrices");
  bipiso->add_option("a", first)->required();
  bipiso->add_option("b", second)->required();
  add_pipeline_flags(bipiso, flags);

  auto* permsim = app.add_subcommand("permsim", "permutational similarity of two matrices");
  permsim->add_option("a", first)->required();
  permsim->add_option("b", second)->required();
  add_pipeline_flags(permsim, flags);

  auto* permequiv = app.add_subcommand("permequiv", "permutational equivalence of two matrices");
  permequiv->add_option("a", first)->required();
  permequiv->add_option("b", second)->required();
  add_pipeline_flags(permequiv, flags);

  auto* subiso = app.add_subcommand("subiso", "is the pattern graph a subgraph of the host");
  subiso->add_option("pattern", first)->required();
  subiso->add_option("host", second)->required();
  add_pipeline_flags(subiso, flags);

  std::size_t m = 0;
  std::size_t n = 0;
  std::string which;
  auto* emit = app.add_subcommand("emit", "print a constraint system");
  emit->add_option("m", m)->required();
  emit->add_option("n", n)->required();
  emit->add_option("which", which)->required()->check(CLI::IsMember({"omega", "phi", "theta"}));
  emit->add_option("--klcond", flags.klcond)->check(CLI::IsMember({"printed", "symmetric"}));

  std::size_t cn = 0;
  std::string pcycle;
  std::string qcycle;
  auto* counter = app.add_subcommand("counterexample", "Phi and Psi membership of (1/n)[P^i Q^j]");
  counter->add_option("n", cn)->required();
  counter->add_option("--p", pcycle, "cycle of P, 1-based, e.g. 1,3,2,4");
  counter->add_option("--q", qcycle, "cycle of Q, 1-based, e.g. 1,2,3,4");

  std::size_t sn = 0;
  std::size_t threads = 1;
  auto* sweep = app.add_subcommand("sweep", "all class pairs of simple graphs on n vertices");
  sweep->add_option("n", sn)->required();
  sweep->add_option("--threads", threads)->check(CLI::PositiveNumber);
  sweep->add_option("--relax", flags.relax)->check(CLI::IsMember({"phi", "theta"}));
  sweep->add_option("--klcond", flags.klcond)->check(CLI::IsMember({"printed", "symmetric"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (*iso) {
      return emit_verdict(
          graph_isomorphism(read_graph_file(first), read_graph_file(second), flags.options()));
    }
    if (*bipiso) {
      return emit_verdict(bipartite_isomorphism(BipartiteGraph(read_matrix_file(first)),
                                                BipartiteGraph(read_matrix_file(second)),
                                                flags.options()));
    }
    if (*permsim) {
      return emit_verdict(permutational_similarity(read_matrix_file(first),
                                                   read_matrix_file(second), flags.options()));
    }
    if (*permequiv) {
      return emit_verdict(permutational_equivalence(read_matrix_file(first),
                                                    read_matrix_file(second), flags.options()));
    }
    if (*subiso) {
      const Graph pattern = read_graph_file(first);
      const Graph host = read_graph_file(second);
      Verdict v = subgraph_isomorphism(pattern, host, flags.options());
      v.notes.push_back("shift 2^" + std::to_string(host.n * host.n));
      return emit_verdict(v);
    }
    if (*emit) {
      if (m == 0 || n == 0 || m > kEmitCap || n > kEmitCap) {
        throw std::invalid_argument("emit: m and n must lie in 1.." + std::to_string(kEmitCap));
      }
      ConstraintSystem sys = which == "omega" ? build_omega(m * n)
                             : which == "phi" ? build_phi(m, n, klcond_from_string(flags.klcond))
                                              : build_theta(m, n);
      write_system(std::cout, sys);
      std::cerr << "rows: " << sys.size() << " variables: " << sys.num_vars() << '\n';
      return kExitConclusive;
    }
    if (*counter) return run_counterexample(cn, pcycle, qcycle);
    if (*sweep) return run_sweep_command(sn, flags, threads);
  } catch (const ResourceCapExceeded& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return kExitInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
