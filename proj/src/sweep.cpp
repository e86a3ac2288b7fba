#include "permutope/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "permutope/oracle.hpp"

namespace permutope {

std::string_view to_string(Agreement a) {
  switch (a) {
    case Agreement::Isomorphic: return "isomorphic";
    case Agreement::Refuted: return "refuted";
    case Agreement::Inconclusive: return "inconclusive";
    case Agreement::SoundnessViolation: return "soundness-violation";
  }
  return "?";
}

std::size_t SweepReport::count(Agreement a) const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [&](const auto& p) { return p.agreement == a; }));
}

std::size_t SweepReport::unverified() const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const auto& p) { return !p.verified; }));
}

namespace {

Agreement classify(bool witness, Status status) {
  if (witness) {
    return status == Status::NotRelated ? Agreement::SoundnessViolation : Agreement::Isomorphic;
  }
  return status == Status::NotRelated ? Agreement::Refuted : Agreement::Inconclusive;
}

}  // namespace

SweepReport run_sweep(std::size_t n, PipelineOptions options, std::size_t threads) {
  options.mode = Mode::RelaxOnly;
  const std::vector<Graph> classes = enumerate_graphs(n, true);
  std::vector<std::size_t> reversal(n);
  for (std::size_t i = 0; i < n; ++i) reversal[i] = n - 1 - i;
  const Permutation relabel(reversal);

  SweepReport report;
  report.n = n;
  report.classes = classes.size();
  for (std::size_t x = 0; x < classes.size(); ++x) {
    for (std::size_t y = x; y < classes.size(); ++y) {
      SweepPair p;
      p.first = x;
      p.second = y;
      p.edges_first = classes[x].edge_count();
      p.edges_second = classes[y].edge_count();
      report.pairs.push_back(std::move(p));
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < report.pairs.size(); k = next++) {
      try {
        SweepPair& p = report.pairs[k];
        const RatMatrix a = classes[p.first].adjacency();
        const RatMatrix b = apply_similarity(relabel, classes[p.second].adjacency());
        p.oracle_witness = oracle_exact_similarity(a, b).has_value();
        p.verdict = permutational_similarity(a, b, options);
        p.verified = verify_witness(p.verdict, a, b).ok;
        p.agreement = classify(p.oracle_witness, p.verdict.status);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = report.pairs.size();
      }
    }
  };
  const std::size_t count = std::max<std::size_t>(1, std::min(threads, report.pairs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return report;
}

void write_sweep_csv(std::ostream& os, const SweepReport& report) {
  os << "n,first,second,edges_first,edges_second,oracle,status,reason,agreement,verified,"
        "pivots,elapsed_ms\n";
  for (const auto& p : report.pairs) {
    os << report.n << ',' << p.first << ',' << p.second << ',' << p.edges_first << ','
       << p.edges_second << ',' << (p.oracle_witness ? "witness" : "none") << ','
       << to_string(p.verdict.status) << ','
       << (p.verdict.reason ? to_string(*p.verdict.reason) : std::string_view("-")) << ','
       << to_string(p.agreement) << ',' << (p.verified ? "yes" : "no") << ',' << p.verdict.pivots
       << ',' << p.verdict.elapsed_ms << '\n';
  }
}

}  // namespace permutope
