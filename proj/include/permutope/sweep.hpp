#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "permutope/iso.hpp"

namespace permutope {

enum class Agreement {
  /// Oracle finds a witness and the relaxation is feasible.
  Isomorphic,
  /// No witness; the pipeline refuted the pair.
  Refuted,
  /// No witness; the relaxation is feasible.
  Inconclusive,
  /// Oracle finds a witness but the pipeline says NotRelated.
  SoundnessViolation,
};

std::string_view to_string(Agreement a);

struct SweepPair {
  std::size_t first = 0;   // class index
  std::size_t second = 0;  // class index, >= first
  std::size_t edges_first = 0;
  std::size_t edges_second = 0;
  bool oracle_witness = false;
  Verdict verdict;
  bool verified = false;  // verify_witness on the verdict
  Agreement agreement = Agreement::Inconclusive;
};

struct SweepReport {
  std::size_t n = 0;
  std::size_t classes = 0;
  std::vector<SweepPair> pairs;

  std::size_t count(Agreement a) const;
  std::size_t unverified() const;
  bool sound() const { return count(Agreement::SoundnessViolation) == 0 && unverified() == 0; }
};

/// Every unordered pair of isomorphism classes of simple graphs on n vertices
/// (self-pairs included). The second graph is relabeled by the reversal
/// permutation. The pipeline runs in relaxation-only mode; the oracle
/// verdict comes from exhaustive enumeration.
SweepReport run_sweep(std::size_t n, PipelineOptions options, std::size_t threads = 1);

void write_sweep_csv(std::ostream& os, const SweepReport& report);

}  // namespace permutope
