#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pathcov {

struct SelfcheckOptions {
  std::uint64_t seed = 1;
  int diagrams = 500;
  /// Every conditioning set is tried up to this many nodes; larger diagrams
  /// get sampled_sets random sets per pair.
  int exhaustive_max_nodes = 7;
  int sampled_sets = 48;
  int max_failures_kept = 10;
};

struct SelfcheckReport {
  int diagrams = 0;
  long queries = 0;
  long passed = 0;
  long failed = 0;
  std::vector<std::string> failures;
};

/// Factorization certificates against the Schur oracle, exactly, on random
/// singly-connected diagrams. Only d-connected queries are certified.
/// Diagrams come from Rng::stream(seed, 0), sampled sets from stream 1.
SelfcheckReport run_selfcheck(const SelfcheckOptions& opt);

}  // namespace pathcov
