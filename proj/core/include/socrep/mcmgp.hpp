// Copyright 2026 The socrep Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOCREP_MCMGP_HPP_
#define SOCREP_MCMGP_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>

#include "socrep/mediated.hpp"

namespace socrep {

/// Limits for the exact search. Absent limits are unbounded. Node and time
/// limits are shared by all cardinalities tried in one solve_exact call.
struct SearchBudget {
  std::optional<std::int64_t> max_cardinality;
  std::optional<std::uint64_t> node_limit;
  std::optional<std::chrono::milliseconds> time_limit;
  /// Worker threads splitting the root branches. With more than one thread
  /// the returned graph depends on scheduling.
  unsigned threads = 1;

  /// Throws InvalidInput when a present limit is not positive.
  void check() const;
};

enum class SearchStatus {
  kFound,       // a graph with at most k mediated nodes was found
  kInfeasible,  // the whole search space was exhausted
  kUnknown,     // the budget ran out first
};

std::string_view to_string(SearchStatus s);

struct FeasibilityResult {
  SearchStatus status = SearchStatus::kUnknown;
  std::optional<MediatedGraph> graph;
  std::uint64_t nodes = 0;
};

/// Is there an alpha-mediated graph on the integer lattice with at most k
/// mediated nodes? Never reports kInfeasible unless the search completed.
FeasibilityResult feasible_at(const AlphaWeight& alpha, std::int64_t k,
                              const SearchBudget& budget = {});

enum class ProofStatus {
  kOptimal,    // every smaller cardinality was proven infeasible
  kFeasible,   // valid, but some smaller cardinality was not settled
  kHeuristic,  // budget ran out; binary decomposition fallback
};

std::string_view to_string(ProofStatus s);

struct SolveResult {
  MediatedGraph graph;
  ProofStatus status;
  bool order_dependent = false;
  std::uint64_t nodes = 0;
  /// Largest cardinality proven infeasible, 0 when none was.
  std::int64_t proven_infeasible_below = 0;
};

/// Iterative deepening k = lower_bound, lower_bound + 1, ... over the integer
/// lattice. When every k below upper_bound is infeasible the binary
/// decomposition graph is returned as the certificate at upper_bound.
SolveResult solve_exact(const AlphaWeight& alpha,
                        const SearchBudget& budget = {});

}  // namespace socrep

#endif  // SOCREP_MCMGP_HPP_
