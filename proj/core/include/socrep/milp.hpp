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

#ifndef SOCREP_MILP_HPP_
#define SOCREP_MILP_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "socrep/mediated.hpp"

namespace socrep {

struct MilpOptions {
  bool vi1 = false;  // inactive nodes pinned to (shat, ..., shat)
  bool vi2 = false;  // active nodes occupy a prefix of the indices
  bool vi3 = false;  // active nodes sorted on one coordinate
  bool tree = false;
  double epsilon = 1.0;
  /// Coefficient of the averaging constraints; shat when absent.
  std::optional<double> big_m;
  /// 1-based coordinate sorted by vi3.
  std::size_t vi3_coordinate = 1;
};

struct MilpVariable {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  bool binary = false;

  bool fixed() const { return lower == upper; }
};

struct MilpTerm {
  std::size_t var;
  double coef;
};

enum class RowSense { kLe, kGe, kEq };

struct MilpRow {
  std::string name;
  std::vector<MilpTerm> terms;
  RowSense sense;
  double rhs;
};

struct MilpCounts {
  std::size_t y_binaries = 0;
  std::size_t z_binaries = 0;        // free ones, z_0..z_d excluded
  std::size_t separation_binaries = 0;
  std::size_t continuous = 0;
  std::size_t constraints = 0;

  std::size_t binaries() const {
    return y_binaries + z_binaries + separation_binaries;
  }
};

class MilpModel {
 public:
  const AlphaWeight& alpha() const { return alpha_; }
  std::int64_t delta() const { return delta_; }
  const MilpOptions& options() const { return options_; }

  /// Nodes 0..d are the goal, the d-1 corner anchors and the origin;
  /// d+1..d+delta are the candidate mediated nodes.
  std::size_t node_count() const { return alpha_.dim() + 1 + delta_; }

  const std::vector<MilpVariable>& variables() const { return vars_; }
  const std::vector<MilpRow>& rows() const { return rows_; }
  const std::vector<std::size_t>& objective() const { return objective_; }
  const MilpCounts& counts() const { return counts_; }

  std::optional<std::size_t> find(std::string_view name) const;

 private:
  friend MilpModel build_model(const AlphaWeight&, std::int64_t,
                               const MilpOptions&);
  MilpModel(AlphaWeight alpha, std::int64_t delta, MilpOptions options)
      : alpha_(std::move(alpha)), delta_(delta), options_(options) {}

  AlphaWeight alpha_;
  std::int64_t delta_;
  MilpOptions options_;
  std::vector<MilpVariable> vars_;
  std::vector<MilpRow> rows_;
  std::vector<std::size_t> objective_;
  MilpCounts counts_;
};

MilpModel build_model(const AlphaWeight& alpha, std::int64_t delta,
                      const MilpOptions& options = {});

/// Compact binary count delta + (delta + d - 1) * delta; separation
/// indicators and the goal row are not included.
std::size_t compact_binary_count(const AlphaWeight& alpha, std::int64_t delta);

std::string emit_lp(const MilpModel& m);

/// Reads "name value" lines and rebuilds the graph. Unknown names and
/// non-integral coordinates are reported through `warnings`.
MediatedGraph parse_solution(const MilpModel& m, std::string_view text,
                             std::vector<std::string>* warnings = nullptr);

enum class DeltaStatus { kInfeasible, kFeasible };

std::optional<std::int64_t> next_delta(std::int64_t current,
                                       DeltaStatus status);

}  // namespace socrep

#endif  // SOCREP_MILP_HPP_
