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

#ifndef SOCREP_COVERING_HPP_
#define SOCREP_COVERING_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "socrep/cone.hpp"
#include "socrep/milp.hpp"

namespace socrep {

struct CoveringInstance {
  std::vector<std::array<double, 2>> demand;
  std::vector<std::int64_t> weights;  // omega_i
  std::size_t facilities = 0;
  NormOrder p{Rational(2)};
  std::vector<Rational> feature_weights;
  Rational budget;
  double gravity = 1.0;  // G, shared by every pair
  double big_m = 0.0;
};

/// Uniform demand points in the unit square, omega_i uniform in 0..10,
/// budget (2n + j) / 4 and big-M just above the largest l_p distance.
CoveringInstance generate_instance(std::size_t n, std::size_t j,
                                   const NormOrder& p,
                                   const std::vector<Rational>& feature_weights,
                                   std::uint64_t seed);

struct CoveringCounts {
  std::size_t soc = 0;
  std::size_t lin = 0;
  std::size_t bin = 0;
  std::size_t vars = 0;
};

struct CoveringModel {
  std::string representation;
  std::vector<MilpVariable> variables;
  std::vector<double> objective;  // maximized, one coefficient per variable
  std::vector<MilpRow> linear;
  /// lhs^2 <= f1 f2 as variable indices.
  std::vector<std::array<std::size_t, 3>> quadratic;
  CoveringCounts counts;
  /// Soc3 atoms contributed by each (i, j) pair.
  std::size_t soc_per_pair = 0;
};

/// The coverage constraint of pair (i, j) before lowering to Soc3.
ConeProgram coverage_program(const CoveringInstance& inst, std::size_t i);

CoveringModel build_covering_model(const CoveringInstance& inst,
                                   GraphSupplier& supplier);

std::string emit_covering(const CoveringModel& model);

std::string to_json(const CoveringInstance& inst, int indent = -1);
CoveringInstance instance_from_json(const std::string& text);
std::string to_json(const CoveringCounts& counts);

}  // namespace socrep

#endif  // SOCREP_COVERING_HPP_
