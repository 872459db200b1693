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

#ifndef SOCREP_SRC_LP_WRITER_HPP_
#define SOCREP_SRC_LP_WRITER_HPP_

#include <sstream>
#include <string>
#include <vector>

#include "socrep/milp.hpp"

namespace socrep::lp {

/// Shortest decimal that reads back to the same double.
std::string number(double v);

/// "a x + b y - c z", wrapped every few terms.
void write_terms(std::ostream& os, const std::vector<MilpVariable>& vars,
                 const std::vector<MilpTerm>& terms);

void write_rows(std::ostream& os, const std::vector<MilpVariable>& vars,
                const std::vector<MilpRow>& rows);

/// Bounds for continuous and fixed variables; free ones as "name free".
void write_bounds(std::ostream& os, const std::vector<MilpVariable>& vars);

void write_binaries(std::ostream& os, const std::vector<MilpVariable>& vars);

}  // namespace socrep::lp

#endif  // SOCREP_SRC_LP_WRITER_HPP_
