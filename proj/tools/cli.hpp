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

#ifndef SOCREP_TOOLS_CLI_HPP_
#define SOCREP_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace socrep::cli {

enum ExitCode : int {
  kOk = 0,
  kBudget = 1,   // infeasible within the budget, or verification failed
  kInvalid = 2,  // bad flags, malformed input files, domain errors
};

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace socrep::cli

#endif  // SOCREP_TOOLS_CLI_HPP_
