# Copyright 2026 The socrep Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Solves an LP-format model with HiGHS and writes "name value" lines.

usage: highs_solve.py MODEL.lp OUT.sol [TIME_LIMIT_SECONDS]
Prints the model status and objective value on stdout.
"""

import sys

import highspy


def main():
    if len(sys.argv) < 3:
        sys.exit(__doc__)
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", float(sys.argv[3]) if len(sys.argv) > 3 else 600.0)
    h.readModel(sys.argv[1])
    h.run()
    status = h.modelStatusToString(h.getModelStatus())
    print(status.replace(" ", "_"), h.getInfo().objective_function_value)
    lp = h.getLp()
    values = h.getSolution().col_value
    with open(sys.argv[2], "w") as out:
        for name, v in zip(lp.col_names_, values):
            out.write(f"{name} {v}\n")


if __name__ == "__main__":
    main()
