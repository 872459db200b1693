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

#include "lp_writer.hpp"

#include <charconv>
#include <cmath>

namespace socrep::lp {

std::string number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_terms(std::ostream& os, const std::vector<MilpVariable>& vars,
                 const std::vector<MilpTerm>& terms) {
  std::size_t on_line = 0;
  bool first = true;
  for (const auto& t : terms) {
    if (on_line == 8) {
      os << "\n  ";
      on_line = 0;
    }
    double c = t.coef;
    if (first) {
      if (c < 0) os << "- ";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    c = std::fabs(c);
    if (c != 1.0) os << number(c) << ' ';
    os << vars[t.var].name;
    first = false;
    ++on_line;
  }
  if (first) os << "0 " << vars.front().name;
}

void write_rows(std::ostream& os, const std::vector<MilpVariable>& vars,
                const std::vector<MilpRow>& rows) {
  for (const auto& row : rows) {
    os << ' ' << row.name << ": ";
    write_terms(os, vars, row.terms);
    switch (row.sense) {
      case RowSense::kLe: os << " <= "; break;
      case RowSense::kGe: os << " >= "; break;
      case RowSense::kEq: os << " = "; break;
    }
    os << number(row.rhs) << '\n';
  }
}

void write_bounds(std::ostream& os, const std::vector<MilpVariable>& vars) {
  for (const auto& v : vars) {
    if (v.fixed()) {
      os << ' ' << v.name << " = " << number(v.lower) << '\n';
    } else if (std::isinf(v.lower) && std::isinf(v.upper)) {
      os << ' ' << v.name << " free\n";
    } else if (!v.binary && std::isinf(v.upper)) {
      os << ' ' << v.name << " >= " << number(v.lower) << '\n';
    } else if (!v.binary) {
      os << ' ';
      if (std::isinf(v.lower)) {
        os << "-inf";
      } else {
        os << number(v.lower);
      }
      os << " <= " << v.name << " <= ";
      if (std::isinf(v.upper)) {
        os << "+inf";
      } else {
        os << number(v.upper);
      }
      os << '\n';
    }
  }
}

void write_binaries(std::ostream& os, const std::vector<MilpVariable>& vars) {
  os << "Binaries\n";
  std::size_t on_line = 0;
  for (const auto& v : vars) {
    if (!v.binary) continue;
    os << ' ' << v.name;
    if (++on_line == 10) {
      os << '\n';
      on_line = 0;
    }
  }
  if (on_line) os << '\n';
}

}  // namespace socrep::lp
