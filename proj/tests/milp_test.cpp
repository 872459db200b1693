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

#include "socrep/milp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "socrep/error.hpp"

namespace socrep {
namespace {

LatticePoint pt(std::int64_t a, std::int64_t b) { return LatticePoint{{a, b}}; }

// A full assignment of the model's variables read off a mediated graph.
// Unused slots stay inactive at (shat, ..., shat).
std::vector<double> assignment(const MilpModel& m, const MediatedGraph& g) {
  const auto& a = m.alpha();
  const std::size_t d = a.dim();
  const std::size_t n = m.node_count();
  const SimplexLattice lat(a);
  std::vector<LatticePoint> pos{lat.goal()};
  for (const auto& p : lat.anchors()) pos.push_back(p);
  std::vector<int> active(n, 1);
  for (const auto& p : g.mediated) {
    if (p != lat.goal()) pos.push_back(p);
  }
  while (pos.size() < n) {
    active[pos.size()] = 0;
    pos.push_back(LatticePoint{std::vector<std::int64_t>(d - 1, a.shat())});
  }
  std::map<LatticePoint, std::size_t> index;
  for (std::size_t j = 0; j < n; ++j) {
    if (active[j]) index.emplace(pos[j], j);
  }
  std::vector<double> v(m.variables().size(), 0.0);
  auto set = [&](const std::string& name, double x) {
    const auto i = m.find(name);
    ASSERT_TRUE(i) << name;
    v[*i] = x;
  };
  for (std::size_t j = 0; j < n; ++j) {
    set("z_" + std::to_string(j), active[j]);
    for (std::size_t r = 0; r < d - 1; ++r) {
      set("x_" + std::to_string(j) + "_" + std::to_string(r + 1),
          static_cast<double>(pos[j][r]));
    }
  }
  for (const auto& w : g.witnesses) {
    const std::size_t i = index.at(w.node);
    set("y_" + std::to_string(i) + "_" + std::to_string(index.at(w.first)), 1);
    set("y_" + std::to_string(i) + "_" + std::to_string(index.at(w.second)), 1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t r = 0; r < d - 1; ++r) {
        const std::string tag = std::to_string(i) + "_" + std::to_string(j) +
                                "_" + std::to_string(r + 1);
        set("dp_" + tag, pos[i][r] >= pos[j][r] + 1 ? 1 : 0);
        set("dm_" + tag, pos[j][r] >= pos[i][r] + 1 ? 1 : 0);
      }
    }
  }
  return v;
}

std::vector<std::string> violated(const MilpModel& m,
                                  const std::vector<double>& v) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& var = m.variables()[i];
    if (v[i] < var.lower - 1e-9 || v[i] > var.upper + 1e-9) {
      out.push_back("bound " + var.name);
    }
  }
  for (const auto& row : m.rows()) {
    double lhs = 0;
    for (const auto& t : row.terms) lhs += t.coef * v[t.var];
    const bool ok = row.sense == RowSense::kLe   ? lhs <= row.rhs + 1e-9
                    : row.sense == RowSense::kGe ? lhs >= row.rhs - 1e-9
                                                 : std::fabs(lhs - row.rhs) <= 1e-9;
    if (!ok) out.push_back(row.name);
  }
  return out;
}

double objective(const MilpModel& m, const std::vector<double>& v) {
  double s = 0;
  for (auto i : m.objective()) s += v[i];
  return s;
}

std::string solution_text(const MilpModel& m, const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    os << m.variables()[i].name << ' ' << v[i] << '\n';
  }
  return os.str();
}

MediatedGraph worked_example() {
  MediatedGraph g{SimplexLattice(parse_alpha("1,2,3"))};
  g.mediated = {pt(1, 2), pt(2, 4), pt(4, 2)};
  g.witnesses = {{pt(1, 2), pt(0, 0), pt(2, 4)},
                 {pt(2, 4), pt(0, 6), pt(4, 2)},
                 {pt(4, 2), pt(6, 0), pt(2, 4)}};
  return g;
}

MilpOptions all_cuts() {
  MilpOptions o;
  o.vi1 = o.vi2 = o.vi3 = o.tree = true;
  return o;
}

TEST(MilpModel, Counts) {
  const auto m = build_model(parse_alpha("1,2,3"), 3);
  const auto& c = m.counts();
  EXPECT_EQ(m.node_count(), 7u);
  EXPECT_EQ(c.y_binaries, 24u);  // 4 sources x 6 targets
  EXPECT_EQ(c.z_binaries, 3u);
  EXPECT_EQ(c.separation_binaries, 84u);  // 21 pairs x 2 coords x 2 signs
  EXPECT_EQ(c.continuous, 14u);
  EXPECT_EQ(c.constraints, m.rows().size());
  EXPECT_EQ(compact_binary_count(parse_alpha("1,2,3"), 3), 18u);
}

TEST(MilpModel, RejectsBadInput) {
  EXPECT_THROW(build_model(parse_alpha("1,2,3"), 0), InvalidInput);
  EXPECT_THROW(build_model(parse_alpha("1"), 2), InvalidInput);
  MilpOptions o;
  o.epsilon = 0;
  EXPECT_THROW(build_model(parse_alpha("1,2"), 2, o), InvalidInput);
  o = {};
  o.vi3_coordinate = 3;
  EXPECT_THROW(build_model(parse_alpha("1,2,3"), 2, o), InvalidInput);
}

TEST(MilpModel, WorkedExampleIsFeasibleWithObjectiveThree) {
  for (const auto& opts : {MilpOptions{}, all_cuts()}) {
    const auto m = build_model(parse_alpha("1,2,3"), 3, opts);
    const auto v = assignment(m, worked_example());
    const auto bad = violated(m, v);
    EXPECT_TRUE(bad.empty()) << bad.front();
    EXPECT_DOUBLE_EQ(objective(m, v), 3.0);
  }
}

TEST(MilpModel, BinaryDecompositionsAreFeasible) {
  for (const char* s : {"1,2,3", "2,5,19", "3,14", "1,2,2,3"}) {
    const auto a = parse_alpha(s);
    const auto g = binary_decomposition_graph(a);
    if (g.lattice.scale() != 1) continue;
    const auto m = build_model(a, static_cast<std::int64_t>(g.size()));
    const auto bad = violated(m, assignment(m, g));
    EXPECT_TRUE(bad.empty()) << s << ": " << bad.front();
  }
}

TEST(MilpModel, WrongWitnessBreaksAveraging) {
  const auto m = build_model(parse_alpha("1,2,3"), 3);
  auto v = assignment(m, worked_example());
  // Node 0 = (1,2) now claims (0,6) and (2,4) as its pair.
  v[*m.find("y_0_3")] = 0;
  v[*m.find("y_0_2")] = 1;
  const auto bad = violated(m, v);
  ASSERT_FALSE(bad.empty());
  EXPECT_EQ(bad.front().rfind("ctr3", 0), 0u) << bad.front();
}

TEST(MilpModel, CoincidentNodesBreakSeparation) {
  const auto m = build_model(parse_alpha("1,2,3"), 3);
  auto v = assignment(m, worked_example());
  // Activate slot 6 on top of slot 4.
  v[*m.find("z_6")] = 1;
  v[*m.find("x_6_1")] = 2;
  v[*m.find("x_6_2")] = 4;
  v[*m.find("y_6_5")] = 1;
  v[*m.find("y_6_2")] = 1;
  for (const char* s : {"dp_4_6_1", "dm_4_6_1", "dp_4_6_2", "dm_4_6_2"}) {
    v[*m.find(s)] = 0;
  }
  bool sep = false;
  for (const auto& r : violated(m, v)) sep = sep || r == "ctr4_4_6";
  EXPECT_TRUE(sep);
}

TEST(MilpModel, TreeCutRejectsSharedChild) {
  auto opts = all_cuts();
  const auto m = build_model(parse_alpha("1,2,3"), 3, opts);
  auto v = assignment(m, worked_example());
  EXPECT_TRUE(violated(m, v).empty());
  // Slot 6 at (3,3) = ((2,4) + (4,2))/2 uses 4 and 5, which both already
  // have a mediated parent.
  v[*m.find("z_6")] = 1;
  v[*m.find("x_6_1")] = 3;
  v[*m.find("x_6_2")] = 3;
  v[*m.find("y_6_4")] = 1;
  v[*m.find("y_6_5")] = 1;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t r = 1; r <= 2; ++r) {
      const auto tag = std::to_string(i) + "_6_" + std::to_string(r);
      const double xi = v[*m.find("x_" + std::to_string(i) + "_" + std::to_string(r))];
      v[*m.find("dp_" + tag)] = xi >= 4 ? 1 : 0;
      v[*m.find("dm_" + tag)] = xi <= 2 ? 1 : 0;
    }
  }
  bool tree = false;
  for (const auto& r : violated(m, v)) tree = tree || r.rfind("tree_", 0) == 0;
  EXPECT_TRUE(tree);
}

TEST(MilpLp, Sections) {
  const auto text = emit_lp(build_model(parse_alpha("1,2,3"), 3, all_cuts()));
  std::size_t at = 0;
  for (const char* s : {"Minimize", "Subject To", "Bounds", "Binaries", "End"}) {
    const auto p = text.find(std::string("\n") + s);
    ASSERT_NE(p, std::string::npos) << s;
    EXPECT_GT(p, at) << s;
    at = p;
  }
  EXPECT_NE(text.find(" obj: z_0 + z_4 + z_5 + z_6"), std::string::npos);
  EXPECT_NE(text.find("x_1_1 = 6"), std::string::npos);
  EXPECT_NE(text.find(" vi3_5:"), std::string::npos);
  EXPECT_NE(text.find(" tree_4:"), std::string::npos);
  for (const auto& line : {std::string("ctr3a_0_1_2_1:"), std::string("ctr4p_0_1_1:")}) {
    EXPECT_NE(text.find(line), std::string::npos) << line;
  }
}

TEST(MilpParse, RoundTripsAnAssignment) {
  const auto m = build_model(parse_alpha("1,2,3"), 3, all_cuts());
  const auto text = solution_text(m, assignment(m, worked_example()));
  std::vector<std::string> warnings;
  const auto g = parse_solution(m, text, &warnings);
  EXPECT_TRUE(warnings.empty());
  EXPECT_TRUE(validate(g).empty());
  EXPECT_EQ(g.size(), 3u);
  EXPECT_TRUE(g.index_of(pt(2, 4)));
  EXPECT_TRUE(g.index_of(pt(4, 2)));
}

TEST(MilpParse, MissingValuesReadAsZero) {
  const auto m = build_model(parse_alpha("1,2,3"), 3);
  const auto full = solution_text(m, assignment(m, worked_example()));
  std::string sparse;
  std::istringstream in(full);
  for (std::string line; std::getline(in, line);) {
    if (line.size() < 2 || line.substr(line.size() - 2) != " 0") {
      sparse += line + "\n";
    }
  }
  EXPECT_EQ(parse_solution(m, sparse).size(), 3u);
}

TEST(MilpParse, FractionalBinaryIsAnError) {
  const auto m = build_model(parse_alpha("1,2,3"), 3);
  auto v = assignment(m, worked_example());
  v[*m.find("z_4")] = 0.5;
  EXPECT_THROW(parse_solution(m, solution_text(m, v)), ParseError);
}

TEST(MilpParse, BrokenWitnessIsAnError) {
  const auto m = build_model(parse_alpha("1,2,3"), 3);
  auto v = assignment(m, worked_example());
  v[*m.find("y_0_3")] = 0;
  v[*m.find("y_0_2")] = 1;
  EXPECT_THROW(parse_solution(m, solution_text(m, v)), ParseError);
}

TEST(MilpParse, UnknownNamesWarn) {
  const auto m = build_model(parse_alpha("1,2,3"), 3);
  std::vector<std::string> warnings;
  const auto text =
      solution_text(m, assignment(m, worked_example())) + "bogus 1\n";
  parse_solution(m, text, &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("bogus"), std::string::npos);
}

TEST(MilpDelta, Iterates) {
  EXPECT_EQ(next_delta(3, DeltaStatus::kInfeasible), 4);
  EXPECT_EQ(next_delta(3, DeltaStatus::kFeasible), std::nullopt);
  EXPECT_THROW(next_delta(0, DeltaStatus::kInfeasible), InvalidInput);
}

}  // namespace
}  // namespace socrep
