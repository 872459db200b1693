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

#include "socrep/mediated.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "socrep/error.hpp"

namespace socrep {
namespace {

LatticePoint pt(std::int64_t a, std::int64_t b) { return LatticePoint{{a, b}}; }

// The graph drawn for alpha = (1,2,3)/6.
MediatedGraph worked_example() {
  MediatedGraph g{SimplexLattice(parse_alpha("1,2,3"))};
  g.mediated = {pt(1, 2), pt(2, 4), pt(4, 2)};
  g.witnesses = {{pt(1, 2), pt(0, 0), pt(2, 4)},
                 {pt(2, 4), pt(0, 6), pt(4, 2)},
                 {pt(4, 2), pt(6, 0), pt(2, 4)}};
  return g;
}

bool has_rule(const std::vector<Violation>& v, ViolationRule rule) {
  return std::any_of(v.begin(), v.end(),
                     [&](const Violation& x) { return x.rule == rule; });
}

int popcount(std::int64_t v) { return __builtin_popcountll(v); }

TEST(Bounds, SmallCases) {
  EXPECT_EQ(lower_bound(parse_alpha("1,2,3")), 3);
  EXPECT_EQ(upper_bound(parse_alpha("1,2,3")), 4);
  EXPECT_EQ(lower_bound(parse_alpha("13,17,44")), 7);
  EXPECT_EQ(upper_bound(parse_alpha("13,17,44")), 11);
  EXPECT_EQ(lower_bound(parse_alpha("1,1")), 1);
  EXPECT_EQ(upper_bound(parse_alpha("1,1")), 1);
  // d - 1 dominates for many equal weights.
  EXPECT_EQ(lower_bound(parse_alpha("1,1,1,1,1")), 4);
}

TEST(Bounds, MatchClosedFormsOnRandomWeights) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const int d = 2 + static_cast<int>(rng() % 5);
    std::vector<std::int64_t> s(d);
    for (auto& v : s) v = 1 + static_cast<std::int64_t>(rng() % 100);
    const auto a = normalize_alpha(s);
    std::int64_t log2 = 0;
    while ((std::int64_t{1} << log2) < a.shat()) ++log2;
    EXPECT_EQ(lower_bound(a), std::max<std::int64_t>(d - 1, log2));
    std::int64_t ub = popcount((std::int64_t{1} << log2) - a.shat()) - 1;
    for (auto v : a.s()) ub += popcount(v);
    EXPECT_EQ(upper_bound(a), ub);
    EXPECT_LE(lower_bound(a), upper_bound(a));
  }
}

TEST(Validate, WorkedExampleIsClean) {
  const auto g = worked_example();
  EXPECT_TRUE(validate(g).empty());
  EXPECT_TRUE(is_tree_shaped(g));
}

TEST(Validate, DetectsMissingGoal) {
  auto g = worked_example();
  g.mediated.erase(g.mediated.begin());
  g.witnesses.erase(g.witnesses.begin());
  EXPECT_TRUE(has_rule(validate(g), ViolationRule::kGoalMissing));
}

TEST(Validate, DetectsWrongMidpoint) {
  auto g = worked_example();
  g.witnesses[1].second = pt(4, 1);
  g.mediated.push_back(pt(4, 1));
  g.witnesses.push_back({pt(4, 1), pt(6, 0), pt(2, 2)});
  const auto v = validate(g);
  EXPECT_TRUE(has_rule(v, ViolationRule::kNotMidpoint));
}

TEST(Validate, DetectsEqualPair) {
  auto g = worked_example();
  g.witnesses[0] = {pt(1, 2), pt(1, 2), pt(1, 2)};
  EXPECT_TRUE(has_rule(validate(g), ViolationRule::kEqualWitnesses));
}

TEST(Validate, DetectsPairOutsideGraph) {
  auto g = worked_example();
  g.witnesses[0] = {pt(1, 2), pt(1, 1), pt(1, 3)};
  EXPECT_TRUE(has_rule(validate(g), ViolationRule::kWitnessNotInGraph));
}

TEST(Validate, DetectsMissingAndOrphanWitness) {
  auto g = worked_example();
  g.witnesses.pop_back();
  EXPECT_TRUE(has_rule(validate(g), ViolationRule::kMissingWitness));
  g = worked_example();
  g.witnesses.push_back({pt(3, 3), pt(6, 0), pt(0, 6)});
  EXPECT_TRUE(has_rule(validate(g), ViolationRule::kOrphanWitness));
  g = worked_example();
  g.witnesses.push_back(g.witnesses.front());
  EXPECT_TRUE(has_rule(validate(g), ViolationRule::kDuplicateWitness));
}

TEST(Validate, DetectsBadNodes) {
  auto g = worked_example();
  g.mediated.push_back(pt(2, 4));
  EXPECT_TRUE(has_rule(validate(g), ViolationRule::kDuplicateNode));
  g = worked_example();
  g.mediated.push_back(pt(6, 0));
  EXPECT_TRUE(has_rule(validate(g), ViolationRule::kAnchorInMediatedSet));
  g = worked_example();
  g.mediated.push_back(pt(5, 5));
  g.witnesses.push_back({pt(5, 5), pt(4, 4), pt(6, 6)});
  EXPECT_TRUE(has_rule(validate(g), ViolationRule::kOutsideSimplex));
  g = worked_example();
  g.mediated.push_back(LatticePoint{{1}});
  EXPECT_TRUE(has_rule(validate(g), ViolationRule::kWrongDimension));
}

TEST(Soc, WorkedExampleSystem) {
  const auto rep = to_soc(worked_example());
  std::vector<std::string> got;
  for (const auto& c : rep.constraints) got.push_back(c.str());
  EXPECT_EQ(got, (std::vector<std::string>{"x^2 <= w1 z3", "w1^2 <= w2 z2",
                                           "w2^2 <= w1 z1"}));
  EXPECT_EQ(rep.aux_count(), 2u);
  EXPECT_EQ(rep.exponents.at("x").mu,
            (std::vector<Rational>{Rational(1, 6), Rational(1, 3),
                                   Rational(1, 2)}));
  EXPECT_EQ(rep.exponents.at("z2").mu, (std::vector<Rational>{0, 1, 0}));
}

TEST(Soc, InvalidGraphIsRejected) {
  auto g = worked_example();
  g.witnesses.pop_back();
  EXPECT_THROW(to_soc(g), InvalidInput);
  EXPECT_THROW(to_dot(g), InvalidInput);
}

TEST(Soc, ExponentsAreHalfSums) {
  for (const char* s : {"1,2,3", "13,17,44", "2,5,19", "3,14", "1,1,1,1"}) {
    const auto g = binary_decomposition_graph(parse_alpha(s));
    const auto rep = to_soc(g);
    for (const auto& c : rep.constraints) {
      EXPECT_EQ(rep.exponents.at(c.lhs),
                ExponentVector::midpoint(rep.exponents.at(c.factors[0]),
                                         rep.exponents.at(c.factors[1])))
          << s << ": " << c.str();
    }
  }
}

TEST(BinaryDecomposition, HitsUpperBoundOnKnownCases) {
  for (const char* s : {"1,2,3", "13,17,44", "2,5,19", "6,19,35", "35,58,87",
                        "1,1,1", "3,14", "31,12", "1,1"}) {
    const auto a = parse_alpha(s);
    const auto g = binary_decomposition_graph(a);
    EXPECT_TRUE(validate(g).empty()) << s;
    EXPECT_EQ(static_cast<std::int64_t>(g.size()), upper_bound(a)) << s;
    EXPECT_EQ(g.mediated.front(), g.lattice.goal()) << s;
  }
}

TEST(BinaryDecomposition, UsesDyadicScaleOnlyWhenNeeded) {
  EXPECT_EQ(binary_decomposition_graph(parse_alpha("1,2,3")).lattice.scale(), 1);
  EXPECT_EQ(binary_decomposition_graph(parse_alpha("1,1,1")).lattice.scale(), 2);
}

TEST(BinaryDecomposition, RandomWeightsValidate) {
  std::mt19937_64 rng(17);
  int below_ub = 0;
  for (int t = 0; t < 400; ++t) {
    const int d = 2 + static_cast<int>(rng() % 4);
    std::vector<std::int64_t> s(d);
    for (auto& v : s) v = 1 + static_cast<std::int64_t>(rng() % 60);
    const auto a = normalize_alpha(s);
    const auto g = binary_decomposition_graph(a);
    const auto v = validate(g);
    EXPECT_TRUE(v.empty()) << a.str() << ": " << v.front().str();
    EXPECT_LE(static_cast<std::int64_t>(g.size()), upper_bound(a)) << a.str();
    EXPECT_GE(static_cast<std::int64_t>(g.size()), lower_bound(a)) << a.str();
    below_ub += static_cast<std::int64_t>(g.size()) < upper_bound(a);
  }
  EXPECT_LE(below_ub, 4);
}

TEST(BinaryDecomposition, CoincidentMidpointsAreShared) {
  // No coincidence-free pairing exists here; the graph comes out below UB.
  const auto a = parse_alpha("43,42");
  const auto g = binary_decomposition_graph(a);
  EXPECT_TRUE(validate(g).empty());
  EXPECT_LT(static_cast<std::int64_t>(g.size()), upper_bound(a));
}

TEST(Json, RoundTrip) {
  for (const char* s : {"1,2,3", "1,1,1", "13,17,44"}) {
    const auto g = binary_decomposition_graph(parse_alpha(s));
    EXPECT_EQ(graph_from_json(to_json(g)), g) << s;
    EXPECT_EQ(graph_from_json(to_json(g, 2)), g) << s;
  }
  const auto w = worked_example();
  EXPECT_EQ(graph_from_json(to_json(w)), w);
}

TEST(Json, RejectsMalformed) {
  EXPECT_THROW(graph_from_json("{"), ParseError);
  EXPECT_THROW(graph_from_json("{\"s\":[1,2]}"), ParseError);
  EXPECT_THROW(graph_from_json("{\"s\":[1,\"a\"],\"X\":[]}"), ParseError);
}

TEST(Dot, NamesMatchSocVariables) {
  const auto dot = to_dot(worked_example());
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  for (const char* id : {"x ", "w1 ", "w2 ", "z1 ", "z2 ", "z3 "}) {
    EXPECT_NE(dot.find(id), std::string::npos) << id;
  }
}

}  // namespace
}  // namespace socrep
