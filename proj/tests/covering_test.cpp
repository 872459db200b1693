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

#include "socrep/covering.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "socrep/error.hpp"

namespace socrep {
namespace {

std::vector<Rational> w(std::vector<std::int64_t> s) {
  return normalize_alpha(s).alphas();
}

TEST(CoveringInstance, SeededAndBounded) {
  const auto a = generate_instance(25, 3, NormOrder::parse("2"), w({1, 2}), 9);
  const auto b = generate_instance(25, 3, NormOrder::parse("2"), w({1, 2}), 9);
  const auto c = generate_instance(25, 3, NormOrder::parse("2"), w({1, 2}), 10);
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_NE(to_json(a), to_json(c));
  EXPECT_EQ(a.demand.size(), 25u);
  EXPECT_EQ(a.budget, Rational(53, 4));
  for (const auto& pt : a.demand) {
    EXPECT_GE(pt[0], 0.0);
    EXPECT_LT(pt[0], 1.0);
    EXPECT_GE(pt[1], 0.0);
    EXPECT_LT(pt[1], 1.0);
  }
  for (auto om : a.weights) {
    EXPECT_GE(om, 0);
    EXPECT_LE(om, 10);
  }
  EXPECT_GT(a.big_m, 0.0);
  EXPECT_LE(a.big_m, std::sqrt(2.0) * 1.001);
}

TEST(CoveringInstance, RejectsEmpty) {
  EXPECT_THROW(generate_instance(0, 2, NormOrder::parse("2"), w({1, 1}), 1),
               InvalidInput);
  EXPECT_THROW(generate_instance(3, 0, NormOrder::parse("2"), w({1, 1}), 1),
               InvalidInput);
}

TEST(CoveringInstance, JsonRoundTrip) {
  const auto a = generate_instance(5, 2, NormOrder::parse("17/3"),
                                   w({35, 58, 87}), 4);
  EXPECT_EQ(to_json(instance_from_json(to_json(a, 2))), to_json(a));
  EXPECT_THROW(instance_from_json("{}"), ParseError);
}

TEST(CoveringModel, CountsAreConsistent) {
  auto ub = GraphSupplier::upper_bound();
  for (const char* p : {"43/31", "2", "17/3"}) {
    const auto inst =
        generate_instance(6, 3, NormOrder::parse(p), w({2, 5, 19}), 2);
    const auto m = build_covering_model(inst, *ub);
    EXPECT_EQ(m.counts.soc, m.quadratic.size());
    EXPECT_EQ(m.counts.soc, 6 * 3 * m.soc_per_pair) << p;
    EXPECT_EQ(m.counts.bin, 18u);
    EXPECT_EQ(m.counts.vars, m.variables.size());
    EXPECT_EQ(m.counts.lin, m.linear.size());
    const auto single = rationalize_to_soc(coverage_program(inst, 0), *ub);
    const auto soc = complexity(single).by_kind.at("Soc3");
    EXPECT_EQ(m.soc_per_pair, soc) << p;
  }
}

TEST(CoveringModel, OptimalGraphsNeedFewerCones) {
  auto ub = GraphSupplier::upper_bound();
  auto opt = GraphSupplier::optimal();
  const auto inst =
      generate_instance(4, 2, NormOrder::parse("2"), w({6, 19, 35}), 3);
  EXPECT_LT(build_covering_model(inst, *opt).counts.soc,
            build_covering_model(inst, *ub).counts.soc);
}

TEST(CoveringModel, RejectsLinearNorms) {
  auto ub = GraphSupplier::upper_bound();
  auto inst = generate_instance(2, 1, NormOrder::parse("2"), w({1, 1}), 1);
  inst.p = NormOrder::infinity();
  EXPECT_THROW(build_covering_model(inst, *ub), DomainError);
}

TEST(CoveringLp, Layout) {
  auto ub = GraphSupplier::upper_bound();
  const auto inst = generate_instance(2, 1, NormOrder::parse("2"), w({1, 1}), 1);
  const auto m = build_covering_model(inst, *ub);
  const auto text = emit_covering(m);
  EXPECT_EQ(text.find("Maximize"), text.find('\n') + 1);
  EXPECT_NE(text.find(" budget:"), std::string::npos);
  EXPECT_NE(text.find(" assign_2:"), std::string::npos);
  EXPECT_NE(text.find(" soc_1: [ "), std::string::npos);
  EXPECT_NE(text.find("x_1_1 free"), std::string::npos);
  EXPECT_NE(text.find("Binaries"), std::string::npos);
  const auto socs = static_cast<std::size_t>(
      std::count(text.begin(), text.end(), '['));
  EXPECT_EQ(socs, m.counts.soc);
}

TEST(CoveringCounts, Json) {
  CoveringCounts c{1, 2, 3, 4};
  EXPECT_EQ(to_json(c), R"({"bin":3,"lin":2,"soc":1,"vars":4})");
}

}  // namespace
}  // namespace socrep
