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

#include "socrep/cone.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "socrep/error.hpp"

namespace socrep {
namespace {

std::vector<Rational> w(std::vector<std::int64_t> s) {
  return normalize_alpha(s).alphas();
}

std::size_t power_cones_with(const ConeProgram& p, std::size_t nweights) {
  return static_cast<std::size_t>(
      std::count_if(p.atoms.begin(), p.atoms.end(), [&](const ConeAtom& a) {
        return a.kind == AtomKind::kPowerCone && a.weights.size() == nweights;
      }));
}

std::size_t count_kind(const ConeProgram& p, AtomKind k) {
  return static_cast<std::size_t>(std::count_if(
      p.atoms.begin(), p.atoms.end(),
      [&](const ConeAtom& a) { return a.kind == k; }));
}

TEST(NormOrder, ParseAndConjugate) {
  EXPECT_EQ(NormOrder::parse("3").conjugate(), Rational(3, 2));
  EXPECT_EQ(NormOrder::parse("43/31").conjugate(), Rational(43, 12));
  EXPECT_TRUE(NormOrder::parse("inf").is_infinite());
  EXPECT_EQ(NormOrder::parse("inf").str(), "inf");
  EXPECT_THROW(NormOrder::parse("1/2"), InvalidInput);
  EXPECT_THROW(NormOrder::parse("x"), Error);
  EXPECT_THROW(NormOrder::parse("1").conjugate(), DomainError);
}

TEST(Complexity, ClosedFormsForDimensionsOneToTen) {
  const std::vector<Rational> alpha = w({2, 5, 19});
  for (std::size_t d1 = 1; d1 <= 10; ++d1) {
    const auto c8 = complexity(corollary8(NormOrder::parse("3"), d1, alpha));
    EXPECT_EQ(c8.m_e, 3 * d1 - 3) << d1;
    EXPECT_EQ(c8.l_e, 3 * d1 - 2) << d1;
    const auto t9 = complexity(theorem9(NormOrder::parse("3"), d1, alpha));
    EXPECT_EQ(t9.m_e, d1 + 1) << d1;
    EXPECT_EQ(t9.l_e, d1 + 2) << d1;
    const auto t10 = complexity(theorem10(NormOrder::parse("3"), d1, alpha));
    EXPECT_EQ(t10.m_e, d1 + 1) << d1;
    EXPECT_EQ(t10.l_e, d1 + 2) << d1;
  }
}

TEST(Complexity, ConeMixPerConstruction) {
  const auto alpha = w({2, 5, 19});
  const NormOrder p = NormOrder::parse("3");
  for (std::size_t d1 = 2; d1 <= 6; ++d1) {
    const auto c8 = corollary8(p, d1, alpha);
    EXPECT_EQ(power_cones_with(c8, 3), 1u);
    EXPECT_EQ(power_cones_with(c8, 2), 2 * (d1 - 1));
    EXPECT_EQ(count_kind(c8, AtomKind::kHalfSpaceSum), d1 - 1);
    const auto t9 = theorem9(p, d1, alpha);
    EXPECT_EQ(power_cones_with(t9, 3), 1u);
    EXPECT_EQ(power_cones_with(t9, 4), d1);
    EXPECT_EQ(count_kind(t9, AtomKind::kHalfSpaceSum), 1u);
    const auto t10 = theorem10(p, d1, alpha);
    EXPECT_EQ(power_cones_with(t10, 3), 1u);
    EXPECT_EQ(power_cones_with(t10, 2), d1);
    EXPECT_EQ(count_kind(t10, AtomKind::kHalfSpaceSum), 1u);
  }
}

TEST(Constructions, SplitFeedsAPOrderCone) {
  const auto s = split_lemma4(NormOrder::parse("2"), 3, w({1, 2}));
  EXPECT_EQ(count_kind(s, AtomKind::kPOrderCone), 1u);
  EXPECT_EQ(power_cones_with(s, 2), 1u);
  s.check();
}

TEST(Constructions, TowerWithHalvedRootOnSeven) {
  const auto t = tower_lemma5(NormOrder::parse("2"), 7, TowerShape::kHalvedRoot);
  std::vector<std::string> got;
  for (const auto& a : t.atoms) got.push_back(a.str());
  EXPECT_EQ(got, (std::vector<std::string>{
                     "||(w_1_2_3, w_4_5_6_7)||_2 <= w",
                     "||(w_1_2, x3)||_2 <= w_1_2_3",
                     "||(x1, x2)||_2 <= w_1_2",
                     "||(w_4_5_6, x7)||_2 <= w_4_5_6_7",
                     "||(w_4_5, x6)||_2 <= w_4_5_6",
                     "||(x4, x5)||_2 <= w_4_5",
                 }));
  EXPECT_EQ(t.m_e(), 5u);
}

TEST(Constructions, BalancedTowerSize) {
  for (std::size_t d = 2; d <= 12; ++d) {
    const auto t = tower_lemma5(NormOrder::parse("3"), d);
    EXPECT_EQ(t.atoms.size(), d - 1) << d;
    EXPECT_EQ(t.m_e(), d - 2) << d;
    t.check();
  }
}

TEST(Constructions, POrderSplitNeedsFiniteP) {
  EXPECT_THROW(porder_split_lemma6(NormOrder::parse("1"), 3), DomainError);
  EXPECT_THROW(porder_split_lemma6(NormOrder::infinity(), 3), DomainError);
  const auto s = porder_split_lemma6(NormOrder::parse("3"), 3);
  EXPECT_EQ(power_cones_with(s, 2), 3u);
  EXPECT_EQ(count_kind(s, AtomKind::kHalfSpaceSum), 1u);
}

TEST(Constructions, LinearNorms) {
  const auto one = linear_norm(NormOrder::parse("1"), 3);
  const auto inf = linear_norm(NormOrder::infinity(), 3);
  one.check();
  inf.check();
  EXPECT_EQ(count_kind(inf, AtomKind::kHalfSpaceSum), 6u);
  EXPECT_THROW(linear_norm(NormOrder::parse("2"), 3), DomainError);
}

TEST(Constructions, SingleXCollapsesToOnePowerCone) {
  const auto c8 = corollary8(NormOrder::parse("2"), 1, w({1, 2}));
  ASSERT_EQ(c8.atoms.size(), 1u);
  EXPECT_EQ(c8.atoms[0].kind, AtomKind::kPowerCone);
}

TEST(Constructions, GeneralizedCover) {
  AffineCoverSpec spec;
  spec.d1 = 2;
  spec.d2 = 2;
  spec.d3 = 1;
  spec.f = AffineMap::identity(2);
  spec.f.offset = {-1.0, 2.0};
  spec.h = AffineMap::identity(2);
  spec.g.matrix = {{-5.0}};
  spec.g.offset = {5.0};
  spec.p = NormOrder::parse("2");
  spec.weights = w({1, 2});
  const auto prog = generalized_remark12(spec);
  prog.check();
  const auto base = theorem10(spec.p, 2, spec.weights);
  EXPECT_EQ(prog.m_e(), base.m_e() + spec.d1 + spec.d2 + 1);
  EXPECT_EQ(count_kind(prog, AtomKind::kAffineEq), spec.d1 + spec.d2 + 1);
  spec.h.matrix.pop_back();
  spec.h.offset.pop_back();
  EXPECT_THROW(generalized_remark12(spec), InvalidInput);
}

class Lowered : public ::testing::TestWithParam<const char*> {};

TEST_P(Lowered, VerifiesWithBothSuppliers) {
  const NormOrder p = NormOrder::parse(GetParam());
  SearchBudget budget;
  budget.node_limit = 200000;
  auto opt = GraphSupplier::optimal(budget);
  auto ub = GraphSupplier::upper_bound();
  for (const auto& s : std::vector<std::vector<std::int64_t>>{
           {1, 2}, {1, 2, 3}, {2, 5, 19}, {1, 1, 1, 1}}) {
    for (std::size_t d1 = 1; d1 <= 3; ++d1) {
      for (auto* sup : {opt.get(), ub.get()}) {
        for (const auto& base : {corollary8(p, d1, w(s)), theorem9(p, d1, w(s)),
                                 theorem10(p, d1, w(s))}) {
          const auto prog = rationalize_to_soc(base, *sup);
          prog.check();
          EXPECT_EQ(count_kind(prog, AtomKind::kPowerCone), 0u);
          EXPECT_EQ(count_kind(prog, AtomKind::kGenPowerCone), 0u);
          EXPECT_EQ(count_kind(prog, AtomKind::kPOrderCone), 0u);
          VerifyOptions vo;
          vo.trials = 200;
          const auto rep = verify_representation(prog, vo);
          EXPECT_TRUE(rep.ok) << sup->name() << " d1=" << d1 << ": "
                              << (rep.failures.empty() ? "" : rep.failures[0]);
        }
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Orders, Lowered,
                         ::testing::Values("2", "3", "4", "43/31", "17/3"));

TEST(Lowering, FewerConesWithOptimalGraphs) {
  auto opt = GraphSupplier::optimal();
  auto ub = GraphSupplier::upper_bound();
  const auto base = theorem10(NormOrder::parse("2"), 2, w({6, 19, 35}));
  const auto a = complexity(rationalize_to_soc(base, *opt));
  const auto b = complexity(rationalize_to_soc(base, *ub));
  EXPECT_LT(a.by_kind.at("Soc3"), b.by_kind.at("Soc3"));
}

TEST(Lowering, ReusedGoalGetsNonnegativeCopy) {
  auto ub = GraphSupplier::upper_bound();
  ConeProgram in;
  in.original_vars = {"x", "z1", "z2"};
  auto atom = ConeAtom::of(AtomKind::kPowerCone, {"x", "z1", "z2"});
  atom.weights = w({1, 2});
  in.atoms.push_back(atom);
  const auto out = rationalize_to_soc(in, *ub);
  for (const auto& a : out.atoms) {
    if (a.vars[0] == "x") {
      EXPECT_EQ(a.vars[1], a.vars[2]);
    } else {
      EXPECT_NE(a.vars[1], "x");
      EXPECT_NE(a.vars[2], "x");
    }
  }
  EXPECT_TRUE(verify_representation(out).ok);
}

TEST(Lowering, RejectsLinearOrders) {
  auto ub = GraphSupplier::upper_bound();
  ConeProgram in;
  in.original_vars = {"x1", "z1", "z2"};
  auto atom = ConeAtom::of(AtomKind::kGenPowerCone, {"x1", "z1", "z2"});
  atom.p = NormOrder::parse("1");
  atom.d1 = 1;
  atom.weights = w({1, 2});
  in.atoms.push_back(atom);
  EXPECT_THROW(rationalize_to_soc(in, *ub), DomainError);
}

TEST(Supplier, CachesPerWeightVector) {
  auto ub = GraphSupplier::upper_bound();
  const auto base = theorem10(NormOrder::parse("2"), 4, w({1, 2, 3}));
  rationalize_to_soc(base, *ub);
  // (1,2,3)/6 once, and (1/2, 1/2) shared by all four norm cones.
  EXPECT_EQ(ub->cached(), 2u);
}

ConeProgram lowered_example() {
  auto ub = GraphSupplier::upper_bound();
  return rationalize_to_soc(theorem10(NormOrder::parse("3"), 2, w({1, 2, 3})),
                            *ub);
}

TEST(Verify, DetectsWrongExponentTag) {
  auto prog = lowered_example();
  auto& blk = prog.blocks.back();
  auto it = std::find_if(blk.exponents.begin(), blk.exponents.end(),
                         [&](const auto& kv) {
                           return kv.first != blk.lhs &&
                                  std::find(blk.rhs.begin(), blk.rhs.end(),
                                            kv.first) == blk.rhs.end();
                         });
  ASSERT_NE(it, blk.exponents.end());
  auto mu = it->second.mu;
  std::swap(mu.front(), mu.back());
  if (mu == it->second.mu) mu.front() += Rational(1, 7);
  it->second.mu = mu;
  const auto rep = verify_representation(prog, {VerifyMode::kStructural});
  EXPECT_FALSE(rep.ok);
}

TEST(Verify, DetectsSwappedFactor) {
  auto prog = lowered_example();
  const auto& blk = prog.blocks.back();
  auto& a = prog.atoms[blk.atoms.back()];
  const std::string other = blk.rhs.front() == a.vars[1] ? blk.rhs.back()
                                                         : blk.rhs.front();
  a.vars[1] = other;
  EXPECT_FALSE(verify_representation(prog, {VerifyMode::kStructural}).ok);
  EXPECT_FALSE(verify_representation(prog, {VerifyMode::kSampling}).ok);
}

TEST(Verify, DetectsUntaggedSoc) {
  auto prog = lowered_example();
  prog.atoms.push_back(ConeAtom::of(AtomKind::kSoc3, {"x1", "z1", "z2"}));
  EXPECT_FALSE(verify_representation(prog, {VerifyMode::kStructural}).ok);
}

TEST(Verify, DetectsGoalUsedAsFactor) {
  auto prog = lowered_example();
  auto& blk = prog.blocks.back();
  auto& a = prog.atoms[blk.atoms.back()];
  a.vars[2] = blk.lhs;
  const auto rep = verify_representation(prog, {VerifyMode::kStructural});
  EXPECT_FALSE(rep.ok);
}

TEST(Verify, SamplingIsSeeded) {
  const auto prog = lowered_example();
  VerifyOptions vo;
  vo.mode = VerifyMode::kSampling;
  vo.trials = 50;
  const auto r = verify_representation(prog, vo);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.samples, 50 * prog.blocks.size());
}

TEST(Json, ProgramRoundTrip) {
  const auto prog = lowered_example();
  const auto back = program_from_json(to_json(prog));
  EXPECT_EQ(to_json(back), to_json(prog));
  EXPECT_TRUE(verify_representation(back).ok);
  const auto raw = theorem9(NormOrder::parse("43/31"), 3, w({2, 5, 19}));
  EXPECT_EQ(to_json(program_from_json(to_json(raw, 2))), to_json(raw));
  EXPECT_THROW(program_from_json("[]"), ParseError);
}

}  // namespace
}  // namespace socrep
