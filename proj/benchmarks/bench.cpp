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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "socrep/cone.hpp"
#include "socrep/covering.hpp"
#include "socrep/mcmgp.hpp"
#include "socrep/mediated.hpp"
#include "socrep/milp.hpp"

namespace {

using namespace socrep;

const std::vector<std::string> kAlphas{"1,2,3", "2,5,19", "13,17,44",
                                       "6,19,35", "35,58,87", "3,7,11,29"};

void BM_BinaryDecomposition(benchmark::State& state) {
  const auto a = parse_alpha(kAlphas[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(binary_decomposition_graph(a));
  state.SetLabel(a.str());
}
BENCHMARK(BM_BinaryDecomposition)->DenseRange(0, 5);

void BM_SolveExact(benchmark::State& state) {
  const auto a = parse_alpha(kAlphas[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(a));
  state.SetLabel(a.str());
}
BENCHMARK(BM_SolveExact)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_BuildMilp(benchmark::State& state) {
  const auto a = parse_alpha("13,17,44");
  const auto delta = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(emit_lp(build_model(a, delta)));
}
BENCHMARK(BM_BuildMilp)->Arg(7)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_LowerTheorem10(benchmark::State& state) {
  auto ub = GraphSupplier::upper_bound();
  const auto base = theorem10(NormOrder::parse("17/3"),
                              static_cast<std::size_t>(state.range(0)),
                              parse_alpha("35,58,87").alphas());
  for (auto _ : state) benchmark::DoNotOptimize(rationalize_to_soc(base, *ub));
}
BENCHMARK(BM_LowerTheorem10)->Arg(2)->Arg(10);

void BM_Verify(benchmark::State& state) {
  auto ub = GraphSupplier::upper_bound();
  const auto prog = rationalize_to_soc(
      theorem10(NormOrder::parse("43/31"), 2, parse_alpha("2,5,19").alphas()),
      *ub);
  VerifyOptions vo;
  vo.trials = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(verify_representation(prog, vo));
}
BENCHMARK(BM_Verify)->Unit(benchmark::kMillisecond);

void BM_CoveringModel(benchmark::State& state) {
  auto ub = GraphSupplier::upper_bound();
  const auto inst = generate_instance(static_cast<std::size_t>(state.range(0)), 5,
                                      NormOrder::parse("2"),
                                      parse_alpha("13,33,34").alphas(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_covering_model(inst, *ub));
}
BENCHMARK(BM_CoveringModel)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
