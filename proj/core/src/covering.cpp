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

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lp_writer.hpp"
#include "socrep/error.hpp"

namespace socrep {

namespace {

using json = nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

double lp_distance(const std::array<double, 2>& a,
                   const std::array<double, 2>& b, const NormOrder& p) {
  const double dx = std::fabs(a[0] - b[0]);
  const double dy = std::fabs(a[1] - b[1]);
  if (p.is_infinite()) return std::max(dx, dy);
  const double e = p.value().to_double();
  return std::pow(std::pow(dx, e) + std::pow(dy, e), 1.0 / e);
}

std::string pair_tag(std::size_t i, std::size_t j) {
  return std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

}  // namespace

CoveringInstance generate_instance(std::size_t n, std::size_t j,
                                   const NormOrder& p,
                                   const std::vector<Rational>& feature_weights,
                                   std::uint64_t seed) {
  if (n < 1) throw InvalidInput("need at least one demand point");
  if (j < 1) throw InvalidInput("need at least one facility");
  if (feature_weights.empty()) throw InvalidInput("need at least one feature");
  CoveringInstance inst;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> omega(0, 10);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = coord(rng);
    const double y = coord(rng);
    inst.demand.push_back({x, y});
  }
  for (std::size_t i = 0; i < n; ++i) inst.weights.push_back(omega(rng));
  inst.facilities = j;
  inst.p = p;
  inst.feature_weights = feature_weights;
  inst.budget = Rational(static_cast<std::int64_t>(2 * n + j), 4);
  double far = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      far = std::max(far, lp_distance(inst.demand[a], inst.demand[b], p));
    }
  }
  // A single point still needs a positive constant.
  inst.big_m = (1.0 + 1e-3) * std::max(far, 1e-3);
  return inst;
}

ConeProgram coverage_program(const CoveringInstance& inst, std::size_t i) {
  AffineCoverSpec spec;
  spec.d1 = 2;
  spec.d2 = inst.feature_weights.size();
  spec.d3 = 1;
  spec.f = AffineMap::identity(2);
  spec.f.offset = {-inst.demand[i][0], -inst.demand[i][1]};
  spec.h = AffineMap::identity(spec.d2);
  for (auto& row : spec.h.matrix) {
    for (auto& c : row) c *= inst.gravity;
  }
  // g(y) = M (1 - y).
  spec.g.matrix = {{-inst.big_m}};
  spec.g.offset = {inst.big_m};
  spec.p = inst.p;
  spec.weights = inst.feature_weights;
  return generalized_remark12(spec);
}

CoveringModel build_covering_model(const CoveringInstance& inst,
                                   GraphSupplier& supplier) {
  if (inst.p.is_infinite() || inst.p.value() <= Rational(1)) {
    throw DomainError("covering model needs a rational p > 1, got " +
                      inst.p.str());
  }
  const std::size_t n = inst.demand.size();
  const std::size_t nj = inst.facilities;
  const std::size_t l = inst.feature_weights.size();
  CoveringModel model;
  model.representation = supplier.name();
  std::map<std::string, std::size_t> index;
  auto var = [&](std::string name, double lo, double hi, bool binary) {
    index[name] = model.variables.size();
    model.variables.push_back(MilpVariable{std::move(name), lo, hi, binary});
    return model.variables.size() - 1;
  };

  std::vector<std::vector<std::size_t>> y(n, std::vector<std::size_t>(nj));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      y[i][j] = var("y_" + pair_tag(i, j), 0, 1, true);
    }
  }
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t r = 1; r <= 2; ++r) {
      var("x_" + std::to_string(j + 1) + "_" + std::to_string(r), -kInf, kInf,
          false);
    }
  }
  std::vector<std::size_t> features;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t k = 1; k <= l; ++k) {
        features.push_back(
            var("m_" + pair_tag(i, j) + "_" + std::to_string(k), 0, 1, false));
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const ConeProgram lowered =
        rationalize_to_soc(coverage_program(inst, i), supplier);
    for (std::size_t j = 0; j < nj; ++j) {
      const std::string tag = pair_tag(i, j);
      std::map<std::string, std::string> to;
      to["x1"] = "x_" + std::to_string(j + 1) + "_1";
      to["x2"] = "x_" + std::to_string(j + 1) + "_2";
      for (std::size_t k = 1; k <= l; ++k) {
        to["z" + std::to_string(k)] = "m_" + tag + "_" + std::to_string(k);
      }
      to["s1"] = "y_" + tag;
      for (const auto& a : lowered.aux_vars) {
        // The lhs of a coverage cone is an affine image of x and may be
        // negative; the right-hand sides of all cones stay nonnegative.
        const bool free = a.size() > 1 && a[0] == 'u' &&
                          std::isdigit(static_cast<unsigned char>(a[1]));
        to[a] = "c_" + tag + "_" + a;
        var(to[a], free ? -kInf : 0.0, kInf, false);
      }
      std::size_t soc = 0;
      std::size_t row = 0;
      for (const auto& atom : lowered.atoms) {
        const std::string name = "cov_" + tag + "_" + std::to_string(row + 1);
        switch (atom.kind) {
          case AtomKind::kSoc3:
            model.quadratic.push_back({index.at(to.at(atom.vars[0])),
                                       index.at(to.at(atom.vars[1])),
                                       index.at(to.at(atom.vars[2]))});
            ++soc;
            break;
          case AtomKind::kHalfSpaceSum: {
            MilpRow r{name, {}, RowSense::kLe, 0.0};
            for (std::size_t v = 0; v + 1 < atom.vars.size(); ++v) {
              r.terms.push_back({index.at(to.at(atom.vars[v])), 1.0});
            }
            r.terms.push_back({index.at(to.at(atom.vars.back())), -1.0});
            model.linear.push_back(std::move(r));
            ++row;
            break;
          }
          case AtomKind::kAffineEq: {
            MilpRow r{name, {}, RowSense::kEq, atom.constant};
            for (std::size_t v = 0; v < atom.vars.size(); ++v) {
              r.terms.push_back({index.at(to.at(atom.vars[v])), atom.coeffs[v]});
            }
            model.linear.push_back(std::move(r));
            ++row;
            break;
          }
          default:
            throw Error("unexpected atom after lowering: " + atom.str());
        }
      }
      model.soc_per_pair = soc;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    MilpRow r{"assign_" + std::to_string(i + 1), {}, RowSense::kLe, 1.0};
    for (std::size_t j = 0; j < nj; ++j) r.terms.push_back({y[i][j], 1.0});
    model.linear.push_back(std::move(r));
  }
  {
    MilpRow r{"budget", {}, RowSense::kLe, inst.budget.to_double()};
    for (std::size_t v : features) r.terms.push_back({v, 1.0});
    model.linear.push_back(std::move(r));
  }
  model.objective.assign(model.variables.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      model.objective[y[i][j]] = static_cast<double>(inst.weights[i]);
    }
  }
  model.counts.soc = model.quadratic.size();
  model.counts.lin = model.linear.size();
  model.counts.bin = n * nj;
  model.counts.vars = model.variables.size();
  return model;
}

std::string emit_covering(const CoveringModel& model) {
  std::ostringstream os;
  os << "\\ gravitational maximal covering, " << model.representation
     << " representation\n";
  os << "Maximize\n obj: ";
  std::vector<MilpTerm> obj;
  for (std::size_t v = 0; v < model.objective.size(); ++v) {
    if (model.objective[v] != 0.0) obj.push_back({v, model.objective[v]});
  }
  lp::write_terms(os, model.variables, obj);
  os << "\nSubject To\n";
  lp::write_rows(os, model.variables, model.linear);
  for (std::size_t q = 0; q < model.quadratic.size(); ++q) {
    const auto& [w, u, v] = model.quadratic[q];
    const auto& name = [&](std::size_t i) -> const std::string& {
      return model.variables[i].name;
    };
    os << " soc_" << q + 1 << ": [ " << name(w) << " ^ 2 - ";
    if (u == v) {
      os << name(u) << " ^ 2";
    } else {
      os << name(u) << " * " << name(v);
    }
    os << " ] <= 0\n";
  }
  os << "Bounds\n";
  lp::write_bounds(os, model.variables);
  lp::write_binaries(os, model.variables);
  os << "End\n";
  return os.str();
}

std::string to_json(const CoveringInstance& inst, int indent) {
  json j;
  j["demand"] = inst.demand;
  j["weights"] = inst.weights;
  j["facilities"] = inst.facilities;
  j["p"] = inst.p.str();
  json fw = json::array();
  for (const auto& r : inst.feature_weights) fw.push_back(r.str());
  j["feature_weights"] = fw;
  j["budget"] = inst.budget.str();
  j["gravity"] = inst.gravity;
  j["big_m"] = inst.big_m;
  return j.dump(indent);
}

CoveringInstance instance_from_json(const std::string& text) {
  CoveringInstance inst;
  try {
    const json j = json::parse(text);
    inst.demand = j.at("demand").get<std::vector<std::array<double, 2>>>();
    inst.weights = j.at("weights").get<std::vector<std::int64_t>>();
    inst.facilities = j.at("facilities").get<std::size_t>();
    inst.p = NormOrder::parse(j.at("p").get<std::string>());
    for (const auto& r : j.at("feature_weights")) {
      inst.feature_weights.push_back(Rational::parse(r.get<std::string>()));
    }
    inst.budget = Rational::parse(j.at("budget").get<std::string>());
    inst.gravity = j.value("gravity", 1.0);
    inst.big_m = j.at("big_m").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("covering instance JSON: ") + e.what());
  }
  if (inst.demand.size() != inst.weights.size()) {
    throw ParseError("demand and weights differ in length");
  }
  return inst;
}

std::string to_json(const CoveringCounts& counts) {
  json j{{"soc", counts.soc},
         {"lin", counts.lin},
         {"bin", counts.bin},
         {"vars", counts.vars}};
  return j.dump();
}

}  // namespace socrep
