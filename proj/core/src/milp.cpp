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

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "lp_writer.hpp"
#include "socrep/error.hpp"

namespace socrep {

namespace {

constexpr double kTol = 1e-6;

class Builder {
 public:
  Builder(const AlphaWeight& alpha, std::int64_t delta, const MilpOptions& opt)
      : alpha_(alpha), delta_(delta), opt_(opt) {
    d_ = alpha.dim();
    n_ = d_ + 1 + static_cast<std::size_t>(delta);
    shat_ = static_cast<double>(alpha.shat());
  }

  void build(std::vector<MilpVariable>& vars, std::vector<MilpRow>& rows,
             std::vector<std::size_t>& objective, MilpCounts& counts) {
    vars_ = &vars;
    rows_ = &rows;
    declare(counts);
    for (std::size_t i : sources()) objective.push_back(z_[i]);

    const double big_m = opt_.big_m.value_or(shat_);
    for (std::size_t i : sources()) {
      MilpRow r{"ctr1_" + std::to_string(i), {}, RowSense::kEq, 0.0};
      for (std::size_t j = 0; j < n_; ++j) {
        if (j != i) r.terms.push_back({y(i, j), 1.0});
      }
      r.terms.push_back({z_[i], -2.0});
      add(std::move(r));
    }
    for (std::size_t i : sources()) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (j == i) continue;
        add({"ctr2_" + std::to_string(i) + "_" + std::to_string(j),
             {{y(i, j), 1.0}, {z_[j], -1.0}},
             RowSense::kLe,
             0.0});
      }
    }
    // x_i = (x_j + x_k) / 2 whenever y_ij = y_ik = 1.
    for (std::size_t i : sources()) {
      for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t k = j + 1; k < n_; ++k) {
          if (j == i || k == i) continue;
          for (std::size_t r = 0; r < d_ - 1; ++r) {
            const std::string tag = std::to_string(i) + "_" +
                                    std::to_string(j) + "_" +
                                    std::to_string(k) + "_" +
                                    std::to_string(r + 1);
            std::vector<MilpTerm> t{{x(i, r), 1.0},
                                    {x(j, r), -0.5},
                                    {x(k, r), -0.5}};
            auto lo = t;
            lo.push_back({y(i, j), -big_m});
            lo.push_back({y(i, k), -big_m});
            add({"ctr3a_" + tag, std::move(lo), RowSense::kGe, -2.0 * big_m});
            t.push_back({y(i, j), big_m});
            t.push_back({y(i, k), big_m});
            add({"ctr3b_" + tag, std::move(t), RowSense::kLe, 2.0 * big_m});
          }
        }
      }
    }
    // ||x_i - x_j||_1 >= eps (z_i + z_j - 1) through sign indicators.
    const double sep_m = shat_ + opt_.epsilon;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        const std::string tag = std::to_string(i) + "_" + std::to_string(j);
        MilpRow any{"ctr4_" + tag, {}, RowSense::kGe, -1.0};
        for (std::size_t r = 0; r < d_ - 1; ++r) {
          const std::string rt = tag + "_" + std::to_string(r + 1);
          const std::size_t up = sep_.at({i, j, r, 0});
          const std::size_t dn = sep_.at({i, j, r, 1});
          add({"ctr4p_" + rt,
               {{x(i, r), 1.0}, {x(j, r), -1.0}, {up, -sep_m}},
               RowSense::kGe,
               opt_.epsilon - sep_m});
          add({"ctr4m_" + rt,
               {{x(j, r), 1.0}, {x(i, r), -1.0}, {dn, -sep_m}},
               RowSense::kGe,
               opt_.epsilon - sep_m});
          any.terms.push_back({up, 1.0});
          any.terms.push_back({dn, 1.0});
        }
        any.terms.push_back({z_[i], -1.0});
        any.terms.push_back({z_[j], -1.0});
        add(std::move(any));
      }
    }
    if (opt_.vi1) {
      for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t r = 0; r < d_ - 1; ++r) {
          const std::string tag =
              std::to_string(j) + "_" + std::to_string(r + 1);
          add({"vi1l_" + tag, {{x(j, r), 1.0}, {z_[j], shat_}},
               RowSense::kGe, shat_});
          add({"vi1u_" + tag, {{x(j, r), 1.0}, {z_[j], -shat_}},
               RowSense::kLe, shat_});
        }
      }
    }
    if (opt_.vi2) {
      for (std::size_t j = 1; j < n_; ++j) {
        add({"vi2_" + std::to_string(j), {{z_[j], 1.0}, {z_[j - 1], -1.0}},
             RowSense::kLe, 0.0});
      }
    }
    if (opt_.vi3) {
      const std::size_t k = opt_.vi3_coordinate - 1;
      for (std::size_t j = d_ + 2; j < n_; ++j) {
        add({"vi3_" + std::to_string(j), {{x(j - 1, k), 1.0}, {x(j, k), -1.0}},
             RowSense::kLe, 0.0});
      }
    }
    if (opt_.tree) {
      for (std::size_t j = d_ + 1; j < n_; ++j) {
        MilpRow r{"tree_" + std::to_string(j), {}, RowSense::kLe, 0.0};
        for (std::size_t i = d_ + 1; i < n_; ++i) {
          if (i != j) r.terms.push_back({y(i, j), 1.0});
        }
        r.terms.push_back({z_[j], -1.0});
        add(std::move(r));
      }
    }
    counts.constraints = rows.size();
  }

 private:
  std::vector<std::size_t> sources() const {
    std::vector<std::size_t> out{0};
    for (std::size_t i = d_ + 1; i < n_; ++i) out.push_back(i);
    return out;
  }

  std::size_t var(std::string name, double lo, double hi, bool binary) {
    vars_->push_back(MilpVariable{std::move(name), lo, hi, binary});
    return vars_->size() - 1;
  }

  void declare(MilpCounts& counts) {
    for (std::size_t i : sources()) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (j == i) continue;
        y_[{i, j}] = var("y_" + std::to_string(i) + "_" + std::to_string(j),
                         0, 1, true);
        ++counts.y_binaries;
      }
    }
    for (std::size_t j = 0; j < n_; ++j) {
      const bool fixed = j <= d_;
      z_.push_back(var("z_" + std::to_string(j), fixed ? 1 : 0, 1, true));
      if (!fixed) ++counts.z_binaries;
    }
    const SimplexLattice lat(alpha_);
    std::vector<LatticePoint> pinned{lat.goal()};
    for (const auto& a : lat.anchors()) pinned.push_back(a);
    for (std::size_t j = 0; j < n_; ++j) {
      std::vector<std::size_t> row;
      for (std::size_t r = 0; r < d_ - 1; ++r) {
        const std::string name =
            "x_" + std::to_string(j) + "_" + std::to_string(r + 1);
        if (j <= d_) {
          const double v = static_cast<double>(pinned[j][r]);
          row.push_back(var(name, v, v, false));
        } else {
          row.push_back(var(name, 0, shat_, false));
        }
        ++counts.continuous;
      }
      x_.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        for (std::size_t r = 0; r < d_ - 1; ++r) {
          const std::string tag = std::to_string(i) + "_" + std::to_string(j) +
                                  "_" + std::to_string(r + 1);
          sep_[{i, j, r, 0}] = var("dp_" + tag, 0, 1, true);
          sep_[{i, j, r, 1}] = var("dm_" + tag, 0, 1, true);
          counts.separation_binaries += 2;
        }
      }
    }
  }

  std::size_t y(std::size_t i, std::size_t j) const { return y_.at({i, j}); }
  std::size_t x(std::size_t j, std::size_t r) const { return x_[j][r]; }

  void add(MilpRow row) { rows_->push_back(std::move(row)); }

  const AlphaWeight& alpha_;
  std::int64_t delta_;
  const MilpOptions& opt_;
  std::size_t d_ = 0;
  std::size_t n_ = 0;
  double shat_ = 0;
  std::vector<MilpVariable>* vars_ = nullptr;
  std::vector<MilpRow>* rows_ = nullptr;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> y_;
  std::vector<std::size_t> z_;
  std::vector<std::vector<std::size_t>> x_;
  std::map<std::array<std::size_t, 4>, std::size_t> sep_;
};

using lp::number;

std::optional<std::int64_t> near_integer(double v) {
  const double r = std::round(v);
  if (std::fabs(v - r) <= kTol) return static_cast<std::int64_t>(r);
  return std::nullopt;
}

}  // namespace

std::optional<std::size_t> MilpModel::find(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  return std::nullopt;
}

MilpModel build_model(const AlphaWeight& alpha, std::int64_t delta,
                      const MilpOptions& options) {
  if (delta < 1) throw InvalidInput("delta must be at least 1");
  if (alpha.dim() < 2) {
    throw InvalidInput("mediated graphs need at least two weights");
  }
  if (!(options.epsilon > 0)) throw InvalidInput("epsilon must be positive");
  if (options.big_m && !(*options.big_m > 0)) {
    throw InvalidInput("big-M must be positive");
  }
  if (options.vi3_coordinate < 1 ||
      options.vi3_coordinate > alpha.dim() - 1) {
    throw InvalidInput("vi3 coordinate must lie in 1.." +
                       std::to_string(alpha.dim() - 1));
  }
  MilpModel m(alpha, delta, options);
  Builder(alpha, delta, options).build(m.vars_, m.rows_, m.objective_,
                                       m.counts_);
  return m;
}

std::size_t compact_binary_count(const AlphaWeight& alpha, std::int64_t delta) {
  const auto dl = static_cast<std::size_t>(delta);
  return dl + (dl + alpha.dim() - 1) * dl;
}

std::string emit_lp(const MilpModel& m) {
  std::ostringstream os;
  os << "\\ minimum cardinality mediated graph, alpha = (" << m.alpha().str()
     << ") / " << m.alpha().shat() << ", delta = " << m.delta() << "\n";
  os << "Minimize\n obj: ";
  std::vector<MilpTerm> obj;
  for (std::size_t v : m.objective()) obj.push_back({v, 1.0});
  lp::write_terms(os, m.variables(), obj);
  os << "\nSubject To\n";
  lp::write_rows(os, m.variables(), m.rows());
  os << "Bounds\n";
  lp::write_bounds(os, m.variables());
  lp::write_binaries(os, m.variables());
  os << "End\n";
  return os.str();
}

MediatedGraph parse_solution(const MilpModel& m, std::string_view text,
                             std::vector<std::string>* warnings) {
  auto warn = [&](std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  };
  std::vector<std::optional<double>> value(m.variables().size());
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string name, val, extra;
    if (!(ls >> name) || name[0] == '#') continue;
    if (!(ls >> val) || (ls >> extra)) continue;
    double v = 0;
    auto res = std::from_chars(val.data(), val.data() + val.size(), v);
    if (res.ec != std::errc() || res.ptr != val.data() + val.size()) continue;
    if (auto idx = m.find(name)) {
      value[*idx] = v;
    } else {
      warn("unknown variable " + name + " ignored");
    }
  }
  auto get = [&](std::string_view name) {
    const std::size_t idx = *m.find(name);
    const auto& var = m.variables()[idx];
    if (var.fixed()) return var.lower;
    return value[idx].value_or(0.0);
  };
  auto binary = [&](const std::string& name) {
    const double v = get(name);
    if (std::fabs(v) <= kTol) return false;
    if (std::fabs(v - 1) <= kTol) return true;
    throw ParseError("binary " + name + " has value " + number(v));
  };

  const std::size_t d = m.alpha().dim();
  const std::size_t n = m.node_count();
  std::vector<bool> active(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    active[j] = j <= d || binary("z_" + std::to_string(j));
  }

  // Coordinates, allowing a common dyadic denominator when the solver
  // returned non-integral values.
  std::vector<std::vector<double>> raw(n);
  std::int64_t scale = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (!active[j]) continue;
    for (std::size_t r = 0; r < d - 1; ++r) {
      const double v =
          get("x_" + std::to_string(j) + "_" + std::to_string(r + 1));
      raw[j].push_back(v);
      if (near_integer(v)) continue;
      std::int64_t q = 2;
      while (q <= (std::int64_t{1} << 20) && !near_integer(v * q)) q *= 2;
      if (q > (std::int64_t{1} << 20)) {
        throw ParseError("node " + std::to_string(j) + " coordinate " +
                         number(v) + " is not a dyadic rational");
      }
      warn("node " + std::to_string(j) + " coordinate " + number(v) +
           " read as a multiple of 1/" + std::to_string(q));
      scale = std::max(scale, q);
    }
  }
  const SimplexLattice lat(m.alpha(), scale);
  std::vector<LatticePoint> point(n);
  const auto anchors = lat.anchors();
  for (std::size_t j = 0; j < n; ++j) {
    if (!active[j]) continue;
    if (j == 0) {
      point[j] = lat.goal();
    } else if (j <= d) {
      point[j] = anchors[j - 1];
    } else {
      for (double v : raw[j]) point[j].coords.push_back(*near_integer(v * scale));
    }
  }

  MediatedGraph g(lat);
  std::vector<std::size_t> order{0};
  for (std::size_t j = d + 1; j < n; ++j) {
    if (active[j]) order.push_back(j);
  }
  // Equal-coordinate nodes collapse into one; any member may supply the
  // witness pair.
  std::map<LatticePoint, std::vector<std::size_t>> groups;
  std::vector<LatticePoint> sequence;
  for (std::size_t j : order) {
    if (lat.anchor_index(point[j]) != 0) {
      warn("node " + std::to_string(j) + " coincides with an anchor");
      continue;
    }
    auto& members = groups[point[j]];
    if (members.empty()) sequence.push_back(point[j]);
    members.push_back(j);
  }
  for (const auto& p : sequence) {
    std::optional<Witness> found;
    for (std::size_t i : groups[p]) {
      std::vector<std::size_t> targets;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && binary("y_" + std::to_string(i) + "_" + std::to_string(j))) {
          targets.push_back(j);
        }
      }
      if (targets.size() != 2) continue;
      if (!active[targets[0]] || !active[targets[1]]) continue;
      const LatticePoint& a = point[targets[0]];
      const LatticePoint& b = point[targets[1]];
      if (a == b) continue;
      bool midpoint = true;
      for (std::size_t r = 0; r < p.size(); ++r) {
        midpoint = midpoint && a[r] + b[r] == 2 * p[r];
      }
      if (midpoint) {
        found = Witness{p, a, b};
        break;
      }
    }
    if (!found) {
      throw ParseError("node " + std::to_string(groups[p].front()) + " " +
                       p.str() + " has no reconstructible witness pair");
    }
    g.mediated.push_back(p);
    g.witnesses.push_back(*found);
  }
  const auto violations = validate(g);
  if (!violations.empty()) {
    std::string msg = "parsed graph is invalid:";
    for (const auto& v : violations) msg += "\n  " + v.str();
    throw ParseError(msg);
  }
  return g;
}

std::optional<std::int64_t> next_delta(std::int64_t current,
                                       DeltaStatus status) {
  if (current < 1) throw InvalidInput("delta must be at least 1");
  if (status == DeltaStatus::kFeasible) return std::nullopt;
  return current + 1;
}

}  // namespace socrep
