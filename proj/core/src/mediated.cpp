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

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "socrep/error.hpp"

namespace socrep {

namespace {

using json = nlohmann::json;

LatticePoint add(const LatticePoint& a, const LatticePoint& b) {
  LatticePoint out = a;
  for (std::size_t r = 0; r < out.size(); ++r) out.coords[r] += b[r];
  return out;
}

LatticePoint twice(const LatticePoint& a) {
  LatticePoint out = a;
  for (auto& c : out.coords) c *= 2;
  return out;
}

// ---------------------------------------------------------------------------
// Binary decomposition.
//
// Inputs 0..d-1 are the anchors (anchor j+1 for input j), input d is the goal
// itself carrying weight 2^m - shat. All points are kept in units of 1/2^m of
// the integer lattice so that every intermediate average is integral.

struct Token {
  LatticePoint point;  // units of 1/2^m
  int node = -1;       // index into BinaryBuilder::nodes, -1 for raw inputs
};

struct BuiltNode {
  LatticePoint point;
  LatticePoint first;
  LatticePoint second;
};

class BinaryBuilder {
 public:
  explicit BinaryBuilder(const AlphaWeight& alpha) : alpha_(alpha) {
    m_ = ceil_log2(alpha.shat());
    const std::int64_t total = std::int64_t{1} << m_;
    const std::size_t n = alpha.dim() - 1;
    for (std::size_t j = 0; j < alpha.dim(); ++j) {
      LatticePoint p{std::vector<std::int64_t>(n, 0)};
      if (j < n) p.coords[j] = alpha.shat() * total;
      inputs_.push_back(std::move(p));
      weights_.push_back(alpha.s(j));
    }
    goal_ = LatticePoint{std::vector<std::int64_t>(n, 0)};
    for (std::size_t r = 0; r < n; ++r) goal_.coords[r] = alpha.s(r) * total;
    inputs_.push_back(goal_);
    weights_.push_back(total - alpha.shat());
    forbidden_.insert(inputs_.begin(), inputs_.end());
  }

  // Prefers pairings whose midpoints are all new, which gives exactly the
  // upper bound. Some weights admit none; those fall back to merging
  // repeated points into one node.
  bool run() {
    if (level(0, {})) return true;
    attempts_ = 0;
    allow_merge_ = true;
    return level(0, {});
  }

  int m() const { return m_; }
  const std::vector<BuiltNode>& nodes() const { return nodes_; }

 private:
  std::vector<Token> raw_tokens(int lvl) const {
    std::vector<Token> out;
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      if ((weights_[i] >> lvl) & 1) out.push_back(Token{inputs_[i], -1});
    }
    return out;
  }

  static LatticePoint average(const Token& a, const Token& b) {
    LatticePoint out = add(a.point, b.point);
    for (auto& c : out.coords) c /= 2;
    return out;
  }

  bool level(int lvl, std::vector<Token> carried) {
    std::vector<Token> tokens = raw_tokens(lvl);
    tokens.insert(tokens.end(), carried.begin(), carried.end());
    if (lvl == m_ - 1) {
      if (tokens.size() != 2 || tokens[0].point == tokens[1].point) {
        return false;
      }
      nodes_.push_back(BuiltNode{goal_, tokens[0].point, tokens[1].point});
      return true;
    }
    if (tokens.size() % 2 != 0) return false;
    std::vector<bool> used(tokens.size(), false);
    std::vector<Token> next;
    return match(lvl, tokens, used, next);
  }

  // Enumerates perfect matchings of `tokens`, skipping pairs whose average
  // coincides with a point already in the graph.
  bool match(int lvl, const std::vector<Token>& tokens, std::vector<bool>& used,
             std::vector<Token>& next) {
    if (++attempts_ > kMaxAttempts) return false;
    std::size_t first = 0;
    while (first < tokens.size() && used[first]) ++first;
    if (first == tokens.size()) return level(lvl + 1, next);
    used[first] = true;
    for (std::size_t j = first + 1; j < tokens.size(); ++j) {
      if (used[j]) continue;
      LatticePoint mid = average(tokens[first], tokens[j]);
      if (forbidden_.count(mid)) {
        if (!allow_merge_) continue;
        used[j] = true;
        next.push_back(Token{mid, -1});
        if (match(lvl, tokens, used, next)) return true;
        next.pop_back();
        used[j] = false;
        continue;
      }
      used[j] = true;
      forbidden_.insert(mid);
      nodes_.push_back(BuiltNode{mid, tokens[first].point, tokens[j].point});
      next.push_back(Token{mid, static_cast<int>(nodes_.size()) - 1});
      if (match(lvl, tokens, used, next)) return true;
      next.pop_back();
      nodes_.pop_back();
      forbidden_.erase(mid);
      used[j] = false;
    }
    used[first] = false;
    return false;
  }

  static constexpr std::uint64_t kMaxAttempts = 1'000'000;

  const AlphaWeight& alpha_;
  int m_ = 0;
  std::vector<LatticePoint> inputs_;
  std::vector<std::int64_t> weights_;
  LatticePoint goal_;
  std::set<LatticePoint> forbidden_;
  std::vector<BuiltNode> nodes_;
  std::uint64_t attempts_ = 0;
  bool allow_merge_ = false;
};

std::string point_label(const LatticePoint& p, std::int64_t scale) {
  if (scale == 1) return p.str();
  std::string out = "(";
  for (std::size_t r = 0; r < p.size(); ++r) {
    if (r) out += ',';
    out += Rational(p[r], scale).str();
  }
  return out + ")";
}

json point_json(const LatticePoint& p) { return json(p.coords); }

LatticePoint point_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("point must be an array of integers");
  LatticePoint p;
  for (const auto& c : j) {
    if (!c.is_number_integer()) {
      throw ParseError("point coordinates must be integers");
    }
    p.coords.push_back(c.get<std::int64_t>());
  }
  return p;
}

}  // namespace

const Witness* MediatedGraph::witness_of(const LatticePoint& node) const {
  for (const auto& w : witnesses) {
    if (w.node == node) return &w;
  }
  return nullptr;
}

std::optional<std::size_t> MediatedGraph::index_of(
    const LatticePoint& p) const {
  for (std::size_t i = 0; i < mediated.size(); ++i) {
    if (mediated[i] == p) return i;
  }
  return std::nullopt;
}

std::string_view to_string(ViolationRule rule) {
  switch (rule) {
    case ViolationRule::kGoalMissing: return "goal-missing";
    case ViolationRule::kWrongDimension: return "wrong-dimension";
    case ViolationRule::kOutsideSimplex: return "outside-simplex";
    case ViolationRule::kDuplicateNode: return "duplicate-node";
    case ViolationRule::kAnchorInMediatedSet: return "anchor-in-mediated-set";
    case ViolationRule::kMissingWitness: return "missing-witness";
    case ViolationRule::kDuplicateWitness: return "duplicate-witness";
    case ViolationRule::kOrphanWitness: return "orphan-witness";
    case ViolationRule::kEqualWitnesses: return "equal-witnesses";
    case ViolationRule::kWitnessNotInGraph: return "witness-not-in-graph";
    case ViolationRule::kNotMidpoint: return "not-midpoint";
  }
  return "unknown";
}

std::string Violation::str() const {
  std::string out = node.str() + ": " + std::string(to_string(rule));
  if (!detail.empty()) out += " (" + detail + ")";
  return out;
}

int ceil_log2(std::int64_t v) {
  if (v < 1) throw InvalidInput("ceil_log2 of a non-positive value");
  int m = 0;
  while ((std::int64_t{1} << m) < v) ++m;
  return m;
}

std::int64_t lower_bound(const AlphaWeight& alpha) {
  return std::max<std::int64_t>(static_cast<std::int64_t>(alpha.dim()) - 1,
                                ceil_log2(alpha.shat()));
}

std::int64_t upper_bound(const AlphaWeight& alpha) {
  std::int64_t total = 0;
  for (auto v : alpha.s()) total += std::popcount(static_cast<std::uint64_t>(v));
  const std::int64_t pow = std::int64_t{1} << ceil_log2(alpha.shat());
  total += std::popcount(static_cast<std::uint64_t>(pow - alpha.shat()));
  return total - 1;
}

MediatedGraph binary_decomposition_graph(const AlphaWeight& alpha) {
  if (alpha.dim() < 2) {
    throw InvalidInput("mediated graphs need at least two weights");
  }
  BinaryBuilder builder(alpha);
  if (!builder.run()) {
    throw Error("binary decomposition found no coincidence-free pairing for " +
                alpha.str());
  }
  const std::int64_t total = std::int64_t{1} << builder.m();

  // Smallest power-of-two scale that makes every node integral.
  std::int64_t scale = 1;
  for (const auto& n : builder.nodes()) {
    for (auto c : n.point.coords) {
      scale = std::max(scale, total / std::gcd(c, total));
    }
  }
  auto rescale = [&](const LatticePoint& p) {
    LatticePoint out = p;
    for (auto& c : out.coords) c = c * scale / total;
    return out;
  };

  MediatedGraph g(SimplexLattice(alpha, scale));
  // Goal first, then the remaining nodes in construction order.
  const auto& nodes = builder.nodes();
  const BuiltNode& top = nodes.back();
  g.mediated.push_back(rescale(top.point));
  g.witnesses.push_back(
      Witness{rescale(top.point), rescale(top.first), rescale(top.second)});
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    g.mediated.push_back(rescale(nodes[i].point));
    g.witnesses.push_back(Witness{rescale(nodes[i].point),
                                  rescale(nodes[i].first),
                                  rescale(nodes[i].second)});
  }
  return g;
}

std::vector<Violation> validate(const MediatedGraph& g) {
  std::vector<Violation> out;
  const SimplexLattice& lat = g.lattice;
  const LatticePoint goal = lat.goal();
  const std::size_t n = lat.point_dim();
  if (lat.dim() < 2) {
    out.push_back({goal, ViolationRule::kWrongDimension,
                   "mediated graphs need at least two weights"});
    return out;
  }

  std::set<LatticePoint> nodes;
  bool dimension_ok = true;
  for (const auto& p : g.mediated) {
    if (p.size() != n) {
      out.push_back({p, ViolationRule::kWrongDimension,
                     "expected " + std::to_string(n) + " coordinates"});
      dimension_ok = false;
      continue;
    }
    if (!lat.contains(p)) {
      out.push_back({p, ViolationRule::kOutsideSimplex, ""});
    }
    if (lat.anchor_index(p) != 0) {
      out.push_back({p, ViolationRule::kAnchorInMediatedSet, ""});
    }
    if (!nodes.insert(p).second) {
      out.push_back({p, ViolationRule::kDuplicateNode, ""});
    }
  }
  if (!nodes.count(goal)) {
    out.push_back({goal, ViolationRule::kGoalMissing,
                   "b_alpha must belong to the mediated set"});
  }
  if (!dimension_ok) return out;

  std::set<LatticePoint> graph_nodes = nodes;
  for (const auto& a : lat.anchors()) graph_nodes.insert(a);

  std::map<LatticePoint, int> witness_count;
  for (const auto& w : g.witnesses) {
    ++witness_count[w.node];
    if (!nodes.count(w.node)) {
      out.push_back({w.node, ViolationRule::kOrphanWitness,
                     "witness given for a node outside the mediated set"});
      continue;
    }
    if (w.first.size() != n || w.second.size() != n) {
      out.push_back({w.node, ViolationRule::kWrongDimension, "witness pair"});
      continue;
    }
    if (w.first == w.second) {
      out.push_back({w.node, ViolationRule::kEqualWitnesses, w.first.str()});
    }
    for (const auto* y : {&w.first, &w.second}) {
      if (!graph_nodes.count(*y)) {
        out.push_back({w.node, ViolationRule::kWitnessNotInGraph,
                       "witness " + y->str() + " is not in A_alpha u X"});
      }
    }
    if (twice(w.node) != add(w.first, w.second)) {
      out.push_back({w.node, ViolationRule::kNotMidpoint,
                     "not the average of " + w.first.str() + " and " +
                         w.second.str()});
    }
  }
  for (const auto& p : nodes) {
    auto it = witness_count.find(p);
    if (it == witness_count.end()) {
      out.push_back({p, ViolationRule::kMissingWitness, ""});
    } else if (it->second > 1) {
      out.push_back({p, ViolationRule::kDuplicateWitness, ""});
    }
  }
  return out;
}

bool is_tree_shaped(const MediatedGraph& g) {
  const LatticePoint goal = g.lattice.goal();
  std::map<LatticePoint, int> uses;
  for (const auto& w : g.witnesses) {
    if (w.node == goal) continue;
    for (const auto* y : {&w.first, &w.second}) {
      if (*y != goal && g.index_of(*y)) ++uses[*y];
    }
  }
  return std::all_of(uses.begin(), uses.end(),
                     [](const auto& kv) { return kv.second <= 1; });
}

std::string SocConstraint::str() const {
  auto plain = [](std::string name) {
    name.erase(std::remove(name.begin(), name.end(), '_'), name.end());
    return name;
  };
  return plain(lhs) + "^2 <= " + plain(factors[0]) + " " + plain(factors[1]);
}

SocRepresentation to_soc(const MediatedGraph& g) {
  const auto violations = validate(g);
  if (!violations.empty()) {
    std::string msg = "invalid mediated graph:";
    for (const auto& v : violations) msg += "\n  " + v.str();
    throw InvalidInput(msg);
  }
  const SimplexLattice& lat = g.lattice;
  const LatticePoint goal = lat.goal();

  // Sort key: x < w1 < w2 < ... < z1 < z2 < ...
  std::map<LatticePoint, std::pair<int, std::string>> names;
  names[goal] = {0, "x"};
  int w = 0;
  for (const auto& p : g.mediated) {
    if (p == goal) continue;
    ++w;
    names[p] = {w, "w" + std::to_string(w)};
  }
  const auto anchors = lat.anchors();
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    names[anchors[j]] = {1'000'000 + static_cast<int>(j),
                         "z" + std::to_string(j + 1)};
  }

  SocRepresentation rep;
  rep.variables.push_back("x");
  for (int i = 1; i <= w; ++i) rep.variables.push_back("w" + std::to_string(i));
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    rep.variables.push_back("z" + std::to_string(j + 1));
  }
  for (const auto& [p, key] : names) {
    rep.exponents[key.second] = barycentric(p, lat);
  }
  for (const auto& p : g.mediated) {
    const Witness* wit = g.witness_of(p);
    auto a = names.at(wit->first);
    auto b = names.at(wit->second);
    if (b.first < a.first) std::swap(a, b);
    rep.constraints.push_back(
        SocConstraint{names.at(p).second, {a.second, b.second}});
  }
  return rep;
}

std::string to_dot(const MediatedGraph& g) {
  const auto violations = validate(g);
  if (!violations.empty()) {
    std::string msg = "invalid mediated graph:";
    for (const auto& v : violations) msg += "\n  " + v.str();
    throw InvalidInput(msg);
  }
  const SimplexLattice& lat = g.lattice;
  const LatticePoint goal = lat.goal();
  std::map<LatticePoint, std::string> ids;
  std::ostringstream out;
  out << "digraph mediated {\n";
  out << "  label=\"alpha = (" << lat.alpha().str() << ")/" << lat.alpha().shat()
      << "\";\n";
  const auto anchors = lat.anchors();
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    const std::string id = "z" + std::to_string(j + 1);
    ids[anchors[j]] = id;
    out << "  " << id << " [label=\"" << point_label(anchors[j], lat.scale())
        << "\", shape=box, style=filled, fillcolor=red];\n";
  }
  int w = 0;
  for (const auto& p : g.mediated) {
    const bool is_goal = p == goal;
    const std::string id = is_goal ? "x" : "w" + std::to_string(++w);
    ids[p] = id;
    out << "  " << id << " [label=\"" << point_label(p, lat.scale())
        << "\", shape=ellipse, style=filled, fillcolor="
        << (is_goal ? "green" : "lightblue") << "];\n";
  }
  for (const auto& p : g.mediated) {
    const Witness* wit = g.witness_of(p);
    out << "  " << ids.at(p) << " -> " << ids.at(wit->first) << ";\n";
    out << "  " << ids.at(p) << " -> " << ids.at(wit->second) << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_json(const MediatedGraph& g, int indent) {
  json j;
  j["s"] = std::vector<std::int64_t>(g.alpha().s().begin(), g.alpha().s().end());
  if (g.lattice.scale() != 1) j["scale"] = g.lattice.scale();
  j["X"] = json::array();
  for (const auto& p : g.mediated) j["X"].push_back(point_json(p));
  j["witness"] = json::array();
  for (const auto& w : g.witnesses) {
    j["witness"].push_back(
        {{"node", point_json(w.node)},
         {"pair", json::array({point_json(w.first), point_json(w.second)})}});
  }
  return j.dump(indent);
}

MediatedGraph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("s") || !j.contains("X")) {
    throw ParseError("graph JSON needs \"s\" and \"X\"");
  }
  std::vector<std::int64_t> s;
  for (const auto& v : j["s"]) {
    if (!v.is_number_integer()) throw ParseError("\"s\" must hold integers");
    s.push_back(v.get<std::int64_t>());
  }
  const std::int64_t scale = j.value("scale", std::int64_t{1});
  MediatedGraph g(SimplexLattice(normalize_alpha(s), scale));
  for (const auto& p : j["X"]) g.mediated.push_back(point_from_json(p));
  if (j.contains("witness")) {
    for (const auto& w : j["witness"]) {
      if (!w.contains("node") || !w.contains("pair") || w["pair"].size() != 2) {
        throw ParseError("witness entries need \"node\" and a two-point \"pair\"");
      }
      g.witnesses.push_back(Witness{point_from_json(w["node"]),
                                    point_from_json(w["pair"][0]),
                                    point_from_json(w["pair"][1])});
    }
  }
  return g;
}

}  // namespace socrep
