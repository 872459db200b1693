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

#ifndef SOCREP_MEDIATED_HPP_
#define SOCREP_MEDIATED_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "socrep/simplex.hpp"

namespace socrep {

/// Witness of a mediated node: node = (first + second) / 2.
struct Witness {
  LatticePoint node;
  LatticePoint first;
  LatticePoint second;

  friend bool operator==(const Witness&, const Witness&) = default;
};

/// An alpha-mediated graph: anchors of the lattice, the mediated set X and
/// one explicit witness pair per mediated node. Arcs are derived from the
/// witnesses (node -> first, node -> second).
///
/// The struct is a plain value so that arbitrary candidates (including
/// broken ones) can be built and passed to validate().
struct MediatedGraph {
  SimplexLattice lattice;
  std::vector<LatticePoint> mediated;
  std::vector<Witness> witnesses;

  explicit MediatedGraph(SimplexLattice lat) : lattice(std::move(lat)) {}

  const AlphaWeight& alpha() const { return lattice.alpha(); }
  std::size_t size() const { return mediated.size(); }

  /// Witness entry for `node`, if any.
  const Witness* witness_of(const LatticePoint& node) const;

  /// Position of `p` in the mediated sequence.
  std::optional<std::size_t> index_of(const LatticePoint& p) const;

  friend bool operator==(const MediatedGraph&, const MediatedGraph&) = default;
};

enum class ViolationRule {
  kGoalMissing,
  kWrongDimension,
  kOutsideSimplex,
  kDuplicateNode,
  kAnchorInMediatedSet,
  kMissingWitness,
  kDuplicateWitness,
  kOrphanWitness,
  kEqualWitnesses,
  kWitnessNotInGraph,
  kNotMidpoint,
};

std::string_view to_string(ViolationRule rule);

struct Violation {
  LatticePoint node;
  ViolationRule rule;
  std::string detail;

  std::string str() const;
};

/// max{d - 1, ceil(log2 shat)}.
std::int64_t lower_bound(const AlphaWeight& alpha);

/// sum_i |Omega(s_i)| + |Omega(2^ceil(log2 shat) - shat)| - 1, where
/// |Omega(a)| is the number of ones in the binary expansion of a.
std::int64_t upper_bound(const AlphaWeight& alpha);

/// ceil(log2 v) for v >= 1.
int ceil_log2(std::int64_t v);

/// Builds the classical binary-expansion graph: each weight s_i and the
/// complement 2^m - shat (carried by the goal node itself) are written in
/// binary, and tokens of equal weight are averaged level by level. The
/// result normally has upper_bound(alpha) mediated nodes. When two averages
/// land on the same point they share a node, so a few d = 2 inputs such as
/// (43,42) come out smaller.
///
/// Node coordinates are dyadic; the returned lattice uses the smallest
/// power-of-two scale that makes them integral. Requires d >= 2.
MediatedGraph binary_decomposition_graph(const AlphaWeight& alpha);

/// Every rule the graph breaks; empty iff the graph is a valid
/// alpha-mediated graph.
std::vector<Violation> validate(const MediatedGraph& g);

/// True when every non-goal mediated node is a witness of at most one
/// non-goal mediated node.
bool is_tree_shaped(const MediatedGraph& g);

/// Rotated cone w_lhs^2 <= w_f1 * w_f2 over non-negative variables.
struct SocConstraint {
  std::string lhs;
  std::array<std::string, 2> factors;

  /// "x^2 <= w1 z3".
  std::string str() const;

  friend bool operator==(const SocConstraint&, const SocConstraint&) = default;
};

struct SocRepresentation {
  /// "x", "w1".."w{L-1}", "z1".."z{d}".
  std::vector<std::string> variables;
  std::vector<SocConstraint> constraints;
  /// Barycentric exponent vector of every variable.
  std::map<std::string, ExponentVector> exponents;

  /// Auxiliary variables introduced: |X| - 1.
  std::size_t aux_count() const { return constraints.size() - 1; }
};

/// One constraint per mediated node. The goal maps to "x", anchor j to "zj",
/// the remaining mediated nodes to "w1", "w2", ... in X order. Factors are
/// ordered x, w (by index), z (by index). Throws InvalidInput carrying the
/// validate() report when the graph is invalid.
SocRepresentation to_soc(const MediatedGraph& g);

/// Graphviz digraph; anchors, goal and mediated nodes get distinct styles
/// and there is one arc per witness membership.
std::string to_dot(const MediatedGraph& g);

/// {"s":[...], "X":[[...],...], "witness":[{"node":[...],"pair":[[...],[...]]}]}
/// plus "scale" when the lattice is refined.
std::string to_json(const MediatedGraph& g, int indent = -1);
MediatedGraph graph_from_json(const std::string& text);

}  // namespace socrep

#endif  // SOCREP_MEDIATED_HPP_
