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

#ifndef SOCREP_SIMPLEX_HPP_
#define SOCREP_SIMPLEX_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "socrep/rational.hpp"

namespace socrep {

/// A rational point of the simplex stored in lowest integer terms:
/// alpha_j = s_j / shat with gcd(s) = 1 and shat = sum(s).
class AlphaWeight {
 public:
  std::size_t dim() const { return s_.size(); }
  std::span<const std::int64_t> s() const { return s_; }
  std::int64_t s(std::size_t j) const { return s_[j]; }
  std::int64_t shat() const { return shat_; }
  Rational alpha(std::size_t j) const { return Rational(s_[j], shat_); }
  std::vector<Rational> alphas() const;

  /// Comma separated weights, e.g. "1,2,3".
  std::string str() const;

  friend bool operator==(const AlphaWeight&, const AlphaWeight&) = default;
  friend auto operator<=>(const AlphaWeight&, const AlphaWeight&) = default;

 private:
  friend AlphaWeight normalize_alpha(std::span<const std::int64_t> raw);
  std::vector<std::int64_t> s_;
  std::int64_t shat_ = 0;
};

/// Divides out the common factor of `raw`. Throws InvalidInput on an empty
/// sequence or a non-positive entry.
AlphaWeight normalize_alpha(std::span<const std::int64_t> raw);

/// Parses "s1,s2,..." and normalizes.
AlphaWeight parse_alpha(std::string_view text);

/// Converts positive rational weights summing to one into an AlphaWeight.
AlphaWeight alpha_from_rationals(std::span<const Rational> weights);

/// Integer point with d-1 coordinates. Interpreted relative to a
/// SimplexLattice, whose scale fixes the grid resolution.
struct LatticePoint {
  std::vector<std::int64_t> coords;

  std::size_t size() const { return coords.size(); }
  std::int64_t operator[](std::size_t r) const { return coords[r]; }

  std::string str() const;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// Barycentric coordinates with respect to the anchors; a point of the
/// simplex Lambda_d.
struct ExponentVector {
  std::vector<Rational> mu;

  std::size_t size() const { return mu.size(); }
  const Rational& operator[](std::size_t j) const { return mu[j]; }

  /// Componentwise (a + b) / 2.
  static ExponentVector midpoint(const ExponentVector& a,
                                 const ExponentVector& b);

  std::string str() const;

  friend bool operator==(const ExponentVector&, const ExponentVector&) =
      default;
};

/// The scaled simplex conv{side*e_1, ..., side*e_{d-1}, 0} with
/// side = shat * scale. Scale 1 is the integer lattice of the weights; a
/// power-of-two scale refines the grid for dyadic constructions.
///
/// Anchor indexing is fixed: anchor j (1-based, j < d) is side*e_j and
/// anchor d is the origin.
class SimplexLattice {
 public:
  explicit SimplexLattice(AlphaWeight alpha, std::int64_t scale = 1);

  const AlphaWeight& alpha() const { return alpha_; }
  std::int64_t scale() const { return scale_; }
  std::int64_t side() const { return alpha_.shat() * scale_; }
  std::size_t dim() const { return alpha_.dim(); }
  std::size_t point_dim() const { return alpha_.dim() - 1; }

  /// b_alpha = scale * (s_1, ..., s_{d-1}).
  LatticePoint goal() const;

  /// Anchors in the fixed order side*e_1, ..., side*e_{d-1}, 0.
  std::vector<LatticePoint> anchors() const;

  /// 1-based anchor index of `p`, or 0 when `p` is not an anchor.
  std::size_t anchor_index(const LatticePoint& p) const;

  bool contains(const LatticePoint& p) const;

  friend bool operator==(const SimplexLattice&, const SimplexLattice&) =
      default;

 private:
  AlphaWeight alpha_;
  std::int64_t scale_;
};

/// mu_j = coords_j / side for j < d, mu_d = 1 - sum_j mu_j. Throws
/// DomainError when the point is outside the simplex.
ExponentVector barycentric(const LatticePoint& point,
                           const SimplexLattice& lattice);

inline ExponentVector barycentric(const LatticePoint& point,
                                  const AlphaWeight& alpha) {
  return barycentric(point, SimplexLattice(alpha));
}

}  // namespace socrep

#endif  // SOCREP_SIMPLEX_HPP_
