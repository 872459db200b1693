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

#include "socrep/simplex.hpp"

#include <charconv>
#include <numeric>
#include <sstream>

#include "socrep/error.hpp"

namespace socrep {

std::vector<Rational> AlphaWeight::alphas() const {
  std::vector<Rational> out;
  out.reserve(s_.size());
  for (auto v : s_) out.emplace_back(v, shat_);
  return out;
}

std::string AlphaWeight::str() const {
  std::string out;
  for (std::size_t j = 0; j < s_.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(s_[j]);
  }
  return out;
}

AlphaWeight normalize_alpha(std::span<const std::int64_t> raw) {
  if (raw.empty()) throw InvalidInput("weight vector is empty");
  std::int64_t g = 0;
  for (auto v : raw) {
    if (v <= 0) {
      throw InvalidInput("weights must be positive integers, got " +
                         std::to_string(v));
    }
    g = std::gcd(g, v);
  }
  AlphaWeight a;
  a.s_.reserve(raw.size());
  for (auto v : raw) {
    a.s_.push_back(v / g);
    a.shat_ = detail::checked_add(a.shat_, v / g);
  }
  return a;
}

AlphaWeight parse_alpha(std::string_view text) {
  std::vector<std::int64_t> raw;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view part = text.substr(0, comma);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      throw InvalidInput("cannot parse weight '" + std::string(part) + "'");
    }
    raw.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return normalize_alpha(raw);
}

AlphaWeight alpha_from_rationals(std::span<const Rational> weights) {
  if (weights.empty()) throw InvalidInput("weight vector is empty");
  std::int64_t lcm = 1;
  Rational total = 0;
  for (const auto& w : weights) {
    if (!w.is_positive()) {
      throw InvalidInput("weights must be positive, got " + w.str());
    }
    lcm = detail::checked_mul(lcm / std::gcd(lcm, w.den()), w.den());
    total += w;
  }
  if (total != Rational(1)) {
    throw InvalidInput("weights must sum to one, got " + total.str());
  }
  std::vector<std::int64_t> raw;
  for (const auto& w : weights) {
    raw.push_back(detail::checked_mul(w.num(), lcm / w.den()));
  }
  return normalize_alpha(raw);
}

std::string LatticePoint::str() const {
  std::string out = "(";
  for (std::size_t r = 0; r < coords.size(); ++r) {
    if (r) out += ',';
    out += std::to_string(coords[r]);
  }
  return out + ")";
}

ExponentVector ExponentVector::midpoint(const ExponentVector& a,
                                        const ExponentVector& b) {
  if (a.size() != b.size()) {
    throw InvalidInput("exponent vectors of different dimension");
  }
  ExponentVector out;
  out.mu.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    out.mu.push_back((a[j] + b[j]) * Rational(1, 2));
  }
  return out;
}

std::string ExponentVector::str() const {
  std::string out = "(";
  for (std::size_t j = 0; j < mu.size(); ++j) {
    if (j) out += ", ";
    out += mu[j].str();
  }
  return out + ")";
}

SimplexLattice::SimplexLattice(AlphaWeight alpha, std::int64_t scale)
    : alpha_(std::move(alpha)), scale_(scale) {
  if (scale_ < 1) throw InvalidInput("lattice scale must be positive");
  if (alpha_.dim() < 1) throw InvalidInput("empty weight vector");
}

LatticePoint SimplexLattice::goal() const {
  LatticePoint p;
  for (std::size_t r = 0; r + 1 < dim(); ++r) {
    p.coords.push_back(detail::checked_mul(alpha_.s(r), scale_));
  }
  return p;
}

std::vector<LatticePoint> SimplexLattice::anchors() const {
  std::vector<LatticePoint> out;
  const std::size_t n = point_dim();
  for (std::size_t j = 0; j < n; ++j) {
    LatticePoint p{std::vector<std::int64_t>(n, 0)};
    p.coords[j] = side();
    out.push_back(std::move(p));
  }
  out.push_back(LatticePoint{std::vector<std::int64_t>(n, 0)});
  return out;
}

std::size_t SimplexLattice::anchor_index(const LatticePoint& p) const {
  if (p.size() != point_dim()) return 0;
  std::size_t nonzero = 0;
  std::size_t where = 0;
  for (std::size_t r = 0; r < p.size(); ++r) {
    if (p[r] != 0) {
      ++nonzero;
      where = r;
    }
  }
  if (nonzero == 0) return dim();
  if (nonzero == 1 && p[where] == side()) return where + 1;
  return 0;
}

bool SimplexLattice::contains(const LatticePoint& p) const {
  if (p.size() != point_dim()) return false;
  std::int64_t total = 0;
  for (auto c : p.coords) {
    if (c < 0 || c > side()) return false;
    total += c;
  }
  return total <= side();
}

ExponentVector barycentric(const LatticePoint& point,
                           const SimplexLattice& lattice) {
  if (!lattice.contains(point)) {
    std::ostringstream msg;
    msg << "point " << point.str() << " is outside the simplex of side "
        << lattice.side();
    throw DomainError(msg.str());
  }
  ExponentVector out;
  Rational rest = 1;
  for (auto c : point.coords) {
    Rational mu(c, lattice.side());
    rest -= mu;
    out.mu.push_back(mu);
  }
  out.mu.push_back(rest);
  return out;
}

}  // namespace socrep
