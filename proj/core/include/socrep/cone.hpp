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

#ifndef SOCREP_CONE_HPP_
#define SOCREP_CONE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "socrep/mcmgp.hpp"
#include "socrep/rational.hpp"
#include "socrep/simplex.hpp"

namespace socrep {

/// Norm order p >= 1, possibly infinite.
class NormOrder {
 public:
  NormOrder(Rational p);  // NOLINT(google-explicit-constructor)
  static NormOrder infinity();

  /// "a/b", "a" or "inf".
  static NormOrder parse(std::string_view text);

  bool is_infinite() const { return infinite_; }
  /// Finite value; throws DomainError for p = inf.
  const Rational& value() const;
  /// Conjugate q with 1/p + 1/q = 1; needs 1 < p < inf.
  Rational conjugate() const;
  std::string str() const;

  friend bool operator==(const NormOrder&, const NormOrder&) = default;

 private:
  NormOrder() = default;
  bool infinite_ = false;
  Rational value_{1};
};

enum class AtomKind {
  kGenPowerCone,  // vars x1..x{d1}, z1..z{d2}: ||x||_p <= z^weights
  kPOrderCone,    // vars w, x1..xd: ||x||_p <= w
  kPowerCone,     // vars x, z1..zd: |x| <= z^weights
  kSoc3,          // vars w, u, v: w^2 <= u v, u, v >= 0
  kHalfSpaceSum,  // vars x1..xd, w: sum x <= w
  kAffineEq,      // sum coeffs_i vars_i = constant
};

std::string_view to_string(AtomKind kind);

struct ConeAtom {
  AtomKind kind = AtomKind::kSoc3;
  std::vector<std::string> vars;
  std::optional<NormOrder> p;
  std::vector<Rational> weights;
  std::size_t d1 = 0;
  std::vector<double> coeffs;
  double constant = 0.0;

  static ConeAtom of(AtomKind kind, std::vector<std::string> vars) {
    ConeAtom a;
    a.kind = kind;
    a.vars = std::move(vars);
    return a;
  }

  /// Short signature such as "PowerCone(1/3,2/3)" or "POrderCone(2)/3".
  std::string signature() const;
  std::string str() const;
};

/// Soc3 atoms produced from one power cone, with the exponent vector of
/// every variable involved relative to that cone's right-hand side.
struct SocBlock {
  std::vector<Rational> weights;
  std::string lhs;
  std::vector<std::string> rhs;
  std::map<std::string, ExponentVector> exponents;
  std::vector<std::size_t> atoms;
};

struct ConeProgram {
  std::vector<std::string> original_vars;
  std::vector<std::string> aux_vars;
  std::vector<ConeAtom> atoms;
  std::vector<SocBlock> blocks;

  /// Extended dimension: number of auxiliary variables.
  std::size_t m_e() const { return aux_vars.size(); }
  /// Cones and half-spaces; affine equations are not counted.
  std::size_t l_e() const;

  /// Every atom references declared variables and names are unique.
  void check() const;
};

struct ComplexityReport {
  std::size_t m_e = 0;
  std::size_t l_e = 0;
  std::map<std::string, std::size_t> by_kind;
  std::map<std::string, std::size_t> by_signature;
};

ComplexityReport complexity(const ConeProgram& program);

// Constructions. Original variables are x1..x{d1} and z1..z{d2}.

ConeProgram split_lemma4(const NormOrder& p, std::size_t d1,
                         const std::vector<Rational>& weights);

enum class TowerShape { kBalanced, kHalvedRoot };

/// ||x||_p <= w over x1..xd as d-1 three-dimensional cones.
ConeProgram tower_lemma5(const NormOrder& p, std::size_t d,
                         TowerShape shape = TowerShape::kBalanced);

/// ||x||_p <= w as d cones x_j <= t_j^(1/p) w^(1/q) plus sum t <= w.
ConeProgram porder_split_lemma6(const NormOrder& p, std::size_t d);

/// p = 1 or p = inf as half-spaces over sign-split variables.
ConeProgram linear_norm(const NormOrder& p, std::size_t d);

ConeProgram corollary8(const NormOrder& p, std::size_t d1,
                       const std::vector<Rational>& weights);
ConeProgram theorem9(const NormOrder& p, std::size_t d1,
                     const std::vector<Rational>& weights);
ConeProgram theorem10(const NormOrder& p, std::size_t d1,
                      const std::vector<Rational>& weights);

struct AffineMap {
  std::vector<std::vector<double>> matrix;  // rows x inputs
  std::vector<double> offset;

  static AffineMap identity(std::size_t n);
  std::size_t rows() const { return matrix.size(); }
};

/// ||f(x)||_p <= h(z)^weights + g(t), with g a single-row map.
struct AffineCoverSpec {
  std::size_t d1 = 0;
  std::size_t d2 = 0;
  std::size_t d3 = 0;
  AffineMap f;
  AffineMap g;
  AffineMap h;
  NormOrder p{Rational(2)};
  std::vector<Rational> weights;
};

ConeProgram generalized_remark12(const AffineCoverSpec& spec);

/// Maps weights to a mediated graph; results are cached per weight vector
/// and the cache is safe to share between threads.
class GraphSupplier {
 public:
  using Solver = std::function<MediatedGraph(const AlphaWeight&)>;

  GraphSupplier(std::string name, Solver solver);

  static std::shared_ptr<GraphSupplier> optimal(SearchBudget budget = {});
  static std::shared_ptr<GraphSupplier> upper_bound();

  MediatedGraph get(const AlphaWeight& alpha);
  const std::string& name() const { return name_; }
  std::size_t cached() const;

 private:
  std::string name_;
  Solver solver_;
  mutable std::mutex mu_;
  std::map<std::vector<std::int64_t>, MediatedGraph> cache_;
};

/// Lowers every cone to Soc3 atoms; half-spaces and affine equations pass
/// through unchanged.
ConeProgram rationalize_to_soc(const ConeProgram& program,
                               GraphSupplier& supplier);

enum class VerifyMode { kStructural, kSampling, kBoth };

struct VerifyOptions {
  VerifyMode mode = VerifyMode::kBoth;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
};

struct VerifyReport {
  bool ok = true;
  std::size_t blocks = 0;
  std::size_t samples = 0;
  std::vector<std::string> failures;
};

VerifyReport verify_representation(const ConeProgram& program,
                                   const VerifyOptions& options = {});

std::string to_json(const ConeProgram& program, int indent = -1);
ConeProgram program_from_json(const std::string& text);

}  // namespace socrep

#endif  // SOCREP_CONE_HPP_
