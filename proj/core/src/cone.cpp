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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "json.hpp"
#include "socrep/error.hpp"
#include "socrep/mediated.hpp"

namespace socrep {

namespace {

using json = nlohmann::json;

std::string join(const std::vector<std::string>& v, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

std::string join(const std::vector<Rational>& v) {
  std::vector<std::string> s;
  for (const auto& r : v) s.push_back(r.str());
  return join(s, ",");
}

void check_weights(const std::vector<Rational>& weights) {
  if (weights.empty()) throw InvalidInput("weights must not be empty");
  Rational total;
  for (const auto& w : weights) {
    if (!w.is_positive()) throw InvalidInput("weights must be positive");
    total += w;
  }
  if (total != Rational(1)) {
    throw InvalidInput("weights must sum to 1, got " + total.str());
  }
}

std::vector<std::string> numbered(std::string_view base, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(std::string(base) + std::to_string(i));
  return out;
}

// Incrementally assembles a program with unique variable names.
class ProgramBuilder {
 public:
  void original(const std::string& name) {
    claim(name);
    prog_.original_vars.push_back(name);
  }
  void originals(const std::vector<std::string>& names) {
    for (const auto& n : names) original(n);
  }

  /// Declares an auxiliary variable named `base`, or `base_2`, `base_3`, ...
  /// when taken.
  std::string aux(const std::string& base) {
    std::string name = base;
    for (int k = 2; names_.count(name); ++k) name = base + "_" + std::to_string(k);
    claim(name);
    prog_.aux_vars.push_back(name);
    return name;
  }

  std::size_t add(ConeAtom atom) {
    prog_.atoms.push_back(std::move(atom));
    return prog_.atoms.size() - 1;
  }

  void block(SocBlock b) { prog_.blocks.push_back(std::move(b)); }
  std::size_t atom_count() const { return prog_.atoms.size(); }

  ConeProgram take() {
    prog_.check();
    return std::move(prog_);
  }

 private:
  void claim(const std::string& name) {
    if (!names_.insert(name).second) {
      throw InvalidInput("variable " + name + " declared twice");
    }
  }

  ConeProgram prog_;
  std::set<std::string> names_;
};

ConeAtom power_cone(std::vector<Rational> weights, std::string lhs,
                    const std::vector<std::string>& rhs) {
  ConeAtom a = ConeAtom::of(AtomKind::kPowerCone, {std::move(lhs)});
  a.weights = std::move(weights);
  a.vars.insert(a.vars.end(), rhs.begin(), rhs.end());
  return a;
}

ConeAtom porder_cone(const NormOrder& p, std::string w,
                     const std::vector<std::string>& xs) {
  ConeAtom a = ConeAtom::of(AtomKind::kPOrderCone, {std::move(w)});
  a.p = p;
  a.vars.insert(a.vars.end(), xs.begin(), xs.end());
  return a;
}

ConeAtom half_space(const std::vector<std::string>& xs, std::string w) {
  ConeAtom a = ConeAtom::of(AtomKind::kHalfSpaceSum, xs);
  a.vars.push_back(std::move(w));
  return a;
}

ConeAtom affine_eq(std::vector<std::string> vars, std::vector<double> coeffs,
                   double constant) {
  ConeAtom a = ConeAtom::of(AtomKind::kAffineEq, std::move(vars));
  a.coeffs = std::move(coeffs);
  a.constant = constant;
  return a;
}

// (1/p, 1/q) for 1 < p < inf.
std::vector<Rational> conjugate_pair(const NormOrder& p) {
  const Rational inv = Rational(1) / p.value();
  return {inv, Rational(1) - inv};
}

void require_split_order(const NormOrder& p, std::string_view what) {
  if (p.is_infinite() || p.value() == Rational(1)) {
    throw DomainError(std::string(what) + " needs 1 < p < inf; p = " +
                      p.str() + " is covered by linear_norm");
  }
}

// Splits the p-norm over existing variables: x_j <= t_j^(1/p) w^(1/q), sum t <= w.
void emit_porder_split(ProgramBuilder& b, const NormOrder& p,
                       const std::vector<std::string>& xs,
                       const std::string& w, const std::string& t_base) {
  const auto pq = conjugate_pair(p);
  std::vector<std::string> ts;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    ts.push_back(b.aux(t_base + std::to_string(j + 1)));
  }
  for (std::size_t j = 0; j < xs.size(); ++j) {
    b.add(power_cone(pq, xs[j], {ts[j], w}));
  }
  b.add(half_space(ts, w));
}

struct TowerNode {
  std::vector<std::size_t> set;  // 1-based indices
  std::unique_ptr<TowerNode> left, right;
};

std::unique_ptr<TowerNode> tower_tree(std::vector<std::size_t> set,
                                      TowerShape shape, bool root) {
  auto node = std::make_unique<TowerNode>();
  node->set = set;
  if (set.size() > 1) {
    std::size_t cut = set.size() / 2;
    if (shape == TowerShape::kHalvedRoot && !root) cut = set.size() - 1;
    node->left = tower_tree({set.begin(), set.begin() + cut}, shape, false);
    node->right = tower_tree({set.begin() + cut, set.end()}, shape, false);
  }
  return node;
}

std::string set_name(const std::vector<std::size_t>& set) {
  std::string out = "w";
  for (auto i : set) out += "_" + std::to_string(i);
  return out;
}

// Emits the tower below `node`, whose own variable is `var`. Each
// three-dimensional cone is handed to `cone(w, a, b)`.
template <typename Cone>
void emit_tower(ProgramBuilder& b, const TowerNode& node,
                const std::string& var, const std::vector<std::string>& xs,
                Cone&& cone) {
  auto child_var = [&](const TowerNode& c) {
    if (c.set.size() == 1) return xs[c.set[0] - 1];
    return b.aux(set_name(c.set));
  };
  const std::string l = child_var(*node.left);
  const std::string r = child_var(*node.right);
  cone(var, l, r);
  if (node.left->set.size() > 1) emit_tower(b, *node.left, l, xs, cone);
  if (node.right->set.size() > 1) emit_tower(b, *node.right, r, xs, cone);
}

std::vector<std::string> x_names(std::size_t d1) { return numbered("x", d1); }
std::vector<std::string> z_names(std::size_t d2) { return numbered("z", d2); }

// Copies an atom's variables through a renaming.
ConeAtom renamed(ConeAtom a, const std::map<std::string, std::string>& to) {
  for (auto& v : a.vars) {
    auto it = to.find(v);
    if (it != to.end()) v = it->second;
  }
  return a;
}

// Appends `inner` with its original variables bound to `binding` and its
// auxiliary variables given fresh names.
void inline_program(ProgramBuilder& b, const ConeProgram& inner,
                    const std::vector<std::string>& binding,
                    const std::function<void(ConeAtom)>& sink) {
  if (binding.size() != inner.original_vars.size()) {
    throw InvalidInput("binding arity mismatch");
  }
  std::map<std::string, std::string> to;
  for (std::size_t i = 0; i < binding.size(); ++i) {
    to[inner.original_vars[i]] = binding[i];
  }
  for (const auto& a : inner.aux_vars) to[a] = b.aux(a);
  for (const auto& atom : inner.atoms) sink(renamed(atom, to));
}

}  // namespace

// ---- NormOrder ----

NormOrder::NormOrder(Rational p) : value_(p) {
  if (p < Rational(1)) throw InvalidInput("norm order must be at least 1");
}

NormOrder NormOrder::infinity() {
  NormOrder p;
  p.infinite_ = true;
  return p;
}

NormOrder NormOrder::parse(std::string_view text) {
  if (text == "inf" || text == "infinity") return infinity();
  return NormOrder(Rational::parse(text));
}

const Rational& NormOrder::value() const {
  if (infinite_) throw DomainError("p = inf has no finite value");
  return value_;
}

Rational NormOrder::conjugate() const {
  if (infinite_ || value_ == Rational(1)) {
    throw DomainError("conjugate exponent needs 1 < p < inf");
  }
  return value_ / (value_ - Rational(1));
}

std::string NormOrder::str() const { return infinite_ ? "inf" : value_.str(); }

// ---- atoms and programs ----

std::string_view to_string(AtomKind kind) {
  switch (kind) {
    case AtomKind::kGenPowerCone: return "GenPowerCone";
    case AtomKind::kPOrderCone: return "POrderCone";
    case AtomKind::kPowerCone: return "PowerCone";
    case AtomKind::kSoc3: return "Soc3";
    case AtomKind::kHalfSpaceSum: return "HalfSpaceSum";
    case AtomKind::kAffineEq: return "AffineEq";
  }
  return "?";
}

namespace {

AtomKind kind_from_string(std::string_view s) {
  for (auto k : {AtomKind::kGenPowerCone, AtomKind::kPOrderCone,
                 AtomKind::kPowerCone, AtomKind::kSoc3,
                 AtomKind::kHalfSpaceSum, AtomKind::kAffineEq}) {
    if (to_string(k) == s) return k;
  }
  throw ParseError("unknown atom kind " + std::string(s));
}

}  // namespace

std::string ConeAtom::signature() const {
  std::string out(to_string(kind));
  switch (kind) {
    case AtomKind::kGenPowerCone:
      out += "(" + p->str() + ";" + join(weights) + ")";
      break;
    case AtomKind::kPOrderCone:
      out += "(" + p->str() + ")";
      break;
    case AtomKind::kPowerCone:
      out += "(" + join(weights) + ")";
      break;
    default:
      break;
  }
  return out + "/" + std::to_string(vars.size());
}

std::string ConeAtom::str() const {
  switch (kind) {
    case AtomKind::kSoc3:
      return vars[0] + "^2 <= " + vars[1] + " " + vars[2];
    case AtomKind::kHalfSpaceSum:
      return join({vars.begin(), vars.end() - 1}, " + ") + " <= " +
             vars.back();
    case AtomKind::kPowerCone: {
      std::string out = "|" + vars[0] + "| <=";
      for (std::size_t i = 1; i < vars.size(); ++i) {
        out += " " + vars[i] + "^" + weights[i - 1].str();
      }
      return out;
    }
    case AtomKind::kPOrderCone:
      return "||(" + join({vars.begin() + 1, vars.end()}, ", ") + ")||_" +
             p->str() + " <= " + vars[0];
    case AtomKind::kGenPowerCone: {
      std::string out =
          "||(" + join({vars.begin(), vars.begin() + d1}, ", ") + ")||_" +
          p->str() + " <=";
      for (std::size_t i = d1; i < vars.size(); ++i) {
        out += " " + vars[i] + "^" + weights[i - d1].str();
      }
      return out;
    }
    case AtomKind::kAffineEq: {
      std::string out;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%g %s", i ? " + " : "", coeffs[i],
                      vars[i].c_str());
        out += buf;
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, " = %g", constant);
      return out + buf;
    }
  }
  return "";
}

std::size_t ConeProgram::l_e() const {
  return static_cast<std::size_t>(
      std::count_if(atoms.begin(), atoms.end(), [](const ConeAtom& a) {
        return a.kind != AtomKind::kAffineEq;
      }));
}

void ConeProgram::check() const {
  std::set<std::string> declared;
  for (const auto* list : {&original_vars, &aux_vars}) {
    for (const auto& v : *list) {
      if (!declared.insert(v).second) {
        throw InvalidInput("variable " + v + " declared twice");
      }
    }
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = atoms[i];
    for (const auto& v : a.vars) {
      if (!declared.count(v)) {
        throw InvalidInput("atom " + std::to_string(i) +
                           " references undeclared variable " + v);
      }
    }
    bool arity_ok = true;
    switch (a.kind) {
      case AtomKind::kSoc3: arity_ok = a.vars.size() == 3; break;
      case AtomKind::kPowerCone:
        arity_ok = a.vars.size() == a.weights.size() + 1;
        break;
      case AtomKind::kGenPowerCone:
        arity_ok = a.vars.size() == a.d1 + a.weights.size() && a.p;
        break;
      case AtomKind::kPOrderCone: arity_ok = a.vars.size() >= 2 && a.p; break;
      case AtomKind::kHalfSpaceSum: arity_ok = a.vars.size() >= 2; break;
      case AtomKind::kAffineEq:
        arity_ok = a.vars.size() == a.coeffs.size();
        break;
    }
    if (!arity_ok) {
      throw InvalidInput("atom " + std::to_string(i) + " (" +
                         std::string(to_string(a.kind)) + ") has wrong arity");
    }
  }
}

ComplexityReport complexity(const ConeProgram& program) {
  ComplexityReport r;
  r.m_e = program.m_e();
  r.l_e = program.l_e();
  for (const auto& a : program.atoms) {
    ++r.by_kind[std::string(to_string(a.kind))];
    ++r.by_signature[a.signature()];
  }
  return r;
}

// ---- constructions ----

ConeProgram split_lemma4(const NormOrder& p, std::size_t d1,
                         const std::vector<Rational>& weights) {
  if (d1 < 1) throw InvalidInput("d1 must be at least 1");
  check_weights(weights);
  ProgramBuilder b;
  const auto xs = x_names(d1);
  const auto zs = z_names(weights.size());
  b.originals(xs);
  b.originals(zs);
  const std::string w = b.aux("w");
  b.add(porder_cone(p, w, xs));
  b.add(power_cone(weights, w, zs));
  return b.take();
}

ConeProgram tower_lemma5(const NormOrder& p, std::size_t d, TowerShape shape) {
  if (d < 2) throw InvalidInput("tower needs d >= 2");
  ProgramBuilder b;
  const auto xs = x_names(d);
  b.original("w");
  b.originals(xs);
  std::vector<std::size_t> all(d);
  std::iota(all.begin(), all.end(), 1);
  const auto tree = tower_tree(all, shape, true);
  emit_tower(b, *tree, "w", xs,
             [&](const std::string& v, const std::string& l,
                 const std::string& r) { b.add(porder_cone(p, v, {l, r})); });
  return b.take();
}

ConeProgram porder_split_lemma6(const NormOrder& p, std::size_t d) {
  if (d < 1) throw InvalidInput("d must be at least 1");
  require_split_order(p, "the p-order split");
  ProgramBuilder b;
  const auto xs = x_names(d);
  b.original("w");
  b.originals(xs);
  emit_porder_split(b, p, xs, "w", "t");
  return b.take();
}

ConeProgram linear_norm(const NormOrder& p, std::size_t d) {
  if (d < 1) throw InvalidInput("d must be at least 1");
  const bool one = !p.is_infinite() && p.value() == Rational(1);
  if (!one && !p.is_infinite()) {
    throw DomainError("linear_norm covers p = 1 and p = inf only");
  }
  ProgramBuilder b;
  const auto xs = x_names(d);
  b.original("w");
  b.originals(xs);
  std::vector<std::string> bounds;
  for (std::size_t j = 0; j < d; ++j) {
    const std::string n = b.aux("n" + std::to_string(j + 1));
    b.add(affine_eq({xs[j], n}, {1.0, 1.0}, 0.0));
    const std::string a = one ? b.aux("a" + std::to_string(j + 1)) : "w";
    b.add(half_space({xs[j]}, a));
    b.add(half_space({n}, a));
    bounds.push_back(a);
  }
  if (one) b.add(half_space(bounds, "w"));
  return b.take();
}

ConeProgram corollary8(const NormOrder& p, std::size_t d1,
                       const std::vector<Rational>& weights) {
  if (d1 < 1) throw InvalidInput("d1 must be at least 1");
  check_weights(weights);
  require_split_order(p, "corollary8");
  ProgramBuilder b;
  const auto xs = x_names(d1);
  const auto zs = z_names(weights.size());
  b.originals(xs);
  b.originals(zs);
  if (d1 == 1) {
    // |x| <= w <= z^alpha collapses to one power cone.
    b.add(power_cone(weights, xs[0], zs));
    return b.take();
  }
  const std::string w = b.aux("w");
  std::vector<std::size_t> all(d1);
  std::iota(all.begin(), all.end(), 1);
  const auto tree = tower_tree(all, TowerShape::kBalanced, true);
  emit_tower(b, *tree, w, xs,
             [&](const std::string& v, const std::string& l,
                 const std::string& r) {
               emit_porder_split(b, p, {l, r}, v, "t" + v.substr(1) + "_");
             });
  b.add(power_cone(weights, w, zs));
  return b.take();
}

ConeProgram theorem9(const NormOrder& p, std::size_t d1,
                     const std::vector<Rational>& weights) {
  if (d1 < 1) throw InvalidInput("d1 must be at least 1");
  check_weights(weights);
  require_split_order(p, "theorem9");
  ProgramBuilder b;
  const auto xs = x_names(d1);
  const auto zs = z_names(weights.size());
  b.originals(xs);
  b.originals(zs);
  const std::string w = b.aux("w");
  std::vector<std::string> ts;
  for (std::size_t j = 0; j < d1; ++j) ts.push_back(b.aux("t" + std::to_string(j + 1)));
  b.add(power_cone(weights, w, zs));
  b.add(half_space(ts, w));
  const Rational inv_p = Rational(1) / p.value();
  const Rational inv_q = Rational(1) - inv_p;
  std::vector<Rational> mixed{inv_p};
  for (const auto& a : weights) mixed.push_back(a * inv_q);
  for (std::size_t j = 0; j < d1; ++j) {
    std::vector<std::string> rhs{ts[j]};
    rhs.insert(rhs.end(), zs.begin(), zs.end());
    b.add(power_cone(mixed, xs[j], rhs));
  }
  return b.take();
}

ConeProgram theorem10(const NormOrder& p, std::size_t d1,
                      const std::vector<Rational>& weights) {
  if (d1 < 1) throw InvalidInput("d1 must be at least 1");
  check_weights(weights);
  require_split_order(p, "theorem10");
  ProgramBuilder b;
  const auto xs = x_names(d1);
  const auto zs = z_names(weights.size());
  b.originals(xs);
  b.originals(zs);
  const std::string w = b.aux("w");
  emit_porder_split(b, p, xs, w, "t");
  b.add(power_cone(weights, w, zs));
  return b.take();
}

AffineMap AffineMap::identity(std::size_t n) {
  AffineMap m;
  m.matrix.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) m.matrix[i][i] = 1.0;
  m.offset.assign(n, 0.0);
  return m;
}

ConeProgram generalized_remark12(const AffineCoverSpec& spec) {
  auto check_map = [](const AffineMap& m, std::size_t inputs,
                      std::string_view name) {
    if (m.offset.size() != m.rows()) {
      throw InvalidInput(std::string(name) + ": offset length differs from rows");
    }
    for (const auto& row : m.matrix) {
      if (row.size() != inputs) {
        throw InvalidInput(std::string(name) + ": expected " +
                           std::to_string(inputs) + " columns");
      }
    }
  };
  check_map(spec.f, spec.d1, "f");
  check_map(spec.g, spec.d3, "g");
  check_map(spec.h, spec.d2, "h");
  if (spec.g.rows() != 1) throw InvalidInput("g must be scalar valued");
  if (spec.f.rows() < 1) throw InvalidInput("f must have at least one row");
  if (spec.h.rows() != spec.weights.size()) {
    throw InvalidInput("h has " + std::to_string(spec.h.rows()) +
                       " rows but there are " +
                       std::to_string(spec.weights.size()) + " weights");
  }
  check_weights(spec.weights);
  require_split_order(spec.p, "generalized_remark12");

  ProgramBuilder b;
  const auto xs = x_names(spec.d1);
  const auto zs = z_names(spec.d2);
  const auto ts = numbered("s", spec.d3);
  b.originals(xs);
  b.originals(zs);
  b.originals(ts);
  // u = f(x), v = h(z), W = r + g(t).
  auto image = [&](const AffineMap& m, const std::vector<std::string>& in,
                   const std::string& base) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const std::string name = b.aux(base + std::to_string(i + 1));
      std::vector<std::string> vars{name};
      std::vector<double> coeffs{1.0};
      for (std::size_t k = 0; k < in.size(); ++k) {
        if (m.matrix[i][k] == 0.0) continue;
        vars.push_back(in[k]);
        coeffs.push_back(-m.matrix[i][k]);
      }
      b.add(affine_eq(std::move(vars), std::move(coeffs), m.offset[i]));
      out.push_back(name);
    }
    return out;
  };
  const auto us = image(spec.f, xs, "u");
  const auto vs = image(spec.h, zs, "v");
  const std::string big_w = b.aux("W");
  const std::string r = b.aux("r");
  {
    std::vector<std::string> vars{big_w, r};
    std::vector<double> coeffs{1.0, -1.0};
    for (std::size_t k = 0; k < ts.size(); ++k) {
      if (spec.g.matrix[0][k] == 0.0) continue;
      vars.push_back(ts[k]);
      coeffs.push_back(-spec.g.matrix[0][k]);
    }
    b.add(affine_eq(std::move(vars), std::move(coeffs), spec.g.offset[0]));
  }
  emit_porder_split(b, spec.p, us, big_w, "t");
  b.add(power_cone(spec.weights, r, vs));
  return b.take();
}

// ---- graph suppliers ----

GraphSupplier::GraphSupplier(std::string name, Solver solver)
    : name_(std::move(name)), solver_(std::move(solver)) {}

std::shared_ptr<GraphSupplier> GraphSupplier::optimal(SearchBudget budget) {
  return std::make_shared<GraphSupplier>(
      "optimal", [budget](const AlphaWeight& a) {
        return solve_exact(a, budget).graph;
      });
}

std::shared_ptr<GraphSupplier> GraphSupplier::upper_bound() {
  return std::make_shared<GraphSupplier>(
      "ub", [](const AlphaWeight& a) { return binary_decomposition_graph(a); });
}

MediatedGraph GraphSupplier::get(const AlphaWeight& alpha) {
  const std::vector<std::int64_t> key(alpha.s().begin(), alpha.s().end());
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  MediatedGraph g = solver_(alpha);
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(key, std::move(g)).first->second;
}

std::size_t GraphSupplier::cached() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

// ---- SOC lowering ----

namespace {

class Lowering {
 public:
  Lowering(const ConeProgram& in, GraphSupplier& supplier)
      : in_(in), supplier_(supplier) {
    for (const auto& v : in.original_vars) b_.original(v);
    for (const auto& v : in.aux_vars) {
      if (b_.aux(v) != v) throw InvalidInput("duplicate variable " + v);
    }
  }

  ConeProgram run() {
    for (std::size_t i = 0; i < in_.atoms.size(); ++i) lower(in_.atoms[i], i);
    return b_.take();
  }

 private:
  [[noreturn]] void reject(const ConeAtom& a, std::size_t origin,
                           const std::string& why) {
    throw DomainError("atom " + std::to_string(origin) + " (" + a.str() +
                      ") cannot be rationalized: " + why);
  }

  void lower(const ConeAtom& a, std::size_t origin) {
    switch (a.kind) {
      case AtomKind::kGenPowerCone: {
        if (a.p->is_infinite() || a.p->value() <= Rational(1)) {
          reject(a, origin, "needs 1 < p < inf");
        }
        const auto inner = theorem10(*a.p, a.d1, a.weights);
        inline_program(b_, inner, a.vars,
                       [&](ConeAtom x) { lower(x, origin); });
        return;
      }
      case AtomKind::kPOrderCone: {
        if (a.p->is_infinite() || a.p->value() <= Rational(1)) {
          reject(a, origin, "needs 1 < p < inf");
        }
        const auto inner = porder_split_lemma6(*a.p, a.vars.size() - 1);
        inline_program(b_, inner, a.vars,
                       [&](ConeAtom x) { lower(x, origin); });
        return;
      }
      case AtomKind::kPowerCone:
        power(a);
        return;
      default:
        b_.add(a);
        return;
    }
  }

  void power(const ConeAtom& a) {
    SocBlock block;
    block.weights = a.weights;
    block.lhs = a.vars[0];
    block.rhs.assign(a.vars.begin() + 1, a.vars.end());
    if (a.weights.size() == 1) {
      // |x| <= z is x^2 <= z z.
      block.exponents[a.vars[0]] = ExponentVector{{Rational(1)}};
      block.exponents[a.vars[1]] = ExponentVector{{Rational(1)}};
      block.atoms.push_back(
          b_.add(ConeAtom::of(AtomKind::kSoc3, {a.vars[0], a.vars[1], a.vars[1]})));
      b_.block(std::move(block));
      return;
    }
    const AlphaWeight alpha = alpha_from_rationals(a.weights);
    const SocRepresentation rep = to_soc(supplier_.get(alpha));
    std::map<std::string, std::string> to;
    to["x"] = a.vars[0];
    // A goal that feeds another constraint must be nonnegative, so it gets a
    // copy g >= |x| and x stays free.
    const bool goal_reused =
        std::any_of(rep.constraints.begin(), rep.constraints.end(),
                    [](const SocConstraint& c) {
                      return c.factors[0] == "x" || c.factors[1] == "x";
                    });
    if (goal_reused) {
      to["x"] = b_.aux("g");
      block.exponents[a.vars[0]] = rep.exponents.at("x");
      block.atoms.push_back(b_.add(
          ConeAtom::of(AtomKind::kSoc3, {a.vars[0], to["x"], to["x"]})));
    }
    for (std::size_t j = 0; j < a.weights.size(); ++j) {
      to["z" + std::to_string(j + 1)] = a.vars[j + 1];
    }
    for (const auto& v : rep.variables) {
      if (!to.count(v)) to[v] = b_.aux(v);
    }
    for (const auto& [name, mu] : rep.exponents) {
      block.exponents[to.at(name)] = mu;
    }
    for (const auto& c : rep.constraints) {
      block.atoms.push_back(b_.add(ConeAtom::of(
          AtomKind::kSoc3,
          {to.at(c.lhs), to.at(c.factors[0]), to.at(c.factors[1])})));
    }
    b_.block(std::move(block));
  }

  const ConeProgram& in_;
  GraphSupplier& supplier_;
  ProgramBuilder b_;
};

}  // namespace

ConeProgram rationalize_to_soc(const ConeProgram& program,
                               GraphSupplier& supplier) {
  program.check();
  return Lowering(program, supplier).run();
}

// ---- verification ----

VerifyReport verify_representation(const ConeProgram& program,
                                   const VerifyOptions& options) {
  VerifyReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.failures.push_back(std::move(msg));
  };
  const bool structural = options.mode != VerifyMode::kSampling;
  const bool sampling = options.mode != VerifyMode::kStructural;
  rep.blocks = program.blocks.size();

  std::vector<int> owner(program.atoms.size(), -1);
  for (std::size_t bi = 0; bi < program.blocks.size(); ++bi) {
    for (std::size_t ai : program.blocks[bi].atoms) {
      if (ai >= program.atoms.size()) {
        fail("block " + std::to_string(bi) + " refers to missing atom " +
             std::to_string(ai));
        return rep;
      }
      owner[ai] = static_cast<int>(bi);
    }
  }

  if (structural) {
    for (std::size_t i = 0; i < program.atoms.size(); ++i) {
      const auto& a = program.atoms[i];
      if (a.kind == AtomKind::kSoc3 && owner[i] < 0) {
        fail("atom " + std::to_string(i) + " (" + a.str() +
             ") carries no exponent tags");
      }
    }
    for (std::size_t bi = 0; bi < program.blocks.size(); ++bi) {
      const auto& blk = program.blocks[bi];
      const std::string where = "block " + std::to_string(bi);
      auto mu = [&](const std::string& v) -> const ExponentVector* {
        auto it = blk.exponents.find(v);
        return it == blk.exponents.end() ? nullptr : &it->second;
      };
      if (const auto* x = mu(blk.lhs); !x || x->mu != blk.weights) {
        fail(where + ": " + blk.lhs + " has exponent " +
             (x ? x->str() : std::string("(none)")) + ", expected (" +
             join(blk.weights) + ")");
      }
      for (std::size_t j = 0; j < blk.rhs.size(); ++j) {
        std::vector<Rational> unit(blk.rhs.size());
        unit[j] = Rational(1);
        const auto* z = mu(blk.rhs[j]);
        if (!z || z->mu != unit) {
          fail(where + ": " + blk.rhs[j] + " is not a unit exponent");
        }
      }
      for (std::size_t ai : blk.atoms) {
        const auto& a = program.atoms[ai];
        if (a.kind != AtomKind::kSoc3) {
          fail(where + ": atom " + std::to_string(ai) + " is not Soc3");
          continue;
        }
        if ((a.vars[1] == blk.lhs || a.vars[2] == blk.lhs) &&
            !(a.vars[1] == a.vars[2] && blk.rhs.size() == 1)) {
          fail("atom " + std::to_string(ai) + " (" + a.str() + "): " + blk.lhs +
               " is used as a factor, which cuts off negative values");
        }
        const auto* l = mu(a.vars[0]);
        const auto* u = mu(a.vars[1]);
        const auto* v = mu(a.vars[2]);
        if (!l || !u || !v) {
          fail("atom " + std::to_string(ai) + " (" + a.str() +
               ") has an untagged variable");
          continue;
        }
        const auto half = ExponentVector::midpoint(*u, *v);
        if (!(half == *l)) {
          fail("atom " + std::to_string(ai) + " (" + a.str() + "): " +
               a.vars[0] + " has exponent " + l->str() + " but the half-sum is " +
               half.str());
        }
      }
    }
  }

  if (sampling) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> log_z(std::log(1e-2), std::log(1e2));
    for (std::size_t bi = 0; bi < program.blocks.size(); ++bi) {
      const auto& blk = program.blocks[bi];
      bool exact_ok = true;
      bool probe_ok = true;
      for (std::size_t n = 0; n < options.trials; ++n) {
        std::vector<double> z(blk.rhs.size());
        for (auto& v : z) v = std::exp(log_z(rng));
        std::map<std::string, double> value;
        for (const auto& [name, e] : blk.exponents) {
          double logv = 0;
          for (std::size_t j = 0; j < z.size(); ++j) {
            logv += e[j].to_double() * std::log(z[j]);
          }
          value[name] = std::exp(logv);
        }
        auto holds = [&](const ConeAtom& a, double scale_lhs) {
          const double w = value.at(a.vars[0]) *
                           (a.vars[0] == blk.lhs ? scale_lhs : 1.0);
          const double uv = value.at(a.vars[1]) * value.at(a.vars[2]);
          return w * w <= uv * (1 + options.tolerance);
        };
        auto tight = [&](const ConeAtom& a) {
          const double w = value.at(a.vars[0]);
          const double uv = value.at(a.vars[1]) * value.at(a.vars[2]);
          return std::fabs(w * w - uv) <=
                 options.tolerance * std::max(w * w, uv);
        };
        bool violated = false;
        for (std::size_t ai : blk.atoms) {
          const auto& a = program.atoms[ai];
          if (a.kind != AtomKind::kSoc3) continue;
          bool tagged = true;
          for (const auto& v : a.vars) tagged = tagged && value.count(v);
          if (!tagged) continue;
          if (!tight(a)) exact_ok = false;
          if (!holds(a, 1.0 + 1e-6)) violated = true;
        }
        if (!violated) probe_ok = false;
        ++rep.samples;
      }
      if (!exact_ok) {
        fail("block " + std::to_string(bi) +
             ": sampled witnesses do not satisfy every atom with equality");
      }
      if (!probe_ok) {
        fail("block " + std::to_string(bi) + ": scaling " + blk.lhs +
             " by 1+1e-6 did not violate any atom");
      }
    }
  }
  return rep;
}

// ---- JSON ----

namespace {

json rationals_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(r.str());
  return out;
}

std::vector<Rational> rationals_from(const json& j) {
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(Rational::parse(e.get<std::string>()));
  return out;
}

}  // namespace

std::string to_json(const ConeProgram& program, int indent) {
  json j;
  j["vars"] = program.original_vars;
  j["aux"] = program.aux_vars;
  j["atoms"] = json::array();
  for (const auto& a : program.atoms) {
    json params = json::object();
    if (a.p) params["p"] = a.p->str();
    if (!a.weights.empty()) params["weights"] = rationals_json(a.weights);
    if (a.kind == AtomKind::kGenPowerCone) params["d1"] = a.d1;
    if (a.kind == AtomKind::kAffineEq) {
      params["coeffs"] = a.coeffs;
      params["constant"] = a.constant;
    }
    j["atoms"].push_back(
        {{"kind", to_string(a.kind)}, {"vars", a.vars}, {"params", params}});
  }
  j["blocks"] = json::array();
  for (const auto& b : program.blocks) {
    json ex = json::object();
    for (const auto& [name, mu] : b.exponents) ex[name] = rationals_json(mu.mu);
    j["blocks"].push_back({{"weights", rationals_json(b.weights)},
                           {"lhs", b.lhs},
                           {"rhs", b.rhs},
                           {"exponents", ex},
                           {"atoms", b.atoms}});
  }
  return j.dump(indent);
}

ConeProgram program_from_json(const std::string& text) {
  ConeProgram p;
  try {
    const json j = json::parse(text);
    p.original_vars = j.at("vars").get<std::vector<std::string>>();
    p.aux_vars = j.at("aux").get<std::vector<std::string>>();
    for (const auto& a : j.at("atoms")) {
      ConeAtom atom = ConeAtom::of(kind_from_string(a.at("kind").get<std::string>()),
                                   a.at("vars").get<std::vector<std::string>>());
      const json params = a.value("params", json::object());
      if (params.contains("p")) {
        atom.p = NormOrder::parse(params["p"].get<std::string>());
      }
      if (params.contains("weights")) atom.weights = rationals_from(params["weights"]);
      if (params.contains("d1")) atom.d1 = params["d1"].get<std::size_t>();
      if (params.contains("coeffs")) {
        atom.coeffs = params["coeffs"].get<std::vector<double>>();
      }
      if (params.contains("constant")) atom.constant = params["constant"].get<double>();
      p.atoms.push_back(std::move(atom));
    }
    if (j.contains("blocks")) {
      for (const auto& b : j["blocks"]) {
        SocBlock blk;
        blk.weights = rationals_from(b.at("weights"));
        blk.lhs = b.at("lhs").get<std::string>();
        blk.rhs = b.at("rhs").get<std::vector<std::string>>();
        for (const auto& [name, mu] : b.at("exponents").items()) {
          blk.exponents[name] = ExponentVector{rationals_from(mu)};
        }
        blk.atoms = b.at("atoms").get<std::vector<std::size_t>>();
        p.blocks.push_back(std::move(blk));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("cone program JSON: ") + e.what());
  }
  p.check();
  return p;
}

}  // namespace socrep
