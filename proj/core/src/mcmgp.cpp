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

#include "socrep/mcmgp.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "socrep/error.hpp"

namespace socrep {

namespace {

constexpr std::size_t kMaxCoords = 8;
constexpr std::size_t kMemoCap = 4'000'000;

struct Pt {
  std::int64_t code = 0;
  std::array<std::int32_t, kMaxCoords> c{};
};

struct KeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    }
    return h;
  }
};

// Limits shared by every worker of one solve.
struct SharedLimits {
  std::optional<std::uint64_t> node_limit;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> exhausted{false};
  std::atomic<bool> found{false};

  bool spend() {
    const std::uint64_t n = nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if (node_limit && n > *node_limit) exhausted = true;
    if (deadline && (n & 1023) == 0 &&
        std::chrono::steady_clock::now() >= *deadline) {
      exhausted = true;
    }
    return !exhausted.load(std::memory_order_relaxed);
  }
};

// Depth-first witness completion. A state is the set X of mediated nodes;
// a node is uncovered when no pair of distinct nodes of A u X averages to
// it. Branching picks one uncovered node and adds the missing members of
// one of its candidate witness pairs, so every graph containing the
// current X is reachable.
class WitnessSearch {
 public:
  WitnessSearch(const SimplexLattice& lat, std::int64_t k,
                SharedLimits& limits)
      : lat_(lat), k_(k), limits_(limits) {
    n_ = lat.point_dim();
    side_ = lat.side();
    if (n_ > kMaxCoords) {
      throw InvalidInput("exact search supports at most " +
                         std::to_string(kMaxCoords + 1) + " weights");
    }
    // Codes are linear in the coordinates with base 3*side+1, which keeps
    // 2u - a injective over coordinates in [-side, 2*side].
    const std::int64_t base = 3 * side_ + 1;
    std::int64_t p = 1;
    for (std::size_t r = 0; r < n_; ++r) {
      pow_[r] = p;
      if (r + 1 < n_ && __builtin_mul_overflow(p, base, &p)) {
        throw InvalidInput("lattice too large for exact search");
      }
    }
    for (const auto& a : lat.anchors()) nodes_.push_back(make(a.coords));
    anchors_ = nodes_.size();
  }

  // Root state X = {b}.
  void reset_to_goal() {
    nodes_.resize(anchors_);
    nodes_.push_back(make(lat_.goal().coords));
  }

  bool run() { return dfs(); }
  bool aborted() const { return aborted_; }

  // Children of the current state, in branching order. Used to split the
  // root among threads.
  std::vector<std::vector<Pt>> root_children() {
    std::vector<std::vector<Pt>> out;
    auto uncovered = collect_uncovered();
    if (uncovered.empty()) return out;
    const std::size_t u = pick(uncovered);
    for_each_branch(u, [&](const Pt* a, const Pt* b) {
      std::vector<Pt> added{*a};
      if (b) added.push_back(*b);
      out.push_back(std::move(added));
      return false;
    });
    return out;
  }

  void push(const std::vector<Pt>& pts) {
    for (const auto& p : pts) nodes_.push_back(p);
  }

  MediatedGraph extract() const {
    MediatedGraph g(lat_);
    for (std::size_t i = anchors_; i < nodes_.size(); ++i) {
      const Pt& u = nodes_[i];
      const auto pair = find_pair(u);
      g.mediated.push_back(to_point(u));
      g.witnesses.push_back(Witness{to_point(u), to_point(nodes_[pair->first]),
                                    to_point(nodes_[pair->second])});
    }
    return g;
  }

 private:
  Pt make(const std::vector<std::int64_t>& coords) const {
    Pt p;
    for (std::size_t r = 0; r < n_; ++r) {
      p.c[r] = static_cast<std::int32_t>(coords[r]);
      p.code += coords[r] * pow_[r];
    }
    return p;
  }

  LatticePoint to_point(const Pt& p) const {
    LatticePoint out;
    for (std::size_t r = 0; r < n_; ++r) out.coords.push_back(p.c[r]);
    return out;
  }

  std::optional<std::size_t> find(std::int64_t code) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].code == code) return i;
    }
    return std::nullopt;
  }

  std::optional<std::pair<std::size_t, std::size_t>> find_pair(
      const Pt& u) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const std::int64_t partner = 2 * u.code - nodes_[i].code;
      if (partner == nodes_[i].code) continue;
      if (auto j = find(partner)) return std::make_pair(i, *j);
    }
    return std::nullopt;
  }

  bool covered(const Pt& u) const { return find_pair(u).has_value(); }

  std::vector<std::size_t> collect_uncovered() const {
    std::vector<std::size_t> out;
    for (std::size_t i = anchors_; i < nodes_.size(); ++i) {
      if (!covered(nodes_[i])) out.push_back(i);
    }
    return out;
  }

  bool inside(const Pt& p) const {
    std::int64_t total = 0;
    for (std::size_t r = 0; r < n_; ++r) {
      if (p.c[r] < 0 || p.c[r] > side_) return false;
      total += p.c[r];
    }
    return total <= side_;
  }

  Pt reflect(const Pt& u, const Pt& a) const {
    Pt v;
    v.code = 2 * u.code - a.code;
    for (std::size_t r = 0; r < n_; ++r) v.c[r] = 2 * u.c[r] - a.c[r];
    return v;
  }

  std::size_t one_new_options(const Pt& u) const {
    std::size_t count = 0;
    for (const auto& a : nodes_) {
      const Pt v = reflect(u, a);
      if (inside(v) && !find(v.code)) ++count;
    }
    return count;
  }

  // Most constrained uncovered node: fewest completions, counting the
  // both-new box only while it is still enumerated in full.
  std::size_t pick(const std::vector<std::size_t>& uncovered) const {
    const std::int64_t remaining =
        k_ - static_cast<std::int64_t>(nodes_.size() - anchors_);
    std::size_t best = uncovered.front();
    std::uint64_t best_count = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t i : uncovered) {
      const Pt& u = nodes_[i];
      std::uint64_t c = one_new_options(u);
      if (remaining > 3) {
        std::uint64_t box = 1;
        for (std::size_t r = 0; r < n_; ++r) {
          box *= static_cast<std::uint64_t>(
              std::min<std::int64_t>(side_, 2 * u.c[r]) -
              std::max<std::int64_t>(0, 2 * u.c[r] - side_) + 1);
        }
        c += box / 2;
      }
      if (c < best_count) {
        best = i;
        best_count = c;
      }
    }
    return best;
  }


  // Point (sum_i w_i p_i) / q when integral and inside the simplex.
  std::optional<Pt> combine(std::initializer_list<std::pair<int, const Pt*>> terms,
                            int q) const {
    Pt out;
    for (std::size_t r = 0; r < n_; ++r) {
      std::int64_t v = 0;
      for (const auto& [w, p] : terms) v += std::int64_t{w} * p->c[r];
      if (v % q != 0) return std::nullopt;
      out.c[r] = static_cast<std::int32_t>(v / q);
      out.code += out.c[r] * pow_[r];
    }
    if (!inside(out)) return std::nullopt;
    return out;
  }

  // Both-new pairs {y, z} around u that can still be covered when at most
  // `spare` further nodes follow. With no spare node, y is a midpoint of
  // S or of (a, z); with one spare node w there are also the cases where
  // w covers both. Returned as the smaller-code member of each pair.
  std::vector<Pt> closing_pairs(const Pt& u, std::int64_t spare) const {
    std::vector<Pt> raw;
    const std::size_t n = nodes_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Pt& a = nodes_[i];
      for (std::size_t j = i + 1; j < n; ++j) {
        if (auto t = combine({{1, &a}, {1, &nodes_[j]}}, 2)) raw.push_back(*t);
      }
      if (auto t = combine({{1, &a}, {2, &u}}, 3)) raw.push_back(*t);
      if (spare >= 1) {
        if (auto t = combine({{1, &a}, {4, &u}}, 5)) raw.push_back(*t);
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          if (auto t = combine({{4, &u}, {1, &a}, {-1, &nodes_[j]}}, 4)) {
            raw.push_back(*t);
          }
        }
      }
    }
    std::vector<Pt> out;
    for (const Pt& t : raw) {
      const Pt other = reflect(u, t);
      if (!inside(other) || t.code == other.code) continue;
      if (find(t.code) || find(other.code)) continue;
      out.push_back(t.code < other.code ? t : other);
    }
    std::sort(out.begin(), out.end(),
              [](const Pt& a, const Pt& b) { return a.code < b.code; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Pt& a, const Pt& b) {
                            return a.code == b.code;
                          }),
              out.end());
    return out;
  }

  // Calls fn(first_new, second_new_or_null) for every completion of the
  // witness pair of node u; stops early when fn returns true.
  template <typename Fn>
  bool for_each_branch(std::size_t u_index, Fn&& fn) {
    const Pt u = nodes_[u_index];
    const std::int64_t remaining =
        k_ - static_cast<std::int64_t>(nodes_.size() - anchors_);
    if (remaining < 1) return false;
    // One existing witness (anchors first), one new node.
    const std::size_t existing = nodes_.size();
    for (std::size_t i = 0; i < existing; ++i) {
      const Pt v = reflect(u, nodes_[i]);
      if (!inside(v) || find(v.code)) continue;
      if (fn(&v, nullptr)) return true;
    }
    if (remaining < 2) return false;
    if (remaining <= 3) {
      for (const Pt& y : closing_pairs(u, remaining - 2)) {
        const Pt z = reflect(u, y);
        if (fn(&y, &z)) return true;
      }
      return false;
    }
    // Both witnesses new: y + z = 2u with y < z in code order.
    Pt y;
    std::array<std::int32_t, kMaxCoords> lo{}, hi{};
    std::int64_t sum_u = 0;
    for (std::size_t r = 0; r < n_; ++r) {
      lo[r] = static_cast<std::int32_t>(std::max<std::int64_t>(0, 2 * u.c[r] - side_));
      hi[r] = static_cast<std::int32_t>(std::min<std::int64_t>(side_, 2 * u.c[r]));
      sum_u += u.c[r];
    }
    const std::int64_t min_sum = 2 * sum_u - side_;
    std::array<std::int32_t, kMaxCoords> cur = lo;
    while (true) {
      std::int64_t total = 0;
      y.code = 0;
      for (std::size_t r = 0; r < n_; ++r) {
        y.c[r] = cur[r];
        total += cur[r];
        y.code += cur[r] * pow_[r];
      }
      if (total <= side_ && total >= min_sum) {
        const Pt z = reflect(u, y);
        if (y.code < z.code && !find(y.code) && !find(z.code)) {
          if (fn(&y, &z)) return true;
        }
      }
      std::size_t r = 0;
      while (r < n_ && cur[r] == hi[r]) {
        cur[r] = lo[r];
        ++r;
      }
      if (r == n_) break;
      ++cur[r];
    }
    return false;
  }

  std::vector<std::int64_t> key() const {
    std::vector<std::int64_t> out;
    out.reserve(nodes_.size() - anchors_);
    for (std::size_t i = anchors_; i < nodes_.size(); ++i) {
      out.push_back(nodes_[i].code);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool dfs() {
    if (limits_.found.load(std::memory_order_relaxed)) {
      aborted_ = true;
      return false;
    }
    if (!limits_.spend()) {
      aborted_ = true;
      return false;
    }
    auto state = key();
    if (memo_.count(state)) return false;
    const auto uncovered = collect_uncovered();
    if (uncovered.empty()) return true;
    const std::int64_t remaining =
        k_ - static_cast<std::int64_t>(nodes_.size() - anchors_);
    bool ok = false;
    if (remaining > 0) {
      const std::size_t u = pick(uncovered);
      ok = for_each_branch(u, [&](const Pt* a, const Pt* b) {
        nodes_.push_back(*a);
        if (b) nodes_.push_back(*b);
        if (dfs()) return true;
        nodes_.pop_back();
        if (b) nodes_.pop_back();
        return aborted_;
      });
      if (aborted_) return false;
    }
    if (!ok && !aborted_ && memo_.size() < kMemoCap) {
      memo_.insert(std::move(state));
    }
    return ok;
  }

  const SimplexLattice& lat_;
  std::int64_t k_;
  SharedLimits& limits_;
  std::size_t n_ = 0;
  std::int64_t side_ = 0;
  std::array<std::int64_t, kMaxCoords> pow_{};
  std::vector<Pt> nodes_;
  std::size_t anchors_ = 0;
  std::unordered_set<std::vector<std::int64_t>, KeyHash> memo_;
  bool aborted_ = false;
};

FeasibilityResult search(const SimplexLattice& lat, std::int64_t k,
                         SharedLimits& limits, unsigned threads) {
  FeasibilityResult result;
  const std::uint64_t before = limits.nodes.load();
  limits.found = false;
  WitnessSearch root(lat, k, limits);
  root.reset_to_goal();

  if (threads <= 1) {
    if (root.run()) {
      result.status = SearchStatus::kFound;
      result.graph = root.extract();
    } else {
      result.status =
          root.aborted() ? SearchStatus::kUnknown : SearchStatus::kInfeasible;
    }
    result.nodes = limits.nodes.load() - before;
    return result;
  }

  // Parallel: root branches are handed out in order; the first worker to
  // complete a graph wins.
  const auto children = root.root_children();
  if (children.empty() && root.run()) {
    result.status = SearchStatus::kFound;
    result.graph = root.extract();
    result.nodes = limits.nodes.load() - before;
    return result;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> any_aborted{false};
  std::mutex mu;
  std::optional<MediatedGraph> winner;
  auto worker = [&] {
    WitnessSearch local(lat, k, limits);
    while (!limits.found.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= children.size()) break;
      local.reset_to_goal();
      local.push(children[i]);
      if (local.run()) {
        std::lock_guard<std::mutex> lock(mu);
        if (!winner) winner = local.extract();
        limits.found = true;
        break;
      }
      if (local.aborted() && !limits.found.load()) any_aborted = true;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  if (winner) {
    result.status = SearchStatus::kFound;
    result.graph = std::move(winner);
  } else if (any_aborted || limits.exhausted) {
    result.status = SearchStatus::kUnknown;
  } else {
    result.status = SearchStatus::kInfeasible;
  }
  result.nodes = limits.nodes.load() - before;
  return result;
}

void init_limits(SharedLimits& limits, const SearchBudget& budget) {
  limits.node_limit = budget.node_limit;
  if (budget.time_limit) {
    limits.deadline = std::chrono::steady_clock::now() + *budget.time_limit;
  }
}

}  // namespace

void SearchBudget::check() const {
  if (max_cardinality && *max_cardinality < 1) {
    throw InvalidInput("max_cardinality must be positive");
  }
  if (node_limit && *node_limit == 0) {
    throw InvalidInput("node_limit must be positive");
  }
  if (time_limit && time_limit->count() <= 0) {
    throw InvalidInput("time_limit must be positive");
  }
  if (threads == 0) throw InvalidInput("threads must be positive");
}

std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::kFound: return "found";
    case SearchStatus::kInfeasible: return "infeasible";
    case SearchStatus::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(ProofStatus s) {
  switch (s) {
    case ProofStatus::kOptimal: return "optimal";
    case ProofStatus::kFeasible: return "feasible";
    case ProofStatus::kHeuristic: return "heuristic";
  }
  return "heuristic";
}

FeasibilityResult feasible_at(const AlphaWeight& alpha, std::int64_t k,
                              const SearchBudget& budget) {
  if (k < 1) throw InvalidInput("cardinality bound k must be at least 1");
  if (alpha.dim() < 2) {
    throw InvalidInput("mediated graphs need at least two weights");
  }
  budget.check();
  SharedLimits limits;
  init_limits(limits, budget);
  return search(SimplexLattice(alpha), k, limits, budget.threads);
}

SolveResult solve_exact(const AlphaWeight& alpha, const SearchBudget& budget) {
  if (alpha.dim() < 2) {
    throw InvalidInput("mediated graphs need at least two weights");
  }
  budget.check();
  const std::int64_t lb = lower_bound(alpha);
  const std::int64_t ub = upper_bound(alpha);
  std::int64_t last = ub - 1;
  if (budget.max_cardinality) last = std::min(last, *budget.max_cardinality);

  SharedLimits limits;
  init_limits(limits, budget);
  const SimplexLattice lattice(alpha);
  bool all_smaller_infeasible = true;
  std::int64_t proven = 0;
  bool exhausted = false;
  for (std::int64_t k = lb; k <= last; ++k) {
    FeasibilityResult r;
    try {
      r = search(lattice, k, limits, budget.threads);
    } catch (const InvalidInput&) {
      // Lattice too large to encode; fall back below.
      exhausted = true;
      break;
    }
    if (r.status == SearchStatus::kFound) {
      return SolveResult{std::move(*r.graph),
                         all_smaller_infeasible ? ProofStatus::kOptimal
                                                : ProofStatus::kFeasible,
                         budget.threads > 1, limits.nodes.load(), proven};
    }
    if (r.status == SearchStatus::kUnknown) {
      exhausted = true;
      break;
    }
    proven = k;
  }
  const bool settled = !exhausted && last == ub - 1;
  return SolveResult{binary_decomposition_graph(alpha),
                     settled ? ProofStatus::kOptimal : ProofStatus::kHeuristic,
                     budget.threads > 1, limits.nodes.load(), proven};
}

}  // namespace socrep
