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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "socrep/cone.hpp"
#include "socrep/covering.hpp"
#include "socrep/error.hpp"
#include "socrep/mcmgp.hpp"
#include "socrep/mediated.hpp"
#include "socrep/milp.hpp"

namespace socrep::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct Globals {
  std::uint64_t seed = 1;
  bool json_out = false;
  bool text_out = false;
  double time_limit = 0;  // seconds, 0 = none
  unsigned threads = 1;

  bool as_json(bool default_json) const {
    if (json_out) return true;
    if (text_out) return false;
    return default_json;
  }

  SearchBudget budget() const {
    SearchBudget b;
    if (time_limit > 0) {
      b.time_limit = std::chrono::milliseconds(
          static_cast<std::int64_t>(time_limit * 1000.0));
    }
    b.threads = threads;
    return b;
  }
};

// Relative output paths land in $SOCREP_OUT_DIR when it is set.
fs::path output_path(const std::string& name) {
  fs::path p(name);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("SOCREP_OUT_DIR"); dir && *dir) {
      return fs::path(dir) / p;
    }
  }
  return p;
}

void write_file(const std::string& name, const std::string& text) {
  const fs::path p = output_path(name);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InvalidInput("cannot write " + p.string());
  f << text;
}

std::string read_file(const std::string& name) {
  std::ifstream f(name, std::ios::binary);
  if (!f) throw InvalidInput("cannot read " + name);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::shared_ptr<GraphSupplier> make_supplier(const std::string& name,
                                             const Globals& g) {
  if (name == "optimal") return GraphSupplier::optimal(g.budget());
  if (name == "ub") return GraphSupplier::upper_bound();
  throw InvalidInput("unknown supplier " + name + " (expected optimal or ub)");
}

std::vector<Rational> weights_of(const std::string& alpha) {
  return parse_alpha(alpha).alphas();
}

void print_graph_text(std::ostream& out, const MediatedGraph& g) {
  for (const auto& w : g.witnesses) {
    out << w.node.str() << " <- " << w.first.str() << ' ' << w.second.str()
        << '\n';
  }
}

json complexity_json(const ComplexityReport& c) {
  return {{"m_E", c.m_e},
          {"L_E", c.l_e},
          {"by_kind", c.by_kind},
          {"by_signature", c.by_signature}};
}

void print_complexity(std::ostream& out, const std::string& title,
                      const ComplexityReport& c) {
  out << title << ": m_E = " << c.m_e << ", L_E = " << c.l_e << '\n';
  for (const auto& [sig, n] : c.by_signature) {
    out << "  " << n << " x " << sig << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"SOC representations of rational power cones", "socrep"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice");
  auto* json_flag = app.add_flag("--json", g.json_out, "JSON output");
  app.add_flag("--text", g.text_out, "Plain text output")->excludes(json_flag);
  app.add_option("--time-limit", g.time_limit, "Search time limit in seconds")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--threads", g.threads, "Search threads")
      ->check(CLI::PositiveNumber);

  std::string alpha;
  int code = kOk;
  std::function<void()> action;

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Lower and upper bound on |X|");
  bounds->add_option("--alpha", alpha, "Integer weights s1,s2,...")->required();
  bounds->callback([&] {
    action = [&] {
      const auto a = parse_alpha(alpha);
      const auto lb = lower_bound(a);
      const auto ub = upper_bound(a);
      if (g.as_json(true)) {
        out << json{{"lb", lb}, {"ub", ub}}.dump() << '\n';
      } else {
        out << "lb " << lb << "\nub " << ub << '\n';
      }
    };
  });

  // solve
  std::optional<std::int64_t> max_card;
  std::optional<std::uint64_t> node_limit;
  std::string dot_file;
  auto* solve = app.add_subcommand("solve", "Minimum cardinality mediated graph");
  solve->add_option("--alpha", alpha, "Integer weights s1,s2,...")->required();
  solve->add_option("--max-card", max_card, "Largest cardinality to try");
  solve->add_option("--node-limit", node_limit, "Search node budget");
  solve->add_option("--dot", dot_file, "Also write the graph as DOT");
  solve->callback([&] {
    action = [&] {
      const auto a = parse_alpha(alpha);
      SearchBudget b = g.budget();
      b.max_cardinality = max_card;
      b.node_limit = node_limit;
      const SolveResult r = solve_exact(a, b);
      const auto size = static_cast<std::int64_t>(r.graph.size());
      if (r.status == ProofStatus::kHeuristic || (max_card && size > *max_card)) {
        code = kBudget;
      }
      if (!dot_file.empty()) write_file(dot_file, to_dot(r.graph));
      if (g.as_json(true)) {
        json j{{"status", to_string(r.status)},
               {"cardinality", size},
               {"nodes_explored", r.nodes},
               {"order_dependent", r.order_dependent},
               {"graph", json::parse(to_json(r.graph))}};
        out << j.dump(2) << '\n';
      } else {
        out << "status " << to_string(r.status) << "\n|X| " << size << '\n';
        print_graph_text(out, r.graph);
      }
      if (code == kBudget) {
        err << "no graph within the requested budget; reporting the binary "
               "decomposition\n";
      }
    };
  });

  // soc
  std::string supplier_name = "optimal";
  auto* soc = app.add_subcommand("soc", "SOC system induced by a mediated graph");
  soc->add_option("--alpha", alpha, "Integer weights s1,s2,...")->required();
  soc->add_option("--supplier", supplier_name, "optimal or ub");
  soc->callback([&] {
    action = [&] {
      const auto a = parse_alpha(alpha);
      const auto graph = make_supplier(supplier_name, g)->get(a);
      const auto rep = to_soc(graph);
      if (g.as_json(false)) {
        json cons = json::array();
        for (const auto& c : rep.constraints) cons.push_back(c.str());
        json ex = json::object();
        for (const auto& [name, mu] : rep.exponents) ex[name] = mu.str();
        out << json{{"variables", rep.variables},
                    {"constraints", cons},
                    {"exponents", ex}}
                   .dump(2)
            << '\n';
      } else {
        for (const auto& c : rep.constraints) out << c.str() << '\n';
      }
    };
  });

  // milp
  auto* milp = app.add_subcommand("milp", "MILP model for external solvers");
  milp->require_subcommand(1);
  std::string delta_text;
  MilpOptions mopt;
  std::string out_file;
  auto* emit = milp->add_subcommand("emit", "Write the model in LP format");
  emit->add_option("--alpha", alpha, "Integer weights s1,s2,...")->required();
  emit->add_option("--delta", delta_text, "Mediated slots, or auto")->required();
  emit->add_flag("--vi1", mopt.vi1, "Pin inactive nodes");
  emit->add_flag("--vi2", mopt.vi2, "Active nodes first");
  emit->add_flag("--vi3", mopt.vi3, "Sort active nodes");
  emit->add_flag("--tree", mopt.tree, "Tree-shaped graphs only");
  emit->add_option("--eps", mopt.epsilon, "Separation constant");
  emit->add_option("--vi3-coordinate", mopt.vi3_coordinate, "Sorted coordinate");
  emit->add_option("--out", out_file, "Output file (stem for --delta auto)");
  emit->callback([&] {
    action = [&] {
      const auto a = parse_alpha(alpha);
      if (delta_text == "auto") {
        // One file per delta from the lower to the upper bound; solve them
        // in order and stop at the first feasible one.
        const std::string stem = out_file.empty() ? "mcmgp" : out_file;
        json manifest{{"s", std::vector<std::int64_t>(a.s().begin(), a.s().end())},
                      {"lb", lower_bound(a)},
                      {"ub", upper_bound(a)},
                      {"models", json::array()}};
        for (std::optional<std::int64_t> d = lower_bound(a);
             d && *d <= upper_bound(a);
             d = next_delta(*d, DeltaStatus::kInfeasible)) {
          const std::string file = stem + "_delta" + std::to_string(*d) + ".lp";
          write_file(file, emit_lp(build_model(a, *d, mopt)));
          manifest["models"].push_back({{"delta", *d}, {"file", file}});
        }
        write_file(stem + "_manifest.json", manifest.dump(2) + "\n");
        out << manifest.dump(2) << '\n';
        return;
      }
      std::int64_t d = 0;
      try {
        d = std::stoll(delta_text);
      } catch (const std::exception&) {
        throw InvalidInput("--delta must be an integer or auto");
      }
      const std::string text = emit_lp(build_model(a, d, mopt));
      if (out_file.empty()) {
        out << text;
      } else {
        write_file(out_file, text);
      }
    };
  });
  std::int64_t delta = 0;
  std::string sol_file;
  auto* parse = milp->add_subcommand("parse", "Read a solver solution back");
  parse->add_option("--alpha", alpha, "Integer weights s1,s2,...")->required();
  parse->add_option("--delta", delta, "Mediated slots of the model")->required();
  parse->add_option("--sol", sol_file, "Solution file")->required();
  parse->add_flag("--vi1", mopt.vi1);
  parse->add_flag("--vi2", mopt.vi2);
  parse->add_flag("--vi3", mopt.vi3);
  parse->add_flag("--tree", mopt.tree);
  parse->callback([&] {
    action = [&] {
      const auto a = parse_alpha(alpha);
      const auto model = build_model(a, delta, mopt);
      std::vector<std::string> warnings;
      const auto graph = parse_solution(model, read_file(sol_file), &warnings);
      for (const auto& w : warnings) err << "warning: " << w << '\n';
      if (g.as_json(true)) {
        out << json{{"cardinality", graph.size()},
                    {"graph", json::parse(to_json(graph))}}
                   .dump(2)
            << '\n';
      } else {
        out << "|X| " << graph.size() << '\n';
        print_graph_text(out, graph);
      }
    };
  });

  // represent
  std::string p_text;
  std::size_t d1 = 1;
  std::string construction = "th10";
  auto* represent = app.add_subcommand("represent",
                                       "Extended representation of a power cone");
  represent->add_option("--p", p_text, "Norm order a/b")->required();
  represent->add_option("--d1", d1, "Dimension of x")->required();
  represent->add_option("--alpha", alpha, "Integer weights s1,s2,...")->required();
  represent->add_option("--construction", construction, "cor8, th9 or th10");
  represent->add_option("--supplier", supplier_name, "optimal, ub or none");
  represent->add_option("--out", out_file, "Write the program JSON here");
  represent->callback([&] {
    action = [&] {
      const NormOrder p = NormOrder::parse(p_text);
      const auto w = weights_of(alpha);
      ConeProgram base;
      if (construction == "cor8") {
        base = corollary8(p, d1, w);
      } else if (construction == "th9") {
        base = theorem9(p, d1, w);
      } else if (construction == "th10") {
        base = theorem10(p, d1, w);
      } else {
        throw InvalidInput("unknown construction " + construction);
      }
      ConeProgram prog = base;
      if (supplier_name != "none") {
        prog = rationalize_to_soc(base, *make_supplier(supplier_name, g));
      }
      if (!out_file.empty()) write_file(out_file, to_json(prog, 2) + "\n");
      const auto base_c = complexity(base);
      const auto prog_c = complexity(prog);
      if (g.as_json(true)) {
        out << json{{"construction", construction},
                    {"complexity", complexity_json(base_c)},
                    {"soc_complexity", complexity_json(prog_c)},
                    {"program", json::parse(to_json(prog))}}
                   .dump(2)
            << '\n';
      } else {
        print_complexity(out, construction, base_c);
        if (supplier_name != "none") {
          print_complexity(out, "after SOC lowering (" + supplier_name + ")",
                           prog_c);
        }
      }
    };
  });

  // verify
  std::string program_file;
  VerifyOptions vopt;
  std::string mode = "both";
  std::optional<std::uint64_t> verify_seed;
  auto* verify = app.add_subcommand("verify", "Check a lowered program");
  verify->add_option("--program", program_file, "Program JSON")->required();
  verify->add_option("--trials", vopt.trials, "Samples per block");
  verify->add_option("--seed", verify_seed, "Sampling seed");
  verify->add_option("--mode", mode, "structural, sampling or both");
  verify->callback([&] {
    action = [&] {
      if (mode == "structural") {
        vopt.mode = VerifyMode::kStructural;
      } else if (mode == "sampling") {
        vopt.mode = VerifyMode::kSampling;
      } else if (mode == "both") {
        vopt.mode = VerifyMode::kBoth;
      } else {
        throw InvalidInput("unknown mode " + mode);
      }
      vopt.seed = verify_seed.value_or(g.seed);
      const auto prog = program_from_json(read_file(program_file));
      const auto rep = verify_representation(prog, vopt);
      if (!rep.ok) code = kBudget;
      if (g.as_json(true)) {
        out << json{{"ok", rep.ok},
                    {"blocks", rep.blocks},
                    {"samples", rep.samples},
                    {"failures", rep.failures}}
                   .dump(2)
            << '\n';
      } else {
        out << (rep.ok ? "ok" : "FAILED") << ": " << rep.blocks << " blocks, "
            << rep.samples << " samples\n";
        for (const auto& f : rep.failures) out << "  " << f << '\n';
      }
    };
  });

  // cover
  auto* cover = app.add_subcommand("cover", "Gravitational covering models");
  cover->require_subcommand(1);
  std::size_t n = 25;
  std::size_t j = 2;
  std::string instance_file;
  std::string representation = "optimal";
  auto instance = [&]() {
    if (!instance_file.empty()) return instance_from_json(read_file(instance_file));
    if (p_text.empty() || alpha.empty()) {
      throw InvalidInput("give --instance, or --p and --alpha");
    }
    return generate_instance(n, j, NormOrder::parse(p_text), weights_of(alpha),
                             g.seed);
  };
  auto instance_flags = [&](CLI::App* sub) {
    sub->add_option("--n", n, "Demand points");
    sub->add_option("--j", j, "Facilities");
    sub->add_option("--p", p_text, "Norm order a/b");
    sub->add_option("--alpha", alpha, "Feature weights s1,s2,...");
  };
  auto* gen = cover->add_subcommand("gen", "Generate a seeded instance");
  instance_flags(gen);
  gen->add_option("--out", out_file, "Instance JSON file");
  gen->callback([&] {
    action = [&] {
      const std::string text = to_json(instance(), 2) + "\n";
      if (out_file.empty()) {
        out << text;
      } else {
        write_file(out_file, text);
      }
    };
  });
  auto* cemit = cover->add_subcommand("emit", "Write the MISOCP in LP format");
  instance_flags(cemit);
  cemit->add_option("--instance", instance_file, "Instance JSON file");
  cemit->add_option("--representation", representation, "optimal or ub");
  cemit->add_option("--out", out_file, "LP file");
  cemit->callback([&] {
    action = [&] {
      const auto model =
          build_covering_model(instance(), *make_supplier(representation, g));
      const std::string text = emit_covering(model);
      if (out_file.empty()) {
        out << text;
      } else {
        write_file(out_file, text);
      }
    };
  });
  auto* count = cover->add_subcommand("count", "Constraint counts only");
  instance_flags(count);
  count->add_option("--instance", instance_file, "Instance JSON file");
  count->add_option("--representation", representation, "optimal or ub");
  count->callback([&] {
    action = [&] {
      const auto model =
          build_covering_model(instance(), *make_supplier(representation, g));
      if (g.as_json(true)) {
        out << to_json(model.counts) << '\n';
      } else {
        out << "soc " << model.counts.soc << "\nlin " << model.counts.lin
            << "\nbin " << model.counts.bin << "\nvars " << model.counts.vars
            << '\n';
      }
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
  try {
    if (action) action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return code;
}

}  // namespace socrep::cli
