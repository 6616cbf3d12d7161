#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fusionwalk/chain_analysis.hpp"
#include "fusionwalk/json_report.hpp"
#include "fusionwalk/multiplicity_graph.hpp"
#include "fusionwalk/simulator.hpp"
#include "fusionwalk/tensor_core.hpp"
#include "fusionwalk/verify.hpp"

namespace {

using namespace fusionwalk;

int max_p_bound() {
  if (const char* env = std::getenv("FUSION_WALK_MAX_P")) {
    const int bound = std::atoi(env);
    if (bound >= 2) return bound;
  }
  return 997;
}

Prime checked_prime(int p) {
  const int bound = max_p_bound();
  if (p > bound)
    throw std::invalid_argument("p = " + std::to_string(p) + " exceeds the safety bound " +
                                std::to_string(bound) +
                                " (set FUSION_WALK_MAX_P to override)");
  return Prime(p);
}

WeightFunction resolve_weights(const std::string& spec, const Prime& p) {
  if (spec == "uniform") return WeightFunction::uniform(p);
  if (spec == "dimension") return WeightFunction::dimension(p);
  std::ifstream in(spec);
  if (!in) throw std::invalid_argument("cannot open weights file: " + spec);
  return parse_weights_file(in, p);
}

// Presentation order: ascending module index, a projective cover before a
// simple of the same index.
std::vector<ModuleLabel> presentation_order(const Decomposition& d) {
  auto out = d.summands;
  std::sort(out.begin(), out.end(), [](ModuleLabel x, ModuleLabel y) {
    if (x.index != y.index) return x.index < y.index;
    return x.kind == ModuleKind::Projective && y.kind == ModuleKind::Simple;
  });
  return out;
}

std::string join_labels(const std::vector<ModuleLabel>& labels) {
  std::string out;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (k) out += " + ";
    out += label_name(labels[k]);
  }
  return out;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << text;
}

std::string grid_to_dot(const Grid<std::uint8_t>& g, const std::string& comment) {
  std::ostringstream os;
  os << "graph G {\n  // " << comment << "\n";
  for (int v = 1; v <= g.rows(); ++v) os << "  " << v << ";\n";
  for (int i = 1; i <= g.rows(); ++i)
    for (int j = i; j <= g.cols(); ++j)
      if (g.at(i, j)) os << "  " << i << " -- " << j << ";\n";
  os << "}\n";
  return os.str();
}

int run_decompose(int p_in, int a, int b, bool factors, const std::string& format) {
  const Prime p = checked_prime(p_in);
  const auto d = clebsch_gordan(p, a, b);
  const auto ordered = presentation_order(d);

  std::optional<std::vector<ModuleLabel>> filt, summand_route;
  if (factors) {
    filt = tensor_composition_factors(p, a, b, FactorRoute::Filtration);
    summand_route = tensor_composition_factors(p, a, b, FactorRoute::ClebschGordan);
  }

  if (format == "json") {
    nlohmann::ordered_json j;
    j["p"] = p.value();
    j["a"] = a;
    j["b"] = b;
    auto names = nlohmann::ordered_json::array();
    for (ModuleLabel m : ordered) names.push_back(label_name(m));
    j["decomposition"] = std::move(names);
    j["ambient_dim"] = d.ambient_dim;
    if (factors) {
      auto to_names = [](const std::vector<ModuleLabel>& ms) {
        auto arr = nlohmann::ordered_json::array();
        for (ModuleLabel m : ms) arr.push_back(label_name(m));
        return arr;
      };
      j["factors"] = {{"filtration", to_names(*filt)},
                      {"summands", to_names(*summand_route)},
                      {"agree", *filt == *summand_route}};
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  std::cout << "V" << a << " (x) V" << b << " = " << join_labels(ordered) << "\n";
  if (factors) {
    std::cout << "factors[filtration]: " << join_labels(*filt) << "\n";
    std::cout << "factors[summands]:   " << join_labels(*summand_route) << "\n";
    std::cout << "routes " << (*filt == *summand_route ? "AGREE" : "DISAGREE") << "\n";
    if (*filt != *summand_route) return 1;
  }
  return 0;
}

int run_graph(int p_in, int n, const std::string& out_format, bool reduced, bool dims,
              const std::string& output) {
  const Prime p = checked_prime(p_in);
  std::string text;
  if (reduced) {
    const auto r = build_reduced(p, n);
    text = out_format == "csv"
               ? to_csv(r)
               : grid_to_dot(r.entries(), "reduced, p = " + std::to_string(p.value()) +
                                              ", n = " + std::to_string(n) +
                                              ", r = " + std::to_string(r.r()));
  } else {
    const auto a = build_adjacency(p, n);
    text = out_format == "csv" ? to_csv(a) : to_dot(a, dims);
  }
  write_output(text, output);
  return 0;
}

int run_chain(int p_in, int n, const std::string& weights, double eps) {
  const Prime p = checked_prime(p_in);
  const auto w = resolve_weights(weights, p);
  const auto report = analyze_chain(p, n, w, eps);
  std::cout << to_json(report).dump(2) << "\n";
  return 0;
}

int run_simulate(int p_in, int n, const std::string& weights, const std::string& start,
                 long long steps, long long trajectories, std::uint64_t seed, bool lazy,
                 const std::string& trace_path) {
  const Prime p = checked_prime(p_in);
  SimulationConfig cfg(p, n, resolve_weights(weights, p));
  if (start == "uniform") {
    cfg.initial = InitialDistribution::uniform();
  } else {
    std::size_t used = 0;
    int s = 0;
    try {
      s = std::stoi(start, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != start.size())
      throw std::invalid_argument("--start must be a state number or 'uniform'");
    cfg.initial = InitialDistribution::point(s);
  }
  cfg.steps = steps;
  cfg.trajectories = trajectories;
  cfg.seed = seed;
  cfg.lazy = lazy;

  EmpiricalResult res;
  if (trace_path.empty()) {
    res = run(cfg);
  } else {
    std::ofstream trace(trace_path, std::ios::binary);
    if (!trace) throw std::invalid_argument("cannot open trace file: " + trace_path);
    res = run(cfg, &trace);
  }
  std::cout << to_json(res).dump(2) << "\n";
  return 0;
}

int run_verify(int max_p, const std::string& suite, const std::string& format) {
  if (max_p < 2) throw std::invalid_argument("--max-p must be at least 2");
  std::vector<CheckResult> results;
  if (suite == "cg") results = verify_cg(max_p);
  else if (suite == "graph") results = verify_graph(max_p);
  else if (suite == "chain") results = verify_chain(max_p);
  else results = verify_all(max_p);

  int failures = 0;
  if (format == "json") {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : results) {
      if (!r.pass) ++failures;
      nlohmann::ordered_json j{{"name", r.name}, {"pass", r.pass}, {"cases", r.cases}};
      if (!r.pass) j["first_failure"] = r.detail;
      arr.push_back(std::move(j));
    }
    std::cout << arr.dump(2) << "\n";
  } else {
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    for (const auto& r : results) {
      if (!r.pass) ++failures;
      std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name
                << std::string(width - r.name.size() + 2, ' ') << "cases=" << r.cases;
      if (!r.pass) std::cout << "  first failure: " << r.detail;
      std::cout << "\n";
    }
    std::cout << "verify: " << (results.size() - failures) << "/" << results.size()
              << " checks passed (max_p=" << max_p << ", suite=" << suite << ")\n";
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fusionwalk: tensor-product decompositions of simple SL2(F_p) modules in defining "
      "characteristic, their summand multiplicity graphs, and the induced weighted random "
      "walks (exact analysis + Monte Carlo simulation)"};
  app.require_subcommand(1);

  int exit_code = 0;

  // decompose
  auto* dec = app.add_subcommand("decompose", "Decompose Va (x) Vb into indecomposable summands");
  int dp = 0, da = 0, db = 0;
  bool dfactors = false;
  std::string dformat = "text";
  dec->add_option("--p", dp, "odd prime characteristic (2 allowed here)")->required();
  dec->add_option("--a", da, "dimension of the first simple factor")->required();
  dec->add_option("--b", db, "dimension of the second simple factor")->required();
  dec->add_flag("--factors", dfactors, "also print both composition-factor routes");
  dec->add_option("--format", dformat)->check(CLI::IsMember({"text", "json"}));
  dec->callback([&] { exit_code = run_decompose(dp, da, db, dfactors, dformat); });

  // graph
  auto* gr = app.add_subcommand("graph", "Export the multiplicity graph as DOT or CSV");
  int gp = 0, gn = 0;
  std::string gout = "dot", goutput;
  bool greduced = false, gdims = false;
  gr->add_option("--p", gp, "odd prime characteristic")->required();
  gr->add_option("--n", gn, "fixed tensor factor, 1 <= n <= p-1")->required();
  gr->add_option("--out", gout, "output format")->check(CLI::IsMember({"dot", "csv"}));
  gr->add_flag("--reduced", greduced, "emit the half-size reduced matrix/graph");
  gr->add_flag("--dims", gdims, "annotate DOT vertices with module dimensions");
  gr->add_option("--output", goutput, "write to this file instead of stdout");
  gr->callback([&] { exit_code = run_graph(gp, gn, gout, greduced, gdims, goutput); });

  // chain
  auto* ch = app.add_subcommand("chain", "Exact analysis of the non-projective summand walk");
  int cp = 0, cn = 0;
  std::string cweights = "uniform";
  double ceps = 0.01;
  ch->add_option("--p", cp, "odd prime characteristic, p >= 5")->required();
  ch->add_option("--n", cn, "fixed tensor factor, 2 <= n <= p-2")->required();
  ch->add_option("--weights", cweights, "uniform | dimension | weights file (lines `i num/den`)");
  ch->add_option("--eps", ceps, "accuracy for the mixing-time bound")->check(CLI::Range(1e-12, 0.999999));
  ch->callback([&] { exit_code = run_chain(cp, cn, cweights, ceps); });

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo simulation of the walk");
  int sp = 0, sn = 0;
  std::string sweights = "uniform", sstart = "1", strace;
  long long ssteps = 0, straj = 1;
  std::uint64_t sseed = 0;
  bool slazy = false;
  sim->add_option("--p", sp, "odd prime characteristic, p >= 5")->required();
  sim->add_option("--n", sn, "fixed tensor factor, 2 <= n <= p-2")->required();
  sim->add_option("--weights", sweights, "uniform | dimension | weights file");
  sim->add_option("--start", sstart, "initial state (point mass) or 'uniform'");
  sim->add_option("--steps", ssteps, "steps per trajectory")->check(CLI::NonNegativeNumber);
  sim->add_option("--trajectories", straj, "number of independent walks")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sseed, "RNG seed (default 0, never wall-clock)");
  sim->add_flag("--lazy", slazy, "simulate the lazy walk (I + Q)/2");
  sim->add_option("--trace", strace, "write a trajectory,step,state CSV trace to this file");
  sim->callback([&] {
    exit_code = run_simulate(sp, sn, sweights, sstart, ssteps, straj, sseed, slazy, strace);
  });

  // verify
  auto* ver = app.add_subcommand("verify", "Run the exhaustive invariant suites");
  int vmax = 13;
  std::string vsuite = "all", vformat = "text";
  ver->add_option("--max-p", vmax, "largest prime to include")->required();
  ver->add_option("--suite", vsuite)->check(CLI::IsMember({"cg", "graph", "chain", "all"}));
  ver->add_option("--format", vformat)->check(CLI::IsMember({"text", "json"}));
  ver->callback([&] { exit_code = run_verify(vmax, vsuite, vformat); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
