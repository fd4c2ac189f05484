// Command line front end: estimate or exactly count connected induced
// k-node subgraphs, validate a stratification, or sweep configurations.
// Exit codes: 0 success, 1 failed validation or estimator error, 2 bad
// usage or configuration, 3 resource cap exceeded.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ripple/baselines.hpp"
#include "ripple/engine.hpp"
#include "ripple/graph.hpp"
#include "ripple/oracle.hpp"
#include "ripple/result_io.hpp"
#include "ripple/stratify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResourceCap = 3;

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// The worker count honors the RIPPLE_WORKERS environment variable over
// everything else, including an explicit flag.
void apply_workers_env(ripple::RunConfig& cfg) {
  const char* env = std::getenv("RIPPLE_WORKERS");
  if (!env || !*env) return;
  try {
    cfg.workers = std::stoi(env);
  } catch (const std::exception&) {
    throw std::invalid_argument("RIPPLE_WORKERS must be an integer");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CountArgs {
  std::string graph_path, labels_path, seeds_file, dump_seeds, output, format = "json";
  ripple::RunConfig cfg;
};

int run_count(const CountArgs& a) {
  ripple::LoadedGraph lg = ripple::load_edge_list(a.graph_path, a.labels_path);

  std::optional<ripple::SeedSet> preset;
  if (!a.seeds_file.empty()) {
    auto lists = ripple::seed_lists_from_json(read_file(a.seeds_file));
    preset = ripple::seeds_from_vertex_lists(lg.graph, a.cfg.k, lists);
  }

  ripple::RippleEngine engine =
      preset ? ripple::RippleEngine(lg.graph, a.cfg, *preset)
             : ripple::RippleEngine(lg.graph, a.cfg);
  ripple::RippleResult res = engine.run();

  if (!a.dump_seeds.empty()) write_output(ripple::seeds_to_json(engine.seeds()), a.dump_seeds);
  write_output(a.format == "csv" ? ripple::result_to_csv(res) : ripple::result_to_json(res),
               a.output);
  std::cerr << ripple::human_summary(res);
  return kExitOk;
}

struct ExactArgs {
  std::string graph_path, labels_path, output, format = "json";
  int k = 4;
};

int run_exact(const ExactArgs& a) {
  ripple::LoadedGraph lg = ripple::load_edge_list(a.graph_path, a.labels_path);
  auto t0 = std::chrono::steady_clock::now();
  ripple::ExactCounts e = ripple::exact_count_vector(lg.graph, a.k);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_output(a.format == "csv" ? ripple::exact_to_csv(e) : ripple::exact_to_json(e, a.k),
               a.output);
  std::cerr << "exact total: " << e.total << " (" << e.counts.size() << " patterns, wall "
            << secs << "s)\n";
  return kExitOk;
}

struct ValidateArgs {
  std::string graph_path, labels_path, seeds_file;
  int k = 4;
  int n1 = 1;
  uint64_t seed = 1;
};

int run_validate(const ValidateArgs& a) {
  ripple::LoadedGraph lg = ripple::load_edge_list(a.graph_path, a.labels_path);
  ripple::SeedSet seeds;
  if (!a.seeds_file.empty()) {
    auto lists = ripple::seed_lists_from_json(read_file(a.seeds_file));
    seeds = ripple::seeds_from_vertex_lists(lg.graph, a.k, lists);
  } else {
    std::mt19937_64 rng(ripple::stream_seed(a.seed, 0, 0));
    seeds = ripple::select_seeds(lg.graph, a.n1, a.k, rng);
  }
  for (const auto& w : seeds.warnings) std::cerr << "warning: " << w << "\n";
  if (seeds.seeds.empty()) {
    std::cout << "no walk states exist; nothing to validate\n";
    return kExitOk;
  }
  ripple::Stratification strat = ripple::make_stratification(lg.graph, seeds, a.k);
  ripple::EpsReport rep = ripple::validate_eps(lg.graph, strat, a.k);
  std::cout << "states: " << rep.num_states << ", strata: " << rep.num_strata << "\n";
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
  for (const auto& v : rep.violations) std::cout << "violation: " << v << "\n";
  std::cout << (rep.ok ? "stratification is walkable\n" : "stratification FAILED validation\n");
  return rep.ok ? kExitOk : kExitFailure;
}

struct BenchArgs {
  std::string sweep_path, output;
  int runs = 10;
  uint64_t seed = 1;
};

std::string csv_escape(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n' || c == '"') c = ';';
  return s;
}

int run_bench(const BenchArgs& a) {
  nlohmann::json sweep = nlohmann::json::parse(read_file(a.sweep_path));
  if (!sweep.is_array()) throw std::runtime_error("sweep file must hold a JSON array");

  std::ostringstream csv;
  csv << "graph,k,epsilon,n1,reservoir_capacity,workers,run,seed,total,l2,linf,"
         "wall_time_s,tours_per_stratum,error\n";
  csv << std::setprecision(17);

  // Exact reference counts, one enumeration per (graph, k).
  std::map<std::pair<std::string, int>, ripple::CountVector> exact_cache;

  for (const auto& entry : sweep) {
    ripple::RunConfig cfg;
    std::string graph_path = entry.at("graph").get<std::string>();
    if (entry.contains("k")) cfg.k = entry["k"].get<int>();
    if (entry.contains("epsilon")) cfg.epsilon = entry["epsilon"].get<double>();
    if (entry.contains("n1")) cfg.n1 = entry["n1"].get<int>();
    if (entry.contains("reservoir_capacity"))
      cfg.reservoir_capacity = entry["reservoir_capacity"].get<uint32_t>();
    if (entry.contains("workers")) cfg.workers = entry["workers"].get<int>();
    if (entry.contains("min_tours")) cfg.min_tours = entry["min_tours"].get<uint64_t>();
    if (entry.contains("max_tours")) cfg.max_tours = entry["max_tours"].get<uint64_t>();
    if (entry.contains("batch")) cfg.batch = entry["batch"].get<uint64_t>();

    for (int run = 0; run < a.runs; ++run) {
      cfg.rng_seed = a.seed + uint64_t(run);
      std::string err;
      double total = 0, l2 = 0, linf = 0, wall = 0;
      std::string tours;
      try {
        ripple::LoadedGraph lg = ripple::load_edge_list(graph_path);
        auto key = std::make_pair(graph_path, cfg.k);
        auto it = exact_cache.find(key);
        if (it == exact_cache.end()) {
          it = exact_cache
                   .emplace(key,
                            ripple::to_count_vector(ripple::exact_count_vector(lg.graph, cfg.k)))
                   .first;
        }
        ripple::RippleEngine engine(lg.graph, cfg);
        ripple::RippleResult res = engine.run();
        total = res.total;
        l2 = ripple::l2_distance(res.counts, it->second);
        linf = ripple::linf_distance(res.counts, it->second);
        wall = res.wall_time_s;
        std::ostringstream ts;
        for (size_t i = 0; i < res.strata.size(); ++i) {
          if (i) ts << ';';
          ts << res.strata[i].tours;
        }
        tours = ts.str();
      } catch (const std::exception& e) {
        err = e.what();
      }
      csv << csv_escape(graph_path) << ',' << cfg.k << ',' << cfg.epsilon << ',' << cfg.n1
          << ',' << cfg.reservoir_capacity << ',' << cfg.workers << ',' << run << ','
          << cfg.rng_seed << ',' << total << ',' << l2 << ',' << linf << ',' << wall << ','
          << tours << ',' << csv_escape(err) << "\n";
    }
  }
  write_output(csv.str(), a.output);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimate counts of connected induced k-node subgraphs"};
  app.require_subcommand(1);

  CountArgs ca;
  CLI::App* count = app.add_subcommand("count", "Estimate pattern counts by stratified tours");
  count->add_option("graph", ca.graph_path, "edge list file")->required();
  count->add_option("--labels", ca.labels_path, "vertex label file (one integer per line)");
  count->add_option("-k,--order", ca.cfg.k, "subgraph order to count")->capture_default_str();
  count->add_option("-e,--epsilon", ca.cfg.epsilon, "per-stratum relative error target")
      ->capture_default_str();
  count->add_option("--n1", ca.cfg.n1, "number of seed states")->capture_default_str();
  count->add_option("-M,--reservoir", ca.cfg.reservoir_capacity, "reservoir cell capacity")
      ->capture_default_str();
  count->add_option("--min-tours", ca.cfg.min_tours)->capture_default_str();
  count->add_option("--max-tours", ca.cfg.max_tours)->capture_default_str();
  count->add_option("--max-steps", ca.cfg.max_steps, "per-tour state cap")
      ->capture_default_str();
  count->add_option("--rejection-cap", ca.cfg.rejection_cap)->capture_default_str();
  count->add_option("-w,--workers", ca.cfg.workers,
                    "worker threads (RIPPLE_WORKERS overrides)")
      ->capture_default_str();
  count->add_option("--seed", ca.cfg.rng_seed, "rng seed")->capture_default_str();
  count->add_option("--batch", ca.cfg.batch, "tours per stopping check (0 = 64*workers)")
      ->capture_default_str();
  count->add_option("--seeds-file", ca.seeds_file, "JSON seed vertex lists to use as-is");
  count->add_option("--dump-seeds", ca.dump_seeds, "write the chosen seeds as JSON");
  count->add_option("-o,--output", ca.output, "output path (default stdout)");
  count->add_option("--format", ca.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  ExactArgs ea;
  CLI::App* exact = app.add_subcommand("exact", "Count patterns by full enumeration");
  exact->add_option("graph", ea.graph_path, "edge list file")->required();
  exact->add_option("--labels", ea.labels_path, "vertex label file");
  exact->add_option("-k,--order", ea.k, "subgraph order to count")->capture_default_str();
  exact->add_option("-o,--output", ea.output, "output path (default stdout)");
  exact->add_option("--format", ea.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  ValidateArgs va;
  CLI::App* validate =
      app.add_subcommand("validate", "Check that a stratification is walkable");
  validate->add_option("graph", va.graph_path, "edge list file")->required();
  validate->add_option("--labels", va.labels_path, "vertex label file");
  validate->add_option("-k,--order", va.k)->capture_default_str();
  validate->add_option("--n1", va.n1)->capture_default_str();
  validate->add_option("--seed", va.seed)->capture_default_str();
  validate->add_option("--seeds-file", va.seeds_file, "JSON seed vertex lists");

  BenchArgs ba;
  CLI::App* bench = app.add_subcommand("bench", "Run a configuration sweep, emit CSV");
  bench->add_option("--sweep", ba.sweep_path, "JSON array of run configurations")->required();
  bench->add_option("--runs", ba.runs, "repetitions per configuration")->capture_default_str();
  bench->add_option("--seed", ba.seed, "base rng seed")->capture_default_str();
  bench->add_option("-o,--output", ba.output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*count) {
      apply_workers_env(ca.cfg);
      ca.cfg.validate();
      return run_count(ca);
    }
    if (*exact) return run_exact(ea);
    if (*validate) return run_validate(va);
    if (*bench) return run_bench(ba);
  } catch (const ripple::ResourceCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
