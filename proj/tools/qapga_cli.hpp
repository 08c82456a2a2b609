#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "qapga/bench.hpp"
#include "qapga/config.hpp"
#include "qapga/ga.hpp"
#include "qapga/instance.hpp"
#include "qapga/oracle.hpp"

namespace qapga::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// "1..10", "3,5,8" or a mix such as "1..3,9".
inline std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  for (auto part : detail::split_fields(text, std::string_view::npos)) {
    if (part.empty()) throw UsageError("empty entry in seed list");
    const auto dots = part.find("..");
    if (dots == std::string_view::npos) {
      seeds.push_back(detail::parse_number<std::uint64_t>(part, "seed"));
      continue;
    }
    const auto lo =
        detail::parse_number<std::uint64_t>(part.substr(0, dots), "seed");
    const auto hi =
        detail::parse_number<std::uint64_t>(part.substr(dots + 2), "seed");
    if (lo > hi) throw UsageError("empty seed range '" + std::string(part) + "'");
    for (auto s = lo;; ++s) {
      seeds.push_back(s);
      if (s == hi) break;
    }
  }
  if (seeds.empty()) throw UsageError("seed list must not be empty");
  return seeds;
}

// GA flags shared by solve and bench. Unset flags leave the config-file or
// built-in default in place.
struct GaFlags {
  std::string config_path;
  std::optional<std::size_t> pop;
  std::optional<std::size_t> generations;
  std::optional<double> cx_rate;
  std::optional<double> mut_rate;
  std::optional<std::size_t> elitism;
  std::optional<Cost> target;
  std::optional<double> time_limit_s;

  void attach(CLI::App& app) {
    const GaConfig defaults;
    app.add_option("--config", config_path,
                   "GA config file with key = value lines");
    app.add_option("--pop", pop, "Population size")
        ->default_str(std::to_string(defaults.population_size));
    app.add_option("--generations", generations, "Maximum generations")
        ->default_str(std::to_string(defaults.max_generations));
    app.add_option("--cx-rate", cx_rate, "Crossover probability")
        ->default_str(std::to_string(defaults.crossover_rate));
    app.add_option("--mut-rate", mut_rate, "Mutation probability")
        ->default_str(std::to_string(defaults.mutation_rate));
    app.add_option("--elitism", elitism, "Survivors copied per generation")
        ->default_str(std::to_string(defaults.elitism_count));
    app.add_option("--target", target, "Stop once cost <= target");
    app.add_option("--time-limit-s", time_limit_s,
                   "Wall-clock limit per run in seconds");
  }

  GaConfig build() const {
    GaConfig cfg;
    if (!config_path.empty()) cfg = parse_config(read_text_file(config_path));
    if (pop) cfg.population_size = *pop;
    if (generations) cfg.max_generations = *generations;
    if (cx_rate) cfg.crossover_rate = *cx_rate;
    if (mut_rate) cfg.mutation_rate = *mut_rate;
    if (elitism) cfg.elitism_count = *elitism;
    if (target) cfg.target_cost = *target;
    if (time_limit_s) cfg.time_limit = Seconds(*time_limit_s);
    cfg.validate();
    return cfg;
  }
};

inline void print_permutation(std::ostream& out, const Permutation& p) {
  const auto labels = p.one_based();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << (i ? " " : "") << labels[i];
  }
  out << "\n";
}

// Entry point behind the qapga executable. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Genetic algorithm for the quadratic assignment problem",
               "qapga"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Run the GA on one instance");
  std::string solve_path;
  std::optional<std::uint64_t> seed;
  std::string solve_format = "text";
  GaFlags solve_flags;
  solve->add_option("instance", solve_path, "QAPLIB .dat file")->required();
  solve->add_option("--seed", seed, "RNG seed")
      ->default_str(std::to_string(GaConfig{}.rng_seed));
  solve->add_option("--format", solve_format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  solve_flags.attach(*solve);

  auto* bench = app.add_subcommand("bench", "Run the benchmark suite");
  std::string dir;
  std::string baselines_path;
  std::string seeds_text = "1..10";
  std::string only;
  std::string format = "csv";
  std::string out_path;
  unsigned jobs = 1;
  bool stop_at_best_known = false;
  GaFlags bench_flags;
  bench->add_option("--dir", dir, "Directory of .dat instances")->required();
  bench->add_option("--baselines", baselines_path,
                    "CSV of best-known values (name,best_known,source)")
      ->required();
  bench->add_option("--seeds", seeds_text, "Seeds, e.g. 1..10 or 1,4,9")
      ->capture_default_str();
  bench->add_option("--instances", only,
                    "Comma-separated instance names (default: all in --dir)");
  bench->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  bench->add_option("--out", out_path, "Write the report here instead of stdout");
  bench->add_option("--jobs", jobs, "Concurrent runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_flag("--stop-at-best-known", stop_at_best_known,
                  "End each run once it reaches the instance's best-known value");
  bench_flags.attach(*bench);

  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum for small n");
  std::string oracle_path;
  std::size_t limit = kDefaultOracleLimit;
  oracle->add_option("instance", oracle_path, "QAPLIB .dat file")->required();
  oracle->add_option("--limit", limit, "Largest n to enumerate")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*solve) {
      auto cfg = solve_flags.build();
      if (seed) cfg.rng_seed = *seed;
      const auto inst = load_qaplib(solve_path);
      const auto result = run(inst, cfg);
      if (solve_format == "json") {
        auto j = result_to_json(result);
        j["instance"] = inst.name();
        j["seed"] = cfg.rng_seed;
        out << j.dump(2) << "\n";
      } else {
        out << "instance: " << inst.name() << " (n=" << inst.size() << ")\n";
        out << "seed: " << cfg.rng_seed << "\n";
        out << "cost: " << result.best.cost << "\n";
        out << "permutation: ";
        print_permutation(out, result.best.perm);
        out << "generations: " << result.generations_run << "\n";
        out << "evaluations: " << result.evaluations << "\n";
        out << "time_s: " << detail::fixed3(result.wall_time.count()) << "\n";
      }
    } else if (*bench) {
      const auto cfg = bench_flags.build();
      const auto seeds = parse_seed_list(seeds_text);
      const auto baselines = load_baselines(read_text_file(baselines_path));
      auto instances = load_instance_dir(dir);
      if (!only.empty()) {
        std::vector<Instance> picked;
        for (auto name : detail::split_fields(only, std::string_view::npos)) {
          auto it = std::find_if(instances.begin(), instances.end(),
                                 [&](const Instance& i) {
                                   return detail::lowercase(i.name()) ==
                                          detail::lowercase(name);
                                 });
          if (it == instances.end()) {
            throw DataError("instance '" + std::string(name) + "' not found in " +
                            dir);
          }
          picked.push_back(*it);
        }
        instances = std::move(picked);
      }
      if (instances.empty()) throw DataError("no .dat instances in " + dir);
      const auto rows = run_suite(instances, baselines, cfg, seeds,
                                  {jobs, stop_at_best_known});
      const auto report = emit_report(
          rows, format == "json" ? ReportFormat::kJson : ReportFormat::kCsv);
      if (out_path.empty()) {
        out << report;
      } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw DataError("cannot write " + out_path);
        file << report;
      }
    } else if (*oracle) {
      const auto inst = load_qaplib(oracle_path);
      const auto result = exhaustive_optimum(inst, limit);
      out << "instance: " << inst.name() << " (n=" << inst.size() << ")\n";
      out << "optimum: " << result.optimum << "\n";
      out << "argmin: ";
      print_permutation(out, result.argmin);
      out << "explored: " << result.explored << "\n";
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace qapga::cli
