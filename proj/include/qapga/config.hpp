#pragma once

#include <charconv>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qapga/error.hpp"
#include "qapga/ga.hpp"

namespace qapga {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T v{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw UsageError("invalid value '" + std::string(text) + "' for " +
                     std::string(what));
  }
  return v;
}

}  // namespace detail

// Reads `key = value` lines over `base`. Blank lines and lines starting
// with '#' are skipped. Recognized keys: population_size, crossover_rate,
// mutation_rate, max_generations, target_cost, time_limit_s,
// elitism_count, rng_seed. Throws DataError naming the offending line.
inline GaConfig parse_config(std::string_view text, GaConfig base = {}) {
  using detail::parse_number;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    auto line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{}
                                         : text.substr(eol + 1);
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;

    const auto where = "config line " + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DataError(where + ": expected 'key = value'");
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    try {
      if (key == "population_size") {
        base.population_size = parse_number<std::size_t>(value, key);
      } else if (key == "crossover_rate") {
        base.crossover_rate = parse_number<double>(value, key);
      } else if (key == "mutation_rate") {
        base.mutation_rate = parse_number<double>(value, key);
      } else if (key == "max_generations") {
        base.max_generations = parse_number<std::size_t>(value, key);
      } else if (key == "target_cost") {
        base.target_cost = parse_number<Cost>(value, key);
      } else if (key == "time_limit_s") {
        base.time_limit = Seconds(parse_number<double>(value, key));
      } else if (key == "elitism_count") {
        base.elitism_count = parse_number<std::size_t>(value, key);
      } else if (key == "rng_seed") {
        base.rng_seed = parse_number<std::uint64_t>(value, key);
      } else {
        throw UsageError("unknown key '" + std::string(key) + "'");
      }
    } catch (const UsageError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return base;
}

inline std::string render_config(const GaConfig& cfg) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "population_size = " << cfg.population_size << "\n"
      << "crossover_rate = " << cfg.crossover_rate << "\n"
      << "mutation_rate = " << cfg.mutation_rate << "\n"
      << "max_generations = " << cfg.max_generations << "\n";
  if (cfg.target_cost) out << "target_cost = " << *cfg.target_cost << "\n";
  if (cfg.time_limit) {
    out << "time_limit_s = " << cfg.time_limit->count() << "\n";
  }
  out << "elitism_count = " << cfg.elitism_count << "\n"
      << "rng_seed = " << cfg.rng_seed << "\n";
  return out.str();
}

// Serializes a result with the permutation in 1-based labels. Wall time is
// the only field that varies between identical runs, so it can be left out.
inline nlohmann::json result_to_json(const GaResult& r,
                                     bool include_wall_time = true) {
  nlohmann::json j;
  j["best_cost"] = r.best.cost;
  j["best_permutation"] = r.best.perm.one_based();
  j["generations"] = r.generations_run;
  j["evaluations"] = r.evaluations;
  j["history"] = r.history;
  j["degenerate_mutations"] = r.degenerate_mutations;
  if (include_wall_time) j["wall_time_s"] = r.wall_time.count();
  return j;
}

}  // namespace qapga
