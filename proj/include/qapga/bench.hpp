#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "qapga/config.hpp"
#include "qapga/error.hpp"
#include "qapga/ga.hpp"
#include "qapga/instance.hpp"

namespace qapga {

struct BaselineRecord {
  std::string instance_name;
  Cost best_known = 0;
  std::string source;

  friend bool operator==(const BaselineRecord&, const BaselineRecord&) = default;
};

namespace detail {

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Splits into lines, dropping a trailing '\r' from each.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    auto line = text.substr(0, eol);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (eol == std::string_view::npos) break;
    text.remove_prefix(eol + 1);
  }
  return lines;
}

inline std::vector<std::string_view> split_fields(std::string_view line,
                                                  std::size_t max_fields) {
  std::vector<std::string_view> fields;
  while (fields.size() + 1 < max_fields) {
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) break;
    fields.push_back(trim(line.substr(0, comma)));
    line.remove_prefix(comma + 1);
  }
  fields.push_back(trim(line));
  return fields;
}

}  // namespace detail

// Parses `name,best_known,source` CSV. The source column may itself contain
// commas. Names must be unique ignoring case.
inline std::vector<BaselineRecord> load_baselines(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || detail::trim(lines[0]) != "name,best_known,source") {
    throw DataError(
        "baselines: expected header 'name,best_known,source' on line 1");
  }
  std::vector<BaselineRecord> out;
  std::vector<std::string> seen;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (detail::trim(lines[ln]).empty()) continue;
    const auto where = "baselines line " + std::to_string(ln + 1);
    const auto fields = detail::split_fields(lines[ln], 3);
    if (fields.size() != 3 || fields[0].empty()) {
      throw DataError(where + ": expected name,best_known,source");
    }
    Cost value = 0;
    try {
      value = detail::parse_number<Cost>(fields[1], "best_known");
    } catch (const UsageError& e) {
      throw DataError(where + ": " + e.what());
    }
    if (value <= 0) {
      throw DataError(where + ": best_known must be positive, got " +
                      std::to_string(value));
    }
    auto key = detail::lowercase(fields[0]);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw DataError(where + ": duplicate baseline '" +
                      std::string(fields[0]) + "'");
    }
    seen.push_back(std::move(key));
    out.push_back({std::string(fields[0]), value, std::string(fields[2])});
  }
  return out;
}

inline const BaselineRecord* find_baseline(
    const std::vector<BaselineRecord>& records, std::string_view name) {
  const auto key = detail::lowercase(name);
  for (const auto& r : records) {
    if (detail::lowercase(r.instance_name) == key) return &r;
  }
  return nullptr;
}

// Relative excess (found - known) / known, kept as the exact ratio of two
// integers.
class Gap {
 public:
  Gap(Cost found, Cost known) : excess_(found - known), known_(known) {}

  double value() const {
    return static_cast<double>(excess_) / static_cast<double>(known_);
  }
  bool is_zero() const noexcept { return excess_ == 0; }

  // The ratio rounded half away from zero to `decimals` places, computed in
  // integer arithmetic.
  std::string to_string(int decimals = 6) const {
    __int128 scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    const bool negative = excess_ < 0;
    const __int128 num = static_cast<__int128>(negative ? -excess_ : excess_) *
                         scale;
    const __int128 q = (2 * num + known_) / (2 * static_cast<__int128>(known_));
    const auto whole = static_cast<long long>(q / scale);
    std::string out = (negative && q != 0) ? "-" : "";
    out += std::to_string(whole);
    if (decimals > 0) {
      auto frac = std::to_string(static_cast<long long>(q % scale));
      out += "." + std::string(decimals - frac.size(), '0') + frac;
    }
    return out;
  }

  friend bool operator==(const Gap&, const Gap&) = default;

 private:
  Cost excess_;
  Cost known_;
};

inline Gap compute_gap(Cost best_found, Cost best_known) {
  if (best_known <= 0) {
    throw UsageError("best-known value must be positive, got " +
                     std::to_string(best_known));
  }
  return Gap(best_found, best_known);
}

struct BenchRow {
  std::string instance_name;
  std::vector<std::uint64_t> seeds;
  Cost best_found = 0;
  Cost best_known = 0;
  std::uint64_t best_seed = 0;
  // Generations run by best_seed (the first seed reaching best_found).
  std::size_t generations = 0;
  std::vector<Seconds> seed_times;

  std::size_t seeds_run() const noexcept { return seeds.size(); }
  Gap gap() const { return compute_gap(best_found, best_known); }
  Seconds total_time() const {
    Seconds t{0};
    for (auto s : seed_times) t += s;
    return t;
  }
  Seconds max_seed_time() const {
    Seconds t{0};
    for (auto s : seed_times) t = std::max(t, s);
    return t;
  }
};

// Every field except the clock readings.
inline bool same_except_timing(const BenchRow& a, const BenchRow& b) {
  return a.instance_name == b.instance_name && a.seeds == b.seeds &&
         a.best_found == b.best_found && a.best_known == b.best_known &&
         a.best_seed == b.best_seed && a.generations == b.generations &&
         a.seed_times.size() == b.seed_times.size();
}

struct SuiteOptions {
  unsigned jobs = 1;
  // Use each instance's best-known value as its target cost.
  bool stop_at_best_known = false;
};

// Runs the GA once per (instance, seed) with cfg.rng_seed replaced by the
// seed. Up to `opts.jobs` runs execute concurrently; rows come back in
// input order and do not depend on completion order.
inline std::vector<BenchRow> run_suite(
    const std::vector<Instance>& instances,
    const std::vector<BaselineRecord>& baselines, const GaConfig& cfg,
    const std::vector<std::uint64_t>& seeds, SuiteOptions opts = {}) {
  if (seeds.empty()) throw UsageError("seed list must not be empty");
  cfg.validate();

  std::vector<const BaselineRecord*> known;
  for (const auto& inst : instances) {
    const auto* rec = find_baseline(baselines, inst.name());
    if (!rec) {
      throw DataError("no baseline record for instance '" + inst.name() + "'");
    }
    known.push_back(rec);
  }

  const auto tasks = instances.size() * seeds.size();
  std::vector<GaResult> results(tasks);
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto t = next++; t < tasks; t = next++) {
      try {
        auto run_cfg = cfg;
        run_cfg.rng_seed = seeds[t % seeds.size()];
        if (opts.stop_at_best_known) {
          run_cfg.target_cost = known[t / seeds.size()]->best_known;
        }
        results[t] = run(instances[t / seeds.size()], run_cfg);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const auto jobs = std::max(
      1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(tasks)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    BenchRow row;
    row.instance_name = instances[i].name();
    row.seeds = seeds;
    row.best_known = known[i]->best_known;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const auto& r = results[i * seeds.size() + s];
      if (s == 0 || r.best.cost < row.best_found) {
        row.best_found = r.best.cost;
        row.best_seed = seeds[s];
        row.generations = r.generations_run;
      }
      row.seed_times.push_back(r.wall_time);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

enum class ReportFormat { kCsv, kJson };

inline constexpr std::string_view kReportCsvHeader =
    "instance,seeds,best_found,best_known,gap,generations,total_time_s";

namespace detail {

inline std::string fixed3(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", seconds);
  return buf;
}

inline double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

}  // namespace detail

inline std::string emit_report(const std::vector<BenchRow>& rows,
                               ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    std::string out(kReportCsvHeader);
    out += "\n";
    for (const auto& r : rows) {
      out += r.instance_name + "," + std::to_string(r.seeds_run()) + "," +
             std::to_string(r.best_found) + "," +
             std::to_string(r.best_known) + "," + r.gap().to_string(6) + "," +
             std::to_string(r.generations) + "," +
             detail::fixed3(r.total_time().count()) + "\n";
    }
    return out;
  }

  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json times = nlohmann::json::array();
    for (auto t : r.seed_times) times.push_back(detail::round_to(t.count(), 3));
    arr.push_back({
        {"instance", r.instance_name},
        {"seeds", r.seeds_run()},
        {"seed_list", r.seeds},
        {"best_found", r.best_found},
        {"best_known", r.best_known},
        {"gap", std::stod(r.gap().to_string(6))},
        {"best_seed", r.best_seed},
        {"generations", r.generations},
        {"seed_times_s", times},
        {"total_time_s", detail::round_to(r.total_time().count(), 3)},
    });
  }
  return arr.dump(2) + "\n";
}

// Reads back an emitted CSV report. The CSV carries only the seed count
// and the total time, so seeds are numbered 1..k with zero per-seed times
// except the first, which holds the total.
inline std::vector<BenchRow> parse_report_csv(std::string_view text) {
  using detail::parse_number;
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines[0] != kReportCsvHeader) {
    throw DataError("report: unexpected CSV header");
  }
  std::vector<BenchRow> rows;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const auto where = "report line " + std::to_string(ln + 1);
    const auto f = detail::split_fields(lines[ln], 8);
    if (f.size() != 7) throw DataError(where + ": expected 7 columns");
    try {
      BenchRow r;
      r.instance_name = std::string(f[0]);
      const auto k = parse_number<std::size_t>(f[1], "seeds");
      for (std::size_t s = 1; s <= k; ++s) r.seeds.push_back(s);
      r.best_found = parse_number<Cost>(f[2], "best_found");
      r.best_known = parse_number<Cost>(f[3], "best_known");
      if (r.gap().to_string(6) != f[4]) {
        throw DataError(where + ": gap column disagrees with costs");
      }
      r.generations = parse_number<std::size_t>(f[5], "generations");
      r.seed_times.assign(k, Seconds{0});
      if (k > 0) {
        r.seed_times[0] = Seconds(parse_number<double>(f[6], "total_time_s"));
      }
      rows.push_back(std::move(r));
    } catch (const UsageError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return rows;
}

inline std::vector<BenchRow> parse_report_json(std::string_view text) {
  std::vector<BenchRow> rows;
  try {
    const auto arr = nlohmann::json::parse(text);
    for (const auto& j : arr) {
      BenchRow r;
      r.instance_name = j.at("instance").get<std::string>();
      r.seeds = j.at("seed_list").get<std::vector<std::uint64_t>>();
      r.best_found = j.at("best_found").get<Cost>();
      r.best_known = j.at("best_known").get<Cost>();
      r.best_seed = j.at("best_seed").get<std::uint64_t>();
      r.generations = j.at("generations").get<std::size_t>();
      for (double t : j.at("seed_times_s")) r.seed_times.emplace_back(t);
      rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report: ") + e.what());
  }
  return rows;
}

// Loads every *.dat file in `dir`, sorted by file name.
inline std::vector<Instance> load_instance_dir(
    const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw DataError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".dat") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Instance> out;
  for (const auto& f : files) out.push_back(load_qaplib(f));
  return out;
}

}  // namespace qapga
