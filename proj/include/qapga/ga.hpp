#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qapga/error.hpp"
#include "qapga/instance.hpp"
#include "qapga/random.hpp"

namespace qapga {

// A permutation together with its cost on the instance it was evaluated
// against.
struct Chromosome {
  Permutation perm;
  Cost cost = 0;

  static Chromosome evaluated(const Instance& inst, Permutation perm) {
    const auto cost = evaluate_cost(inst, perm);
    return {std::move(perm), cost};
  }

  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

using Population = std::vector<Chromosome>;
using Seconds = std::chrono::duration<double>;

struct GaConfig {
  std::size_t population_size = 100;
  double crossover_rate = 0.8;
  double mutation_rate = 0.2;
  std::size_t max_generations = 10000;
  std::optional<Cost> target_cost;
  std::optional<Seconds> time_limit;
  std::size_t elitism_count = 1;
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (population_size < 2) {
      throw UsageError("population_size must be at least 2");
    }
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
      throw UsageError("crossover_rate must lie in [0, 1]");
    }
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
      throw UsageError("mutation_rate must lie in [0, 1]");
    }
    if (max_generations < 1) {
      throw UsageError("max_generations must be positive");
    }
    // evolve_step also accepts elitism_count == population_size (a pure
    // copy); run() requires room for at least one offspring.
    if (elitism_count >= population_size) {
      throw UsageError("elitism_count must be smaller than population_size");
    }
    if (time_limit && time_limit->count() < 0) {
      throw UsageError("time_limit must be non-negative");
    }
  }

  friend bool operator==(const GaConfig&, const GaConfig&) = default;
};

struct GaResult {
  Chromosome best;
  std::size_t generations_run = 0;
  std::size_t evaluations = 0;
  Seconds wall_time{0};
  // history[g] is the best cost seen up to and including generation g;
  // history[0] covers the initial population.
  std::vector<Cost> history;
  // Mutations requested on chromosomes too short to swap (n < 2).
  std::size_t degenerate_mutations = 0;
};

// Counters accumulated by evolve_step.
struct EvolveStats {
  std::size_t evaluations = 0;
  std::size_t degenerate_mutations = 0;
};

// Uniform random permutation by Fisher-Yates.
inline Permutation random_permutation(std::size_t n, Rng& rng) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
  return make_permutation_unchecked(std::move(v));
}

inline Population init_population(const Instance& inst, std::size_t size,
                                  Rng& rng) {
  if (size < 2) throw UsageError("population size must be at least 2");
  Population pop;
  pop.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    pop.push_back(
        Chromosome::evaluated(inst, random_permutation(inst.size(), rng)));
  }
  return pop;
}

namespace detail {

// Child keeps `fixed`'s genes on [cut1, cut2); the other positions are
// filled left to right with the missing genes in the order they occur in
// `order`.
inline Permutation order_fill(const Permutation& fixed,
                              const Permutation& order, std::size_t cut1,
                              std::size_t cut2) {
  const auto n = fixed.size();
  std::vector<int> child(n, -1);
  std::vector<bool> used(n, false);
  for (std::size_t i = cut1; i < cut2; ++i) {
    child[i] = fixed[i];
    used[static_cast<std::size_t>(fixed[i])] = true;
  }
  std::size_t slot = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const int gene = order[j];
    if (used[static_cast<std::size_t>(gene)]) continue;
    if (slot == cut1) slot = cut2;
    child[slot++] = gene;
  }
  return make_permutation_unchecked(std::move(child));
}

}  // namespace detail

// Two-point order-preserving crossover. Child 1 holds p1 fixed on
// [cut1, cut2) and takes the rest in p2's order; child 2 is the mirror.
inline std::pair<Permutation, Permutation> order_crossover_two_point(
    const Permutation& p1, const Permutation& p2, std::size_t cut1,
    std::size_t cut2) {
  if (p1.size() != p2.size()) {
    throw UsageError("crossover parents differ in length (" +
                     std::to_string(p1.size()) + " vs " +
                     std::to_string(p2.size()) + ")");
  }
  if (cut1 > cut2 || cut2 > p1.size()) {
    throw UsageError("crossover cuts [" + std::to_string(cut1) + ", " +
                     std::to_string(cut2) + ") out of range for length " +
                     std::to_string(p1.size()));
  }
  return {detail::order_fill(p1, p2, cut1, cut2),
          detail::order_fill(p2, p1, cut1, cut2)};
}

// Two distinct positions in [0, n), uniform over ordered pairs; nullopt
// without touching rng when n < 2.
inline std::optional<std::pair<std::size_t, std::size_t>> draw_swap_positions(
    std::size_t n, Rng& rng) {
  if (n < 2) return std::nullopt;
  const auto i = static_cast<std::size_t>(rng.below(n));
  auto k = static_cast<std::size_t>(rng.below(n - 1));
  if (k >= i) ++k;
  return std::pair{i, k};
}

// Exchanges two random distinct positions of p and returns them.
inline std::optional<std::pair<std::size_t, std::size_t>> mutate_swap(
    Permutation& p, Rng& rng) {
  auto positions = draw_swap_positions(p.size(), rng);
  if (positions) p.swap_positions(positions->first, positions->second);
  return positions;
}

inline Permutation swap_mutation(Permutation p, Rng& rng) {
  mutate_swap(p, rng);
  return p;
}

// Roulette weights for a minimization problem: w_i = C_max + C_min - C_i,
// normalized. Lower cost always gets strictly more weight. When C_min is 0
// it is replaced by 1 so the worst chromosome keeps a positive share.
inline std::vector<double> selection_weights(std::span<const Cost> costs) {
  if (costs.empty()) throw UsageError("cannot weight an empty population");
  const auto [lo_it, hi_it] = std::minmax_element(costs.begin(), costs.end());
  const Cost lo = *lo_it;
  const Cost hi = *hi_it;
  if (lo < 0) throw UsageError("costs must be non-negative");
  std::vector<double> w(costs.size());
  if (lo == hi) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(costs.size()));
    return w;
  }
  const Cost floor = std::max<Cost>(lo, 1);
  long double total = 0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    const auto raw = static_cast<long double>(hi - costs[i]) + floor;
    w[i] = static_cast<double>(raw);
    total += raw;
  }
  for (auto& x : w) x = static_cast<double>(x / total);
  return w;
}

inline std::vector<double> selection_weights(const Population& pop) {
  std::vector<Cost> costs(pop.size());
  std::transform(pop.begin(), pop.end(), costs.begin(),
                 [](const Chromosome& c) { return c.cost; });
  return selection_weights(costs);
}

// Cumulative table over selection weights; one spin costs one uniform draw.
class RouletteWheel {
 public:
  explicit RouletteWheel(std::span<const double> weights)
      : cumulative_(weights.size()) {
    if (weights.empty()) throw UsageError("roulette wheel needs weights");
    double sum = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] < 0) throw UsageError("negative selection weight");
      sum += weights[i];
      cumulative_[i] = sum;
      if (weights[i] > 0) last_positive_ = i;
    }
    if (!(sum > 0)) throw UsageError("selection weights sum to zero");
  }

  std::size_t spin(Rng& rng) const {
    const double ball = rng.unit() * cumulative_.back();
    const auto it =
        std::upper_bound(cumulative_.begin(), cumulative_.end(), ball);
    const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
    // Rounding can push the ball to the very end of the table.
    return std::min(idx, last_positive_);
  }

  std::size_t size() const noexcept { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
  std::size_t last_positive_ = 0;
};

inline const Chromosome& roulette_select(const Population& pop,
                                         std::span<const double> weights,
                                         Rng& rng) {
  if (pop.size() != weights.size()) {
    throw UsageError("population has " + std::to_string(pop.size()) +
                     " members but " + std::to_string(weights.size()) +
                     " weights were given");
  }
  return pop[RouletteWheel(weights).spin(rng)];
}

// Produces the next generation. The elitism_count cheapest chromosomes
// survive unchanged (ties broken by position); the rest are offspring of
// roulette-selected parent pairs.
//
// Random draws per offspring pair, in order: parent 1 spin, parent 2 spin,
// crossover coin, two cut points (only if crossing), then for each kept
// child its mutation coin followed by two swap positions (only if
// mutating and n >= 2).
inline Population evolve_step(const Instance& inst, const Population& pop,
                              const GaConfig& cfg, Rng& rng,
                              EvolveStats* stats = nullptr) {
  if (pop.size() != cfg.population_size) {
    throw UsageError("population has " + std::to_string(pop.size()) +
                     " members, config expects " +
                     std::to_string(cfg.population_size));
  }
  if (cfg.elitism_count > pop.size()) {
    throw UsageError("elitism_count exceeds population size");
  }
  const auto n = inst.size();
  EvolveStats local;

  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return pop[a].cost < pop[b].cost;
                   });

  Population next;
  next.reserve(pop.size());
  for (std::size_t e = 0; e < cfg.elitism_count; ++e) {
    next.push_back(pop[order[e]]);
  }
  if (next.size() == pop.size()) return next;

  const auto weights = selection_weights(pop);
  const RouletteWheel wheel(weights);

  while (next.size() < pop.size()) {
    const auto& mother = pop[wheel.spin(rng)];
    const auto& father = pop[wheel.spin(rng)];

    Chromosome kids[2];
    bool crossed = false;
    if (rng.chance(cfg.crossover_rate)) {
      auto cut1 = static_cast<std::size_t>(rng.below(n + 1));
      auto cut2 = static_cast<std::size_t>(rng.below(n + 1));
      if (cut1 > cut2) std::swap(cut1, cut2);
      auto [c1, c2] =
          order_crossover_two_point(mother.perm, father.perm, cut1, cut2);
      kids[0].perm = std::move(c1);
      kids[1].perm = std::move(c2);
      crossed = true;
    } else {
      kids[0] = mother;
      kids[1] = father;
    }

    const auto keep = std::min<std::size_t>(2, pop.size() - next.size());
    for (std::size_t c = 0; c < keep; ++c) {
      auto& kid = kids[c];
      if (rng.chance(cfg.mutation_rate)) {
        const auto swap = draw_swap_positions(n, rng);
        if (!swap) {
          ++local.degenerate_mutations;
        } else {
          if (!crossed) {
            kid.cost =
                swap_delta(inst, kid.perm, kid.cost, swap->first, swap->second);
            ++local.evaluations;
          }
          kid.perm.swap_positions(swap->first, swap->second);
        }
      }
      if (crossed) {
        kid.cost = evaluate_cost(inst, kid.perm);
        ++local.evaluations;
      }
      next.push_back(std::move(kid));
    }
  }

  if (stats) {
    stats->evaluations += local.evaluations;
    stats->degenerate_mutations += local.degenerate_mutations;
  }
  return next;
}

namespace detail {

inline const Chromosome& cheapest(const Population& pop) {
  return *std::min_element(
      pop.begin(), pop.end(),
      [](const Chromosome& a, const Chromosome& b) { return a.cost < b.cost; });
}

}  // namespace detail

// Runs generations until max_generations, the target cost, or the time
// limit is reached. Returns the best chromosome ever seen.
inline GaResult run(const Instance& inst, const GaConfig& cfg) {
  cfg.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  Rng rng(cfg.rng_seed);
  GaResult result;
  auto pop = init_population(inst, cfg.population_size, rng);
  result.evaluations = pop.size();
  result.best = detail::cheapest(pop);
  result.history.push_back(result.best.cost);

  EvolveStats stats;
  while (result.generations_run < cfg.max_generations) {
    if (cfg.target_cost && result.best.cost <= *cfg.target_cost) break;
    if (cfg.time_limit && Clock::now() - start >= *cfg.time_limit) break;

    pop = evolve_step(inst, pop, cfg, rng, &stats);
    ++result.generations_run;
    const auto& gen_best = detail::cheapest(pop);
    if (gen_best.cost < result.best.cost) result.best = gen_best;
    result.history.push_back(result.best.cost);
  }

  result.evaluations += stats.evaluations;
  result.degenerate_mutations = stats.degenerate_mutations;
  result.wall_time = Clock::now() - start;
  return result;
}

}  // namespace qapga
