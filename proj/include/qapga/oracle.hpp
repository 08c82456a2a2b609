#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "qapga/error.hpp"
#include "qapga/instance.hpp"
#include "qapga/random.hpp"

namespace qapga {

struct OracleResult {
  Cost optimum = 0;
  Permutation argmin;  // lexicographically smallest optimal assignment
  std::uint64_t explored = 0;
};

inline constexpr std::size_t kDefaultOracleLimit = 10;

class OracleLimitError : public DataError {
 public:
  OracleLimitError(std::size_t n, std::size_t limit)
      : DataError("instance size " + std::to_string(n) +
                  " exceeds exhaustive search limit " +
                  std::to_string(limit)) {}
};

// Brute force over all n! assignments in lexicographic order, full cost
// evaluation for each. Refuses instances larger than `limit`.
inline OracleResult exhaustive_optimum(const Instance& inst,
                                       std::size_t limit = kDefaultOracleLimit) {
  const auto n = inst.size();
  if (n > limit) throw OracleLimitError(n, limit);

  std::vector<int> current(n);
  std::iota(current.begin(), current.end(), 0);
  OracleResult out;
  bool first = true;
  do {
    const auto perm = make_permutation_unchecked(current);
    const auto cost = evaluate_cost(inst, perm);
    ++out.explored;
    // Strict comparison keeps the earliest, i.e. lexicographically
    // smallest, optimum.
    if (first || cost < out.optimum) {
      out.optimum = cost;
      out.argmin = perm;
      first = false;
    }
  } while (std::next_permutation(current.begin(), current.end()));
  return out;
}

struct RandomInstanceOptions {
  std::int64_t max_entry = 100;
  bool symmetric = false;
  bool zero_diagonal = false;
};

// Flow then distance, each filled row-major with uniform entries in
// [0, max_entry]. Symmetric matrices mirror the upper triangle.
inline Instance random_instance(std::size_t n, RandomInstanceOptions opts,
                                Rng& rng, std::string name = "random") {
  if (n < 1) throw UsageError("random instance size must be at least 1");
  if (opts.max_entry < 0) throw UsageError("max_entry must be non-negative");
  const auto span = static_cast<std::uint64_t>(opts.max_entry) + 1;
  auto fill = [&] {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (opts.symmetric && k < i) {
          m(i, k) = m(k, i);
        } else if (opts.zero_diagonal && i == k) {
          m(i, k) = 0;
        } else {
          m(i, k) = static_cast<std::int64_t>(rng.below(span));
        }
      }
    }
    return m;
  };
  auto flow = fill();
  auto dist = fill();
  return Instance(std::move(name), std::move(flow), std::move(dist));
}

}  // namespace qapga
