#pragma once

#include <cassert>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qapga/error.hpp"

namespace qapga {

using Cost = std::int64_t;

// Dense row-major n x n integer matrix.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0) {}

  SquareMatrix(std::size_t n, std::vector<std::int64_t> row_major)
      : n_(n), data_(std::move(row_major)) {
    if (data_.size() != n_ * n_) {
      throw DataError("matrix needs " + std::to_string(n_ * n_) +
                      " entries, got " + std::to_string(data_.size()));
    }
  }

  SquareMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows)
      : n_(rows.size()) {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw DataError("matrix is not square");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  std::size_t size() const noexcept { return n_; }

  std::int64_t operator()(std::size_t i, std::size_t k) const noexcept {
    return data_[i * n_ + k];
  }
  std::int64_t& operator()(std::size_t i, std::size_t k) noexcept {
    return data_[i * n_ + k];
  }

  std::span<const std::int64_t> row(std::size_t i) const noexcept {
    return {data_.data() + i * n_, n_};
  }
  std::span<const std::int64_t> values() const noexcept { return data_; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> data_;
};

// A QAP instance: n facilities, n locations, flow between facilities and
// distance between locations. Immutable once constructed.
class Instance {
 public:
  Instance(std::string name, SquareMatrix flow, SquareMatrix dist)
      : name_(std::move(name)), flow_(std::move(flow)), dist_(std::move(dist)) {
    if (flow_.size() == 0) throw DataError("instance size must be at least 1");
    if (flow_.size() != dist_.size()) {
      throw DataError("flow matrix is " + std::to_string(flow_.size()) +
                      "x" + std::to_string(flow_.size()) +
                      " but distance matrix is " +
                      std::to_string(dist_.size()) + "x" +
                      std::to_string(dist_.size()) +
                      "; facility and location counts must match");
    }
    for (const auto* m : {&flow_, &dist_}) {
      for (auto v : m->values()) {
        if (v < 0) throw DataError("matrix entries must be non-negative");
      }
    }
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return flow_.size(); }
  const SquareMatrix& flow() const noexcept { return flow_; }
  const SquareMatrix& dist() const noexcept { return dist_; }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::string name_;
  SquareMatrix flow_;
  SquareMatrix dist_;
};

// Assignment of facilities to locations: at(i) is the location of
// facility i. Always a bijection on {0..n-1}.
class Permutation {
 public:
  Permutation() = default;

  // Throws DataError unless `assign` is a bijection on {0..n-1}.
  explicit Permutation(std::vector<int> assign) : assign_(std::move(assign)) {
    if (!is_bijection(assign_)) {
      throw DataError("assignment is not a permutation of 0.." +
                      std::to_string(static_cast<long>(assign_.size()) - 1));
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return Permutation(Trusted{}, std::move(v));
  }

  // Builds from 1-based location labels.
  static Permutation from_one_based(std::span<const int> labels) {
    std::vector<int> v(labels.begin(), labels.end());
    for (auto& x : v) --x;
    return Permutation(std::move(v));
  }

  static bool is_bijection(std::span<const int> v) {
    std::vector<bool> seen(v.size(), false);
    for (int x : v) {
      if (x < 0 || static_cast<std::size_t>(x) >= v.size() || seen[x]) {
        return false;
      }
      seen[x] = true;
    }
    return true;
  }

  std::size_t size() const noexcept { return assign_.size(); }
  int operator[](std::size_t i) const noexcept { return assign_[i]; }
  std::span<const int> values() const noexcept { return assign_; }

  std::vector<int> one_based() const {
    std::vector<int> v(assign_);
    for (auto& x : v) ++x;
    return v;
  }

  void swap_positions(std::size_t i, std::size_t k) noexcept {
    std::swap(assign_[i], assign_[k]);
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  struct Trusted {};
  Permutation(Trusted, std::vector<int> assign) : assign_(std::move(assign)) {
    assert(is_bijection(assign_));
  }
  friend Permutation make_permutation_unchecked(std::vector<int>);

  std::vector<int> assign_;
};

// For operators that construct bijections by construction; checked only in
// debug builds.
inline Permutation make_permutation_unchecked(std::vector<int> assign) {
  return Permutation(Permutation::Trusted{}, std::move(assign));
}

namespace detail {

inline Cost checked_mul(Cost a, Cost b) {
  Cost out;
  if (__builtin_mul_overflow(a, b, &out)) throw DataError("cost overflow");
  return out;
}

inline Cost checked_add(Cost a, Cost b) {
  Cost out;
  if (__builtin_add_overflow(a, b, &out)) throw DataError("cost overflow");
  return out;
}

inline void require_same_size(const Instance& inst, const Permutation& p) {
  if (p.size() != inst.size()) {
    throw UsageError("permutation has length " + std::to_string(p.size()) +
                     " but instance size is " + std::to_string(inst.size()));
  }
}

}  // namespace detail

// Sum over all ordered facility pairs (i, k), diagonal included, of
// flow(i, k) * dist(p[i], p[k]).
inline Cost evaluate_cost(const Instance& inst, const Permutation& p) {
  detail::require_same_size(inst, p);
  const auto n = inst.size();
  const auto& a = inst.flow();
  const auto& b = inst.dist();
  Cost total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto flow_row = a.row(i);
    const auto dist_row = b.row(static_cast<std::size_t>(p[i]));
    for (std::size_t k = 0; k < n; ++k) {
      if (flow_row[k] == 0) continue;
      total = detail::checked_add(
          total, detail::checked_mul(flow_row[k], dist_row[p[k]]));
    }
  }
  return total;
}

// Cost of p with the locations of facilities r and s exchanged, given
// current == evaluate_cost(inst, p). O(n).
inline Cost swap_delta(const Instance& inst, const Permutation& p,
                       Cost current, std::size_t r, std::size_t s) {
  using detail::checked_add;
  using detail::checked_mul;
  detail::require_same_size(inst, p);
  const auto n = inst.size();
  if (r >= n || s >= n) {
    throw UsageError("swap index out of range for instance of size " +
                     std::to_string(n));
  }
  if (r == s) throw UsageError("swap indices must differ");

  const auto& a = inst.flow();
  const auto& b = inst.dist();
  const auto pr = static_cast<std::size_t>(p[r]);
  const auto ps = static_cast<std::size_t>(p[s]);

  Cost d = checked_add(
      checked_mul(a(r, r) - a(s, s), b(ps, ps) - b(pr, pr)),
      checked_mul(a(r, s) - a(s, r), b(ps, pr) - b(pr, ps)));
  for (std::size_t k = 0; k < n; ++k) {
    if (k == r || k == s) continue;
    const auto pk = static_cast<std::size_t>(p[k]);
    d = checked_add(d, checked_mul(a(k, r) - a(k, s), b(pk, ps) - b(pk, pr)));
    d = checked_add(d, checked_mul(a(r, k) - a(s, k), b(ps, pk) - b(pr, pk)));
  }
  return checked_add(current, d);
}

// Largest instance the parser will allocate for.
inline constexpr std::size_t kMaxInstanceSize = 4096;

// Reads a QAPLIB problem: n, then n*n flow entries, then n*n distance
// entries, all separated by arbitrary whitespace.
inline Instance parse_qaplib(std::string_view text, std::string name = "") {
  std::size_t pos = 0;
  TextPosition at{1, 1};

  auto advance = [&](std::size_t count) {
    for (std::size_t i = 0; i < count; ++i, ++pos) {
      if (text[pos] == '\n') {
        ++at.line;
        at.column = 1;
      } else {
        ++at.column;
      }
    }
  };
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  // Next whitespace-delimited token; empty at end of input.
  auto next_token = [&](TextPosition& start) -> std::string_view {
    std::size_t skip = 0;
    while (pos + skip < text.size() && is_space(text[pos + skip])) ++skip;
    advance(skip);
    start = at;
    std::size_t len = 0;
    while (pos + len < text.size() && !is_space(text[pos + len])) ++len;
    auto tok = text.substr(pos, len);
    advance(len);
    return tok;
  };
  auto to_int = [](std::string_view tok, TextPosition where) {
    std::int64_t v = 0;
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc::result_out_of_range) {
      throw ParseError("integer out of range '" + std::string(tok) + "'",
                       where);
    }
    if (ec != std::errc{} || ptr != last) {
      throw ParseError("malformed token '" + std::string(tok) +
                           "', expected an integer",
                       where);
    }
    return v;
  };

  TextPosition start;
  auto tok = next_token(start);
  if (tok.empty()) throw ParseError("missing instance size", start);
  const auto n = to_int(tok, start);
  if (n < 0) throw ParseError("negative instance size " + std::to_string(n), start);
  if (n == 0) throw ParseError("instance size must be at least 1", start);
  if (static_cast<std::size_t>(n) > kMaxInstanceSize) {
    throw ParseError("instance size " + std::to_string(n) +
                         " exceeds supported maximum " +
                         std::to_string(kMaxInstanceSize),
                     start);
  }

  const auto cells = static_cast<std::size_t>(n * n);
  std::vector<std::int64_t> entries;
  entries.reserve(2 * cells);
  while (entries.size() < 2 * cells) {
    tok = next_token(start);
    if (tok.empty()) {
      throw ParseError("expected " + std::to_string(2 * cells) +
                           " matrix entries, found " +
                           std::to_string(entries.size()),
                       start);
    }
    const auto v = to_int(tok, start);
    if (v < 0) {
      throw ParseError("negative matrix entry " + std::to_string(v), start);
    }
    entries.push_back(v);
  }
  tok = next_token(start);
  if (!tok.empty()) {
    throw ParseError("trailing data '" + std::string(tok) +
                         "' after " + std::to_string(2 * cells) +
                         " matrix entries",
                     start);
  }

  std::vector<std::int64_t> flow(entries.begin(), entries.begin() + cells);
  std::vector<std::int64_t> dist(entries.begin() + cells, entries.end());
  const auto size = static_cast<std::size_t>(n);
  return Instance(std::move(name), SquareMatrix(size, std::move(flow)),
                  SquareMatrix(size, std::move(dist)));
}

// Canonical QAPLIB text: n, blank line, flow rows, blank line, distance rows.
inline std::string render_qaplib(const Instance& inst) {
  std::ostringstream out;
  out << inst.size() << "\n";
  for (const auto* m : {&inst.flow(), &inst.dist()}) {
    out << "\n";
    for (std::size_t i = 0; i < m->size(); ++i) {
      const auto row = m->row(i);
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (k) out << ' ';
        out << row[k];
      }
      out << "\n";
    }
  }
  return out.str();
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Loads a .dat file; the instance is named after the file stem.
inline Instance load_qaplib(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  try {
    return parse_qaplib(text, path.stem().string());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace qapga
