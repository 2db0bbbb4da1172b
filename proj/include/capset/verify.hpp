#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "capset/trivec.hpp"

namespace capset {

struct VerifyOptions {
  // Largest ambient space (in bits, one per point of F_3^n) that may be
  // materialized as a bitmap.
  std::uint64_t memory_budget_bits = std::uint64_t{1} << 31;
  // 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct VerificationReport {
  bool verdict = false;
  // Set when the capset property fails: P + Q + R = 0, all three in the set.
  std::optional<std::array<Point, 3>> triple;
  // Set when completeness fails: smallest-encoding point outside S and its cover.
  std::optional<Point> uncovered;
  std::uint64_t pairs_examined = 0;
  std::uint64_t coverage_size = 0;  // |S u Cover|, completeness checks only
  std::uint64_t wall_time_ms = 0;
};

// True iff no unordered pair of S has its third point in S. The witness is the
// violating pair (i, j) of smallest index in encoding order, whatever the
// thread count.
VerificationReport is_capset(const CapSet& set, const VerifyOptions& options = {});

// S must be a capset (ErrorCode::not_a_capset otherwise) and 3^n must fit the
// memory budget (ErrorCode::budget_exceeded otherwise).
VerificationReport is_complete(const CapSet& set, const VerifyOptions& options = {});

// Every point of F_3^n neither in S nor on a line through two points of S,
// ascending by encoding.
std::vector<Point> uncovered_points(const CapSet& set, const VerifyOptions& options = {});

// N(N+1)/2 >= 3^n; necessary for a complete capset of N points.
bool lower_bound_check(std::uint64_t size, unsigned n);

// Adds admissible points from the pool (default: all of F_3^n) in encoding
// order until none is left. S must be a capset.
CapSet greedy_complete(const CapSet& set, const std::vector<Point>* pool = nullptr,
                       const VerifyOptions& options = {});

unsigned resolve_threads(unsigned requested);

}  // namespace capset
