#include <random>
#include <set>

#include "capset/construct.hpp"
#include "capset/error.hpp"
#include "capset/verify.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capset;

namespace {

CapSet random_set(std::mt19937_64& rng, unsigned n, std::size_t size) {
  CapSet s(n);
  while (s.size() < size) s.insert(Point::from_encoding(n, rng() % trits::pow3(n)));
  return s;
}

// Random maximal-ish capset grown point by point with the brute oracle.
CapSet random_capset(std::mt19937_64& rng, unsigned n, std::size_t tries) {
  CapSet s(n);
  for (std::size_t t = 0; t < tries; ++t) {
    const Point p = Point::from_encoding(n, rng() % trits::pow3(n));
    if (s.contains(p)) continue;
    auto pts = oracle::to_digits(s);
    std::vector<oracle::Digits> with = pts;
    with.push_back(oracle::digits_of(p.encoding(), n));
    if (oracle::brute_is_capset(with)) s.insert(p);
  }
  return s;
}

bool is_witness(const CapSet& s, const std::array<Point, 3>& t) {
  return s.contains(t[0]) && s.contains(t[1]) && s.contains(t[2]) && !(t[0] == t[1]) && !(t[1] == t[2]) &&
         !(t[0] == t[2]) && pt_add(pt_add(t[0], t[1]), t[2]) == Point::zero(s.dim());
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("is_capset agrees with the triple oracle and the line oracle") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 300; ++it) {
      const unsigned n = 1 + rng() % 3;
      const std::size_t size = 1 + rng() % std::min<std::uint64_t>(trits::pow3(n), 9);
      const CapSet s = random_set(rng, n, size);
      const auto d = oracle::to_digits(s);
      const bool expect = oracle::brute_is_capset(d);
      CHECK(oracle::line_free(d, n) == expect);
      const auto r = is_capset(s);
      CHECK(r.verdict == expect);
      if (!r.verdict) {
        REQUIRE(r.triple.has_value());
        CHECK(is_witness(s, *r.triple));
      }
    }
  }

  TEST_CASE("is_capset on larger random sets") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 60; ++it) {
      const unsigned n = 4 + rng() % 4;
      const CapSet s = random_set(rng, n, 5 + rng() % 30);
      const auto r = is_capset(s);
      CHECK(r.verdict == oracle::brute_is_capset(oracle::to_digits(s)));
      if (r.triple) CHECK(is_witness(s, *r.triple));
      CHECK(r.pairs_examined <= s.size() * (s.size() - 1) / 2);
    }
  }

  TEST_CASE("witness is independent of threads and of the membership structure") {
    std::mt19937_64 rng(29);
    for (int it = 0; it < 20; ++it) {
      const CapSet s = random_set(rng, 9, 200);
      VerifyOptions one;
      one.threads = 1;
      VerifyOptions four;
      four.threads = 4;
      VerifyOptions search;
      search.memory_budget_bits = 10;  // forces sorted-array membership
      const auto a = is_capset(s, one), b = is_capset(s, four), c = is_capset(s, search);
      CHECK(a.verdict == b.verdict);
      CHECK(a.verdict == c.verdict);
      CHECK(a.pairs_examined == b.pairs_examined);
      if (a.triple) {
        CHECK(*a.triple == *b.triple);
        CHECK(*a.triple == *c.triple);
      }
    }
  }

  TEST_CASE("completeness agrees with brute coverage") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 40; ++it) {
      const unsigned n = 2 + rng() % 4;
      const CapSet s = random_capset(rng, n, 3 * trits::pow3(n));
      const auto expect = oracle::brute_uncovered(oracle::to_digits(s), n);
      const auto r = is_complete(s);
      CHECK(r.verdict == expect.empty());
      CHECK(r.coverage_size == trits::pow3(n) - expect.size());
      if (!expect.empty()) {
        REQUIRE(r.uncovered.has_value());
        CHECK(r.uncovered->encoding() == *expect.begin());
      }
      std::set<std::uint64_t> got;
      for (const Point& p : uncovered_points(s)) got.insert(p.encoding());
      CHECK(got == expect);
      // Greedy completion adds exactly admissible points and ends complete.
      const CapSet g = greedy_complete(s);
      CHECK(is_capset(g).verdict);
      CHECK(is_complete(g).verdict);
      for (const Point& p : s.points()) CHECK(g.contains(p));
    }
  }

  TEST_CASE("completeness guards") {
    const CapSet bad(2, {Point::parse("00"), Point::parse("11"), Point::parse("22")});
    try {
      is_complete(bad);
      FAIL("expected not_a_capset");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::not_a_capset);
    }
    VerifyOptions tiny;
    tiny.memory_budget_bits = 8;
    try {
      is_complete(CapSet(2, {Point::parse("00")}), tiny);
      FAIL("expected budget_exceeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::budget_exceeded);
    }
  }

  TEST_CASE("degenerate sets") {
    CHECK(is_capset(CapSet(3)).verdict);
    CHECK(is_capset(CapSet(3, {Point::parse("012")})).verdict);
    CHECK_FALSE(is_complete(CapSet(1)).verdict);
    CHECK(is_complete(CapSet(0, {Point::zero(0)})).verdict);
    CHECK(is_complete(CapSet(1, {Point::parse("0"), Point::parse("1")})).verdict);
  }

  TEST_CASE("lower bound N(N+1)/2 >= 3^n") {
    for (unsigned n = 0; n <= 12; ++n) {
      for (std::uint64_t N = 0; N < 1200; ++N) CHECK(lower_bound_check(N, n) == (N * (N + 1) / 2 >= trits::pow3(n)));
    }
    CHECK(lower_bound_check(4, 2));
    CHECK_FALSE(lower_bound_check(3, 2));
    CHECK_FALSE(lower_bound_check(~std::uint64_t{0}, 81));
  }
}
