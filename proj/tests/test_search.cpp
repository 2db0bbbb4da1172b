#include <cstdio>
#include <filesystem>
#include <set>

#include "capset/error.hpp"
#include "capset/search.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capset;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("capset_test_" + name)).string();
}

}  // namespace

TEST_SUITE("search") {
  TEST_CASE("exhaustive search finds the true maximum for m = 2 and 4") {
    for (unsigned m : {2u, 4u}) {
      SearchOptions opt;
      opt.m = m;
      const SearchResult r = exhaustive_search(opt);
      REQUIRE(r.family.has_value());
      CHECK(r.complete);
      CHECK(r.verified);
      CHECK(r.verification == "brute");
      CHECK(r.best_k == oracle::max_family_size(oracle::naive_field(Field(m))));
      CHECK(r.size == r.best_k * (trits::pow3(m) - 1));
      CHECK(r.family->coeffs().front() == FieldElement{1});
    }
  }

  TEST_CASE("exhaustive search is independent of the thread count") {
    SearchOptions a;
    a.m = 4;
    a.threads = 1;
    SearchOptions b = a;
    b.threads = 3;
    const auto ra = exhaustive_search(a), rb = exhaustive_search(b);
    CHECK(ra.best_k == rb.best_k);
    CHECK(ra.family->coeffs() == rb.family->coeffs());
  }

  TEST_CASE("exhaustive guards") {
    SearchOptions opt;
    opt.m = 8;
    CHECK_THROWS_AS(exhaustive_search(opt), Error);
    opt.m = 4;
    opt.node_ceiling = 2;
    try {
      exhaustive_search(opt);
      FAIL("expected budget_exceeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::budget_exceeded);
    }
  }

  TEST_CASE("max_k stops early with a family of that size") {
    SearchOptions opt;
    opt.m = 4;
    opt.max_k = 3;
    const auto r = exhaustive_search(opt);
    CHECK(r.best_k >= 3);
    CHECK(r.verified);
  }

  TEST_CASE("random search is reproducible from the seed") {
    SearchOptions opt;
    opt.m = 6;
    opt.mode = SearchMode::random;
    opt.seed = 42;
    opt.budget = 30;
    opt.threads = 1;
    const auto a = random_search(opt);
    opt.threads = 3;
    const auto b = random_search(opt);
    REQUIRE(a.family.has_value());
    CHECK(a.family->coeffs() == b.family->coeffs());
    CHECK(a.nodes == b.nodes);
    CHECK(a.verified);
    CHECK(a.complete);
  }

  TEST_CASE("random search keeps the floor on ties") {
    SearchOptions orbit;
    orbit.m = 6;
    orbit.mode = SearchMode::orbit;
    const auto floor = orbit_search(orbit);
    REQUIRE(floor.family.has_value());
    SearchOptions opt;
    opt.m = 6;
    opt.mode = SearchMode::random;
    opt.budget = 1;
    opt.floor = floor.family;
    const auto r = random_search(opt);
    CHECK(r.best_k >= floor.best_k);
    if (r.best_k == floor.best_k) {
      CHECK(r.from_floor);
      CHECK(r.family->coeffs() == floor.family->coeffs());
    }
    opt.floor = CoeffFamily(Field::get(4), {FieldElement{1}});
    CHECK_THROWS_AS(random_search(opt), Error);
  }

  TEST_CASE("orbit representatives") {
    for (unsigned m : {2u, 4u, 6u}) {
      const Field F(m);
      const auto reps = orbit_representatives(F);
      const auto full = full_orbit_elements(F);
      CHECK(reps.size() * m == full.size());
      std::set<std::uint32_t> covered;
      for (FieldElement a : reps) {
        for (unsigned j = 0; j < m; ++j) {
          const FieldElement b = F.frobenius(a, j);
          CHECK(a.value <= b.value);
          covered.insert(b.value);
        }
      }
      CHECK(covered.size() == full.size());
    }
  }

  TEST_CASE("orbit search returns Frobenius-closed capset families") {
    const std::uint64_t expected[] = {0, 0, 16, 0, 320, 0, 4368};
    for (unsigned m : {2u, 4u, 6u}) {
      SearchOptions opt;
      opt.m = m;
      opt.mode = SearchMode::orbit;
      const auto r = orbit_search(opt);
      REQUIRE(r.family.has_value());
      CHECK(r.size == expected[m]);
      const Field& F = r.family->field();
      for (FieldElement c : r.family->coeffs()) {
        CHECK(std::binary_search(r.family->coeffs().begin(), r.family->coeffs().end(), F.frobenius(c, 1)));
      }
    }
    SearchOptions odd;
    odd.m = 3;
    odd.mode = SearchMode::orbit;
    CHECK_THROWS_AS(orbit_search(odd), Error);
  }

  TEST_CASE("checkpoints round trip and resume") {
    const std::string path = temp_path("cp.json");
    SearchCheckpoint cp;
    cp.m = 4;
    cp.mode = SearchMode::random;
    cp.seed = 9;
    cp.cursor = 5;
    cp.best_unit = 2;
    cp.nodes = 77;
    cp.best = {1, 2, 5};
    write_checkpoint(path, cp);
    const auto back = read_checkpoint(path);
    CHECK(back.m == cp.m);
    CHECK(back.mode == cp.mode);
    CHECK(back.seed == cp.seed);
    CHECK(back.cursor == cp.cursor);
    CHECK(back.best_unit == cp.best_unit);
    CHECK(back.nodes == cp.nodes);
    CHECK(back.best == cp.best);

    // A run split in two matches an uninterrupted run.
    SearchOptions full;
    full.m = 6;
    full.mode = SearchMode::random;
    full.seed = 3;
    full.budget = 24;
    const auto whole = random_search(full);

    SearchOptions first = full;
    first.budget = 10;
    first.checkpoint_path = path;
    random_search(first);
    SearchOptions second = full;
    second.resume = read_checkpoint(path);
    CHECK(second.resume->cursor == 10);
    const auto resumed = random_search(second);
    CHECK(resumed.family->coeffs() == whole.family->coeffs());
    CHECK(resumed.nodes == whole.nodes);

    SearchOptions wrong = full;
    wrong.seed = 4;
    wrong.resume = read_checkpoint(path);
    CHECK_THROWS_AS(random_search(wrong), Error);
    std::remove(path.c_str());

    CHECK_THROWS_AS(read_checkpoint(temp_path("missing.json")), Error);
  }

  TEST_CASE("exhaustive resume from a finished checkpoint keeps the optimum") {
    const std::string path = temp_path("ex.json");
    SearchOptions opt;
    opt.m = 4;
    opt.checkpoint_path = path;
    const auto r = exhaustive_search(opt);
    SearchOptions again;
    again.m = 4;
    again.resume = read_checkpoint(path);
    const auto r2 = exhaustive_search(again);
    CHECK(r2.best_k == r.best_k);
    CHECK(r2.family->coeffs() == r.family->coeffs());
    std::remove(path.c_str());
  }

  TEST_CASE("search mode names") {
    CHECK(parse_search_mode("orbit") == SearchMode::orbit);
    CHECK(std::string(to_string(SearchMode::random)) == "random");
    CHECK_THROWS_AS(parse_search_mode("greedy"), Error);
  }
}
