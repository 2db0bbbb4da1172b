#include <random>

#include "capset/trits.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capset;

TEST_SUITE("trits") {
  TEST_CASE("encode and decode are inverse") {
    for (std::uint64_t v = 0; v < 20000; ++v) CHECK(trits::encode(trits::decode(v)) == v);
    std::mt19937_64 rng(3);
    const std::uint64_t top = trits::pow3(trits::max_trits);
    for (int i = 0; i < 20000; ++i) {
      const std::uint64_t v = rng() % top;
      CHECK(trits::encode(trits::decode(v)) == v);
    }
    CHECK(trits::encode(trits::decode(top - 1)) == top - 1);
  }

  TEST_CASE("planes never overlap") {
    for (std::uint64_t v = 0; v < 6561; ++v) {
      const auto p = trits::decode(v);
      CHECK((p.one & p.two) == 0);
    }
  }

  TEST_CASE("add, neg and sub agree with digitwise arithmetic") {
    std::mt19937_64 rng(11);
    const unsigned n = 17;
    for (int it = 0; it < 5000; ++it) {
      const std::uint64_t a = rng() % trits::pow3(n), b = rng() % trits::pow3(n);
      const auto da = oracle::digits_of(a, n), db = oracle::digits_of(b, n);
      oracle::Digits s(n), ng(n), df(n);
      for (unsigned i = 0; i < n; ++i) {
        s[i] = (da[i] + db[i]) % 3;
        ng[i] = (3 - da[i]) % 3;
        df[i] = (da[i] - db[i] + 3) % 3;
      }
      const auto pa = trits::decode(a), pb = trits::decode(b);
      CHECK(trits::encode(trits::add(pa, pb)) == oracle::value_of(s));
      CHECK(trits::encode(trits::neg(pa)) == oracle::value_of(ng));
      CHECK(trits::encode(trits::sub(pa, pb)) == oracle::value_of(df));
    }
  }

  TEST_CASE("get, set and mask") {
    trits::Planes p;
    p = trits::set(p, 0, 2);
    p = trits::set(p, 5, 1);
    CHECK(trits::get(p, 0) == 2);
    CHECK(trits::get(p, 5) == 1);
    CHECK(trits::get(p, 3) == 0);
    CHECK(trits::encode(p) == 2 + 243);
    CHECK(trits::encode(trits::mask(p, 5)) == 2);
    p = trits::set(p, 0, 0);
    CHECK(trits::encode(p) == 243);
  }
}
