#include <numeric>
#include <random>
#include <set>

#include "capset/error.hpp"
#include "capset/field.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capset;

TEST_SUITE("field") {
  TEST_CASE("modulus is irreducible and the smallest such") {
    for (unsigned m = 1; m <= 8; ++m) {
      const Polynomial p = find_irreducible(m);
      REQUIRE(p.size() == m + 1);
      CHECK(p.back() == 1);
      std::vector<int> as_int(p.begin(), p.end());
      CHECK(oracle::brute_irreducible(as_int));
      // Ordered by the coefficient digits read from t^(m-1) down to the constant.
      for (std::uint64_t v = 0;; ++v) {
        auto low = oracle::digits_of(v, m);
        std::vector<int> cand = low;
        cand.push_back(1);
        if (oracle::brute_irreducible(cand)) {
          CHECK(cand == as_int);
          break;
        }
      }
    }
    CHECK(is_irreducible(Polynomial{1, 0, 1}));
    CHECK_FALSE(is_irreducible(Polynomial{2, 0, 1}));
  }

  TEST_CASE("is_irreducible matches trial division over all small polynomials") {
    for (unsigned m = 1; m <= 5; ++m) {
      for (std::uint64_t v = 0; v < trits::pow3(m); ++v) {
        auto d = oracle::digits_of(v, m);
        d.push_back(1);
        Polynomial p(d.begin(), d.end());
        CHECK(is_irreducible(p) == oracle::brute_irreducible(d));
      }
    }
  }

  TEST_CASE("multiplication matches schoolbook arithmetic") {
    for (unsigned m = 1; m <= 6; ++m) {
      const Field F(m);
      const auto N = oracle::naive_field(F);
      std::mt19937_64 rng(m);
      for (int i = 0; i < 3000; ++i) {
        const std::uint64_t a = rng() % F.order(), b = rng() % F.order();
        CHECK(F.mul(F.element(a), F.element(b)).value == N.mul(a, b));
        CHECK(F.add(F.element(a), F.element(b)).value == N.add(a, b));
        CHECK(F.neg(F.element(a)).value == N.neg(a));
      }
    }
  }

  TEST_CASE("table-free arithmetic agrees with tables") {
    for (unsigned m : {3u, 5u, 7u}) {
      const Field T(m);
      const Field P(m, 0);
      REQUIRE(T.has_tables());
      REQUIRE_FALSE(P.has_tables());
      std::mt19937_64 rng(m * 7);
      for (int i = 0; i < 2000; ++i) {
        const FieldElement a = T.element(rng() % T.order()), b = T.element(rng() % T.order());
        CHECK(T.mul(a, b) == P.mul(a, b));
        CHECK(T.chi(a) == P.chi(a));
        CHECK(T.pow(a, 12345) == P.pow(a, 12345));
        if (!a.is_zero()) CHECK(T.inv(a) == P.inv(a));
        CHECK(T.sqrt(a) == P.sqrt(a));
      }
      CHECK(T.generator() == P.generator());
      CHECK(T.nonsquare() == P.nonsquare());
    }
  }

  TEST_CASE("chi and sqrt against exhaustive squaring") {
    for (unsigned m = 1; m <= 6; ++m) {
      const Field F(m);
      const auto N = oracle::naive_field(F);
      std::size_t squares = 0;
      for (std::uint64_t v = 0; v < F.order(); ++v) {
        const FieldElement a = F.element(v);
        CHECK(F.chi(a) == N.chi(v));
        const auto r = F.sqrt(a);
        CHECK(r.has_value() == (v == 0 || N.is_square(v)));
        if (r) {
          CHECK(F.square(*r) == a);
          CHECK(r->value <= F.neg(*r).value);
        }
        squares += N.chi(v) == 1;
      }
      CHECK(squares == (F.order() - 1) / 2);
      CHECK(N.chi(F.nonsquare().value) == -1);
      for (std::uint64_t v = 1; v < F.nonsquare().value; ++v) CHECK(N.chi(v) == 1);
    }
  }

  TEST_CASE("generator is primitive and smallest") {
    for (unsigned m = 1; m <= 6; ++m) {
      const Field F(m);
      const auto N = oracle::naive_field(F);
      const std::uint64_t ord = F.order() - 1;
      auto order_of = [&](std::uint64_t g) {
        std::uint64_t x = g, k = 1;
        while (x != 1) {
          x = N.mul(x, g);
          ++k;
        }
        return k;
      };
      CHECK(order_of(F.generator().value) == ord);
      for (std::uint64_t g = 1; g < F.generator().value; ++g) CHECK(order_of(g) < ord);
    }
  }

  TEST_CASE("field axioms") {
    const Field F(4);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
      const auto a = F.element(rng() % F.order()), b = F.element(rng() % F.order()), c = F.element(rng() % F.order());
      CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
      CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
      CHECK(F.add(a, F.neg(a)) == F.zero());
      CHECK(F.sub(a, b) == F.add(a, F.neg(b)));
      if (!a.is_zero()) {
        CHECK(F.mul(a, F.inv(a)) == F.one());
        CHECK(F.exp(F.log(a)) == a);
      }
      CHECK(F.chi(F.mul(a, b)) == F.chi(a) * F.chi(b));
    }
    CHECK_THROWS_AS(F.inv(F.zero()), Error);
    CHECK_THROWS_AS(F.element(81), Error);
  }

  TEST_CASE("frobenius is x^(3^j) and orbit sizes divide m") {
    const Field F(6);
    const auto N = oracle::naive_field(F);
    for (std::uint64_t v = 0; v < F.order(); v += 7) {
      const auto a = F.element(v);
      CHECK(F.frobenius(a, 1).value == N.pow(v, 3));
      CHECK(F.frobenius(a, 2) == F.frobenius(F.frobenius(a, 1), 1));
      CHECK(F.frobenius(a, 6) == a);
      CHECK(F.frobenius(a, -1) == F.frobenius(a, 5));
      CHECK(6 % F.orbit_size(a) == 0);
    }
    std::size_t full = 0;
    for (std::uint64_t v = 0; v < F.order(); ++v) full += F.orbit_size(F.element(v)) == 6;
    // 3^6 minus elements of the subfields GF(9) and GF(27), which share GF(3).
    CHECK(full == 729 - 9 - 27 + 3);
  }

  TEST_CASE("subfield embedding is an injective ring homomorphism") {
    for (unsigned m : {2u, 4u, 6u, 8u}) {
      const SubfieldEmbedding E = half_subfield(m);
      const Field& S = E.small();
      const Field& B = E.big();
      std::set<std::uint32_t> images;
      for (std::uint64_t u = 0; u < S.order(); ++u) {
        const auto x = S.element(u);
        images.insert(E(x).value);
        for (std::uint64_t w = 0; w < S.order(); w += 3) {
          const auto y = S.element(w);
          CHECK(E(S.add(x, y)) == B.add(E(x), E(y)));
          CHECK(E(S.mul(x, y)) == B.mul(E(x), E(y)));
        }
        // Image is fixed by x -> x^(3^(m/2)).
        CHECK(B.frobenius(E(x), m / 2) == E(x));
      }
      CHECK(images.size() == S.order());
      CHECK(E(S.one()) == B.one());
    }
    CHECK_THROWS_AS(half_subfield(3), Error);
  }

  TEST_CASE("large degrees fall back to polynomial arithmetic") {
    const Field F(18);
    CHECK_FALSE(F.has_tables());
    const auto a = F.element(123456789), b = F.element(287654321);
    CHECK(F.mul(F.mul(a, b), F.inv(b)) == a);
    CHECK(F.pow(F.generator(), F.order() - 1) == F.one());
    const auto s = F.square(a);
    REQUIRE(F.sqrt(s).has_value());
    CHECK(F.square(*F.sqrt(s)) == s);
    CHECK(F.chi(F.nonsquare()) == -1);
    CHECK_THROWS_AS(F.log(a), Error);
    CHECK_THROWS_AS(Field(21), Error);
  }

  TEST_CASE("prime factors") {
    CHECK(prime_factors(80) == std::vector<std::uint64_t>{2, 5});
    CHECK(prime_factors(728) == std::vector<std::uint64_t>{2, 7, 13});
    CHECK(prime_factors(2) == std::vector<std::uint64_t>{2});
  }
}
