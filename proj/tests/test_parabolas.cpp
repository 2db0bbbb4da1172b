#include <map>
#include <numeric>
#include <random>
#include <set>

#include "capset/error.hpp"
#include "capset/parabolas.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capset;

namespace {

// Nonzero x1, x2, x3 summing to zero with c1 x1^2 + c2 x2^2 + c3 x3^2 = 0 and
// pairwise distinct points (x_i, c_i x_i^2).
bool naive_violation(const oracle::NaiveField& N, std::uint64_t c1, std::uint64_t c2, std::uint64_t c3) {
  const std::uint64_t c[3] = {c1, c2, c3};
  for (std::uint64_t x1 = 1; x1 < N.order(); ++x1)
    for (std::uint64_t x2 = 1; x2 < N.order(); ++x2) {
      const std::uint64_t x3 = N.neg(N.add(x1, x2));
      if (x3 == 0) continue;
      const std::uint64_t x[3] = {x1, x2, x3};
      std::uint64_t y = 0;
      for (int t = 0; t < 3; ++t) y = N.add(y, N.mul(c[t], N.mul(x[t], x[t])));
      if (y != 0) continue;
      bool distinct = true;
      for (int s = 0; s < 3; ++s)
        for (int t = s + 1; t < 3; ++t) distinct = distinct && !(x[s] == x[t] && c[s] == c[t]);
      if (distinct) return true;
    }
  return false;
}

// Canonical classes by closure under the shift and flip generators.
std::size_t naive_class_count(unsigned m) {
  std::set<std::array<unsigned, 3>> seen;
  std::size_t classes = 0;
  auto sorted = [](std::array<unsigned, 3> t) {
    std::sort(t.begin(), t.end());
    return t;
  };
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = i; j < m; ++j)
      for (unsigned k = j; k < m; ++k) {
        if (i == k) continue;
        const std::array<unsigned, 3> start{i, j, k};
        if (seen.count(start)) continue;
        ++classes;
        std::vector<std::array<unsigned, 3>> stack{start};
        seen.insert(start);
        while (!stack.empty()) {
          const auto t = stack.back();
          stack.pop_back();
          std::vector<std::array<unsigned, 3>> next;
          next.push_back(sorted({(t[0] + 1) % m, (t[1] + 1) % m, (t[2] + 1) % m}));
          // A doubled index (a, a, b) relates to (a, a, 2a - b) mod m, the
          // image of (0, 0, d) ~ (0, 0, m - d) under shifts.
          for (int p = 0; p < 3; ++p) {
            const int q = (p + 1) % 3, r = (p + 2) % 3;
            if (t[q] == t[r]) {
              const unsigned a = t[q], b = t[p];
              next.push_back(sorted({a, a, (2 * a + m - b) % m}));
            }
          }
          for (const auto& u : next)
            if (seen.insert(u).second) stack.push_back(u);
        }
      }
  return classes;
}

}  // namespace

TEST_SUITE("parabolas") {
  TEST_CASE("coefficient family validation") {
    const auto F = Field::get(2);
    CHECK_THROWS_AS(CoeffFamily(F, {F->zero()}), Error);
    CHECK_THROWS_AS(CoeffFamily(F, {F->one(), F->one()}), Error);
    const CoeffFamily f(F, {FieldElement{5}, FieldElement{1}});
    CHECK(f.coeffs().front() == FieldElement{1});
    CHECK(f.point_count() == 16);
    CHECK(family_points(f).size() == 16);
  }

  TEST_CASE("coefficient violation matches point-level enumeration") {
    for (unsigned m = 1; m <= 3; ++m) {
      const Field F(m);
      const auto N = oracle::naive_field(F);
      for (std::uint64_t a = 1; a < F.order(); ++a)
        for (std::uint64_t b = 1; b < F.order(); ++b)
          for (std::uint64_t c = 1; c < F.order(); ++c) {
            if (a == b && b == c) continue;
            const auto v = coeff_violation(F, F.element(a), F.element(b), F.element(c));
            const bool expect = naive_violation(N, a, b, c);
            CHECK(v.has_value() == expect);
            if (lemma_condition(F, F.element(a), F.element(b), F.element(c)) == -1) CHECK_FALSE(expect);
            if (v) {
              const std::uint64_t cs[3] = {a, b, c};
              std::uint64_t y = 0, s = 0;
              for (int t = 0; t < 3; ++t) {
                CHECK(v->x[t].value != 0);
                s = N.add(s, v->x[t].value);
                y = N.add(y, N.mul(cs[t], N.mul(v->x[t].value, v->x[t].value)));
              }
              CHECK(s == 0);
              CHECK(y == 0);
            }
          }
    }
    // Random triples in a larger field.
    const Field F(4);
    const auto N = oracle::naive_field(F);
    std::mt19937_64 rng(4);
    for (int it = 0; it < 150; ++it) {
      const std::uint64_t a = 1 + rng() % 80, b = 1 + rng() % 80, c = 1 + rng() % 80;
      if (a == b && b == c) continue;
      CHECK(coeff_violation(F, F.element(a), F.element(b), F.element(c)).has_value() == naive_violation(N, a, b, c));
    }
  }

  TEST_CASE("pair compatibility matches brute force on the points") {
    for (unsigned m = 1; m <= 4; ++m) {
      const auto F = Field::get(m);
      for (std::uint64_t b = 2; b < F->order(); ++b) {
        const CoeffFamily f(F, {F->one(), F->element(b)});
        CHECK(pair_compatible(*F, F->one(), F->element(b)) == family_is_capset(f, CheckMode::brute).capset);
      }
    }
  }

  TEST_CASE("fast and brute family checks agree, with valid witnesses") {
    for (unsigned m = 2; m <= 3; ++m) {
      const auto F = Field::get(m);
      for (std::uint64_t b = 2; b < F->order(); ++b)
        for (std::uint64_t c = b + 1; c < F->order(); ++c) {
          const CoeffFamily f(F, {F->one(), F->element(b), F->element(c)});
          const auto fast = family_is_capset(f, CheckMode::fast);
          const auto brute = family_is_capset(f, CheckMode::brute);
          CHECK(fast.capset == brute.capset);
          const CapSet pts = family_points(f);
          for (const auto* v : {&fast, &brute}) {
            if (!v->witness) continue;
            const auto& w = *v->witness;
            CHECK(pts.contains(w[0]));
            CHECK(pts.contains(w[1]));
            CHECK(pts.contains(w[2]));
            CHECK(pt_add(pt_add(w[0], w[1]), w[2]) == Point::zero(2 * m));
          }
          const auto naive = oracle::naive_family_points(oracle::naive_field(*F), {1, b, c});
          CHECK(oracle::brute_is_capset(naive) == brute.capset);
        }
    }
  }

  TEST_CASE("scaling and Frobenius preserve the verdict") {
    for (unsigned m = 1; m <= 3; ++m) {
      const auto F = Field::get(m);
      std::mt19937_64 rng(m);
      for (int it = 0; it < 100; ++it) {
        std::set<std::uint32_t> cs;
        const std::size_t k = 2 + rng() % 3;
        while (cs.size() < std::min<std::size_t>(k, F->order() - 1)) cs.insert(1 + rng() % (F->order() - 1));
        std::vector<FieldElement> coeffs;
        for (auto v : cs) coeffs.push_back(F->element(v));
        const CoeffFamily f(F, coeffs);
        const bool base = family_is_capset(f, CheckMode::brute).capset;
        const FieldElement s = F->element(1 + rng() % (F->order() - 1));
        CHECK(family_is_capset(scale_family(f, s), CheckMode::brute).capset == base);
        CHECK(family_is_capset(frobenius_family(f, 1), CheckMode::brute).capset == base);
      }
    }
  }

  TEST_CASE("lemma condition is Frobenius invariant") {
    const Field F(5);
    std::mt19937_64 rng(55);
    for (int it = 0; it < 2000; ++it) {
      const auto a = F.element(1 + rng() % 242), b = F.element(1 + rng() % 242), c = F.element(1 + rng() % 242);
      CHECK(lemma_condition(F, a, b, c) ==
            lemma_condition(F, F.frobenius(a, 1), F.frobenius(b, 1), F.frobenius(c, 1)));
    }
  }

  TEST_CASE("admissible extends a family exactly when the fast check passes") {
    const auto F = Field::get(4);
    std::vector<FieldElement> fam{F->one(), F->element(2)};
    for (std::uint64_t v = 3; v < F->order(); ++v) {
      std::vector<FieldElement> with = fam;
      with.push_back(F->element(v));
      CHECK(admissible(*F, fam, F->element(v)) == family_is_capset(CoeffFamily(F, with), CheckMode::fast).capset);
    }
    CHECK_FALSE(admissible(*F, fam, F->one()));
  }

  TEST_CASE("frobenius orbit families") {
    const auto F = Field::get(4);
    const auto reps = full_orbit_elements(*F);
    REQUIRE_FALSE(reps.empty());
    const FieldElement r[1] = {reps.front()};
    const CoeffFamily f = frobenius_orbit_family(F, r);
    CHECK(f.size() == 4);
    for (FieldElement c : f.coeffs()) CHECK(std::count(f.coeffs().begin(), f.coeffs().end(), F->frobenius(c, 1)) == 1);
    const FieldElement one[1] = {F->one()};
    CHECK_THROWS_AS(frobenius_orbit_family(F, one), Error);
    const FieldElement twice[2] = {reps.front(), F->frobenius(reps.front(), 1)};
    CHECK_THROWS_AS(frobenius_orbit_family(F, twice), Error);
  }

  TEST_CASE("triple classes") {
    CHECK(canonical_triple(6, 1, 2, 4) == canonical_triple(6, 2, 3, 5));
    CHECK(canonical_triple(6, 3, 3, 4) == canonical_triple(6, 0, 0, 5));
    CHECK(canonical_triple(6, 0, 0, 5) == TripleClass{0, 0, 1});
    CHECK(canonical_triple(6, 7, -1, 2) == canonical_triple(6, 1, 5, 2));
    CHECK_THROWS_AS(canonical_triple(5, 0, 1, 2), Error);
    for (unsigned m = 2; m <= 12; m += 2) {
      const auto classes = triple_classes(m);
      CHECK(class_count(m) == classes.size());
      CHECK(classes.size() == naive_class_count(m));
      CHECK(class_count_bound(m) == (m * m + 2 + 5) / 6);
      for (const auto& t : classes) CHECK(canonical_triple(m, t.i, t.j, t.k) == t);
    }
  }

  TEST_CASE("condition matrix and rank") {
    for (unsigned m : {2u, 4u}) {
      const Field F(m);
      const auto all = full_orbit_elements(F);
      const auto mat = condition_matrix(F, all);
      CHECK(mat.classes.size() == class_count(m));
      for (std::size_t r = 0; r < mat.classes.size(); ++r)
        for (std::size_t c = 0; c < all.size(); ++c) {
          const auto& t = mat.classes[r];
          CHECK((mat.chi[r][c] == -1) == class_condition(F, t, all[c]));
        }
      CHECK(condition_rank(F, all) == class_count(m));
    }
    const Field F(4);
    CHECK_THROWS_AS(condition_rank(F, {}), Error);
  }

  TEST_CASE("odd degree: no three parabolas form a capset") {
    for (unsigned m : {1u, 3u}) {
      const auto r = three_parabola_impossibility(m);
      CHECK(r.confirmed);
      CHECK(r.exhaustive);
      CHECK_FALSE(r.counterexample.has_value());
    }
    const auto s = three_parabola_impossibility(5, false, 2000, 9);
    CHECK(s.confirmed);
    CHECK(s.triples_checked == 2000);
    CHECK_THROWS_AS(three_parabola_impossibility(4), Error);
  }

  TEST_CASE("even degree: three parabolas can work") {
    const auto F = Field::get(4);
    bool found = false;
    for (std::uint64_t b = 2; b < F->order() && !found; ++b)
      for (std::uint64_t c = b + 1; c < F->order() && !found; ++c)
        found = family_is_capset(CoeffFamily(F, {F->one(), F->element(b), F->element(c)}), CheckMode::fast).capset;
    CHECK(found);
  }
}
