#pragma once

// Unions of parabolas {(x, c x^2) : x != 0} in F_q^2 and the quadratic
// character conditions that decide when such a union is a capset.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "capset/field.hpp"
#include "capset/trivec.hpp"
#include "capset/verify.hpp"

namespace capset {

// Uniform integer in [0, bound) from raw engine output; the engine's output
// sequence is fixed by the standard, unlike std::uniform_int_distribution.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t top = ~std::uint64_t{0};
  const std::uint64_t limit = top - top % bound;
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) return v % bound;
  }
}

class CoeffFamily {
 public:
  // Coefficients must be nonzero and distinct; they are kept sorted.
  CoeffFamily(std::shared_ptr<const Field> field, std::vector<FieldElement> coeffs);

  const Field& field() const noexcept { return *field_; }
  std::shared_ptr<const Field> field_ptr() const noexcept { return field_; }
  unsigned degree() const noexcept { return field_->degree(); }
  const std::vector<FieldElement>& coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  // K (q - 1): distinct parabolas only share the excluded origin.
  std::uint64_t point_count() const noexcept { return coeffs_.size() * (field_->order() - 1); }

 private:
  std::shared_ptr<const Field> field_;
  std::vector<FieldElement> coeffs_;
};

CapSet family_points(const CoeffFamily& family);

// chi(-(c1 c2 + c1 c3 + c2 c3)).
int lemma_condition(const Field& field, FieldElement c1, FieldElement c2, FieldElement c3);

// Points (x_i, c_i x_i^2) with x1 + x2 + x3 = 0, all x_i nonzero and the three
// points pairwise distinct.
struct CoeffViolation {
  std::array<FieldElement, 3> c;
  std::array<FieldElement, 3> x;
};

// Decides whether parabolas c1, c2, c3 (repetition allowed, not all equal)
// carry a collinear triple: screened by lemma_condition, then settled by the
// roots r = x1/x2 of (c1+c3) r^2 + 2 c3 r + (c2+c3) = 0. Roots giving x1 = 0,
// x3 = 0, or (with repeated coefficients) coincident points are discarded.
std::optional<CoeffViolation> coeff_violation(const Field& field, FieldElement c1, FieldElement c2,
                                              FieldElement c3);

// No violation among (a, a, b) and (a, b, b).
bool pair_compatible(const Field& field, FieldElement a, FieldElement b);

// Candidate keeps the family a capset: checks every triple containing it.
bool admissible(const Field& field, std::span<const FieldElement> family, FieldElement candidate);

enum class CheckMode { brute, fast };

struct FamilyVerdict {
  bool capset = false;
  std::optional<std::array<Point, 3>> witness;
  std::optional<CoeffViolation> coeff_witness;  // fast mode only
};

FamilyVerdict family_is_capset(const CoeffFamily& family, CheckMode mode, const VerifyOptions& options = {});

CoeffFamily scale_family(const CoeffFamily& family, FieldElement s);
CoeffFamily frobenius_family(const CoeffFamily& family, long long j);

// Union of the Frobenius orbits of each representative. Throws if an orbit is
// shorter than m or two orbits intersect.
CoeffFamily frobenius_orbit_family(std::shared_ptr<const Field> field, std::span<const FieldElement> reps);

// Canonical representative of an index triple under simultaneous cyclic shift
// mod m and, for triples with a repeated index, (0,0,i) ~ (0,0,m-i). m even.
struct TripleClass {
  unsigned i = 0, j = 0, k = 0;
  friend constexpr bool operator==(const TripleClass&, const TripleClass&) = default;
  friend constexpr auto operator<=>(const TripleClass&, const TripleClass&) = default;
};

TripleClass canonical_triple(unsigned m, long long i, long long j, long long k);

// Number of distinct sorted triples reached from t by cyclic shifts.
unsigned shift_orbit_length(unsigned m, TripleClass t);

// All classes of triples that are not constant, ascending.
std::vector<TripleClass> triple_classes(unsigned m);
std::uint64_t class_count(unsigned m);
// ceil((m^2 + 2) / 6)
std::uint64_t class_count_bound(unsigned m);

// 1 when the class condition chi(sigma_2(a^(3^i), a^(3^j), a^(3^k))) = -1 holds.
bool class_condition(const Field& field, TripleClass t, FieldElement a);

struct ConditionMatrix {
  std::vector<TripleClass> classes;
  std::vector<FieldElement> samples;
  std::vector<std::vector<int>> chi;  // chi[row][col] of -(sigma_2)
};

ConditionMatrix condition_matrix(const Field& field, std::span<const FieldElement> samples);

// Rank over GF(2) of [class_condition] with rows = classes, cols = samples.
std::uint64_t condition_rank(const Field& field, std::span<const FieldElement> samples);

// Every element whose Frobenius orbit has full length m.
std::vector<FieldElement> full_orbit_elements(const Field& field);

struct ImpossibilityReport {
  bool confirmed = false;
  bool exhaustive = false;
  std::uint64_t triples_checked = 0;
  std::optional<std::array<FieldElement, 3>> counterexample;
};

// For odd m, checks that no family {1, b, c} with 1, b, c distinct is a
// capset: every unordered pair when exhaustive, else `samples` seeded draws.
ImpossibilityReport three_parabola_impossibility(unsigned m, bool exhaustive = true, std::uint64_t samples = 0,
                                                 std::uint64_t seed = 0);

}  // namespace capset
