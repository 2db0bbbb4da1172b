#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capset/field.hpp"
#include "capset/trivec.hpp"
#include "capset/verify.hpp"

namespace capset {

// {(x, x^2), (x, -x^2) : x != 0} in F_q^2 flattened to F_3^(2m). Always a
// capset of size 2(q - 1); complete exactly when m is odd.
CapSet two_parabolas(unsigned m);

// {(x, y, x^2 - lambda y^2)} in F_q^3 with lambda the smallest non-square.
CapSet elliptic_quadric(unsigned m);

struct PatchLevel {
  unsigned m = 0;             // degree of the field this level lives in
  FieldElement lambda;        // non-square of GF(3^m)
  FieldElement d;             // non-square of GF(3^(m/2)), subfield encoding
  FieldElement sqrt_d;        // a square root of the embedded d in GF(3^m)
  std::size_t contributed = 0;
};

struct NonsquarePatch {
  std::vector<FieldElement> elements;  // ascending, non-squares of GF(3^m)
  std::vector<PatchLevel> levels;      // outermost first
};

// lambda (+-1 + x sqrt(d))^2 for x in GF(3^(m/2))^*, m even. When m/2 is even
// the set is augmented by lambda times the embedded patch of GF(3^(m/2)), and
// so on down the tower of even degrees.
NonsquarePatch nonsquare_patch(unsigned m);

struct ConstructOptions {
  VerifyOptions verify;
  // Skip certification when 3^n exceeds the verification budget.
  bool uncertified = false;
};

struct ConstructionResult {
  std::string construction;  // "two-parabolas", "complete" or "quadric"
  unsigned m = 0;            // field degree used by the algebraic part
  unsigned n = 0;            // ambient dimension
  CapSet set;
  std::optional<FieldElement> lambda;
  std::optional<FieldElement> d;
  bool fallback_used = false;
  std::size_t fallback_points = 0;
  std::size_t patch_rejected = 0;  // literal patch points that broke the capset property
  bool certified = false;          // verification actually ran
  bool is_capset = false;
  std::optional<bool> complete;
  bool verified = false;  // is_capset and the completeness claimed for this construction
};

ConstructionResult construct_two_parabolas(unsigned m, const ConstructOptions& options = {});
ConstructionResult construct_quadric(unsigned m, const ConstructOptions& options = {});

// Complete capset of size O(sqrt(3^n)): two parabolas over GF(3^(n/2)), the
// non-square patch on the line x = 0 when n/2 is even, and the product with
// {0, 1} for odd n. Falls back to greedy completion (line x = 0 first, then the
// whole space) if the algebraic set does not verify complete.
ConstructionResult complete_capset(unsigned n, const ConstructOptions& options = {});

// Smallest integer K with |S|^2 <= K^2 * 3^n.
unsigned size_ratio_bound(std::uint64_t size, unsigned n);

}  // namespace capset
