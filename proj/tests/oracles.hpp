#pragma once

// Slow reference implementations used to cross-check the library. Nothing here
// shares code with the library beyond the public value types.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "capset/field.hpp"
#include "capset/trivec.hpp"

namespace oracle {

using Digits = std::vector<int>;  // base-3 digits, index 0 least significant

Digits digits_of(std::uint64_t value, unsigned width);
std::uint64_t value_of(const Digits& d);

// Schoolbook GF(3)[t] / (modulus) arithmetic. Modulus digits constant first.
class NaiveField {
 public:
  explicit NaiveField(std::vector<int> modulus);

  unsigned degree() const { return m_; }
  std::uint64_t order() const { return q_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t neg(std::uint64_t a) const;
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  // +1 square, -1 non-square, 0 zero, from the set of all squares.
  int chi(std::uint64_t a) const;
  bool is_square(std::uint64_t a) const { return squares_.count(a) != 0; }

 private:
  unsigned m_;
  std::uint64_t q_;
  std::vector<int> modulus_;
  std::set<std::uint64_t> squares_;
};

NaiveField naive_field(const capset::Field& field);

// No factor of degree 1..deg/2 by trial division over all monic polynomials.
bool brute_irreducible(const std::vector<int>& poly);

// No three distinct points sum to zero coordinate-wise (O(N^3)).
bool brute_is_capset(const std::vector<Digits>& pts);

// No affine line {p, p + d, p + 2d}, d != 0, of F_3^n lies in the set.
bool line_free(const std::vector<Digits>& pts, unsigned n);

// Points of F_3^n neither in the set nor the third point of a pair of it.
std::set<std::uint64_t> brute_uncovered(const std::vector<Digits>& pts, unsigned n);

std::vector<Digits> to_digits(const capset::CapSet& set);

// (x, c x^2) for x != 0 and every c, flattened as x digits then y digits.
std::vector<Digits> naive_family_points(const NaiveField& f, const std::vector<std::uint64_t>& coeffs);

// Largest K such that some K-subset of F_q^* is a capset family; exact, via
// brute pair checks and brute triple checks on the points. Small m only.
unsigned max_family_size(const NaiveField& f);

}  // namespace oracle
