#pragma once

// Arithmetic in GF(3^m) over a polynomial basis.
//
// Elements are stored by their canonical encoding: the coefficient vector read
// as a base-3 integer with the constant term as least significant digit. The
// modulus is the smallest monic irreducible of degree m (polynomials ordered as
// base-3 integers, constant term last) and the generator is the smallest
// encoding of multiplicative order q-1. Both choices are deterministic, so any
// encoding written to disk can be reinterpreted by rebuilding the field from m.
//
// For q <= 3^max_table_degree the constructor builds discrete log/exp tables
// and multiplication, inversion, the quadratic character and square roots all
// go through them. Larger fields fall back to polynomial arithmetic.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "capset/trits.hpp"

namespace capset {

struct FieldElement {
  std::uint32_t value = 0;

  constexpr bool is_zero() const noexcept { return value == 0; }
  friend constexpr bool operator==(FieldElement, FieldElement) = default;
  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

// Monic polynomial over F_3, coefficients constant term first.
using Polynomial = std::vector<std::uint8_t>;

// Smallest monic irreducible polynomial of degree m over F_3.
Polynomial find_irreducible(unsigned m);

// Trial division by every monic polynomial of degree <= deg/2.
bool is_irreducible(const Polynomial& poly);

class Field {
 public:
  static constexpr unsigned max_degree = 20;
  static constexpr unsigned default_table_degree = 16;

  explicit Field(unsigned m, unsigned max_table_degree = default_table_degree);

  // Shared, lazily built instance per degree (tables included when allowed).
  static std::shared_ptr<const Field> get(unsigned m);

  unsigned degree() const noexcept { return m_; }
  std::uint64_t order() const noexcept { return q_; }
  const Polynomial& modulus() const noexcept { return modulus_; }
  FieldElement generator() const noexcept { return generator_; }
  bool has_tables() const noexcept { return !exp_.empty(); }

  FieldElement zero() const noexcept { return {}; }
  FieldElement one() const noexcept { return {1}; }
  FieldElement element(std::uint64_t encoding) const;
  FieldElement from_digits(std::span<const std::uint8_t> digits) const;
  std::vector<std::uint8_t> digits(FieldElement x) const;
  trits::Planes planes(FieldElement x) const noexcept { return trits::decode(x.value); }

  FieldElement add(FieldElement x, FieldElement y) const noexcept {
    return {static_cast<std::uint32_t>(trits::encode(trits::add(planes(x), planes(y))))};
  }
  FieldElement sub(FieldElement x, FieldElement y) const noexcept {
    return {static_cast<std::uint32_t>(trits::encode(trits::sub(planes(x), planes(y))))};
  }
  FieldElement neg(FieldElement x) const noexcept {
    return {static_cast<std::uint32_t>(trits::encode(trits::neg(planes(x))))};
  }
  FieldElement mul(FieldElement x, FieldElement y) const noexcept {
    if (x.is_zero() || y.is_zero()) return {};
    if (has_tables()) {
      std::uint64_t e = std::uint64_t{log_[x.value]} + log_[y.value];
      if (e >= q_ - 1) e -= q_ - 1;
      return {exp_[e]};
    }
    return poly_mul(x, y);
  }
  FieldElement square(FieldElement x) const noexcept { return mul(x, x); }

  // Throws ErrorCode::domain_error on zero.
  FieldElement inv(FieldElement x) const;
  FieldElement div(FieldElement x, FieldElement y) const { return mul(x, inv(y)); }
  FieldElement pow(FieldElement x, std::uint64_t e) const noexcept;

  // x^(3^(j mod m)).
  FieldElement frobenius(FieldElement x, long long j) const noexcept;

  // 0 for zero, +1 for nonzero squares, -1 otherwise.
  int chi(FieldElement x) const noexcept {
    if (x.is_zero()) return 0;
    if (has_tables()) return (log_[x.value] & 1U) ? -1 : 1;
    return chi_by_power(x);
  }
  int chi_by_power(FieldElement x) const noexcept;

  // Root with the smaller encoding, or nullopt for non-squares.
  std::optional<FieldElement> sqrt(FieldElement x) const;

  // Smallest-encoding non-square.
  FieldElement nonsquare() const noexcept { return nonsquare_; }

  // Discrete log to the base generator(); requires tables and x != 0.
  std::uint32_t log(FieldElement x) const;
  FieldElement exp(std::uint64_t k) const noexcept;

  // Size of the Frobenius orbit of x (divides m).
  unsigned orbit_size(FieldElement x) const noexcept;

  // Embedding of the prime field.
  FieldElement prime(int c) const noexcept { return {static_cast<std::uint32_t>(((c % 3) + 3) % 3)}; }

  FieldElement poly_mul(FieldElement x, FieldElement y) const noexcept;

 private:
  trits::Planes times_t(trits::Planes x) const noexcept;
  void build_tables();

  unsigned m_;
  std::uint64_t q_;
  Polynomial modulus_;
  trits::Planes reduction_;  // t^m expressed in the basis 1..t^(m-1)
  FieldElement generator_;
  FieldElement nonsquare_;
  std::vector<std::uint32_t> exp_;  // size q-1
  std::vector<std::uint32_t> log_;  // size q, log_[0] unused
};

// Field homomorphism GF(3^k) -> GF(3^m) for k | m, sending the small field's
// polynomial variable to the smallest-encoding root of its modulus.
class SubfieldEmbedding {
 public:
  SubfieldEmbedding(std::shared_ptr<const Field> small, std::shared_ptr<const Field> big);

  const Field& small() const noexcept { return *small_; }
  const Field& big() const noexcept { return *big_; }
  FieldElement image_of_variable() const noexcept { return root_; }
  FieldElement operator()(FieldElement y) const;

 private:
  std::shared_ptr<const Field> small_;
  std::shared_ptr<const Field> big_;
  FieldElement root_;
  std::vector<FieldElement> table_;
};

// Embedding of GF(3^(m/2)) into GF(3^m); throws for odd m.
SubfieldEmbedding half_subfield(unsigned m);

// Prime factors of n, ascending, without repetition.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

}  // namespace capset
