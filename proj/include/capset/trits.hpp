#pragma once

// Bit-sliced ternary vectors. Trit i lives in bit i of two planes: `one` is set
// where the trit is 1, `two` where it is 2. A bit is never set in both planes.

#include <cstdint>

namespace capset {
// GCC/Clang extension; used for exact products of 64-bit counts.
__extension__ typedef unsigned __int128 uint128;
}  // namespace capset

namespace capset::trits {

inline constexpr unsigned max_trits = 40;  // 3^40 < 2^64

struct Planes {
  std::uint64_t one = 0;
  std::uint64_t two = 0;

  friend constexpr bool operator==(const Planes&, const Planes&) = default;
};

constexpr Planes add(Planes a, Planes b) noexcept {
  const std::uint64_t a0 = ~(a.one | a.two);
  const std::uint64_t b0 = ~(b.one | b.two);
  return {(a.one & b0) | (b.one & a0) | (a.two & b.two),
          (a.two & b0) | (b.two & a0) | (a.one & b.one)};
}

constexpr Planes neg(Planes a) noexcept { return {a.two, a.one}; }

constexpr Planes sub(Planes a, Planes b) noexcept { return add(a, neg(b)); }

constexpr Planes mask(Planes a, unsigned count) noexcept {
  const std::uint64_t m = count >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << count) - 1;
  return {a.one & m, a.two & m};
}

constexpr unsigned get(Planes a, unsigned i) noexcept {
  return static_cast<unsigned>((a.one >> i) & 1U) | (static_cast<unsigned>((a.two >> i) & 1U) << 1);
}

constexpr Planes set(Planes a, unsigned i, unsigned trit) noexcept {
  const std::uint64_t bit = std::uint64_t{1} << i;
  a.one &= ~bit;
  a.two &= ~bit;
  if (trit == 1) a.one |= bit;
  if (trit == 2) a.two |= bit;
  return a;
}

// Base-3 value with trit 0 as the least significant digit.
std::uint64_t encode(Planes p) noexcept;

// Inverse of encode for values below 3^max_trits.
Planes decode(std::uint64_t value) noexcept;

constexpr std::uint64_t pow3(unsigned e) noexcept {
  std::uint64_t r = 1;
  while (e--) r *= 3;
  return r;
}

}  // namespace capset::trits
