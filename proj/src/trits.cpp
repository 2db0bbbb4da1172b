#include "capset/trits.hpp"

#include <array>

namespace capset::trits {
namespace {

constexpr unsigned chunk = 8;
constexpr std::uint64_t chunk_radix = 6561;  // 3^8

struct Tables {
  std::array<std::uint16_t, 65536> to_value{};  // index: one byte | two byte << 8
  std::array<std::uint8_t, chunk_radix> one{};
  std::array<std::uint8_t, chunk_radix> two{};

  Tables() {
    for (unsigned v = 0; v < chunk_radix; ++v) {
      unsigned rest = v;
      unsigned o = 0, t = 0;
      for (unsigned i = 0; i < chunk; ++i, rest /= 3) {
        if (rest % 3 == 1) o |= 1U << i;
        if (rest % 3 == 2) t |= 1U << i;
      }
      one[v] = static_cast<std::uint8_t>(o);
      two[v] = static_cast<std::uint8_t>(t);
      to_value[o | (t << 8)] = static_cast<std::uint16_t>(v);
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

std::uint64_t encode(Planes p) noexcept {
  const Tables& t = tables();
  std::uint64_t value = 0;
  std::uint64_t scale = 1;
  while (p.one | p.two) {
    const unsigned key = static_cast<unsigned>(p.one & 0xff) | (static_cast<unsigned>(p.two & 0xff) << 8);
    value += scale * t.to_value[key];
    scale *= chunk_radix;
    p.one >>= chunk;
    p.two >>= chunk;
  }
  return value;
}

Planes decode(std::uint64_t value) noexcept {
  const Tables& t = tables();
  Planes p;
  unsigned shift = 0;
  while (value != 0) {
    const auto digit = static_cast<unsigned>(value % chunk_radix);
    p.one |= std::uint64_t{t.one[digit]} << shift;
    p.two |= std::uint64_t{t.two[digit]} << shift;
    value /= chunk_radix;
    shift += chunk;
  }
  return p;
}

}  // namespace capset::trits
