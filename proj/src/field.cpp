#include "capset/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

#include "capset/error.hpp"

namespace capset {
namespace {

// Remainder of a modulo monic b, both constant term first.
Polynomial poly_mod(Polynomial a, const Polynomial& b) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::uint8_t lead = a.back();
    if (lead != 0) {
      const std::size_t shift = a.size() - 1 - db;
      for (std::size_t i = 0; i < db; ++i) {
        a[shift + i] = static_cast<std::uint8_t>((a[shift + i] + 3 * 3 - lead * b[i]) % 3);
      }
    }
    a.pop_back();
  }
  return a;
}

Polynomial monic_from_index(unsigned degree, std::uint64_t low) {
  Polynomial p(degree + 1, 0);
  for (unsigned i = 0; i < degree; ++i, low /= 3) p[i] = static_cast<std::uint8_t>(low % 3);
  p[degree] = 1;
  return p;
}

}  // namespace

bool is_irreducible(const Polynomial& poly) {
  if (poly.empty() || poly.back() != 1) fail(ErrorCode::invalid_argument, "polynomial must be monic");
  const auto degree = static_cast<unsigned>(poly.size() - 1);
  if (degree == 0) return false;
  for (unsigned d = 1; d <= degree / 2; ++d) {
    const std::uint64_t count = trits::pow3(d);
    for (std::uint64_t low = 0; low < count; ++low) {
      const Polynomial r = poly_mod(poly, monic_from_index(d, low));
      if (std::all_of(r.begin(), r.end(), [](std::uint8_t c) { return c == 0; })) return false;
    }
  }
  return true;
}

Polynomial find_irreducible(unsigned m) {
  if (m == 0) fail(ErrorCode::invalid_argument, "degree must be positive");
  const std::uint64_t count = trits::pow3(m);
  for (std::uint64_t low = 0; low < count; ++low) {
    Polynomial p = monic_from_index(m, low);
    if (is_irreducible(p)) return p;
  }
  fail(ErrorCode::internal, "no irreducible polynomial of degree " + std::to_string(m));
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

Field::Field(unsigned m, unsigned max_table_degree) : m_(m), q_(0) {
  if (m == 0 || m > max_degree) {
    fail(ErrorCode::invalid_argument, "field degree must be in [1, " + std::to_string(max_degree) + "]");
  }
  q_ = trits::pow3(m);
  modulus_ = find_irreducible(m);
  for (unsigned j = 0; j < m; ++j) reduction_ = trits::set(reduction_, j, (3 - modulus_[j]) % 3);

  const auto factors = prime_factors(q_ - 1);
  for (std::uint64_t v = 1; v < q_; ++v) {
    const FieldElement x{static_cast<std::uint32_t>(v)};
    const bool primitive = std::all_of(factors.begin(), factors.end(),
                                       [&](std::uint64_t p) { return pow(x, (q_ - 1) / p) != one(); });
    if (primitive) {
      generator_ = x;
      break;
    }
  }
  if (generator_.is_zero()) fail(ErrorCode::internal, "no generator found");

  if (m <= max_table_degree) build_tables();

  for (std::uint64_t v = 1; v < q_; ++v) {
    if (chi(FieldElement{static_cast<std::uint32_t>(v)}) == -1) {
      nonsquare_ = FieldElement{static_cast<std::uint32_t>(v)};
      break;
    }
  }
}

std::shared_ptr<const Field> Field::get(unsigned m) {
  static std::mutex mutex;
  static std::map<unsigned, std::shared_ptr<const Field>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[m];
  if (!slot) slot = std::make_shared<const Field>(m);
  return slot;
}

FieldElement Field::element(std::uint64_t encoding) const {
  if (encoding >= q_) fail(ErrorCode::invalid_argument, "encoding " + std::to_string(encoding) + " out of range");
  return {static_cast<std::uint32_t>(encoding)};
}

FieldElement Field::from_digits(std::span<const std::uint8_t> digits) const {
  if (digits.size() != m_) fail(ErrorCode::dimension_mismatch, "expected " + std::to_string(m_) + " digits");
  trits::Planes p;
  for (unsigned i = 0; i < m_; ++i) {
    if (digits[i] > 2) fail(ErrorCode::invalid_argument, "digit out of range");
    p = trits::set(p, i, digits[i]);
  }
  return {static_cast<std::uint32_t>(trits::encode(p))};
}

std::vector<std::uint8_t> Field::digits(FieldElement x) const {
  std::vector<std::uint8_t> out(m_);
  const trits::Planes p = planes(x);
  for (unsigned i = 0; i < m_; ++i) out[i] = static_cast<std::uint8_t>(trits::get(p, i));
  return out;
}

trits::Planes Field::times_t(trits::Planes x) const noexcept {
  const unsigned top = trits::get(x, m_ - 1);
  x.one <<= 1;
  x.two <<= 1;
  x = trits::mask(x, m_);
  if (top == 1) x = trits::add(x, reduction_);
  if (top == 2) x = trits::sub(x, reduction_);
  return x;
}

FieldElement Field::poly_mul(FieldElement x, FieldElement y) const noexcept {
  trits::Planes acc;
  trits::Planes shifted = planes(x);
  trits::Planes rest = planes(y);
  while (rest.one | rest.two) {
    if (rest.one & 1U) acc = trits::add(acc, shifted);
    if (rest.two & 1U) acc = trits::sub(acc, shifted);
    rest.one >>= 1;
    rest.two >>= 1;
    if (rest.one | rest.two) shifted = times_t(shifted);
  }
  return {static_cast<std::uint32_t>(trits::encode(acc))};
}

void Field::build_tables() {
  exp_.assign(q_ - 1, 0);
  log_.assign(q_, 0);
  FieldElement cur = one();
  for (std::uint64_t k = 0; k < q_ - 1; ++k) {
    if (k > 0 && cur == one()) fail(ErrorCode::internal, "generator order too small");
    exp_[k] = cur.value;
    log_[cur.value] = static_cast<std::uint32_t>(k);
    cur = poly_mul(cur, generator_);
  }
}

FieldElement Field::inv(FieldElement x) const {
  if (x.is_zero()) fail(ErrorCode::domain_error, "inverse of zero");
  if (has_tables()) {
    const std::uint32_t l = log_[x.value];
    return {exp_[l == 0 ? 0 : q_ - 1 - l]};
  }
  return pow(x, q_ - 2);
}

FieldElement Field::pow(FieldElement x, std::uint64_t e) const noexcept {
  if (x.is_zero()) return e == 0 ? one() : zero();
  if (has_tables()) {
    const std::uint64_t n = q_ - 1;
    const auto l = static_cast<uint128>(log_[x.value]);
    return {exp_[static_cast<std::uint64_t>((l * (e % n)) % n)]};
  }
  FieldElement result = one();
  FieldElement base = x;
  while (e) {
    if (e & 1U) result = poly_mul(result, base);
    e >>= 1;
    if (e) base = poly_mul(base, base);
  }
  return result;
}

FieldElement Field::frobenius(FieldElement x, long long j) const noexcept {
  const auto m = static_cast<long long>(m_);
  const auto steps = static_cast<unsigned>(((j % m) + m) % m);
  if (steps == 0 || x.is_zero()) return x;
  if (has_tables()) return pow(x, trits::pow3(steps));
  for (unsigned i = 0; i < steps; ++i) x = pow(x, 3);
  return x;
}

int Field::chi_by_power(FieldElement x) const noexcept {
  if (x.is_zero()) return 0;
  return pow(x, (q_ - 1) / 2) == one() ? 1 : -1;
}

std::optional<FieldElement> Field::sqrt(FieldElement x) const {
  if (x.is_zero()) return zero();
  if (chi(x) != 1) return std::nullopt;
  FieldElement r;
  if (has_tables()) {
    r = FieldElement{exp_[log_[x.value] / 2]};
  } else {
    // Tonelli-Shanks with q - 1 = 2^s * odd.
    std::uint64_t odd = q_ - 1;
    unsigned s = 0;
    while ((odd & 1U) == 0) {
      odd >>= 1;
      ++s;
    }
    FieldElement c = pow(nonsquare_, odd);
    FieldElement t = pow(x, odd);
    r = pow(x, (odd + 1) / 2);
    unsigned level = s;
    while (t != one()) {
      unsigned i = 0;
      FieldElement t2 = t;
      while (t2 != one()) {
        t2 = mul(t2, t2);
        ++i;
      }
      FieldElement b = c;
      for (unsigned k = 0; k + i + 1 < level; ++k) b = mul(b, b);
      r = mul(r, b);
      c = mul(b, b);
      t = mul(t, c);
      level = i;
    }
  }
  const FieldElement other = neg(r);
  return std::min(r, other);
}

std::uint32_t Field::log(FieldElement x) const {
  if (!has_tables()) fail(ErrorCode::budget_exceeded, "discrete log needs tables");
  if (x.is_zero()) fail(ErrorCode::domain_error, "log of zero");
  return log_[x.value];
}

FieldElement Field::exp(std::uint64_t k) const noexcept {
  if (has_tables()) return {exp_[k % (q_ - 1)]};
  return pow(generator_, k);
}

unsigned Field::orbit_size(FieldElement x) const noexcept {
  for (unsigned d = 1; d < m_; ++d) {
    if (m_ % d == 0 && frobenius(x, d) == x) return d;
  }
  return m_;
}

SubfieldEmbedding::SubfieldEmbedding(std::shared_ptr<const Field> small, std::shared_ptr<const Field> big)
    : small_(std::move(small)), big_(std::move(big)) {
  const unsigned k = small_->degree();
  const unsigned m = big_->degree();
  if (m % k != 0) fail(ErrorCode::invalid_argument, "subfield degree must divide field degree");

  const Field& F = *big_;
  const Polynomial& poly = small_->modulus();
  auto is_root = [&](FieldElement h) {
    FieldElement acc = F.zero();
    for (std::size_t i = poly.size(); i-- > 0;) acc = F.add(F.mul(acc, h), F.prime(poly[i]));
    return acc.is_zero();
  };

  // Subfield elements are 0 and the powers of g^((q-1)/(q_s-1)).
  const std::uint64_t qs = small_->order();
  const FieldElement step = F.pow(F.generator(), (F.order() - 1) / (qs - 1));
  bool found = is_root(F.zero());
  root_ = F.zero();
  FieldElement cur = F.one();
  for (std::uint64_t i = 0; i < qs - 1; ++i, cur = F.mul(cur, step)) {
    if (is_root(cur) && (!found || cur < root_)) {
      root_ = cur;
      found = true;
    }
  }
  if (!found) fail(ErrorCode::internal, "subfield modulus has no root");

  std::vector<FieldElement> powers(k);
  powers[0] = F.one();
  for (unsigned i = 1; i < k; ++i) powers[i] = F.mul(powers[i - 1], root_);
  table_.resize(qs);
  for (std::uint64_t v = 0; v < qs; ++v) {
    FieldElement acc = F.zero();
    std::uint64_t rest = v;
    for (unsigned i = 0; i < k; ++i, rest /= 3) {
      const auto d = static_cast<int>(rest % 3);
      if (d == 1) acc = F.add(acc, powers[i]);
      if (d == 2) acc = F.sub(acc, powers[i]);
    }
    table_[v] = acc;
  }
}

FieldElement SubfieldEmbedding::operator()(FieldElement y) const {
  if (y.value >= table_.size()) fail(ErrorCode::invalid_argument, "element not in subfield");
  return table_[y.value];
}

SubfieldEmbedding half_subfield(unsigned m) {
  if (m % 2 != 0) fail(ErrorCode::invalid_argument, "subfield embedding needs an even degree");
  return SubfieldEmbedding(Field::get(m / 2), Field::get(m));
}

}  // namespace capset
