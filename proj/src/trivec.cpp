#include "capset/trivec.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "capset/error.hpp"

namespace capset {
namespace {

void check_dim(unsigned n) {
  if (n > trits::max_trits) {
    fail(ErrorCode::dimension_mismatch, "dimension " + std::to_string(n) + " exceeds " +
                                            std::to_string(trits::max_trits));
  }
}

void same_dim(const Point& p, const Point& q) {
  if (p.dim() != q.dim()) fail(ErrorCode::dimension_mismatch, "points have different dimensions");
}

}  // namespace

Point::Point(unsigned n, trits::Planes bits) : bits_(trits::mask(bits, n)), n_(static_cast<std::uint8_t>(n)) {
  check_dim(n);
  if ((bits.one & bits.two) != 0 || !(bits_ == bits)) fail(ErrorCode::invalid_argument, "malformed trit planes");
}

Point Point::from_encoding(unsigned n, std::uint64_t encoding) {
  check_dim(n);
  if (n < trits::max_trits && encoding >= trits::pow3(n)) fail(ErrorCode::invalid_argument, "encoding out of range");
  return Point(n, trits::decode(encoding));
}

Point Point::from_digits(std::span<const std::uint8_t> digits) {
  check_dim(static_cast<unsigned>(digits.size()));
  trits::Planes bits;
  for (unsigned i = 0; i < digits.size(); ++i) {
    if (digits[i] > 2) fail(ErrorCode::invalid_argument, "trit out of range");
    bits = trits::set(bits, i, digits[i]);
  }
  return Point(static_cast<unsigned>(digits.size()), bits);
}

Point Point::parse(std::string_view digits) {
  std::vector<std::uint8_t> d;
  d.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '2') fail(ErrorCode::parse_error, "invalid trit '" + std::string(1, c) + "'");
    d.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return from_digits(d);
}

std::string Point::to_string() const {
  std::string s(n_, '0');
  for (unsigned i = 0; i < n_; ++i) s[i] = static_cast<char>('0' + trit(i));
  return s;
}

Point pt_add(const Point& p, const Point& q) {
  same_dim(p, q);
  return Point(p.dim(), trits::add(p.planes(), q.planes()));
}

Point pt_neg(const Point& p) { return Point(p.dim(), trits::neg(p.planes())); }

Point third_point(const Point& p, const Point& q) {
  same_dim(p, q);
  if (p == q) fail(ErrorCode::invalid_argument, "third_point needs distinct points");
  return Point(p.dim(), trits::neg(trits::add(p.planes(), q.planes())));
}

Point flatten(const Field& field, std::span<const FieldElement> coords) {
  const unsigned m = field.degree();
  const auto n = static_cast<unsigned>(coords.size() * m);
  check_dim(n);
  trits::Planes bits;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const trits::Planes c = field.planes(coords[k]);
    bits.one |= c.one << (k * m);
    bits.two |= c.two << (k * m);
  }
  return Point(n, bits);
}

std::vector<FieldElement> unflatten(const Field& field, const Point& p) {
  const unsigned m = field.degree();
  if (p.dim() % m != 0) fail(ErrorCode::dimension_mismatch, "point dimension is not a multiple of m");
  std::vector<FieldElement> out(p.dim() / m);
  for (std::size_t k = 0; k < out.size(); ++k) {
    trits::Planes c{p.planes().one >> (k * m), p.planes().two >> (k * m)};
    out[k] = FieldElement{static_cast<std::uint32_t>(trits::encode(trits::mask(c, m)))};
  }
  return out;
}

Point extend(const Point& p, unsigned last) {
  if (last > 2) fail(ErrorCode::invalid_argument, "trit out of range");
  return Point(p.dim() + 1, trits::set(p.planes(), p.dim(), last));
}

CapSet::CapSet(unsigned n) : n_(n) { check_dim(n); }

CapSet::CapSet(unsigned n, std::vector<Point> points) : n_(n) {
  check_dim(n);
  for (const Point& p : points) {
    if (p.dim() != n) fail(ErrorCode::dimension_mismatch, "point dimension differs from set dimension");
  }
  std::vector<std::uint64_t> enc(points.size());
  std::transform(points.begin(), points.end(), enc.begin(), [](const Point& p) { return p.encoding(); });
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return enc[a] < enc[b]; });
  points_.reserve(points.size());
  encodings_.reserve(points.size());
  for (std::size_t i : order) {
    if (!encodings_.empty() && encodings_.back() == enc[i]) {
      fail(ErrorCode::invalid_argument, "duplicate point " + points[i].to_string());
    }
    points_.push_back(points[i]);
    encodings_.push_back(enc[i]);
  }
}

bool CapSet::contains(const Point& p) const { return p.dim() == n_ && contains_encoding(p.encoding()); }

bool CapSet::contains_encoding(std::uint64_t encoding) const {
  return std::binary_search(encodings_.begin(), encodings_.end(), encoding);
}

bool CapSet::insert(const Point& p) {
  if (p.dim() != n_) fail(ErrorCode::dimension_mismatch, "point dimension differs from set dimension");
  const std::uint64_t e = p.encoding();
  auto it = std::lower_bound(encodings_.begin(), encodings_.end(), e);
  if (it != encodings_.end() && *it == e) return false;
  const auto pos = it - encodings_.begin();
  encodings_.insert(it, e);
  points_.insert(points_.begin() + pos, p);
  return true;
}

void write_capset(std::ostream& out, const CapSet& set) {
  out << "n=" << set.dim() << '\n';
  for (const Point& p : set.points()) out << p.to_string() << '\n';
}

CapSet read_capset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::parse_error, "empty capset file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("n=", 0) != 0) fail(ErrorCode::parse_error, "first line must be n=<int>");
  unsigned n = 0;
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(line.substr(2), &used);
    if (used != line.size() - 2) throw std::invalid_argument("trailing characters");
    n = static_cast<unsigned>(v);
  } catch (const std::exception&) {
    fail(ErrorCode::parse_error, "bad header '" + line + "'");
  }
  if (n == 0 || n > trits::max_trits) fail(ErrorCode::parse_error, "dimension out of range in header");

  std::vector<Point> points;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.size() != n) {
      fail(ErrorCode::dimension_mismatch, "line " + std::to_string(lineno) + " has " + std::to_string(line.size()) +
                                              " digits, expected " + std::to_string(n));
    }
    points.push_back(Point::parse(line));
  }
  return CapSet(n, std::move(points));
}

void write_capset_file(const std::string& path, const CapSet& set) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot open " + path + " for writing");
  write_capset(out, set);
  if (!out) fail(ErrorCode::io_error, "write failed for " + path);
}

CapSet read_capset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  return read_capset(in);
}

}  // namespace capset
