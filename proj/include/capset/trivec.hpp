#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "capset/field.hpp"
#include "capset/trits.hpp"

namespace capset {

// A point of F_3^n, n <= trits::max_trits. Trit i is coordinate i; the
// encoding is sum trit_i * 3^i, so sorting by encoding is the canonical order.
class Point {
 public:
  Point() = default;
  Point(unsigned n, trits::Planes bits);

  static Point zero(unsigned n) { return Point(n, {}); }
  static Point from_encoding(unsigned n, std::uint64_t encoding);
  static Point from_digits(std::span<const std::uint8_t> digits);
  // Parses a digit string such as "0121"; coordinate 0 first.
  static Point parse(std::string_view digits);

  unsigned dim() const noexcept { return n_; }
  unsigned trit(unsigned i) const noexcept { return trits::get(bits_, i); }
  const trits::Planes& planes() const noexcept { return bits_; }
  std::uint64_t encoding() const noexcept { return trits::encode(bits_); }
  std::string to_string() const;

  friend bool operator==(const Point& a, const Point& b) noexcept { return a.n_ == b.n_ && a.bits_ == b.bits_; }

 private:
  trits::Planes bits_;
  std::uint8_t n_ = 0;
};

Point pt_add(const Point& p, const Point& q);
Point pt_neg(const Point& p);
// The unique R with {P, Q, R} a line, i.e. -(P + Q). Throws if P == Q.
Point third_point(const Point& p, const Point& q);

// Concatenates the polynomial-basis digits of each coordinate (coordinate 0
// first, constant term first within a coordinate) into a point of F_3^(d*m).
Point flatten(const Field& field, std::span<const FieldElement> coords);

// Inverse of flatten for points of dimension d*m.
std::vector<FieldElement> unflatten(const Field& field, const Point& p);

// Appends one extra trit as the last coordinate.
Point extend(const Point& p, unsigned last);

// Duplicate-free point set of fixed dimension kept sorted by encoding.
class CapSet {
 public:
  explicit CapSet(unsigned n = 0);
  // Throws on dimension mismatch or duplicate points.
  CapSet(unsigned n, std::vector<Point> points);

  unsigned dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<std::uint64_t>& encodings() const noexcept { return encodings_; }
  const Point& operator[](std::size_t i) const noexcept { return points_[i]; }

  bool contains(const Point& p) const;
  bool contains_encoding(std::uint64_t encoding) const;

  // Returns false if the point is already present.
  bool insert(const Point& p);

  friend bool operator==(const CapSet& a, const CapSet& b) { return a.n_ == b.n_ && a.encodings_ == b.encodings_; }

 private:
  unsigned n_;
  std::vector<Point> points_;
  std::vector<std::uint64_t> encodings_;
};

// Text format: "n=<int>" then one point per line (n digits), sorted by encoding.
void write_capset(std::ostream& out, const CapSet& set);
CapSet read_capset(std::istream& in);
void write_capset_file(const std::string& path, const CapSet& set);
CapSet read_capset_file(const std::string& path);

}  // namespace capset
