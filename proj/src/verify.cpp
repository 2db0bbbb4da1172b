#include "capset/verify.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <limits>
#include <thread>

#include "capset/error.hpp"

namespace capset {
namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ms(Clock::time_point start) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count());
}

class Bitmap {
 public:
  explicit Bitmap(std::uint64_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  bool test(std::uint64_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::uint64_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void set_atomic(std::uint64_t i) noexcept {
    std::atomic_ref<std::uint64_t>(words_[i >> 6]).fetch_or(std::uint64_t{1} << (i & 63), std::memory_order_relaxed);
  }

  std::uint64_t count() const noexcept {
    std::uint64_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }

  // Smallest clear index below bits_, or bits_ if none.
  std::uint64_t first_clear() const noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (words_[k] != ~std::uint64_t{0}) {
        const std::uint64_t i = k * 64 + static_cast<std::uint64_t>(std::countr_one(words_[k]));
        return std::min(i, bits_);
      }
    }
    return bits_;
  }

 private:
  std::uint64_t bits_;
  std::vector<std::uint64_t> words_;
};

bool fits_budget(unsigned n, const VerifyOptions& options) {
  return n < trits::max_trits && trits::pow3(n) <= options.memory_budget_bits;
}

void require_budget(unsigned n, const VerifyOptions& options) {
  if (!fits_budget(n, options)) {
    fail(ErrorCode::budget_exceeded,
         "3^" + std::to_string(n) + " points exceed the verification memory budget");
  }
}

// Runs body(row) for every row in [0, rows) over a pool of threads with
// dynamic scheduling. body returns false to stop claiming further rows.
template <typename Body>
void for_each_row(std::size_t rows, unsigned threads, Body&& body) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t row = next.fetch_add(1, std::memory_order_relaxed);
      if (row >= rows || !body(row)) return;
    }
  };
  if (threads <= 1 || rows < 64) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
}

std::uint64_t pairs_before_row(std::uint64_t n, std::uint64_t row) {
  // sum_{r < row} (n - 1 - r)
  return row * (n - 1) - row * (row - 1) / 2;
}

Bitmap coverage(const CapSet& set, unsigned threads, std::uint64_t& pairs) {
  const unsigned n = set.dim();
  Bitmap bitmap(trits::pow3(n));
  for (std::uint64_t e : set.encodings()) bitmap.set(e);
  const auto& pts = set.points();
  const std::size_t size = pts.size();
  for_each_row(size, threads, [&](std::size_t i) {
    const trits::Planes p = pts[i].planes();
    for (std::size_t j = i + 1; j < size; ++j) {
      bitmap.set_atomic(trits::encode(trits::neg(trits::add(p, pts[j].planes()))));
    }
    return true;
  });
  pairs = size < 2 ? 0 : static_cast<std::uint64_t>(size) * (size - 1) / 2;
  return bitmap;
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

VerificationReport is_capset(const CapSet& set, const VerifyOptions& options) {
  const auto start = Clock::now();
  const unsigned threads = resolve_threads(options.threads);
  const auto& pts = set.points();
  const std::size_t size = pts.size();

  std::optional<Bitmap> bitmap;
  if (fits_budget(set.dim(), options)) {
    bitmap.emplace(trits::pow3(set.dim()));
    for (std::uint64_t e : set.encodings()) bitmap->set(e);
  }
  auto member = [&](std::uint64_t e) { return bitmap ? bitmap->test(e) : set.contains_encoding(e); };

  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::atomic<std::size_t> best_row{none};
  std::vector<std::size_t> hit_col(size, none);
  for_each_row(size, threads, [&](std::size_t i) {
    if (i > best_row.load(std::memory_order_relaxed)) return false;
    const trits::Planes p = pts[i].planes();
    for (std::size_t j = i + 1; j < size; ++j) {
      if (member(trits::encode(trits::neg(trits::add(p, pts[j].planes()))))) {
        hit_col[i] = j;
        std::size_t cur = best_row.load(std::memory_order_relaxed);
        while (i < cur && !best_row.compare_exchange_weak(cur, i, std::memory_order_relaxed)) {
        }
        return false;
      }
    }
    return true;
  });

  VerificationReport report;
  const std::size_t i = best_row.load();
  if (i == none) {
    report.verdict = true;
    report.pairs_examined = size < 2 ? 0 : static_cast<std::uint64_t>(size) * (size - 1) / 2;
  } else {
    const std::size_t j = hit_col[i];
    report.verdict = false;
    report.triple = std::array<Point, 3>{pts[i], pts[j], third_point(pts[i], pts[j])};
    report.pairs_examined = pairs_before_row(size, i) + (j - i);
  }
  report.wall_time_ms = elapsed_ms(start);
  return report;
}

VerificationReport is_complete(const CapSet& set, const VerifyOptions& options) {
  const auto start = Clock::now();
  require_budget(set.dim(), options);
  VerificationReport capset = is_capset(set, options);
  if (!capset.verdict) fail(ErrorCode::not_a_capset, "completeness requires a capset");

  VerificationReport report;
  const Bitmap bitmap = coverage(set, resolve_threads(options.threads), report.pairs_examined);
  const std::uint64_t total = trits::pow3(set.dim());
  report.coverage_size = bitmap.count();
  const std::uint64_t first = bitmap.first_clear();
  report.verdict = first == total;
  if (!report.verdict) report.uncovered = Point::from_encoding(set.dim(), first);
  report.wall_time_ms = elapsed_ms(start);
  return report;
}

std::vector<Point> uncovered_points(const CapSet& set, const VerifyOptions& options) {
  require_budget(set.dim(), options);
  std::uint64_t pairs = 0;
  const Bitmap bitmap = coverage(set, resolve_threads(options.threads), pairs);
  std::vector<Point> out;
  const std::uint64_t total = trits::pow3(set.dim());
  for (std::uint64_t e = 0; e < total; ++e) {
    if (!bitmap.test(e)) out.push_back(Point::from_encoding(set.dim(), e));
  }
  return out;
}

bool lower_bound_check(std::uint64_t size, unsigned n) {
  if (n > 80) return false;  // N(N+1)/2 < 2^127 < 3^81 for any 64-bit N
  uint128 space = 1;
  for (unsigned i = 0; i < n; ++i) space *= 3;
  const uint128 pairs = static_cast<uint128>(size) * (static_cast<uint128>(size) + 1) / 2;
  return pairs >= space;
}

CapSet greedy_complete(const CapSet& set, const std::vector<Point>* pool, const VerifyOptions& options) {
  const unsigned n = set.dim();
  require_budget(n, options);
  if (!is_capset(set, options).verdict) fail(ErrorCode::not_a_capset, "greedy completion requires a capset");

  std::uint64_t pairs = 0;
  Bitmap forbidden = coverage(set, resolve_threads(options.threads), pairs);
  std::vector<Point> chosen = set.points();

  auto admit = [&](const Point& p) {
    const std::uint64_t e = p.encoding();
    if (forbidden.test(e)) return;
    for (const Point& s : chosen) forbidden.set(trits::encode(trits::neg(trits::add(p.planes(), s.planes()))));
    forbidden.set(e);
    chosen.push_back(p);
  };

  if (pool) {
    std::vector<Point> ordered = *pool;
    for (const Point& p : ordered) {
      if (p.dim() != n) fail(ErrorCode::dimension_mismatch, "pool point dimension differs from set");
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const Point& a, const Point& b) { return a.encoding() < b.encoding(); });
    for (const Point& p : ordered) admit(p);
  } else {
    const std::uint64_t total = trits::pow3(n);
    for (std::uint64_t e = 0; e < total; ++e) {
      if (!forbidden.test(e)) admit(Point::from_encoding(n, e));
    }
  }
  return CapSet(n, std::move(chosen));
}

}  // namespace capset
