#include "capset/construct.hpp"

#include <algorithm>
#include <set>

#include "capset/error.hpp"

namespace capset {
namespace {

bool within_budget(unsigned n, const VerifyOptions& options) {
  return n < trits::max_trits && trits::pow3(n) <= options.memory_budget_bits;
}

// Runs the capset check and, when the budget allows, the completeness check.
void certify(ConstructionResult& result, const ConstructOptions& options) {
  result.is_capset = is_capset(result.set, options.verify).verdict;
  if (within_budget(result.n, options.verify)) {
    result.certified = true;
    result.complete = result.is_capset && is_complete(result.set, options.verify).verdict;
  } else if (!options.uncertified) {
    fail(ErrorCode::budget_exceeded, "3^" + std::to_string(result.n) +
                                         " exceeds the verification budget; pass --uncertified to skip");
  }
}

// Adds p unless it lies on a line through two points already present.
bool admit(CapSet& set, const Point& p) {
  if (set.contains(p)) return false;
  for (const Point& s : set.points()) {
    if (set.contains(third_point(p, s))) return false;
  }
  set.insert(p);
  return true;
}

ConstructionResult build_complete(unsigned n, const ConstructOptions& options) {
  ConstructionResult result;
  result.construction = "complete";
  result.n = n;

  if (n % 2 == 0) {
    const unsigned m = n / 2;
    result.m = m;
    result.set = two_parabolas(m);
    if (m % 2 == 0) {
      const auto field = Field::get(m);
      const NonsquarePatch patch = nonsquare_patch(m);
      result.lambda = patch.levels.front().lambda;
      result.d = patch.levels.front().d;
      for (FieldElement b : patch.elements) {
        const FieldElement coords[2] = {field->zero(), b};
        if (!admit(result.set, flatten(*field, coords))) ++result.patch_rejected;
      }
      result.fallback_used = result.patch_rejected > 0;
    }
  } else {
    const unsigned m = (n - 1) / 2;
    result.m = m;
    CapSet base = n == 1 ? CapSet(0, {Point::zero(0)}) : CapSet(n - 1);
    if (n > 1) {
      ConstructionResult inner = build_complete(n - 1, options);
      base = std::move(inner.set);
      result.lambda = inner.lambda;
      result.d = inner.d;
      result.fallback_used = inner.fallback_used;
      result.fallback_points = inner.fallback_points;
      result.patch_rejected = inner.patch_rejected;
    }
    std::vector<Point> points;
    points.reserve(2 * base.size());
    for (const Point& p : base.points()) {
      points.push_back(extend(p, 0));
      points.push_back(extend(p, 1));
    }
    result.set = CapSet(n, std::move(points));
  }

  certify(result, options);
  if (result.certified && result.is_capset && !*result.complete) {
    const std::size_t before = result.set.size();
    if (n % 2 == 0 && result.m % 2 == 0) {
      const auto field = Field::get(result.m);
      std::vector<Point> pool;
      for (std::uint64_t v = 1; v < field->order(); ++v) {
        const FieldElement b{static_cast<std::uint32_t>(v)};
        if (field->chi(b) != -1) continue;
        const FieldElement coords[2] = {field->zero(), b};
        pool.push_back(flatten(*field, coords));
      }
      result.set = greedy_complete(result.set, &pool, options.verify);
    }
    if (!is_complete(result.set, options.verify).verdict) {
      result.set = greedy_complete(result.set, nullptr, options.verify);
    }
    result.fallback_used = true;
    result.fallback_points += result.set.size() - before;
    certify(result, options);
  }
  result.verified = result.is_capset && result.complete.value_or(false);
  return result;
}

}  // namespace

CapSet two_parabolas(unsigned m) {
  const auto field = Field::get(m);
  const Field& F = *field;
  std::vector<Point> points;
  points.reserve(2 * (F.order() - 1));
  for (std::uint64_t v = 1; v < F.order(); ++v) {
    const FieldElement x{static_cast<std::uint32_t>(v)};
    const FieldElement x2 = F.square(x);
    const FieldElement up[2] = {x, x2};
    const FieldElement down[2] = {x, F.neg(x2)};
    points.push_back(flatten(F, up));
    points.push_back(flatten(F, down));
  }
  return CapSet(2 * m, std::move(points));
}

CapSet elliptic_quadric(unsigned m) {
  const auto field = Field::get(m);
  const Field& F = *field;
  const FieldElement lambda = F.nonsquare();
  std::vector<Point> points;
  points.reserve(F.order() * F.order());
  for (std::uint64_t a = 0; a < F.order(); ++a) {
    const FieldElement x{static_cast<std::uint32_t>(a)};
    const FieldElement x2 = F.square(x);
    for (std::uint64_t b = 0; b < F.order(); ++b) {
      const FieldElement y{static_cast<std::uint32_t>(b)};
      const FieldElement coords[3] = {x, y, F.sub(x2, F.mul(lambda, F.square(y)))};
      points.push_back(flatten(F, coords));
    }
  }
  return CapSet(3 * m, std::move(points));
}

NonsquarePatch nonsquare_patch(unsigned m) {
  if (m == 0 || m % 2 != 0) fail(ErrorCode::invalid_argument, "non-square patch needs an even degree");
  const SubfieldEmbedding embed = half_subfield(m);
  const Field& F = embed.big();
  const Field& S = embed.small();

  PatchLevel level;
  level.m = m;
  level.lambda = F.nonsquare();
  level.d = S.nonsquare();
  const auto root = F.sqrt(embed(level.d));
  if (!root) fail(ErrorCode::internal, "embedded subfield element is not a square");
  level.sqrt_d = *root;

  std::set<FieldElement> out;
  for (std::uint64_t v = 1; v < S.order(); ++v) {
    const FieldElement x = embed(FieldElement{static_cast<std::uint32_t>(v)});
    const FieldElement xs = F.mul(x, level.sqrt_d);
    for (const FieldElement sign : {F.one(), F.neg(F.one())}) {
      out.insert(F.mul(level.lambda, F.square(F.add(sign, xs))));
    }
  }
  level.contributed = out.size();

  NonsquarePatch patch;
  patch.levels.push_back(level);
  if ((m / 2) % 2 == 0) {
    const NonsquarePatch inner = nonsquare_patch(m / 2);
    const std::size_t before = out.size();
    for (FieldElement e : inner.elements) out.insert(F.mul(level.lambda, embed(e)));
    patch.levels.insert(patch.levels.end(), inner.levels.begin(), inner.levels.end());
    patch.levels[1].contributed = out.size() - before;
  }
  patch.elements.assign(out.begin(), out.end());
  for (FieldElement e : patch.elements) {
    if (F.chi(e) != -1) fail(ErrorCode::internal, "patch element is a square");
  }
  return patch;
}

ConstructionResult construct_two_parabolas(unsigned m, const ConstructOptions& options) {
  ConstructionResult result;
  result.construction = "two-parabolas";
  result.m = m;
  result.n = 2 * m;
  result.set = two_parabolas(m);
  certify(result, options);
  const bool expect_complete = m % 2 == 1;
  result.verified = result.is_capset && result.complete && *result.complete == expect_complete;
  return result;
}

ConstructionResult construct_quadric(unsigned m, const ConstructOptions& options) {
  ConstructionResult result;
  result.construction = "quadric";
  result.m = m;
  result.n = 3 * m;
  result.lambda = Field::get(m)->nonsquare();
  result.set = elliptic_quadric(m);
  certify(result, options);
  result.verified = result.is_capset && result.complete.value_or(false);
  return result;
}

ConstructionResult complete_capset(unsigned n, const ConstructOptions& options) {
  if (n == 0) fail(ErrorCode::invalid_argument, "dimension must be positive");
  if (n > trits::max_trits) fail(ErrorCode::dimension_mismatch, "dimension too large");
  if (!within_budget(n, options.verify) && !options.uncertified) {
    fail(ErrorCode::budget_exceeded, "3^" + std::to_string(n) +
                                         " exceeds the verification budget; pass --uncertified to skip");
  }
  return build_complete(n, options);
}

unsigned size_ratio_bound(std::uint64_t size, unsigned n) {
  uint128 space = 1;
  for (unsigned i = 0; i < n; ++i) space *= 3;
  const uint128 target = static_cast<uint128>(size) * size;
  unsigned k = 0;
  while (static_cast<uint128>(k) * k * space < target) ++k;
  return k;
}

}  // namespace capset
