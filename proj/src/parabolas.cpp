#include "capset/parabolas.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "capset/error.hpp"

namespace capset {
namespace {

void require_even(unsigned m) {
  if (m == 0 || m % 2 != 0) fail(ErrorCode::invalid_argument, "triple classes need an even degree");
}

unsigned mod(long long v, unsigned m) {
  const auto mm = static_cast<long long>(m);
  return static_cast<unsigned>(((v % mm) + mm) % mm);
}

}  // namespace

CoeffFamily::CoeffFamily(std::shared_ptr<const Field> field, std::vector<FieldElement> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  std::sort(coeffs_.begin(), coeffs_.end());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) fail(ErrorCode::invalid_argument, "coefficients must be nonzero");
    if (coeffs_[i].value >= field_->order()) fail(ErrorCode::invalid_argument, "coefficient out of range");
    if (i > 0 && coeffs_[i] == coeffs_[i - 1]) fail(ErrorCode::invalid_argument, "duplicate coefficient");
  }
}

CapSet family_points(const CoeffFamily& family) {
  const Field& F = family.field();
  std::vector<Point> points;
  points.reserve(family.point_count());
  for (std::uint64_t v = 1; v < F.order(); ++v) {
    const FieldElement x{static_cast<std::uint32_t>(v)};
    const FieldElement x2 = F.square(x);
    for (FieldElement c : family.coeffs()) {
      const FieldElement coords[2] = {x, F.mul(c, x2)};
      points.push_back(flatten(F, coords));
    }
  }
  return CapSet(2 * F.degree(), std::move(points));
}

int lemma_condition(const Field& F, FieldElement c1, FieldElement c2, FieldElement c3) {
  const FieldElement sigma2 = F.add(F.add(F.mul(c1, c2), F.mul(c1, c3)), F.mul(c2, c3));
  return F.chi(F.neg(sigma2));
}

std::optional<CoeffViolation> coeff_violation(const Field& F, FieldElement c1, FieldElement c2, FieldElement c3) {
  if (c1 == c2 && c2 == c3) return std::nullopt;
  if (lemma_condition(F, c1, c2, c3) == -1) return std::nullopt;
  const bool repeated = c1 == c2 || c2 == c3 || c1 == c3;

  const FieldElement a = F.add(c1, c3);
  const FieldElement b = F.neg(c3);  // 2 c3
  const FieldElement c = F.add(c2, c3);

  FieldElement roots[2];
  int count = 0;
  if (a.is_zero()) {
    roots[count++] = F.div(F.neg(c), b);
  } else {
    // 1/(2a) = -1/a in characteristic 3.
    const FieldElement disc = F.sub(F.square(b), F.mul(a, c));
    const auto s = F.sqrt(disc);
    if (!s) return std::nullopt;
    const FieldElement inv_a = F.inv(a);
    roots[count++] = F.mul(F.sub(b, *s), inv_a);
    if (!s->is_zero()) roots[count++] = F.mul(F.add(b, *s), inv_a);
  }
  std::sort(roots, roots + count);

  const FieldElement minus_one = F.neg(F.one());
  for (int t = 0; t < count; ++t) {
    const FieldElement r = roots[t];
    if (r.is_zero() || r == minus_one) continue;
    if (repeated && r == F.one()) continue;
    return CoeffViolation{{c1, c2, c3}, {r, F.one(), F.neg(F.add(r, F.one()))}};
  }
  return std::nullopt;
}

bool pair_compatible(const Field& F, FieldElement a, FieldElement b) {
  return !coeff_violation(F, a, a, b) && !coeff_violation(F, a, b, b);
}

bool admissible(const Field& F, std::span<const FieldElement> family, FieldElement candidate) {
  for (FieldElement f : family) {
    if (f == candidate || !pair_compatible(F, candidate, f)) return false;
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      if (coeff_violation(F, candidate, family[i], family[j])) return false;
    }
  }
  return true;
}

FamilyVerdict family_is_capset(const CoeffFamily& family, CheckMode mode, const VerifyOptions& options) {
  FamilyVerdict verdict;
  if (mode == CheckMode::brute) {
    const VerificationReport report = is_capset(family_points(family), options);
    verdict.capset = report.verdict;
    verdict.witness = report.triple;
    return verdict;
  }

  const Field& F = family.field();
  const auto& cs = family.coeffs();
  const std::size_t k = cs.size();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      for (std::size_t c = b; c < k; ++c) {
        if (a == c) continue;
        if (auto v = coeff_violation(F, cs[a], cs[b], cs[c])) {
          std::array<Point, 3> pts;
          for (int t = 0; t < 3; ++t) {
            const FieldElement coords[2] = {v->x[t], F.mul(v->c[t], F.square(v->x[t]))};
            pts[t] = flatten(F, coords);
          }
          verdict.witness = pts;
          verdict.coeff_witness = *v;
          return verdict;
        }
      }
    }
  }
  verdict.capset = true;
  return verdict;
}

CoeffFamily scale_family(const CoeffFamily& family, FieldElement s) {
  std::vector<FieldElement> out;
  for (FieldElement c : family.coeffs()) out.push_back(family.field().mul(c, s));
  return CoeffFamily(family.field_ptr(), std::move(out));
}

CoeffFamily frobenius_family(const CoeffFamily& family, long long j) {
  std::vector<FieldElement> out;
  for (FieldElement c : family.coeffs()) out.push_back(family.field().frobenius(c, j));
  return CoeffFamily(family.field_ptr(), std::move(out));
}

CoeffFamily frobenius_orbit_family(std::shared_ptr<const Field> field, std::span<const FieldElement> reps) {
  const Field& F = *field;
  std::set<FieldElement> seen;
  std::vector<FieldElement> out;
  for (FieldElement a : reps) {
    if (a.is_zero() || a.value >= F.order()) fail(ErrorCode::invalid_argument, "orbit representative out of range");
    if (F.orbit_size(a) != F.degree()) {
      fail(ErrorCode::invalid_argument, "element " + std::to_string(a.value) + " lies in a proper subfield");
    }
    for (unsigned j = 0; j < F.degree(); ++j) {
      const FieldElement c = F.frobenius(a, j);
      if (!seen.insert(c).second) fail(ErrorCode::invalid_argument, "Frobenius orbits intersect");
      out.push_back(c);
    }
  }
  return CoeffFamily(std::move(field), std::move(out));
}

TripleClass canonical_triple(unsigned m, long long i, long long j, long long k) {
  require_even(m);
  std::array<unsigned, 3> t{mod(i, m), mod(j, m), mod(k, m)};
  std::sort(t.begin(), t.end());
  if (t[0] == t[2]) return {0, 0, 0};
  if (t[0] == t[1] || t[1] == t[2]) {
    const unsigned twice = t[1];
    const unsigned once = t[0] == t[1] ? t[2] : t[0];
    const unsigned delta = mod(static_cast<long long>(once) - twice, m);
    return {0, 0, std::min(delta, m - delta)};
  }
  TripleClass best{m, m, m};
  for (unsigned s = 0; s < m; ++s) {
    std::array<unsigned, 3> u{(t[0] + s) % m, (t[1] + s) % m, (t[2] + s) % m};
    std::sort(u.begin(), u.end());
    best = std::min(best, TripleClass{u[0], u[1], u[2]});
  }
  return best;
}

unsigned shift_orbit_length(unsigned m, TripleClass t) {
  std::set<std::array<unsigned, 3>> orbit;
  for (unsigned s = 0; s < m; ++s) {
    std::array<unsigned, 3> u{(t.i + s) % m, (t.j + s) % m, (t.k + s) % m};
    std::sort(u.begin(), u.end());
    orbit.insert(u);
  }
  return static_cast<unsigned>(orbit.size());
}

std::vector<TripleClass> triple_classes(unsigned m) {
  require_even(m);
  std::set<TripleClass> classes;
  for (unsigned i = 0; i < m; ++i) {
    for (unsigned j = i; j < m; ++j) {
      for (unsigned k = j; k < m; ++k) {
        if (i == k) continue;
        classes.insert(canonical_triple(m, i, j, k));
      }
    }
  }
  return {classes.begin(), classes.end()};
}

std::uint64_t class_count(unsigned m) { return triple_classes(m).size(); }

std::uint64_t class_count_bound(unsigned m) {
  const std::uint64_t num = std::uint64_t{m} * m + 2;
  return (num + 5) / 6;
}

bool class_condition(const Field& F, TripleClass t, FieldElement a) {
  return lemma_condition(F, F.frobenius(a, t.i), F.frobenius(a, t.j), F.frobenius(a, t.k)) == -1;
}

ConditionMatrix condition_matrix(const Field& F, std::span<const FieldElement> samples) {
  ConditionMatrix mat;
  mat.classes = triple_classes(F.degree());
  mat.samples.assign(samples.begin(), samples.end());
  for (const TripleClass& t : mat.classes) {
    std::vector<int> row;
    row.reserve(samples.size());
    for (FieldElement a : samples) {
      row.push_back(lemma_condition(F, F.frobenius(a, t.i), F.frobenius(a, t.j), F.frobenius(a, t.k)));
    }
    mat.chi.push_back(std::move(row));
  }
  return mat;
}

std::uint64_t condition_rank(const Field& F, std::span<const FieldElement> samples) {
  if (samples.empty()) fail(ErrorCode::invalid_argument, "rank needs at least one sample");
  const ConditionMatrix mat = condition_matrix(F, samples);
  const std::size_t words = (samples.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows;
  for (const auto& chi_row : mat.chi) {
    std::vector<std::uint64_t> bits(words, 0);
    for (std::size_t c = 0; c < chi_row.size(); ++c) {
      if (chi_row[c] == -1) bits[c / 64] |= std::uint64_t{1} << (c % 64);
    }
    rows.push_back(std::move(bits));
  }
  std::uint64_t rank = 0;
  for (std::size_t col = 0; col < samples.size() && rank < rows.size(); ++col) {
    const std::size_t w = col / 64;
    const std::uint64_t bit = std::uint64_t{1} << (col % 64);
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot][w] & bit)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && (rows[r][w] & bit)) {
        for (std::size_t x = 0; x < words; ++x) rows[r][x] ^= rows[rank][x];
      }
    }
    ++rank;
  }
  return rank;
}

std::vector<FieldElement> full_orbit_elements(const Field& F) {
  std::vector<FieldElement> out;
  for (std::uint64_t v = 1; v < F.order(); ++v) {
    const FieldElement a{static_cast<std::uint32_t>(v)};
    if (F.orbit_size(a) == F.degree()) out.push_back(a);
  }
  return out;
}

ImpossibilityReport three_parabola_impossibility(unsigned m, bool exhaustive, std::uint64_t samples,
                                                 std::uint64_t seed) {
  if (m % 2 == 0) fail(ErrorCode::invalid_argument, "three-parabola impossibility needs an odd degree");
  const auto field = Field::get(m);
  const Field& F = *field;
  const FieldElement one = F.one();
  ImpossibilityReport report;
  report.exhaustive = exhaustive;

  auto check = [&](FieldElement b, FieldElement c) {
    ++report.triples_checked;
    if (family_is_capset(CoeffFamily(field, {one, b, c}), CheckMode::fast).capset) {
      report.counterexample = std::array<FieldElement, 3>{one, b, c};
      return false;
    }
    return true;
  };

  const std::uint64_t q = F.order();
  if (exhaustive) {
    for (std::uint64_t b = 2; b < q && !report.counterexample; ++b) {
      for (std::uint64_t c = b + 1; c < q; ++c) {
        if (!check(FieldElement{static_cast<std::uint32_t>(b)}, FieldElement{static_cast<std::uint32_t>(c)})) break;
      }
    }
  } else {
    if (q < 4) fail(ErrorCode::invalid_argument, "field too small to sample triples");
    std::mt19937_64 rng(seed);
    auto pick = [&](std::mt19937_64& r) { return 2 + uniform_below(r, q - 2); };
    for (std::uint64_t s = 0; s < samples && !report.counterexample; ++s) {
      std::uint64_t b = pick(rng), c = pick(rng);
      while (c == b) c = pick(rng);
      check(FieldElement{static_cast<std::uint32_t>(std::min(b, c))},
            FieldElement{static_cast<std::uint32_t>(std::max(b, c))});
    }
  }
  report.confirmed = !report.counterexample;
  return report;
}

}  // namespace capset
