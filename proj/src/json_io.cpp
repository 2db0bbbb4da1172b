#include "capset/json_io.hpp"

#include <sstream>

namespace capset {

using nlohmann::json;

std::string modulus_digits(const Polynomial& modulus) {
  std::string s;
  for (std::size_t i = modulus.size(); i-- > 0;) s.push_back(static_cast<char>('0' + modulus[i]));
  return s;
}

json field_header(const Field& field) {
  return {{"m", field.degree()},
          {"q", field.order()},
          {"modulus", modulus_digits(field.modulus())},
          {"generator", field.generator().value}};
}

json report_to_json(const VerificationReport& report) {
  json j;
  j["format"] = 1;
  j["verdict"] = report.verdict;
  if (report.triple) {
    json pts = json::array();
    for (const Point& p : *report.triple) pts.push_back(p.to_string());
    j["witness"] = {{"kind", "triple"}, {"points", pts}};
  } else if (report.uncovered) {
    j["witness"] = {{"kind", "uncovered"}, {"point", report.uncovered->to_string()}};
  } else {
    j["witness"] = nullptr;
  }
  j["pairs_examined"] = report.pairs_examined;
  j["coverage_size"] = report.coverage_size;
  j["wall_time_ms"] = report.wall_time_ms;
  return j;
}

json construction_to_json(const ConstructionResult& r) {
  json j;
  j["format"] = 1;
  j["construction"] = r.construction;
  j["n"] = r.n;
  if (r.m > 0) {
    const auto field = Field::get(r.m);
    j["m"] = r.m;
    j["field"] = field_header(*field);
    j["modulus"] = modulus_digits(field->modulus());
  } else {
    j["m"] = 0;
    j["modulus"] = nullptr;
  }
  j["lambda"] = r.lambda ? json(r.lambda->value) : json(nullptr);
  j["d"] = r.d ? json(r.d->value) : json(nullptr);
  if (r.d && r.m >= 2) j["d_field"] = field_header(*Field::get(r.m / 2));
  j["size"] = r.set.size();
  j["size_ratio_bound"] = size_ratio_bound(r.set.size(), r.n);
  j["lower_bound_ok"] = lower_bound_check(r.set.size(), r.n);
  j["fallback_used"] = r.fallback_used;
  j["fallback_points"] = r.fallback_points;
  j["patch_rejected"] = r.patch_rejected;
  j["certified"] = r.certified;
  j["is_capset"] = r.is_capset;
  j["complete"] = r.complete ? json(*r.complete) : json(nullptr);
  j["verified"] = r.verified;
  return j;
}

json family_to_json(const CoeffFamily& family) {
  json coeffs = json::array();
  for (FieldElement c : family.coeffs()) coeffs.push_back(c.value);
  return {{"format", 1},
          {"kind", "family"},
          {"m", family.degree()},
          {"modulus", modulus_digits(family.field().modulus())},
          {"coeffs", coeffs},
          {"K", family.size()},
          {"size", family.point_count()}};
}

CoeffFamily family_from_json(const json& j) {
  try {
    const auto m = j.at("m").get<unsigned>();
    const auto field = Field::get(m);
    if (j.contains("modulus") && j.at("modulus").get<std::string>() != modulus_digits(field->modulus())) {
      fail(ErrorCode::parse_error, "family modulus differs from the deterministic modulus for m=" + std::to_string(m));
    }
    std::vector<FieldElement> coeffs;
    for (const auto& v : j.at("coeffs")) coeffs.push_back(field->element(v.get<std::uint64_t>()));
    return CoeffFamily(field, std::move(coeffs));
  } catch (const json::exception& e) {
    fail(ErrorCode::parse_error, std::string("malformed family: ") + e.what());
  }
}

json family_verdict_to_json(const CoeffFamily& family, CheckMode mode, const FamilyVerdict& verdict) {
  json j = family_to_json(family);
  j["kind"] = "family-verdict";
  j["mode"] = mode == CheckMode::brute ? "brute" : "fast";
  j["verdict"] = verdict.capset;
  if (verdict.witness) {
    json pts = json::array();
    for (const Point& p : *verdict.witness) pts.push_back(p.to_string());
    j["witness"] = {{"kind", "triple"}, {"points", pts}};
    if (verdict.coeff_witness) {
      json c = json::array(), x = json::array();
      for (int t = 0; t < 3; ++t) {
        c.push_back(verdict.coeff_witness->c[t].value);
        x.push_back(verdict.coeff_witness->x[t].value);
      }
      j["witness"]["coeffs"] = c;
      j["witness"]["x"] = x;
    }
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json search_result_to_json(const SearchOptions& options, const SearchResult& result) {
  json j;
  j["format"] = 1;
  j["kind"] = "search-result";
  j["m"] = options.m;
  j["mode"] = to_string(options.mode);
  j["seed"] = options.seed;
  if (options.mode == SearchMode::random) j["budget"] = options.budget;
  if (options.mode == SearchMode::orbit) j["orbits"] = options.orbits;
  j["modulus"] = modulus_digits(Field::get(options.m)->modulus());
  j["found"] = result.family.has_value();
  j["K"] = result.best_k;
  j["size"] = result.size;
  j["coeffs"] = json::array();
  if (result.family) {
    for (FieldElement c : result.family->coeffs()) j["coeffs"].push_back(c.value);
  }
  j["nodes"] = result.nodes;
  j["units"] = result.units;
  j["complete"] = result.complete;
  j["verification"] = result.verification.empty() ? json(nullptr) : json(result.verification);
  j["verified"] = result.verified;
  j["from_floor"] = result.from_floor;
  return j;
}

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
      return "invalid_argument";
    case ErrorCode::dimension_mismatch:
      return "dimension_mismatch";
    case ErrorCode::parse_error:
      return "parse_error";
    case ErrorCode::io_error:
      return "io_error";
    case ErrorCode::budget_exceeded:
      return "budget_exceeded";
    case ErrorCode::domain_error:
      return "domain_error";
    case ErrorCode::not_a_capset:
      return "not_a_capset";
    case ErrorCode::internal:
      return "internal";
  }
  return "unknown";
}

json error_to_json(ErrorCode code, const std::string& message) {
  return {{"format", 1}, {"error", {{"code", static_cast<int>(code)}, {"name", error_name(code)}, {"message", message}}}};
}

std::string condition_csv(const ConditionMatrix& matrix) {
  std::ostringstream out;
  out << "i,j,k";
  for (FieldElement a : matrix.samples) out << ',' << a.value;
  out << '\n';
  for (std::size_t r = 0; r < matrix.classes.size(); ++r) {
    const TripleClass& t = matrix.classes[r];
    out << t.i << ',' << t.j << ',' << t.k;
    for (int v : matrix.chi[r]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace capset
