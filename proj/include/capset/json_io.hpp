#pragma once

// JSON and CSV serialization of reports, constructions, families and search
// results. Every top-level document carries "format": 1.

#include <string>

#include "capset/construct.hpp"
#include "capset/error.hpp"
#include "capset/parabolas.hpp"
#include "capset/search.hpp"
#include "capset/verify.hpp"
#include "json.hpp"

namespace capset {

// Leading coefficient first, e.g. "101" for t^2 + 1.
std::string modulus_digits(const Polynomial& modulus);

nlohmann::json field_header(const Field& field);
nlohmann::json report_to_json(const VerificationReport& report);
nlohmann::json construction_to_json(const ConstructionResult& result);
nlohmann::json family_to_json(const CoeffFamily& family);
CoeffFamily family_from_json(const nlohmann::json& j);
nlohmann::json family_verdict_to_json(const CoeffFamily& family, CheckMode mode, const FamilyVerdict& verdict);
nlohmann::json search_result_to_json(const SearchOptions& options, const SearchResult& result);
nlohmann::json error_to_json(ErrorCode code, const std::string& message);
const char* error_name(ErrorCode code);

// Header "i,j,k,<a_1>,...,<a_s>" (a as encodings), one row per class with chi values.
std::string condition_csv(const ConditionMatrix& matrix);

}  // namespace capset
