#pragma once

// Reproduction of the published rows for Frobenius-orbit families (table 1)
// and the largest parabola families found (table 2).

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace capset {

enum class Tier { fast, long_running };

Tier parse_tier(const std::string& name);

struct TableRow {
  unsigned m = 0;
  unsigned k = 0;               // table 1: orbit count; table 2: unused
  std::uint64_t coeffs = 0;     // expected number of coefficients
  std::uint64_t size = 0;       // expected capset size
  std::string source;           // how the published row arose
  bool in_tier = false;         // attempted in the requested tier
  bool asserted = false;        // an exact match is required
  std::uint64_t found_coeffs = 0;
  std::uint64_t found_size = 0;
  std::string note;
  bool ok = true;
};

struct TableReport {
  int which = 1;
  Tier tier = Tier::fast;
  std::vector<TableRow> rows;
  bool all_ok = true;
};

TableReport reproduce_table(int which, Tier tier, unsigned threads = 0);
nlohmann::json table_report_to_json(const TableReport& report);

}  // namespace capset
