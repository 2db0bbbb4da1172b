#pragma once

// Searches for large coefficient families {c_i} whose parabolas
// {(x, c_i x^2) : x != 0} form a capset in F_3^(2m).
//
// All searches normalize c_1 = 1 (scaling every coefficient by the same s is a
// linear change of the second coordinate, so capset status is invariant).
// The exhaustive search also branches on one representative per Frobenius
// orbit at the second level: the Galois group fixes 1, so the best family
// through any member of an orbit is the image of the best family through its
// smallest member, and later branches may exclude all earlier orbits.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "capset/parabolas.hpp"

namespace capset {

enum class SearchMode { exhaustive, random, orbit };

const char* to_string(SearchMode mode);
SearchMode parse_search_mode(const std::string& name);

struct SearchProgress {
  SearchMode mode;
  std::uint64_t units_done = 0;   // branches, restarts or orbit representatives
  std::uint64_t units_total = 0;
  std::uint64_t nodes = 0;
  unsigned depth = 0;
  unsigned best_k = 0;
  std::uint64_t elapsed_ms = 0;
};

struct SearchCheckpoint {
  unsigned m = 0;
  SearchMode mode = SearchMode::exhaustive;
  std::uint64_t seed = 0;
  std::uint64_t cursor = 0;  // units [0, cursor) are finished
  std::uint64_t best_unit = 0;
  std::uint64_t nodes = 0;
  std::vector<std::uint32_t> best;  // coefficient encodings, empty if none yet
};

struct SearchOptions {
  unsigned m = 2;
  SearchMode mode = SearchMode::exhaustive;
  std::uint64_t seed = 0;
  std::uint64_t budget = 100;        // random: number of restarts
  std::uint64_t orbit_budget = 0;    // orbit: orbit tuples examined, 0 = unlimited
  unsigned orbits = 1;         // orbit mode: number of Frobenius orbits k
  std::optional<unsigned> max_k;  // exhaustive: stop once a family this large is found
  unsigned threads = 0;
  std::uint64_t node_ceiling = 4'000'000'000ULL;  // exhaustive guard
  unsigned max_exhaustive_degree = 6;
  std::optional<CoeffFamily> floor;  // random: starting best
  std::optional<SearchCheckpoint> resume;
  std::string checkpoint_path;  // written after every finished unit when set
  std::function<void(const SearchProgress&)> progress;
  VerifyOptions verify;
};

struct SearchResult {
  std::optional<CoeffFamily> family;
  unsigned best_k = 0;
  std::uint64_t size = 0;  // K (q - 1)
  std::uint64_t nodes = 0;
  std::uint64_t units = 0;
  bool complete = false;   // every unit explored (exhaustive: optimality proven)
  std::string verification;  // "brute" or "fast"
  bool verified = false;
  bool from_floor = false;
};

SearchResult exhaustive_search(const SearchOptions& options);
SearchResult random_search(const SearchOptions& options);
SearchResult orbit_search(const SearchOptions& options);
SearchResult run_search(const SearchOptions& options);

// Smallest element of each full-length Frobenius orbit, ascending.
std::vector<FieldElement> orbit_representatives(const Field& field);

SearchCheckpoint read_checkpoint(const std::string& path);
void write_checkpoint(const std::string& path, const SearchCheckpoint& checkpoint);

}  // namespace capset
