// Command-line front end. Talks to the library only through the C API.
//
// Exit codes: 0 pass, 1 fail (the report says why), 2 error (error JSON on stdout).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "capset/capset.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_error = 2;

struct ApiError {
  cs_status status;
};

void check(cs_status s) {
  if (s != CS_OK) throw ApiError{s};
}

// Takes ownership of a library string.
std::string take(char* s) {
  if (!s) return {};
  std::string out(s);
  cs_string_free(s);
  return out;
}

int report_error(const json& err) {
  std::cout << err.dump(2) << '\n';
  std::cerr << "error: " << err["error"]["message"].get<std::string>() << '\n';
  return exit_error;
}

int report_api_error() { return report_error(json::parse(take(cs_last_error_json()))); }

int report_cli_error(const std::string& message) {
  return report_error({{"format", 1},
                       {"error", {{"code", CS_E_INVALID_ARGUMENT}, {"name", "invalid_argument"}, {"message", message}}}});
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Common {
  unsigned threads = 0;
  std::uint64_t budget_bits = 0;

  cs_options_t options(bool uncertified = false) const { return {budget_bits, threads, uncertified ? 1 : 0}; }
};

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};

using SetHandle = Handle<cs_capset_t, cs_capset_free>;
using FamilyHandle = Handle<cs_family_t, cs_family_free>;

void write_set(const cs_capset_t* set, const std::string& path) {
  if (path == "-") {
    char* text = nullptr;
    check(cs_capset_format(set, &text));
    std::cout << take(text);
  } else {
    check(cs_capset_write(set, path.c_str()));
  }
}

void progress_line(const char* line, void*) { std::cerr << "progress " << line << '\n'; }

// ---- subcommands -----------------------------------------------------------

struct ConstructArgs {
  std::string kind;
  std::optional<unsigned> m, n;
  std::string out, meta;
  bool uncertified = false;
};

int run_construct(const ConstructArgs& a, const Common& c) {
  unsigned param = 0;
  if (a.kind == "complete") {
    if (!a.n) return report_cli_error("--kind complete takes --n");
    param = *a.n;
  } else {
    if (!a.m) return report_cli_error("--kind " + a.kind + " takes --m");
    param = *a.m;
  }
  const cs_options_t opt = c.options(a.uncertified);
  SetHandle set;
  int verified = 0;
  char* meta = nullptr;
  check(cs_construct(a.kind.c_str(), param, &opt, &set.p, &verified, &meta));
  json j = json::parse(take(meta));
  if (!a.out.empty()) {
    write_set(set.p, a.out);
    j["out"] = a.out;
  }
  if (!a.meta.empty()) write_text(a.meta, j.dump(2) + "\n");
  if (a.out != "-") print(j);
  return verified || a.uncertified ? exit_pass : exit_fail;
}

struct VerifyArgs {
  std::string in;
  bool complete = false;
  std::string uncovered;
};

int run_verify(const VerifyArgs& a, const Common& c) {
  SetHandle set;
  check(cs_capset_read(a.in.c_str(), &set.p));
  const cs_options_t opt = c.options();
  int verdict = 0;
  char* report = nullptr;
  check(cs_verify(set.p, a.complete ? 1 : 0, &opt, &verdict, &report));
  json j = json::parse(take(report));
  j["in"] = a.in;
  if (!a.uncovered.empty()) {
    SetHandle rest;
    check(cs_uncovered(set.p, &opt, &rest.p));
    write_set(rest.p, a.uncovered);
    j["uncovered_count"] = cs_capset_size(rest.p);
  }
  print(j);
  return verdict ? exit_pass : exit_fail;
}

int run_bound(std::uint64_t size, unsigned n) {
  int ok = 0;
  check(cs_lower_bound(size, n, &ok));
  print({{"format", 1}, {"kind", "bound"}, {"size", size}, {"n", n}, {"lower_bound_ok", ok != 0}});
  return ok ? exit_pass : exit_fail;
}

struct FamilyArgs {
  std::vector<std::uint32_t> coeffs;
  std::optional<unsigned> m;
  std::string json_in;
  std::string mode = "fast";
  std::string out;
};

int run_family(const FamilyArgs& a, const Common& c) {
  FamilyHandle fam;
  if (!a.json_in.empty()) {
    check(cs_family_from_json(read_text(a.json_in).c_str(), &fam.p));
  } else {
    if (!a.m || a.coeffs.empty()) return report_cli_error("family needs --m and --coeffs, or --json");
    check(cs_family_new(*a.m, a.coeffs.data(), a.coeffs.size(), &fam.p));
  }
  const cs_options_t opt = c.options();
  int verdict = 0;
  char* report = nullptr;
  check(cs_family_check(fam.p, a.mode.c_str(), &opt, &verdict, &report));
  json j = json::parse(take(report));
  if (!a.out.empty()) {
    SetHandle set;
    check(cs_family_points(fam.p, &set.p));
    write_set(set.p, a.out);
    j["out"] = a.out;
  }
  if (a.out != "-") print(j);
  return verdict ? exit_pass : exit_fail;
}

struct ConditionsArgs {
  unsigned m = 2;
  bool count = false;
  bool rank = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string csv;
};

int run_conditions(const ConditionsArgs& a) {
  char* report = nullptr;
  char* csv = nullptr;
  check(cs_conditions(a.m, a.rank ? 1 : 0, a.samples, a.seed, &report, a.csv.empty() ? nullptr : &csv));
  json j = json::parse(take(report));
  if (!a.csv.empty()) {
    write_text(a.csv, take(csv));
    j["csv"] = a.csv;
  }
  print(j);
  if (a.rank) return j["full_rank"].get<bool>() ? exit_pass : exit_fail;
  return exit_pass;
}

struct ImpossibilityArgs {
  unsigned m = 1;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

int run_impossibility(const ImpossibilityArgs& a) {
  char* report = nullptr;
  check(cs_impossibility(a.m, a.samples == 0 ? 1 : 0, a.samples, a.seed, &report));
  const json j = json::parse(take(report));
  print(j);
  return j["confirmed"].get<bool>() ? exit_pass : exit_fail;
}

struct SearchArgs {
  unsigned m = 2;
  std::string mode = "exhaustive";
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  unsigned k = 0;
  std::string resume, checkpoint, floor, out, family_out;
  unsigned floor_orbits = 0;
  bool quiet = false;
};

int run_search(const SearchArgs& a, const Common& c) {
  cs_search_options_t opt{};
  opt.m = a.m;
  opt.mode = a.mode.c_str();
  opt.seed = a.seed;
  opt.budget = a.budget;
  opt.k = a.k;
  opt.threads = c.threads;
  opt.resume_path = a.resume.empty() ? nullptr : a.resume.c_str();
  opt.checkpoint_path = a.checkpoint.empty() ? nullptr : a.checkpoint.c_str();
  if (!a.quiet) opt.progress = progress_line;

  std::string floor_json;
  if (!a.floor.empty()) floor_json = read_text(a.floor);
  if (a.floor_orbits) {
    if (!floor_json.empty()) return report_cli_error("--floor and --floor-orbits are exclusive");
    cs_search_options_t orbit{};
    orbit.m = a.m;
    orbit.mode = "orbit";
    orbit.k = a.floor_orbits;
    orbit.threads = c.threads;
    FamilyHandle f;
    char* ignored = nullptr;
    check(cs_search(&orbit, &f.p, &ignored));
    take(ignored);
    if (f.p) {
      char* fj = nullptr;
      check(cs_family_to_json(f.p, &fj));
      floor_json = take(fj);
    }
  }
  if (!floor_json.empty()) opt.floor_json = floor_json.c_str();

  FamilyHandle best;
  char* result = nullptr;
  check(cs_search(&opt, &best.p, &result));
  json j = json::parse(take(result));
  if (best.p) {
    if (!a.family_out.empty()) {
      char* fj = nullptr;
      check(cs_family_to_json(best.p, &fj));
      write_text(a.family_out, json::parse(take(fj)).dump(2) + "\n");
      j["family_out"] = a.family_out;
    }
    if (!a.out.empty()) {
      SetHandle set;
      check(cs_family_points(best.p, &set.p));
      write_set(set.p, a.out);
      j["out"] = a.out;
    }
  }
  if (a.out != "-") print(j);
  return best.p ? exit_pass : exit_fail;
}

int run_tables(int which, const std::string& tier, const Common& c) {
  int all_ok = 0;
  char* report = nullptr;
  check(cs_tables(which, tier.c_str(), c.threads, &all_ok, &report));
  const json j = json::parse(take(report));
  print(j);
  for (const auto& row : j["rows"]) {
    std::cerr << "m=" << row["m"].get<unsigned>() << "  expected K=" << row["coeffs_expected"].get<std::uint64_t>()
              << " size=" << row["size_expected"].get<std::uint64_t>();
    if (row["in_tier"].get<bool>()) {
      std::cerr << "  found K=" << row["coeffs_found"].get<std::uint64_t>()
                << " size=" << row["size_found"].get<std::uint64_t>() << (row["ok"].get<bool>() ? "  ok" : "  MISMATCH");
    } else {
      std::cerr << "  (" << row["note"].get<std::string>() << ")";
    }
    std::cerr << '\n';
  }
  return all_ok ? exit_pass : exit_fail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct, verify and search for capsets in F_3^n"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cs_version()));

  Common common;
  app.add_option("--threads", common.threads, "Worker threads (0 = all cores)");
  app.add_option("--memory-budget", common.budget_bits, "Largest verification bitmap in bits (0 = 2^31)");

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build a capset from an algebraic construction");
  construct->add_option("--kind", ca.kind, "Construction")
      ->required()
      ->check(CLI::IsMember({"two-parabolas", "complete", "quadric"}));
  construct->add_option("--m", ca.m, "Field degree (two-parabolas, quadric)");
  construct->add_option("--n", ca.n, "Dimension (complete)");
  construct->add_option("--out", ca.out, "Capset file to write ('-' for stdout)");
  construct->add_option("--meta", ca.meta, "Also write the metadata JSON here");
  construct->add_flag("--uncertified", ca.uncertified, "Skip verification when it exceeds the memory budget");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check the capset property, and optionally completeness");
  verify->add_option("--in", va.in, "Capset file")->required();
  verify->add_flag("--complete", va.complete, "Also check completeness");
  verify->add_option("--uncovered", va.uncovered, "Write every uncovered point to this file");

  std::uint64_t bound_size = 0;
  unsigned bound_n = 0;
  auto* bound = app.add_subcommand("bound", "Necessary size condition N(N+1)/2 >= 3^n for a complete capset");
  bound->add_option("--size", bound_size, "Capset size")->required();
  bound->add_option("--n", bound_n, "Dimension")->required();

  FamilyArgs fa;
  auto* family = app.add_subcommand("family", "Check a parabola coefficient family");
  family->add_option("--coeffs", fa.coeffs, "Coefficient encodings, comma separated")->delimiter(',');
  family->add_option("--m", fa.m, "Field degree");
  family->add_option("--json", fa.json_in, "Read the family from a family JSON file");
  family->add_option("--mode", fa.mode, "Check mode")->check(CLI::IsMember({"brute", "fast"}));
  family->add_option("--out", fa.out, "Write the point set ('-' for stdout)");

  ConditionsArgs cda;
  auto* conditions = app.add_subcommand("conditions", "Condition classes and their rank (even m)");
  conditions->add_option("--m", cda.m, "Field degree")->required();
  auto* count_flag = conditions->add_flag("--count", cda.count, "Report the class count (default)");
  conditions->add_flag("--rank", cda.rank, "Also compute the GF(2) rank")->excludes(count_flag);
  conditions->add_option("--samples", cda.samples, "Random full-orbit samples (0 = all)");
  conditions->add_option("--seed", cda.seed, "Sampling seed");
  conditions->add_option("--csv", cda.csv, "Write the chi matrix as CSV (with --rank)");

  ImpossibilityArgs ia;
  auto* impossible = app.add_subcommand("impossibility", "Check that no three parabolas work for odd m");
  impossible->add_option("--m", ia.m, "Odd field degree")->required();
  impossible->add_option("--samples", ia.samples, "Seeded random triples (0 = exhaustive)");
  impossible->add_option("--seed", ia.seed, "Sampling seed");

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Search for large parabola families");
  search->add_option("--m", sa.m, "Field degree")->required();
  search->add_option("--mode", sa.mode, "Search strategy")->check(CLI::IsMember({"exhaustive", "random", "orbit"}));
  search->add_option("--seed", sa.seed, "Random seed");
  search->add_option("--budget", sa.budget,
                     "random: restarts; orbit: tuples examined; exhaustive: node ceiling (0 = default)");
  search->add_option("--k", sa.k, "orbit: number of orbits; exhaustive: stop at this K");
  search->add_option("--resume", sa.resume, "Resume from a checkpoint");
  search->add_option("--checkpoint", sa.checkpoint, "Write checkpoints here");
  search->add_option("--floor", sa.floor, "random: family JSON to start from");
  search->add_option("--floor-orbits", sa.floor_orbits, "random: start from the best k-orbit family");
  search->add_option("--out", sa.out, "Write the best family's points ('-' for stdout)");
  search->add_option("--family-out", sa.family_out, "Write the best family JSON");
  search->add_flag("--quiet", sa.quiet, "No progress lines on stderr");

  int which = 1;
  std::string tier = "fast";
  auto* tables = app.add_subcommand("tables", "Reproduce table rows and compare with the published values");
  tables->add_option("--which", which, "Table")->check(CLI::IsMember({1, 2}));
  tables->add_option("--tier", tier, "Tier")->check(CLI::IsMember({"fast", "long"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_cli_error(e.what());
  }

  try {
    if (*construct) return run_construct(ca, common);
    if (*verify) return run_verify(va, common);
    if (*bound) return run_bound(bound_size, bound_n);
    if (*family) return run_family(fa, common);
    if (*conditions) return run_conditions(cda);
    if (*impossible) return run_impossibility(ia);
    if (*search) return run_search(sa, common);
    if (*tables) return run_tables(which, tier, common);
  } catch (const ApiError&) {
    return report_api_error();
  } catch (const std::exception& e) {
    return report_error({{"format", 1},
                         {"error", {{"code", CS_E_IO}, {"name", "io_error"}, {"message", e.what()}}}});
  }
  return exit_error;
}
