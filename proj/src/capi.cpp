#include "capset/capset.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include "capset/construct.hpp"
#include "capset/error.hpp"
#include "capset/json_io.hpp"
#include "capset/parabolas.hpp"
#include "capset/search.hpp"
#include "capset/tables.hpp"
#include "capset/verify.hpp"

struct cs_field {
  std::shared_ptr<const capset::Field> field;
};

struct cs_capset {
  capset::CapSet set;
};

struct cs_family {
  capset::CoeffFamily family;
};

namespace {

using capset::ErrorCode;
using nlohmann::json;

struct LastError {
  ErrorCode code = ErrorCode::internal;
  std::string message;
};

thread_local LastError last_error;

cs_status record(ErrorCode code, std::string message) {
  last_error = {code, std::move(message)};
  return static_cast<cs_status>(code);
}

template <class F>
cs_status guarded(F&& body) {
  try {
    body();
    last_error.message.clear();
    return CS_OK;
  } catch (const capset::Error& e) {
    return record(e.code(), e.what());
  } catch (const json::exception& e) {
    return record(ErrorCode::parse_error, e.what());
  } catch (const std::bad_alloc&) {
    return record(ErrorCode::budget_exceeded, "out of memory");
  } catch (const std::exception& e) {
    return record(ErrorCode::internal, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void emit(char** out, const json& j) {
  if (out) *out = dup(j.dump());
}

void require(const void* p, const char* what) {
  if (!p) capset::fail(ErrorCode::invalid_argument, std::string(what) + " is null");
}

capset::VerifyOptions verify_options(const cs_options_t* o) {
  capset::VerifyOptions v;
  if (o) {
    if (o->memory_budget_bits) v.memory_budget_bits = o->memory_budget_bits;
    v.threads = o->threads;
  }
  return v;
}

capset::FieldElement element(const cs_field_t* f, std::uint32_t a) {
  require(f, "field");
  return f->field->element(a);
}

}  // namespace

extern "C" {

const char* cs_version(void) { return "1.0.0"; }

const char* cs_last_error(void) { return last_error.message.c_str(); }

const char* cs_status_name(cs_status status) {
  if (status == CS_OK) return "ok";
  return capset::error_name(static_cast<ErrorCode>(status));
}

void cs_string_free(char* s) { std::free(s); }

char* cs_last_error_json(void) {
  try {
    return dup(capset::error_to_json(last_error.code, last_error.message).dump());
  } catch (...) {
    return nullptr;
  }
}

cs_status cs_field_new(unsigned m, cs_field_t** out) {
  return guarded([&] {
    require(out, "out");
    *out = new cs_field{capset::Field::get(m)};
  });
}

void cs_field_free(cs_field_t* field) { delete field; }

unsigned cs_field_degree(const cs_field_t* field) { return field ? field->field->degree() : 0; }

uint64_t cs_field_order(const cs_field_t* field) { return field ? field->field->order() : 0; }

cs_status cs_field_add(const cs_field_t* f, uint32_t a, uint32_t b, uint32_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = f->field->add(element(f, a), element(f, b)).value;
  });
}

cs_status cs_field_mul(const cs_field_t* f, uint32_t a, uint32_t b, uint32_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = f->field->mul(element(f, a), element(f, b)).value;
  });
}

cs_status cs_field_inv(const cs_field_t* f, uint32_t a, uint32_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = f->field->inv(element(f, a)).value;
  });
}

cs_status cs_field_chi(const cs_field_t* f, uint32_t a, int* out) {
  return guarded([&] {
    require(out, "out");
    *out = f->field->chi(element(f, a));
  });
}

cs_status cs_field_sqrt(const cs_field_t* f, uint32_t a, int* found, uint32_t* out) {
  return guarded([&] {
    require(found, "found");
    require(out, "out");
    const auto r = f->field->sqrt(element(f, a));
    *found = r.has_value();
    if (r) *out = r->value;
  });
}

cs_status cs_field_frobenius(const cs_field_t* f, uint32_t a, long long j, uint32_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = f->field->frobenius(element(f, a), j).value;
  });
}

cs_status cs_field_header(const cs_field_t* f, char** out) {
  return guarded([&] {
    require(f, "field");
    require(out, "out");
    emit(out, capset::field_header(*f->field));
  });
}

cs_status cs_capset_new(unsigned n, const uint64_t* encodings, size_t count, cs_capset_t** out) {
  return guarded([&] {
    require(out, "out");
    if (count) require(encodings, "encodings");
    std::vector<capset::Point> pts;
    pts.reserve(count);
    for (size_t i = 0; i < count; ++i) pts.push_back(capset::Point::from_encoding(n, encodings[i]));
    *out = new cs_capset{capset::CapSet(n, std::move(pts))};
  });
}

cs_status cs_capset_read(const char* path, cs_capset_t** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new cs_capset{capset::read_capset_file(path)};
  });
}

cs_status cs_capset_parse(const char* text, cs_capset_t** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    std::istringstream in(text);
    *out = new cs_capset{capset::read_capset(in)};
  });
}

cs_status cs_capset_write(const cs_capset_t* set, const char* path) {
  return guarded([&] {
    require(set, "set");
    require(path, "path");
    capset::write_capset_file(path, set->set);
  });
}

cs_status cs_capset_format(const cs_capset_t* set, char** text) {
  return guarded([&] {
    require(set, "set");
    require(text, "text");
    std::ostringstream out;
    capset::write_capset(out, set->set);
    *text = dup(out.str());
  });
}

void cs_capset_free(cs_capset_t* set) { delete set; }

unsigned cs_capset_dim(const cs_capset_t* set) { return set ? set->set.dim() : 0; }

size_t cs_capset_size(const cs_capset_t* set) { return set ? set->set.size() : 0; }

cs_status cs_capset_point(const cs_capset_t* set, size_t index, uint64_t* encoding) {
  return guarded([&] {
    require(set, "set");
    require(encoding, "encoding");
    if (index >= set->set.size()) capset::fail(ErrorCode::invalid_argument, "point index out of range");
    *encoding = set->set.encodings()[index];
  });
}

cs_status cs_verify(const cs_capset_t* set, int complete, const cs_options_t* options, int* verdict,
                    char** report) {
  return guarded([&] {
    require(set, "set");
    const auto opt = verify_options(options);
    capset::VerificationReport r = capset::is_capset(set->set, opt);
    if (complete && r.verdict) r = capset::is_complete(set->set, opt);
    if (verdict) *verdict = r.verdict;
    json j = capset::report_to_json(r);
    j["n"] = set->set.dim();
    j["size"] = set->set.size();
    j["check"] = complete ? "complete" : "capset";
    emit(report, j);
  });
}

cs_status cs_uncovered(const cs_capset_t* set, const cs_options_t* options, cs_capset_t** out) {
  return guarded([&] {
    require(set, "set");
    require(out, "out");
    auto pts = capset::uncovered_points(set->set, verify_options(options));
    *out = new cs_capset{capset::CapSet(set->set.dim(), std::move(pts))};
  });
}

cs_status cs_lower_bound(uint64_t size, unsigned n, int* ok) {
  return guarded([&] {
    require(ok, "ok");
    *ok = capset::lower_bound_check(size, n);
  });
}

cs_status cs_construct(const char* kind, unsigned param, const cs_options_t* options, cs_capset_t** out,
                       int* verified, char** metadata) {
  return guarded([&] {
    require(kind, "kind");
    capset::ConstructOptions opt;
    opt.verify = verify_options(options);
    opt.uncertified = options && options->uncertified;
    const std::string k = kind;
    capset::ConstructionResult r;
    if (k == "two-parabolas") {
      r = capset::construct_two_parabolas(param, opt);
    } else if (k == "quadric") {
      r = capset::construct_quadric(param, opt);
    } else if (k == "complete") {
      r = capset::complete_capset(param, opt);
    } else {
      capset::fail(ErrorCode::invalid_argument, "unknown construction '" + k + "'");
    }
    if (verified) *verified = r.verified;
    emit(metadata, capset::construction_to_json(r));
    if (out) *out = new cs_capset{std::move(r.set)};
  });
}

cs_status cs_family_new(unsigned m, const uint32_t* coeffs, size_t count, cs_family_t** out) {
  return guarded([&] {
    require(out, "out");
    if (count) require(coeffs, "coeffs");
    const auto field = capset::Field::get(m);
    std::vector<capset::FieldElement> cs;
    for (size_t i = 0; i < count; ++i) cs.push_back(field->element(coeffs[i]));
    *out = new cs_family{capset::CoeffFamily(field, std::move(cs))};
  });
}

cs_status cs_family_from_json(const char* text, cs_family_t** out) {
  return guarded([&] {
    require(text, "json");
    require(out, "out");
    *out = new cs_family{capset::family_from_json(json::parse(text))};
  });
}

cs_status cs_family_to_json(const cs_family_t* family, char** out) {
  return guarded([&] {
    require(family, "family");
    require(out, "out");
    emit(out, capset::family_to_json(family->family));
  });
}

void cs_family_free(cs_family_t* family) { delete family; }

size_t cs_family_size(const cs_family_t* family) { return family ? family->family.size() : 0; }

cs_status cs_family_points(const cs_family_t* family, cs_capset_t** out) {
  return guarded([&] {
    require(family, "family");
    require(out, "out");
    *out = new cs_capset{capset::family_points(family->family)};
  });
}

cs_status cs_family_check(const cs_family_t* family, const char* mode, const cs_options_t* options, int* verdict,
                          char** report) {
  return guarded([&] {
    require(family, "family");
    const std::string m = mode ? mode : "fast";
    capset::CheckMode cm;
    if (m == "brute") {
      cm = capset::CheckMode::brute;
    } else if (m == "fast") {
      cm = capset::CheckMode::fast;
    } else {
      capset::fail(ErrorCode::invalid_argument, "unknown mode '" + m + "'");
    }
    const auto v = capset::family_is_capset(family->family, cm, verify_options(options));
    if (verdict) *verdict = v.capset;
    emit(report, capset::family_verdict_to_json(family->family, cm, v));
  });
}

cs_status cs_conditions(unsigned m, int rank, uint64_t samples, uint64_t seed, char** report, char** csv) {
  return guarded([&] {
    if (m == 0 || m % 2) capset::fail(ErrorCode::invalid_argument, "condition classes need an even m >= 2");
    json j = {{"format", 1},
              {"kind", "conditions"},
              {"m", m},
              {"class_count", capset::class_count(m)},
              {"class_count_bound", capset::class_count_bound(m)}};
    j["bound_attained"] = capset::class_count(m) == capset::class_count_bound(m);
    if (rank) {
      const auto field = capset::Field::get(m);
      std::vector<capset::FieldElement> pool = capset::full_orbit_elements(*field);
      const bool full = samples == 0 || samples >= pool.size();
      if (!full) {
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < samples; ++i) {
          std::swap(pool[i], pool[i + capset::uniform_below(rng, pool.size() - i)]);
        }
        pool.resize(samples);
        std::sort(pool.begin(), pool.end());
      }
      const auto matrix = capset::condition_matrix(*field, pool);
      const auto r = capset::condition_rank(*field, pool);
      j["samples"] = pool.size();
      j["full_enumeration"] = full;
      j["seed"] = full ? json(nullptr) : json(seed);
      j["rank"] = r;
      j["full_rank"] = r == capset::class_count(m);
      if (csv) *csv = dup(capset::condition_csv(matrix));
    }
    emit(report, j);
  });
}

cs_status cs_impossibility(unsigned m, int exhaustive, uint64_t samples, uint64_t seed, char** report) {
  return guarded([&] {
    const auto r = capset::three_parabola_impossibility(m, exhaustive != 0, samples, seed);
    json j = {{"format", 1},
              {"kind", "three-parabola-impossibility"},
              {"m", m},
              {"exhaustive", r.exhaustive},
              {"triples_checked", r.triples_checked},
              {"confirmed", r.confirmed}};
    if (r.counterexample) {
      j["counterexample"] = {(*r.counterexample)[0].value, (*r.counterexample)[1].value, (*r.counterexample)[2].value};
    } else {
      j["counterexample"] = nullptr;
    }
    emit(report, j);
  });
}

cs_status cs_search(const cs_search_options_t* options, cs_family_t** best, char** result) {
  return guarded([&] {
    require(options, "options");
    capset::SearchOptions opt;
    opt.m = options->m;
    opt.mode = capset::parse_search_mode(options->mode ? options->mode : "exhaustive");
    opt.seed = options->seed;
    opt.threads = options->threads;
    opt.verify.threads = options->threads;
    switch (opt.mode) {
      case capset::SearchMode::random:
        if (options->budget) opt.budget = options->budget;
        if (options->k) capset::fail(ErrorCode::invalid_argument, "--k does not apply to random search");
        break;
      case capset::SearchMode::orbit:
        opt.orbit_budget = options->budget;
        if (options->k) opt.orbits = options->k;
        break;
      case capset::SearchMode::exhaustive:
        if (options->budget) opt.node_ceiling = options->budget;
        if (options->k) opt.max_k = options->k;
        break;
    }
    if (options->resume_path && *options->resume_path) {
      opt.resume = capset::read_checkpoint(options->resume_path);
    }
    if (options->checkpoint_path) opt.checkpoint_path = options->checkpoint_path;
    if (options->floor_json && *options->floor_json) {
      opt.floor = capset::family_from_json(json::parse(options->floor_json));
    }
    if (options->progress) {
      const cs_progress_fn fn = options->progress;
      void* user = options->progress_user;
      opt.progress = [fn, user](const capset::SearchProgress& p) {
        const json line = {{"mode", capset::to_string(p.mode)}, {"units_done", p.units_done},
                           {"units_total", p.units_total},      {"nodes", p.nodes},
                           {"depth", p.depth},                  {"best_k", p.best_k},
                           {"elapsed_ms", p.elapsed_ms}};
        fn(line.dump().c_str(), user);
      };
    }
    const capset::SearchResult r = capset::run_search(opt);
    emit(result, capset::search_result_to_json(opt, r));
    if (best) *best = r.family ? new cs_family{*r.family} : nullptr;
  });
}

cs_status cs_tables(int which, const char* tier, unsigned threads, int* all_ok, char** report) {
  return guarded([&] {
    const auto r = capset::reproduce_table(which, capset::parse_tier(tier ? tier : "fast"), threads);
    if (all_ok) *all_ok = r.all_ok;
    emit(report, capset::table_report_to_json(r));
  });
}

}  // extern "C"
