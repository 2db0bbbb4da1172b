#include "capset/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "capset/error.hpp"
#include "json.hpp"

namespace capset {
namespace {

using Clock = std::chrono::steady_clock;
using Bits = std::vector<std::uint64_t>;

constexpr std::uint64_t no_unit = std::numeric_limits<std::uint64_t>::max();

std::uint64_t elapsed_ms(Clock::time_point start) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count());
}

void set_bit(Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); }
void clear_bit(Bits& b, std::size_t i) { b[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

std::size_t popcount(const Bits& b) {
  std::size_t c = 0;
  for (std::uint64_t w : b) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool none(const Bits& b) {
  return std::all_of(b.begin(), b.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t first_bit(const Bits& b) {
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (b[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(b[k]));
  }
  return b.size() * 64;
}

std::mt19937_64 restart_rng(std::uint64_t seed, std::uint64_t restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), static_cast<std::uint32_t>(restart >> 32)};
  return std::mt19937_64(seq);
}

// Elements that may join a family containing 1.
std::vector<FieldElement> normalized_candidates(const Field& F) {
  std::vector<FieldElement> out;
  for (std::uint64_t v = 2; v < F.order(); ++v) {
    const FieldElement c{static_cast<std::uint32_t>(v)};
    if (pair_compatible(F, F.one(), c)) out.push_back(c);
  }
  return out;
}

class ProgressReporter {
 public:
  ProgressReporter(const SearchOptions& options, std::uint64_t total)
      : callback_(options.progress), start_(Clock::now()), total_(total) {
    last_ = start_ - std::chrono::seconds(10);
  }

  void report(SearchProgress p, bool force = false) {
    if (!callback_) return;
    std::lock_guard<std::mutex> lock(mutex_);
    const auto now = Clock::now();
    if (!force && now - last_ < std::chrono::seconds(1)) return;
    last_ = now;
    p.units_total = total_;
    p.elapsed_ms = elapsed_ms(start_);
    callback_(p);
  }

 private:
  std::function<void(const SearchProgress&)> callback_;
  Clock::time_point start_;
  Clock::time_point last_;
  std::uint64_t total_;
  std::mutex mutex_;
};

// Tracks which units finished so the checkpoint cursor only covers a prefix.
class UnitLedger {
 public:
  UnitLedger(std::uint64_t first, std::uint64_t total) : cursor_(first), done_(total > first ? total - first : 0) {
    base_ = first;
  }

  // Returns the new contiguous cursor.
  std::uint64_t finish(std::uint64_t unit) {
    done_[unit - base_] = true;
    while (cursor_ - base_ < done_.size() && done_[cursor_ - base_]) ++cursor_;
    return cursor_;
  }

 private:
  std::uint64_t base_;
  std::uint64_t cursor_;
  std::vector<bool> done_;
};

struct Best {
  std::mutex mutex;
  std::atomic<unsigned> k{0};
  std::atomic<std::uint64_t> unit{no_unit};
  std::vector<FieldElement> family;

  // Larger k wins; equal k goes to the smaller unit index.
  bool offer(const std::vector<FieldElement>& fam, std::uint64_t at) {
    std::lock_guard<std::mutex> lock(mutex);
    const auto size = static_cast<unsigned>(fam.size());
    if (size > k.load() || (size == k.load() && at < unit.load())) {
      family = fam;
      unit.store(at);
      k.store(size);
      return true;
    }
    return false;
  }
};

void finalize(SearchResult& result, const std::shared_ptr<const Field>& field, const std::vector<FieldElement>& fam,
              const SearchOptions& options) {
  if (fam.empty()) return;
  CoeffFamily family(field, fam);
  result.best_k = static_cast<unsigned>(family.size());
  result.size = family.point_count();
  const bool brute = 2 * field->degree() <= 14;
  result.verification = brute ? "brute" : "fast";
  const FamilyVerdict fast = family_is_capset(family, CheckMode::fast, options.verify);
  result.verified = fast.capset;
  if (brute) {
    const FamilyVerdict exact = family_is_capset(family, CheckMode::brute, options.verify);
    if (exact.capset != fast.capset) fail(ErrorCode::internal, "fast and brute family checks disagree");
    result.verified = exact.capset;
  }
  if (!result.verified) fail(ErrorCode::internal, "search produced a family that is not a capset");
  result.family = std::move(family);
}

void save_checkpoint(const SearchOptions& options, std::uint64_t cursor, const Best& best, std::uint64_t nodes) {
  if (options.checkpoint_path.empty()) return;
  SearchCheckpoint cp;
  cp.m = options.m;
  cp.mode = options.mode;
  cp.seed = options.seed;
  cp.cursor = cursor;
  cp.best_unit = best.unit.load();
  cp.nodes = nodes;
  for (FieldElement c : best.family) cp.best.push_back(c.value);
  write_checkpoint(options.checkpoint_path, cp);
}

void apply_resume(const SearchOptions& options, Best& best, std::uint64_t& first, std::uint64_t& nodes) {
  if (!options.resume) return;
  const SearchCheckpoint& cp = *options.resume;
  if (cp.m != options.m || cp.mode != options.mode) fail(ErrorCode::invalid_argument, "checkpoint does not match search");
  if (options.mode == SearchMode::random && cp.seed != options.seed) {
    fail(ErrorCode::invalid_argument, "checkpoint seed does not match");
  }
  first = cp.cursor;
  nodes = cp.nodes;
  if (!cp.best.empty()) {
    std::vector<FieldElement> fam;
    for (std::uint32_t v : cp.best) fam.push_back(FieldElement{v});
    best.offer(fam, cp.best_unit);
  }
}

// Exhaustive branch and bound over cliques of the compatibility structure of
// elements joining {1}.
class Exhaustive {
 public:
  Exhaustive(const SearchOptions& options, std::shared_ptr<const Field> field)
      : options_(options), field_(std::move(field)), F_(*field_) {
    verts_ = normalized_candidates(F_);
    words_ = (verts_.size() + 63) / 64;
    adj_.assign(verts_.size(), Bits(words_, 0));
    for (std::size_t a = 0; a < verts_.size(); ++a) {
      for (std::size_t b = a + 1; b < verts_.size(); ++b) {
        if (pair_compatible(F_, verts_[a], verts_[b]) && !coeff_violation(F_, F_.one(), verts_[a], verts_[b])) {
          set_bit(adj_[a], b);
          set_bit(adj_[b], a);
        }
      }
    }
    // Branch roots: smallest member of each Frobenius orbit, excluding all
    // earlier orbits from the branch's candidates.
    std::vector<bool> seen(verts_.size(), false);
    Bits earlier(words_, 0);
    for (std::size_t a = 0; a < verts_.size(); ++a) {
      if (seen[a]) continue;
      Root root{a, earlier};
      for (unsigned j = 0; j < F_.degree(); ++j) {
        const FieldElement img = F_.frobenius(verts_[a], j);
        const auto it = std::lower_bound(verts_.begin(), verts_.end(), img);
        if (it == verts_.end() || !(*it == img)) fail(ErrorCode::internal, "candidate set is not Frobenius closed");
        const auto idx = static_cast<std::size_t>(it - verts_.begin());
        seen[idx] = true;
        set_bit(earlier, idx);
      }
      roots_.push_back(std::move(root));
    }
  }

  SearchResult run() {
    SearchResult result;
    Best best;
    best.offer({F_.one()}, no_unit);  // {1} alone is always a capset
    std::uint64_t first = 0;
    std::uint64_t prior_nodes = 0;
    apply_resume(options_, best, first, prior_nodes);
    nodes_.store(prior_nodes);

    const std::uint64_t total = roots_.size();
    ProgressReporter progress(options_, total);
    UnitLedger ledger(first, total);
    std::mutex ledger_mutex;
    std::atomic<std::uint64_t> next{first};
    std::atomic<std::uint64_t> finished{first};

    auto worker = [&] {
      for (;;) {
        if (stop_.load()) return;
        const std::uint64_t unit = next.fetch_add(1);
        if (unit >= total) return;
        branch(unit, best);
        if (stop_.load()) return;
        std::lock_guard<std::mutex> lock(ledger_mutex);
        const std::uint64_t cursor = ledger.finish(unit);
        finished.fetch_add(1);
        save_checkpoint(options_, cursor, best, nodes_.load());
        progress.report({SearchMode::exhaustive, finished.load(), 0, nodes_.load(), max_depth_.load(), best.k.load(), 0});
      }
    };
    const unsigned threads = std::min<unsigned>(resolve_threads(options_.threads), std::max<std::uint64_t>(total, 1));
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (ceiling_hit_.load()) {
      fail(ErrorCode::budget_exceeded, "exhaustive search exceeded the node ceiling of " +
                                           std::to_string(options_.node_ceiling));
    }
    progress.report({SearchMode::exhaustive, finished.load(), 0, nodes_.load(), max_depth_.load(), best.k.load(), 0}, true);

    result.nodes = nodes_.load();
    result.units = total;
    result.complete = !stop_.load();
    finalize(result, field_, best.family, options_);
    return result;
  }

 private:
  struct Root {
    std::size_t vertex;
    Bits excluded;
  };

  std::size_t color_bound(const Bits& p) const {
    Bits uncolored = p;
    std::size_t colors = 0;
    while (!none(uncolored)) {
      ++colors;
      Bits q = uncolored;
      while (!none(q)) {
        const std::size_t v = first_bit(q);
        clear_bit(uncolored, v);
        clear_bit(q, v);
        for (std::size_t w = 0; w < words_; ++w) q[w] &= ~adj_[v][w];
      }
    }
    return colors;
  }

  bool hopeless(std::size_t bound, std::uint64_t unit, unsigned local_best, const Best& best) const {
    if (bound <= local_best) return true;
    const unsigned k = best.k.load(std::memory_order_relaxed);
    if (bound < k) return true;
    return bound == k && best.unit.load(std::memory_order_relaxed) < unit;
  }

  void branch(std::uint64_t unit, Best& best) {
    const Root& root = roots_[unit];
    Bits p = adj_[root.vertex];
    for (std::size_t w = 0; w < words_; ++w) p[w] &= ~root.excluded[w];
    std::vector<std::size_t> chosen{root.vertex};
    unsigned local_best = 0;
    dfs(chosen, p, unit, local_best, best);
  }

  void dfs(std::vector<std::size_t>& chosen, Bits& p, std::uint64_t unit, unsigned& local_best, Best& best) {
    if (stop_.load(std::memory_order_relaxed)) return;
    if (nodes_.fetch_add(1, std::memory_order_relaxed) + 1 > options_.node_ceiling) {
      ceiling_hit_.store(true);
      stop_.store(true);
      return;
    }
    const auto k = static_cast<unsigned>(chosen.size() + 1);  // + the normalized 1
    unsigned depth = max_depth_.load(std::memory_order_relaxed);
    while (k > depth && !max_depth_.compare_exchange_weak(depth, k)) {
    }
    if (k > local_best) {
      local_best = k;
      std::vector<FieldElement> fam{F_.one()};
      for (std::size_t v : chosen) fam.push_back(verts_[v]);
      best.offer(fam, unit);
      if (options_.max_k && k >= *options_.max_k) {
        stop_.store(true);
        return;
      }
    }
    if (none(p) || hopeless(k + color_bound(p), unit, local_best, best)) return;

    while (!none(p)) {
      if (hopeless(k + popcount(p), unit, local_best, best)) return;
      const std::size_t v = first_bit(p);
      clear_bit(p, v);
      Bits next(words_);
      for (std::size_t w = 0; w < words_; ++w) next[w] = p[w] & adj_[v][w];
      for (std::size_t w = first_bit(next); w < verts_.size(); w = first_bit(next)) {
        // Walk the set bits in order without allocating a list.
        bool ok = true;
        for (std::size_t f : chosen) {
          if (coeff_violation(F_, verts_[f], verts_[v], verts_[w])) {
            ok = false;
            break;
          }
        }
        clear_bit(next, w);
        if (ok) kept_.push_back(w);
      }
      for (std::size_t w : kept_) set_bit(next, w);
      kept_.clear();
      chosen.push_back(v);
      dfs(chosen, next, unit, local_best, best);
      chosen.pop_back();
      if (stop_.load(std::memory_order_relaxed)) return;
    }
  }

  const SearchOptions& options_;
  std::shared_ptr<const Field> field_;
  const Field& F_;
  std::vector<FieldElement> verts_;
  std::size_t words_ = 0;
  std::vector<Bits> adj_;
  std::vector<Root> roots_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<unsigned> max_depth_{0};
  std::atomic<bool> stop_{false};
  std::atomic<bool> ceiling_hit_{false};
  static thread_local std::vector<std::size_t> kept_;
};

thread_local std::vector<std::size_t> Exhaustive::kept_;

}  // namespace

const char* to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::exhaustive:
      return "exhaustive";
    case SearchMode::random:
      return "random";
    case SearchMode::orbit:
      return "orbit";
  }
  return "unknown";
}

SearchMode parse_search_mode(const std::string& name) {
  if (name == "exhaustive") return SearchMode::exhaustive;
  if (name == "random") return SearchMode::random;
  if (name == "orbit") return SearchMode::orbit;
  fail(ErrorCode::invalid_argument, "unknown search mode '" + name + "'");
}

std::vector<FieldElement> orbit_representatives(const Field& F) {
  std::vector<FieldElement> reps;
  for (FieldElement a : full_orbit_elements(F)) {
    bool smallest = true;
    for (unsigned j = 1; j < F.degree() && smallest; ++j) smallest = a < F.frobenius(a, j);
    if (smallest) reps.push_back(a);
  }
  return reps;
}

SearchResult exhaustive_search(const SearchOptions& options) {
  if (options.m == 0) fail(ErrorCode::invalid_argument, "degree must be positive");
  if (options.m > options.max_exhaustive_degree) {
    fail(ErrorCode::budget_exceeded, "exhaustive search is limited to m <= " +
                                         std::to_string(options.max_exhaustive_degree));
  }
  Exhaustive search(options, Field::get(options.m));
  return search.run();
}

SearchResult random_search(const SearchOptions& options) {
  if (options.m == 0) fail(ErrorCode::invalid_argument, "degree must be positive");
  const auto field = Field::get(options.m);
  const Field& F = *field;
  const std::vector<FieldElement> candidates = normalized_candidates(F);

  Best best;
  best.offer({F.one()}, no_unit);
  bool floor_used = false;
  if (options.floor) {
    if (options.floor->degree() != options.m) fail(ErrorCode::invalid_argument, "floor family has the wrong degree");
    if (!family_is_capset(*options.floor, CheckMode::fast).capset) {
      fail(ErrorCode::invalid_argument, "floor family is not a capset");
    }
    // The floor ranks ahead of every restart on ties.
    best.offer(options.floor->coeffs(), 0);
    floor_used = true;
  }
  std::uint64_t first = 0;
  std::uint64_t prior_nodes = 0;
  apply_resume(options, best, first, prior_nodes);

  const std::uint64_t total = options.budget;
  ProgressReporter progress(options, total);
  UnitLedger ledger(first, total);
  std::mutex ledger_mutex;
  std::atomic<std::uint64_t> next{first};
  std::atomic<std::uint64_t> nodes{prior_nodes};
  std::atomic<std::uint64_t> finished{first};

  auto worker = [&] {
    std::vector<FieldElement> order;
    std::vector<FieldElement> fam;
    for (;;) {
      const std::uint64_t restart = next.fetch_add(1);
      if (restart >= total) return;
      std::mt19937_64 rng = restart_rng(options.seed, restart);
      order = candidates;
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
      fam.assign(1, F.one());
      for (FieldElement c : order) {
        if (admissible(F, fam, c)) fam.push_back(c);
      }
      nodes.fetch_add(order.size());
      std::sort(fam.begin(), fam.end());
      // Restart r ranks as unit r + 1 so a floor (unit 0) wins ties.
      best.offer(fam, restart + 1);
      std::lock_guard<std::mutex> lock(ledger_mutex);
      const std::uint64_t cursor = ledger.finish(restart);
      finished.fetch_add(1);
      save_checkpoint(options, cursor, best, nodes.load());
      progress.report({SearchMode::random, finished.load(), 0, nodes.load(), static_cast<unsigned>(fam.size()),
                       best.k.load(), 0});
    }
  };
  const unsigned threads = resolve_threads(options.threads);
  if (threads <= 1 || total <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  progress.report({SearchMode::random, finished.load(), 0, nodes.load(), 0, best.k.load(), 0}, true);

  SearchResult result;
  result.nodes = nodes.load();
  result.units = total;
  result.complete = true;
  result.from_floor = floor_used && best.unit.load() == 0;
  finalize(result, field, best.family, options);
  return result;
}

SearchResult orbit_search(const SearchOptions& options) {
  if (options.m == 0 || options.m % 2 != 0) fail(ErrorCode::invalid_argument, "orbit search needs an even degree");
  if (options.orbits == 0) fail(ErrorCode::invalid_argument, "orbit count must be positive");
  const auto field = Field::get(options.m);
  const Field& F = *field;
  const std::vector<FieldElement> reps = orbit_representatives(F);
  ProgressReporter progress(options, reps.size());

  auto orbit_of = [&](FieldElement a) {
    std::vector<FieldElement> o;
    for (unsigned j = 0; j < F.degree(); ++j) o.push_back(F.frobenius(a, j));
    return o;
  };

  // Orbits that are capsets on their own.
  std::vector<std::vector<FieldElement>> valid;
  std::vector<FieldElement> valid_reps;
  for (FieldElement a : reps) {
    std::vector<FieldElement> o = orbit_of(a);
    if (family_is_capset(CoeffFamily(field, o), CheckMode::fast).capset) {
      valid.push_back(std::move(o));
      valid_reps.push_back(a);
    }
  }

  std::uint64_t first = 0;
  std::uint64_t nodes = 0;
  if (options.resume) {
    const SearchCheckpoint& cp = *options.resume;
    if (cp.m != options.m || cp.mode != SearchMode::orbit) fail(ErrorCode::invalid_argument, "checkpoint does not match search");
    first = cp.cursor;
    nodes = cp.nodes;
  }

  std::vector<FieldElement> found;
  std::vector<FieldElement> current;
  bool exhausted_budget = false;
  // Depth-first over ascending tuples of compatible orbits.
  std::function<bool(std::size_t)> extend = [&](std::size_t start) -> bool {
    if (current.size() == options.orbits * F.degree()) {
      found = current;
      return true;
    }
    for (std::size_t i = start; i < valid.size(); ++i) {
      if (options.orbit_budget && nodes >= options.orbit_budget) {
        exhausted_budget = true;
        return false;
      }
      ++nodes;
      const std::size_t before = current.size();
      bool ok = true;
      for (FieldElement c : valid[i]) {
        if (before > 0 && !admissible(F, current, c)) {
          ok = false;
          break;
        }
        current.push_back(c);
      }
      if (ok && extend(i + 1)) return true;
      current.resize(before);
    }
    return false;
  };

  Best best;
  std::uint64_t unit = first;
  for (; unit < valid.size() && found.empty() && !exhausted_budget; ++unit) {
    current = valid[unit];
    ++nodes;
    if (options.orbits == 1 || extend(unit + 1)) {
      found = current;
      break;
    }
    save_checkpoint(options, unit + 1, best, nodes);
    progress.report({SearchMode::orbit, unit + 1, 0, nodes, 0, 0, 0});
  }
  progress.report({SearchMode::orbit, unit, 0, nodes, 0, static_cast<unsigned>(found.size()), 0}, true);

  SearchResult result;
  result.nodes = nodes;
  result.units = valid.size();
  result.complete = !exhausted_budget;
  finalize(result, field, found, options);
  return result;
}

SearchResult run_search(const SearchOptions& options) {
  switch (options.mode) {
    case SearchMode::exhaustive:
      return exhaustive_search(options);
    case SearchMode::random:
      return random_search(options);
    case SearchMode::orbit:
      return orbit_search(options);
  }
  fail(ErrorCode::invalid_argument, "unknown search mode");
}

SearchCheckpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("format").get<int>() != 1 || j.at("kind").get<std::string>() != "search-checkpoint") {
      fail(ErrorCode::parse_error, "not a search checkpoint: " + path);
    }
    SearchCheckpoint cp;
    cp.m = j.at("m").get<unsigned>();
    cp.mode = parse_search_mode(j.at("mode").get<std::string>());
    cp.seed = j.at("seed").get<std::uint64_t>();
    cp.cursor = j.at("cursor").get<std::uint64_t>();
    cp.best_unit = j.at("best_unit").is_null() ? no_unit : j.at("best_unit").get<std::uint64_t>();
    cp.nodes = j.at("nodes").get<std::uint64_t>();
    cp.best = j.at("best").get<std::vector<std::uint32_t>>();
    return cp;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse_error, std::string("malformed checkpoint: ") + e.what());
  }
}

void write_checkpoint(const std::string& path, const SearchCheckpoint& cp) {
  nlohmann::json j;
  j["format"] = 1;
  j["kind"] = "search-checkpoint";
  j["m"] = cp.m;
  j["mode"] = to_string(cp.mode);
  j["seed"] = cp.seed;
  j["cursor"] = cp.cursor;
  j["best_unit"] = cp.best_unit == no_unit ? nlohmann::json(nullptr) : nlohmann::json(cp.best_unit);
  j["nodes"] = cp.nodes;
  j["best"] = cp.best;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) fail(ErrorCode::io_error, "cannot write " + tmp);
    out << j.dump(2) << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) fail(ErrorCode::io_error, "cannot replace " + path);
}

}  // namespace capset
