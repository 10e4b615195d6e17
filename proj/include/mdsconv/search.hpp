#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "mdsconv/code.hpp"

namespace mdsconv {

// One coefficient slot in the depth-first walk: degree i >= 1, position j.
// Walk order: r(1,k-1), ..., r(1,1), r(2,k), ..., r(2,1), r(3,k), ...
// For n = 2 (k = 1) it starts at r(2,1); r(0,*) and r(1,k) are pinned to 1.
struct WalkPos {
    int deg = 0;
    int pos = 0;
    bool operator==(const WalkPos&) const = default;
};

std::vector<WalkPos> search_walk(int k, int target_degree);

struct SearchOptions {
    int target_distance = 3;      // walk covers degrees up to target_distance - 2
    bool complete = true;         // try every legal value per depth
    bool stop_on_success = true;  // stop once the last depth is passed
    bool full_traversal = false;  // walk the entire tree (per-depth counting); implies not stopping
    bool symmetry_filters = true; // degree-1 ordering chain + cyclotomic restriction
    int probe_width = 8;          // incomplete mode: values kept per depth
    std::uint64_t seed = 1;
    std::uint64_t node_budget = 0;   // 0 = unlimited; counts assignments
    double time_budget_s = 0;        // 0 = unlimited; coarse, nondeterministic
    int jobs = 1;
    std::uint64_t checkpoint_every = 0;  // nodes between dumps; jobs = 1 only
    std::string checkpoint_path;
    // test instrumentation: called on every assignment with (depth, values[0..depth])
    std::function<void(int, const std::vector<Fe>&)> trace;
};

struct DepthStats {
    std::uint64_t visits = 0;       // legal-set computations at this depth
    std::uint64_t assigns = 0;      // values assigned at this depth (tree nodes)
    std::uint64_t legal_total = 0;  // sum of |L| over visits, before probe subsampling
};

struct SearchResult {
    std::optional<Code> best;   // code from the deepest fully assigned degree row
    int target_distance = 0;
    int achieved_delta = 2;     // distance certified by best
    bool found = false;         // some assignment passed the last depth
    bool exhausted = false;     // the (restricted) tree was fully walked
    bool budget_exceeded = false;
    int deepest_depth = -1;
    std::vector<Fe> deepest_values;
    std::vector<Fe> first_full_values;  // lexicographically first completion seen
    std::uint64_t completions = 0;
    std::uint64_t nodes = 0;
    std::vector<DepthStats> stats;
};

SearchResult run_search(FieldPtr field, int n, const SearchOptions& opt);

// Continue from a checkpoint written by run_search (magic header "MDSCKPT1").
// The budgets replace the checkpointed ones; 0 means unlimited.
SearchResult resume_search(const std::string& checkpoint_path,
                           std::uint64_t node_budget = 0, double time_budget_s = 0);

// Manual driver used by tests: holds a prefix assignment and answers
// legal-value queries depth by depth.
class Searcher {
public:
    Searcher(FieldPtr field, int n, int target_distance, bool symmetry_filters = false);
    ~Searcher();
    Searcher(const Searcher&) = delete;
    Searcher& operator=(const Searcher&) = delete;

    int depth_count() const;
    WalkPos walk(int depth) const;
    void set_prefix(const std::vector<Fe>& values);
    // legal values at the next depth (= prefix length), ascending log order
    std::vector<Fe> legal_values(int depth) const;

private:
    struct Impl;
    Impl* impl_;
};

struct EstablishResult {
    int delta = 2;
    bool exact = false;
};

// Repeated complete searches with increasing target until one fails a level
// higher (exact) or the budget runs out (lower bound).
EstablishResult establish_delta(FieldPtr field, int n, std::uint64_t node_budget_per_level = 0,
                                int jobs = 1);

}  // namespace mdsconv
