#pragma once

#include <cstdint>
#include <vector>

#include "mdsconv/search.hpp"

namespace mdsconv {

// Per-depth statistics of the probability that a uniformly random nonzero
// coefficient assignment survives the minor conditions. Probabilities are
// carried in the log2 domain (the deep tables go below 1e-39).
struct RarenessRow {
    int depth = 0;
    WalkPos pos;
    std::uint64_t samples = 0;      // nodes whose legal set was measured here
    std::uint64_t satisfying = 0;   // exact mode: surviving prefixes at this depth
    long double conditional = 0;    // average |L| / (2^m - 1)
    long double cum_log2 = 0;       // log2 of the chained product
};

struct RarenessReport {
    int m = 0, n = 0, target_degree = 0;
    bool exact = false;
    std::vector<RarenessRow> rows;

    long double cumulative_log2() const;
    long double cumulative() const;  // may underflow to 0 for display purposes
    std::string to_csv() const;      // depth, conditional, cumulative, samples
};

// Exact rareness from a complete traversal of the search tree with the
// symmetry filters off (they change the count; the pinned r(0,*) = 1 and
// r(1,k) = 1 prefix is kept, matching the sequence space the counts are
// normalized over). Throws BudgetExceeded when the traversal cannot finish.
RarenessReport rareness_exact(FieldPtr field, int n, int D, int jobs = 1,
                              std::uint64_t node_budget = 0);

// Estimated rareness from an incomplete (probe) traversal: per-depth
// conditionals are visit-weighted averages of |L| / (2^m - 1), chained with
// the base case of 1 before the first depth.
RarenessReport rareness_estimate(FieldPtr field, int n, int D, int probe_width = 8,
                                 std::uint64_t seed = 1, int jobs = 1,
                                 std::uint64_t node_budget = 0);

// Probability that a random assignment matches the distance-4 hyperplane
// construction exactly: 2^(m-1) * (2^(m-1)-1)! / (2^m-1)^(2^m-3).
long double d4_construction_rareness_log10(int m);
long double d4_construction_rareness(int m);

}  // namespace mdsconv
