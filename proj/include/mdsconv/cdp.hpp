#pragma once

#include <cstdint>

#include "mdsconv/code.hpp"
#include "mdsconv/minors.hpp"

namespace mdsconv {

// Column distance profile. distances holds the certified prefix
// d_0, d_1, ... (for the minor route that is the maximal chain d_l = l+2);
// mds_depth is the largest l with the chain intact, -1 if even d_0 < 2.
struct Profile {
    std::vector<int> distances;
    int mds_depth = -1;
    bool full_mds = false;   // chain reaches the code's maximum degree
    int free_distance = 0;   // 0 when not determined

    bool operator==(const Profile&) const = default;
};

// Largest D' <= code.deg() with every proper minor of the reduced matrix
// nonsingular; distances are then 2, 3, ..., D'+2. Inputs with r(0,j) != 1
// are normalized by per-column scaling first (weight preserving, so the
// profile belongs to the original code).
Profile cdp_via_minors(const Code& code, int jobs = 1);

// Independent route: enumerate every information sequence with a nonzero
// first block, encode, take minimum weights. Desk-scale oracle; throws
// BudgetExceeded when q^(k(L+1)) exceeds the budget.
Profile cdp_bruteforce(const Code& code, int L, std::uint64_t budget = 1ull << 26);

// r(i,j) -> c^i r(i,j); profile preserving for c != 0.
Code scale_transform(const Code& code, Fe c);

// Square every coefficient; profile preserving.
Code frobenius_transform(const Code& code);

// Drop information position j0 (rate (k-1)/k from k/(k+1)); the mds depth
// never decreases.
Code shorten(const Code& code, int j0);

}  // namespace mdsconv
