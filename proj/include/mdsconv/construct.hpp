#pragma once

#include <array>

#include "mdsconv/code.hpp"

namespace mdsconv {

// Distance-3 construction: n = 2^m, k = 2^m-1, D = 1, r(1,j) = alpha^(j-1)
// (the k distinct nonzero elements). Profile [2,3], the best possible at
// this rate.
Code construct_d3(FieldPtr field);

// Distance-4 construction over the trace hyperplane H_beta: n = 2^(m-1),
// D = 2, r(1,s) = a_s the nonzero elements of H_beta ascending, and
// r(2,s) = a_s (a_s + c) with c outside H_beta. Profile [2,3,4].
Code construct_d4(FieldPtr field, Fe beta, Fe c);
Code construct_d4(FieldPtr field);  // beta = 1, c = smallest with Tr(c) = 1

Fe default_d4_constant(const Field& f, Fe beta);

// The six distance-4 conditions a canonical degree-2 parity row family must
// satisfy; all six hold iff the code reaches profile [2,3,4]. Witness index
// meaning per condition: (i) s=position, t=degree; (ii) s<t positions,
// u=degree; (iii) (s,t); (iv) (s,t); (v) (s,t,u); (vi) (s,t,u).
struct D4Report {
    struct Condition {
        bool ok = true;
        int s = 0, t = 0, u = 0;
    };
    std::array<Condition, 6> cond;

    bool all_ok() const
    {
        for (const auto& c : cond)
            if (!c.ok) return false;
        return true;
    }
};

D4Report check_d4_conditions(const Code& code);

// Largest k = n-1 a code with the given free distance can have over the
// field: floor((2^m-1)/(dist-2)).
int max_k_bound(const Field& f, int dist);

// Largest free distance the bound allows at block length n:
// floor((2^m-1)/(n-1)) + 2.
int max_distance_bound(const Field& f, int n);

}  // namespace mdsconv
