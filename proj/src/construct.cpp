#include "mdsconv/construct.hpp"

namespace mdsconv {

Code construct_d3(FieldPtr field)
{
    const Field& f = *field;
    int k = static_cast<int>(f.order());
    std::vector<std::vector<Fe>> rows(2, std::vector<Fe>(k));
    for (int j = 1; j <= k; ++j) {
        rows[0][j - 1] = 1;
        rows[1][j - 1] = f.exp(j - 1);
    }
    return Code(std::move(field), k + 1, std::move(rows));
}

Fe default_d4_constant(const Field& f, Fe beta)
{
    for (std::uint32_t x = 1; x < f.size(); ++x)
        if (f.trace(f.mul(beta, static_cast<Fe>(x))) != 0) return static_cast<Fe>(x);
    throw BadBeta("trace form is identically zero");  // unreachable for beta != 0
}

Code construct_d4(FieldPtr field, Fe beta, Fe c)
{
    const Field& f = *field;
    if (f.m() < 2) throw BadDegree("distance-4 construction needs m >= 2");
    if (beta == 0) throw BadBeta("beta must be nonzero");
    if (f.trace(f.mul(beta, c)) == 0) throw BadConstant("c must lie outside the hyperplane");

    std::vector<Fe> a;  // nonzero elements of H_beta, ascending integer representation
    for (std::uint32_t x = 1; x < f.size(); ++x)
        if (f.trace(f.mul(beta, static_cast<Fe>(x))) == 0) a.push_back(static_cast<Fe>(x));

    int k = static_cast<int>(a.size());  // 2^(m-1) - 1
    std::vector<std::vector<Fe>> rows(3, std::vector<Fe>(k));
    for (int s = 1; s <= k; ++s) {
        rows[0][s - 1] = 1;
        rows[1][s - 1] = a[s - 1];
        rows[2][s - 1] = f.mul(a[s - 1], f.add(a[s - 1], c));
    }
    return Code(std::move(field), k + 1, std::move(rows));
}

Code construct_d4(FieldPtr field)
{
    Fe c = default_d4_constant(*field, 1);
    return construct_d4(std::move(field), 1, c);
}

D4Report check_d4_conditions(const Code& code)
{
    if (code.deg() < 2) throw DegreeTooSmall("distance-4 conditions need degree >= 2");
    for (int j = 1; j <= code.k(); ++j)
        if (code.r(0, j) != 1) throw Error("distance-4 conditions assume a unit degree-0 row");

    const Field& f = code.field();
    int k = code.k();
    D4Report rep;
    auto r = [&](int i, int j) { return code.r(i, j); };

    // (i) nonzero degree-1 and degree-2 coefficients
    for (int i = 1; i <= 2 && rep.cond[0].ok; ++i)
        for (int s = 1; s <= k; ++s)
            if (r(i, s) == 0) {
                rep.cond[0] = {false, s, i, 0};
                break;
            }

    // (ii) within-degree distinctness
    for (int i = 1; i <= 2 && rep.cond[1].ok; ++i)
        for (int s = 1; s <= k && rep.cond[1].ok; ++s)
            for (int t = s + 1; t <= k; ++t)
                if (r(i, s) == r(i, t)) {
                    rep.cond[1] = {false, s, t, i};
                    break;
                }

    // (iii) r(1,t) r(1,s) != r(2,s), all s, t
    for (int s = 1; s <= k && rep.cond[2].ok; ++s)
        for (int t = 1; t <= k; ++t)
            if (f.mul(r(1, t), r(1, s)) == r(2, s)) {
                rep.cond[2] = {false, s, t, 0};
                break;
            }

    // (iv) r(2,s)/r(1,s) != r(2,t)/r(1,t), cross-multiplied
    for (int s = 1; s <= k && rep.cond[3].ok; ++s)
        for (int t = s + 1; t <= k; ++t)
            if (f.mul(r(2, s), r(1, t)) == f.mul(r(2, t), r(1, s))) {
                rep.cond[3] = {false, s, t, 0};
                break;
            }

    // (v) r(2,s) + r(2,t) != r(1,u) (r(1,s) + r(1,t))
    for (int s = 1; s <= k && rep.cond[4].ok; ++s)
        for (int t = s + 1; t <= k && rep.cond[4].ok; ++t)
            for (int u = 1; u <= k; ++u)
                if (f.add(r(2, s), r(2, t)) == f.mul(r(1, u), f.add(r(1, s), r(1, t)))) {
                    rep.cond[4] = {false, s, t, u};
                    break;
                }

    // (vi) r(2,s)(r(1,u) + r(1,t)) != r(1,s)(r(2,u) + r(2,t)) + r(1,t) r(2,u) + r(1,u) r(2,t);
    // tuples with r(1,u) = r(1,t) are left to condition (ii)
    for (int s = 1; s <= k && rep.cond[5].ok; ++s)
        for (int t = s + 1; t <= k && rep.cond[5].ok; ++t)
            for (int u = t + 1; u <= k; ++u) {
                Fe denom = f.add(r(1, u), r(1, t));
                if (denom == 0) continue;
                Fe lhs = f.mul(r(2, s), denom);
                Fe rhs = f.mul(r(1, s), f.add(r(2, u), r(2, t)));
                rhs ^= f.mul(r(1, t), r(2, u));
                rhs ^= f.mul(r(1, u), r(2, t));
                if (lhs == rhs) {
                    rep.cond[5] = {false, s, t, u};
                    break;
                }
            }

    return rep;
}

int max_k_bound(const Field& f, int dist)
{
    if (dist < 3) throw DistanceTooSmall("free distance below 3");
    return static_cast<int>(f.order()) / (dist - 2);
}

int max_distance_bound(const Field& f, int n)
{
    if (n < 2) throw Error("block length must be at least 2");
    return static_cast<int>(f.order()) / (n - 1) + 2;
}

}  // namespace mdsconv
