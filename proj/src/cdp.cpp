#include "mdsconv/cdp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mdsconv {

namespace {

Profile chain_profile(int mds_depth, int code_deg)
{
    Profile p;
    p.mds_depth = mds_depth;
    for (int l = 0; l <= mds_depth; ++l) p.distances.push_back(l + 2);
    p.full_mds = (mds_depth == code_deg);
    p.free_distance = p.full_mds ? code_deg + 2 : 0;
    return p;
}

}  // namespace

Profile cdp_via_minors(const Code& code, int jobs)
{
    const Field& f = code.field();
    int k = code.k();

    for (int j = 1; j <= k; ++j)
        if (code.r(0, j) == 0) return chain_profile(-1, code.deg());

    const Code* work = &code;
    Code normalized = code;
    if (!std::all_of(code.coeffs().begin(), code.coeffs().begin() + k,
                     [](Fe v) { return v == 1; })) {
        std::vector<std::vector<Fe>> rows(code.deg() + 1, std::vector<Fe>(k));
        for (int j = 1; j <= k; ++j) {
            Fe s = f.inv(code.r(0, j));
            for (int i = 0; i <= code.deg(); ++i) rows[i][j - 1] = f.mul(code.r(i, j), s);
        }
        normalized = Code(code.field_ptr(), code.n(), std::move(rows));
        work = &normalized;
    }

    SuperregCheck chk = superreg_break_scan(*work, work->deg(), jobs);
    int broken_at = chk.ok ? work->deg() + 1 : chk.fail_degree;
    return chain_profile(broken_at - 1, code.deg());
}

Profile cdp_bruteforce(const Code& code, int L, std::uint64_t budget)
{
    const Field& f = code.field();
    int k = code.k(), D = code.deg();
    double bits = static_cast<double>(k) * (L + 1) * f.m();
    if (bits > std::log2(static_cast<double>(budget)) + 1e-9)
        throw BudgetExceeded("brute-force column distance enumeration too large");

    std::vector<int> best(L + 1, std::numeric_limits<int>::max());
    std::vector<std::vector<Fe>> info(L + 1, std::vector<Fe>(k, 0));

    auto parity_at = [&](int t) {
        Fe p = 0;
        for (int i = 0; i <= std::min(t, D); ++i)
            for (int j = 1; j <= k; ++j) p ^= f.mul(code.r(i, j), info[t - i][j - 1]);
        return p;
    };

    std::function<void(int, int)> visit_block = [&](int t, int w) {
        std::vector<Fe>& blk = info[t];
        std::function<void(int, int)> fill = [&](int idx, int wblk) {
            if (idx == k) {
                if (t == 0 && wblk == 0) return;  // first block must be nonzero
                int w2 = w + wblk + (parity_at(t) != 0 ? 1 : 0);
                if (w2 < best[t]) best[t] = w2;
                if (t < L) {
                    int lim = 0;
                    for (int l = t + 1; l <= L; ++l) lim = std::max(lim, best[l]);
                    if (w2 < lim) visit_block(t + 1, w2);
                }
                return;
            }
            for (std::uint32_t v = 0; v < f.size(); ++v) {
                blk[idx] = static_cast<Fe>(v);
                fill(idx + 1, wblk + (v != 0 ? 1 : 0));
            }
            blk[idx] = 0;
        };
        fill(0, 0);
    };
    visit_block(0, 0);

    Profile p;
    p.distances.assign(best.begin(), best.end());
    int md = -1;
    for (int l = 0; l <= L && best[l] == l + 2; ++l) md = l;
    p.mds_depth = md;
    p.full_mds = (L >= D && md >= D);
    p.free_distance = (L >= D) ? best[L] : 0;
    return p;
}

Code scale_transform(const Code& code, Fe c)
{
    if (c == 0) throw ZeroScalar("scale transform needs a nonzero scalar");
    const Field& f = code.field();
    std::vector<std::vector<Fe>> rows(code.deg() + 1, std::vector<Fe>(code.k()));
    Fe ci = 1;
    for (int i = 0; i <= code.deg(); ++i) {
        for (int j = 1; j <= code.k(); ++j) rows[i][j - 1] = f.mul(ci, code.r(i, j));
        ci = f.mul(ci, c);
    }
    return Code(code.field_ptr(), code.n(), std::move(rows));
}

Code frobenius_transform(const Code& code)
{
    const Field& f = code.field();
    std::vector<std::vector<Fe>> rows(code.deg() + 1, std::vector<Fe>(code.k()));
    for (int i = 0; i <= code.deg(); ++i)
        for (int j = 1; j <= code.k(); ++j) rows[i][j - 1] = f.sqr(code.r(i, j));
    return Code(code.field_ptr(), code.n(), std::move(rows));
}

Code shorten(const Code& code, int j0)
{
    if (code.k() < 2) throw CannotShortenRateHalf("cannot shorten a rate-1/2 code");
    if (j0 < 1 || j0 > code.k()) throw Error("shorten position out of range");
    std::vector<std::vector<Fe>> rows(code.deg() + 1);
    for (int i = 0; i <= code.deg(); ++i) {
        rows[i].reserve(code.k() - 1);
        for (int j = 1; j <= code.k(); ++j)
            if (j != j0) rows[i].push_back(code.r(i, j));
    }
    return Code(code.field_ptr(), code.n() - 1, std::move(rows));
}

}  // namespace mdsconv
