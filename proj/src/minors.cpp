#include "mdsconv/minors.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <thread>

namespace mdsconv {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max() / 2;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t s = a + b;
    if (s < a || s > kSaturated) return kSaturated;
    return s;
}

// Number of strictly increasing sequences j_1 < ... < j_p with j_l <= bounds[l].
std::uint64_t ballot_count(const std::vector<int>& bounds)
{
    int p = static_cast<int>(bounds.size());
    int maxcol = bounds.back();
    std::vector<std::uint64_t> cur(maxcol + 1, 0), nxt(maxcol + 1, 0);
    for (int x = 1; x <= bounds[0]; ++x) cur[x] = 1;
    for (int l = 1; l < p; ++l) {
        std::fill(nxt.begin(), nxt.end(), 0);
        std::uint64_t pre = 0;
        for (int x = 1; x <= bounds[l]; ++x) {
            pre = sat_add(pre, cur[x - 1]);
            nxt[x] = pre;
        }
        std::swap(cur, nxt);
    }
    std::uint64_t total = 0;
    for (int x = 1; x <= maxcol; ++x) total = sat_add(total, cur[x]);
    return total;
}

}  // namespace

Fe det_inplace(Fe* a, int p, const Field& f)
{
    Fe det = 1;
    for (int c = 0; c < p; ++c) {
        int piv = -1;
        for (int r = c; r < p; ++r)
            if (a[r * p + c] != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != c)
            for (int j = c; j < p; ++j) std::swap(a[c * p + j], a[piv * p + j]);
        Fe pv = a[c * p + c];
        det = f.mul(det, pv);
        Fe pinv = f.inv(pv);
        for (int r = c + 1; r < p; ++r) {
            Fe lead = a[r * p + c];
            if (lead == 0) continue;
            Fe factor = f.mul(lead, pinv);
            a[r * p + c] = 0;
            for (int j = c + 1; j < p; ++j) a[r * p + j] ^= f.mul(factor, a[c * p + j]);
        }
    }
    return det;
}

Fe minor_det(const Matrix& m, const ProperSubmatrix& sub, const Field& f)
{
    int p = static_cast<int>(sub.row_idx.size());
    std::vector<Fe> buf(static_cast<std::size_t>(p) * p);
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c)
            buf[r * p + c] = m.at(sub.row_idx[r] - 1, sub.col_idx[c] - 1);
    return det_inplace(buf.data(), p, f);
}

std::uint64_t count_proper(int k, int rows)
{
    if (rows <= 0 || k <= 0) return 0;
    if (rows > 20) return kSaturated;
    std::uint64_t total = 0;
    for (std::uint32_t mask = 1; mask < (1u << rows); ++mask) {
        std::vector<int> bounds;
        for (int i = 1; i <= rows; ++i)
            if (mask & (1u << (i - 1))) bounds.push_back(k * i);
        total = sat_add(total, ballot_count(bounds));
        if (total >= kSaturated) return kSaturated;
    }
    return total;
}

std::uint64_t count_anchored(int k, int rows)
{
    return count_proper(k, rows) - count_proper(k, rows - 1);
}

std::vector<ProperSubmatrix> enumerate_proper(int k, int rows, std::uint64_t cap)
{
    std::uint64_t total = count_proper(k, rows);
    if (total > cap) throw SizeOverflow("proper submatrix count exceeds the cap");
    std::vector<ProperSubmatrix> out;
    out.reserve(total);
    for (int bottom = 1; bottom <= rows; ++bottom)
        for (int c = 1; c <= k * bottom; ++c)
            for_each_anchored_at(k, bottom, c,
                                 [&](const std::vector<int>& r, const std::vector<int>& cl) {
                                     out.push_back(ProperSubmatrix{r, cl});
                                 });
    return out;
}

namespace {

// entry of reduced_matrix(code, D) without materializing it
inline Fe reduced_entry(const Code& code, int row1, int col1)
{
    int k = code.k();
    int t = (col1 - 1) / k;
    int pos = (col1 - 1) % k + 1;
    int deg = (row1 - 1) - t;
    if (deg < 0 || deg > code.deg()) return 0;
    return code.r(deg, pos);
}

struct ScanHit {
    std::uint64_t key = std::numeric_limits<std::uint64_t>::max();
    ProperSubmatrix witness;
};

// Scan all bottom-row-anchored minors of H'^(D) in walk order (anchor column
// descending, i.e. coefficient degree ascending / position descending).
// Returns the first failure, if any.
ScanHit anchored_fail_scan(const Code& code, int D, int jobs)
{
    const Field& f = code.field();
    int k = code.k();
    int bottom = D + 1;
    int ncols = k * bottom;

    std::atomic<std::uint64_t> best_key{std::numeric_limits<std::uint64_t>::max()};
    std::mutex best_mu;
    ScanHit best;

    // only the non-splitting minors: a split one factors into two minors that
    // live at strictly earlier anchors, so the first failing group and the
    // first witness inside it are unchanged
    auto scan_col = [&](int c) {
        std::uint64_t col_rank = static_cast<std::uint64_t>(ncols - c);
        std::uint64_t col_base = col_rank << 40;
        if (col_base >= best_key.load(std::memory_order_relaxed)) return;
        std::uint64_t seq = 0;
        Fe buf[32 * 32];
        bool done = false;
        for_each_anchored_linked(
            k, bottom, c, [&](const std::vector<int>& rows, const std::vector<int>& cols) {
                if (done) return;
                int p = static_cast<int>(rows.size());
                for (int r = 0; r < p; ++r)
                    for (int cc = 0; cc < p; ++cc)
                        buf[r * p + cc] = reduced_entry(code, rows[r], cols[cc]);
                Fe d = det_inplace(buf, p, f);
                if (d == 0) {
                    std::uint64_t key = col_base | seq;
                    std::uint64_t cur = best_key.load(std::memory_order_relaxed);
                    while (key < cur && !best_key.compare_exchange_weak(cur, key)) {}
                    if (key <= best_key.load()) {
                        std::lock_guard<std::mutex> lk(best_mu);
                        if (key < best.key) best = ScanHit{key, {rows, cols}};
                    }
                    done = true;
                }
                ++seq;
            });
    };

    if (jobs <= 1) {
        for (int c = ncols; c >= 1; --c) {
            scan_col(c);
            if (best_key.load() != std::numeric_limits<std::uint64_t>::max()) break;
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < jobs; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    int idx = next.fetch_add(1);
                    if (idx >= ncols) return;
                    scan_col(ncols - idx);  // walk order: columns descending
                }
            });
        for (auto& t : pool) t.join();
    }
    return best;
}

}  // namespace

SuperregCheck superreg_break_scan(const Code& code, int D, int jobs, std::uint64_t cap)
{
    if (D > code.deg()) throw Error("superregularity check degree exceeds the code degree");
    if (count_anchored(code.k(), D + 1) > cap)
        throw SizeOverflow("anchored minor count exceeds the cap");
    ScanHit hit = anchored_fail_scan(code, D, jobs);
    SuperregCheck out;
    if (hit.key == std::numeric_limits<std::uint64_t>::max()) {
        out.ok = true;
        out.fail_degree = D + 1;
        return out;
    }
    out.ok = false;
    out.witness = hit.witness;
    int anchor_col = hit.witness.col_idx.front();
    int block = (anchor_col - 1) / code.k();
    out.fail_degree = D - block;
    return out;
}

SuperregCheck is_k_superregular(const Code& code, int D, int jobs, std::uint64_t cap)
{
    return superreg_break_scan(code, D, jobs, cap);
}

}  // namespace mdsconv
