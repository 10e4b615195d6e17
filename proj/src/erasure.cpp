#include "mdsconv/erasure.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace mdsconv {

Stream encode_stream(const Code& code, const std::vector<Fe>& info)
{
    const Field& f = code.field();
    int n = code.n(), k = code.k(), D = code.deg();
    if (info.size() % k != 0) throw Error("information length must be a multiple of k");
    int T = static_cast<int>(info.size()) / k;
    Stream s{code, T, std::vector<Fe>(static_cast<std::size_t>(T) * n, 0)};
    for (int t = 0; t < T; ++t) {
        Fe parity = 0;
        for (int j = 0; j < k; ++j) {
            Fe v = info[static_cast<std::size_t>(t) * k + j];
            s.symbols[static_cast<std::size_t>(t) * n + j] = v;
        }
        for (int i = 0; i <= std::min(t, D); ++i)
            for (int j = 1; j <= k; ++j)
                parity ^= f.mul(code.r(i, j), info[static_cast<std::size_t>(t - i) * k + (j - 1)]);
        s.symbols[static_cast<std::size_t>(t) * n + k] = parity;
    }
    return s;
}

HybridCode::HybridCode(Code prefix, std::uint64_t seed, int extra_degrees)
    : prefix_(prefix), full_(prefix), extra_(extra_degrees), seed_(seed)
{
    if (extra_degrees < 0) throw Error("tail degree count must be nonnegative");
    if (extra_degrees == 0) return;
    const Field& f = prefix.field();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> dist(1, f.order());
    std::vector<std::vector<Fe>> rows(prefix.deg() + 1 + extra_degrees,
                                      std::vector<Fe>(prefix.k()));
    for (int i = 0; i <= prefix.deg(); ++i)
        for (int j = 1; j <= prefix.k(); ++j) rows[i][j - 1] = prefix.r(i, j);
    for (int i = prefix.deg() + 1; i <= prefix.deg() + extra_degrees; ++i)
        for (int j = 1; j <= prefix.k(); ++j) rows[i][j - 1] = static_cast<Fe>(dist(rng));
    full_ = Code(prefix.field_ptr(), prefix.n(), std::move(rows));
}

HybridCode hybrid_extend(const Code& prefix, std::uint64_t seed, int degrees)
{
    return HybridCode(prefix, seed, degrees);
}

Stream encode_stream(const HybridCode& hybrid, const std::vector<Fe>& info)
{
    return encode_stream(hybrid.full(), info);
}

int ErasureTrace::recovered_at(const SymbolRef& s) const
{
    for (const Recovery& r : recovered)
        if (r.sym == s) return r.at_block;
    return -1;
}

namespace {

struct EqRow {
    std::vector<std::pair<int, Fe>> terms;  // sorted by unknown id
    Fe rhs = 0;
    bool alive = false;
};

// r ^= factor * other (term lists stay sorted)
void xor_scaled(EqRow& r, const EqRow& other, Fe factor, const Field& f)
{
    std::vector<std::pair<int, Fe>> merged;
    merged.reserve(r.terms.size() + other.terms.size());
    std::size_t a = 0, b = 0;
    while (a < r.terms.size() || b < other.terms.size()) {
        if (b == other.terms.size() ||
            (a < r.terms.size() && r.terms[a].first < other.terms[b].first)) {
            merged.push_back(r.terms[a++]);
        } else if (a == r.terms.size() || other.terms[b].first < r.terms[a].first) {
            Fe c = f.mul(factor, other.terms[b].second);
            if (c) merged.emplace_back(other.terms[b].first, c);
            ++b;
        } else {
            Fe c = r.terms[a].second ^ f.mul(factor, other.terms[b].second);
            if (c) merged.emplace_back(r.terms[a].first, c);
            ++a;
            ++b;
        }
    }
    r.terms = std::move(merged);
    r.rhs ^= f.mul(factor, other.rhs);
}

}  // namespace

ErasureTrace decode_erasures(const Stream& s, const std::vector<SymbolRef>& erased, int window)
{
    const Code& code = s.code;
    const Field& f = code.field();
    int n = code.n(), k = code.k(), D = code.deg();
    if (window <= 0) window = D + 2 + 8;

    ErasureTrace trace;
    trace.erased = erased;
    std::sort(trace.erased.begin(), trace.erased.end());
    trace.erased.erase(std::unique(trace.erased.begin(), trace.erased.end()),
                       trace.erased.end());

    auto unknown_id = [&](int block, int pos) -> int {
        SymbolRef key{block, pos};
        auto it = std::lower_bound(trace.erased.begin(), trace.erased.end(), key);
        if (it == trace.erased.end() || !(*it == key)) return -1;
        return static_cast<int>(it - trace.erased.begin());
    };

    int nu = static_cast<int>(trace.erased.size());
    std::vector<char> committed(nu, 0), abandoned(nu, 0);
    std::vector<Fe> value(nu, 0);
    std::vector<EqRow> rows;
    std::vector<int> pivot_row(nu, -1);  // unknown id -> row index holding that lead

    // Rows keep pairwise distinct leads, and inserting a pivot back-eliminates
    // its lead from every other row, so a row's lead never changes afterwards.
    auto commit_cascade = [&](int t) {
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t ri = 0; ri < rows.size(); ++ri) {
                if (!rows[ri].alive || rows[ri].terms.size() != 1) continue;
                int id = rows[ri].terms[0].first;
                Fe v = f.div(rows[ri].rhs, rows[ri].terms[0].second);
                committed[id] = 1;
                value[id] = v;
                trace.recovered.push_back({trace.erased[id], t, v});
                rows[ri].alive = false;
                pivot_row[id] = -1;
                for (auto& other : rows) {
                    if (!other.alive) continue;
                    int lead = other.terms[0].first;
                    for (std::size_t ti = 0; ti < other.terms.size(); ++ti)
                        if (other.terms[ti].first == id) {
                            other.rhs ^= f.mul(other.terms[ti].second, v);
                            other.terms.erase(other.terms.begin() + ti);
                            break;
                        }
                    if (other.terms.empty()) {
                        if (other.rhs != 0) throw Error("inconsistent erasure system");
                        pivot_row[lead] = -1;
                        other.alive = false;
                    }
                }
                progress = true;
            }
        }
    };

    for (int t = 0; t < s.blocks; ++t) {
        // syndrome row t as an equation over the erased unknowns
        EqRow eq;
        eq.alive = true;
        bool tainted = false;
        for (int i = 0; i <= std::min(t, D) && !tainted; ++i) {
            int b = t - i;
            for (int j = 1; j <= k; ++j) {
                Fe c = code.r(i, j);
                if (c == 0) continue;
                int id = unknown_id(b, j - 1);
                if (id < 0) {
                    eq.rhs ^= f.mul(c, s.at(b, j - 1));
                } else if (committed[id]) {
                    eq.rhs ^= f.mul(c, value[id]);
                } else if (abandoned[id]) {
                    tainted = true;
                    break;
                } else {
                    eq.terms.emplace_back(id, c);
                }
            }
        }
        if (!tainted) {
            int pid = unknown_id(t, n - 1);
            if (pid < 0)
                eq.rhs ^= s.at(t, n - 1);
            else if (committed[pid])
                eq.rhs ^= value[pid];
            else if (abandoned[pid])
                tainted = true;
            else
                eq.terms.emplace_back(pid, Fe{1});
        }
        if (!tainted) {
            std::sort(eq.terms.begin(), eq.terms.end());
            // reduce against existing pivots
            while (!eq.terms.empty()) {
                int lead = eq.terms[0].first;
                int pr = pivot_row[lead];
                if (pr < 0) break;
                Fe factor = f.div(eq.terms[0].second, rows[pr].terms[0].second);
                xor_scaled(eq, rows[pr], factor, f);
            }
            if (eq.terms.empty()) {
                if (eq.rhs != 0) throw Error("inconsistent erasure system");
            } else {
                int lead = eq.terms[0].first;
                int idx = static_cast<int>(rows.size());
                rows.push_back(std::move(eq));
                pivot_row[lead] = idx;
                // back-eliminate the new lead everywhere else
                for (int ri = 0; ri < idx; ++ri) {
                    EqRow& other = rows[ri];
                    if (!other.alive) continue;
                    int other_lead = other.terms[0].first;
                    for (const auto& term : other.terms)
                        if (term.first == lead) {
                            Fe factor = f.div(term.second, rows[idx].terms[0].second);
                            xor_scaled(other, rows[idx], factor, f);
                            break;
                        }
                    if (other.terms.empty()) {
                        if (other.rhs != 0) throw Error("inconsistent erasure system");
                        pivot_row[other_lead] = -1;
                        other.alive = false;
                    }
                }
            }
            commit_cascade(t);
        }

        // abandon unknowns that have aged out of the window
        for (int id = 0; id < nu; ++id) {
            if (committed[id] || abandoned[id]) continue;
            if (trace.erased[id].block > t) break;  // sorted by block
            if (t - trace.erased[id].block > window) {
                abandoned[id] = 1;
                trace.unrecovered.push_back(trace.erased[id]);
                for (std::size_t ri = 0; ri < rows.size(); ++ri) {
                    EqRow& row = rows[ri];
                    if (!row.alive) continue;
                    for (const auto& term : row.terms)
                        if (term.first == id) {
                            pivot_row[row.terms[0].first] = -1;
                            row.alive = false;
                            break;
                        }
                }
            }
        }
        // drop spent rows now and then so long simulations stay bounded
        if ((t & 63) == 0) {
            std::vector<EqRow> keep;
            std::vector<int> remap(rows.size(), -1);
            for (std::size_t ri = 0; ri < rows.size(); ++ri)
                if (rows[ri].alive) {
                    remap[ri] = static_cast<int>(keep.size());
                    keep.push_back(std::move(rows[ri]));
                }
            for (int id = 0; id < nu; ++id)
                if (pivot_row[id] >= 0) pivot_row[id] = remap[pivot_row[id]];
            rows = std::move(keep);
        }
    }

    for (int id = 0; id < nu; ++id)
        if (!committed[id] && !abandoned[id]) trace.unrecovered.push_back(trace.erased[id]);
    std::sort(trace.unrecovered.begin(), trace.unrecovered.end());
    return trace;
}

std::string LossModel::describe() const
{
    std::ostringstream out;
    if (kind == Kind::iid)
        out << "iid:" << p;
    else
        out << "gilbert:" << mean_good << ":" << mean_bad;
    return out.str();
}

std::string SimStats::csv_header()
{
    return "seed,loss,blocks,delivered,recovered,unrecovered,delay_p50,delay_p95,delay_p99,"
           "delay_max";
}

std::string SimStats::csv_row(std::uint64_t seed, const LossModel& loss) const
{
    std::ostringstream out;
    out << seed << ',' << loss.describe() << ',' << blocks << ',' << delivered << ','
        << recovered_info << ',' << unrecovered_info << ',' << delay_p50 << ',' << delay_p95
        << ',' << delay_p99 << ',' << delay_max;
    return out.str();
}

SimStats simulate(const Code& code, const LossModel& loss, std::uint64_t blocks,
                  std::uint64_t seed, int window)
{
    const Field& f = code.field();
    int n = code.n(), k = code.k();
    if (loss.kind == LossModel::Kind::iid && (loss.p < 0 || loss.p >= 1))
        throw Error("iid loss rate must be in [0, 1)");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> sym(0, f.order());
    std::vector<Fe> info(blocks * static_cast<std::uint64_t>(k));
    for (auto& v : info) v = static_cast<Fe>(sym(rng));
    Stream s = encode_stream(code, info);

    std::vector<SymbolRef> erased;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    bool bad = false;
    for (int t = 0; t < s.blocks; ++t)
        for (int p = 0; p < n; ++p) {
            bool lost;
            if (loss.kind == LossModel::Kind::iid) {
                lost = uni(rng) < loss.p;
            } else {
                if (bad) {
                    if (uni(rng) < 1.0 / std::max(1.0, loss.mean_bad)) bad = false;
                } else {
                    if (uni(rng) < 1.0 / std::max(1.0, loss.mean_good)) bad = true;
                }
                lost = bad;
            }
            if (lost) erased.push_back({t, p});
        }

    ErasureTrace trace = decode_erasures(s, erased, window);

    SimStats st;
    st.blocks = blocks;
    st.info_total = blocks * static_cast<std::uint64_t>(k);
    for (const SymbolRef& e : trace.erased)
        if (e.pos < k) ++st.erased_info;
    st.delivered = st.info_total - st.erased_info;
    std::vector<int> delays;
    for (const Recovery& r : trace.recovered)
        if (r.sym.pos < k) {
            ++st.recovered_info;
            delays.push_back(r.at_block - r.sym.block);
        }
    st.unrecovered_info = st.erased_info - st.recovered_info;
    if (!delays.empty()) {
        std::sort(delays.begin(), delays.end());
        auto q = [&](double p) {
            return delays[static_cast<std::size_t>(p * (delays.size() - 1))];
        };
        st.delay_p50 = q(0.50);
        st.delay_p95 = q(0.95);
        st.delay_p99 = q(0.99);
        st.delay_max = delays.back();
    }
    return st;
}

}  // namespace mdsconv
