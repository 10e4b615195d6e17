#include <functional>
#include <random>

#include "doctest.h"
#include "mdsconv/cdp.hpp"
#include "mdsconv/erasure.hpp"

using namespace mdsconv;

namespace {

Code table_code_gf8()
{
    return Code::from_log_rows(Field::make(3), 2, {{0}, {1}, {4}, {3}});
}

std::vector<Fe> random_info(const Code& c, int blocks, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> any(0, c.field().order());
    std::vector<Fe> info(static_cast<std::size_t>(blocks) * c.k());
    for (auto& v : info) v = static_cast<Fe>(any(rng));
    return info;
}

// all ways to erase j of the symbols in the first j blocks
void for_each_pattern(int n, int j, const std::function<void(const std::vector<SymbolRef>&)>& fn)
{
    int positions = n * j;
    std::vector<int> comb(j);
    for (int i = 0; i < j; ++i) comb[i] = i;
    for (;;) {
        std::vector<SymbolRef> pat;
        for (int c : comb) pat.push_back({c / n, c % n});
        fn(pat);
        int i = j - 1;
        while (i >= 0 && comb[i] == positions - 1 - (j - 1 - i)) --i;
        if (i < 0) break;
        ++comb[i];
        for (int l = i + 1; l < j; ++l) comb[l] = comb[l - 1] + 1;
    }
}

}  // namespace

TEST_CASE("systematic encoding and its impulse response")
{
    Code c = table_code_gf8();
    const Field& f = c.field();

    std::vector<Fe> zeros(8, 0);
    Stream z = encode_stream(c, zeros);
    for (Fe v : z.symbols) CHECK(v == 0);

    // one nonzero info symbol: the parity track replays the coefficient column
    std::vector<Fe> impulse(8, 0);
    Fe v = f.exp(5);
    impulse[0] = v;
    Stream s = encode_stream(c, impulse);
    for (int t = 0; t < 8; ++t) {
        CHECK(s.at(t, 0) == (t == 0 ? v : 0));
        Fe expect = t <= c.deg() ? f.mul(v, c.r(t, 1)) : 0;
        CHECK(s.at(t, 1) == expect);
    }
}

TEST_CASE("encoded prefixes have zero syndrome")
{
    Code c = table_code_gf8();
    Stream s = encode_stream(c, random_info(c, 7, 3));
    for (int L = 0; L < 7; ++L) {
        Matrix h = parity_truncated(c, L);
        for (int row = 0; row <= L; ++row) {
            Fe acc = 0;
            for (int col = 0; col < h.cols; ++col)
                acc ^= c.field().mul(h.at(row, col), s.symbols[col]);
            CHECK(acc == 0);
        }
    }
}

TEST_CASE("decoder basics")
{
    Code c = table_code_gf8();
    Stream s = encode_stream(c, random_info(c, 10, 4));

    ErasureTrace none = decode_erasures(s, {});
    CHECK(none.erased.empty());
    CHECK(none.recovered.empty());
    CHECK(none.unrecovered.empty());

    for (int pos = 0; pos < 2; ++pos) {
        ErasureTrace one = decode_erasures(s, {{0, pos}});
        REQUIRE(one.recovered.size() == 1);
        CHECK(one.recovered[0].at_block == 0);  // a single loss resolves immediately
        CHECK(one.recovered[0].value == s.at(0, pos));
        CHECK(one.unrecovered.empty());
    }
}

TEST_CASE("recovered values always match the transmitted stream")
{
    Code c = table_code_gf8();
    Stream s = encode_stream(c, random_info(c, 40, 5));
    std::mt19937 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<SymbolRef> erased;
        for (int t = 0; t < s.blocks; ++t)
            for (int p = 0; p < c.n(); ++p)
                if (rng() % 100 < 20) erased.push_back({t, p});
        ErasureTrace tr = decode_erasures(s, erased);
        for (const Recovery& r : tr.recovered) CHECK(r.value == s.at(r.sym.block, r.sym.pos));
    }
}

TEST_CASE("every pattern of j erasures in the first j blocks recovers with delay at most j")
{
    // the free-distance-6 rate-1/2 code: all patterns for every j below 6
    Code c = table_code_gf8();
    int dist = c.deg() + 2;
    REQUIRE(cdp_via_minors(c).free_distance == dist);
    Stream s = encode_stream(c, random_info(c, dist + c.deg() + 4, 7));
    for (int j = 1; j < dist; ++j) {
        for_each_pattern(c.n(), j, [&](const std::vector<SymbolRef>& pat) {
            ErasureTrace tr = decode_erasures(s, pat);
            REQUIRE(tr.unrecovered.empty());
            for (const Recovery& r : tr.recovered) {
                CHECK(r.at_block - r.sym.block <= j);
                CHECK(r.at_block >= r.sym.block);
            }
        });
    }
}

TEST_CASE("at j equal to the free distance some pattern is lost")
{
    Code c = table_code_gf8();
    int dist = c.deg() + 2;
    Stream s = encode_stream(c, random_info(c, 2 * dist + c.deg() + 4, 8));
    bool found_unrecoverable = false;
    for_each_pattern(c.n(), dist, [&](const std::vector<SymbolRef>& pat) {
        if (found_unrecoverable) return;
        ErasureTrace tr = decode_erasures(s, pat, /*window=*/64);
        if (!tr.unrecovered.empty()) found_unrecoverable = true;
    });
    CHECK(found_unrecoverable);
}

TEST_CASE("hybrid extension leaves the prefix profile alone")
{
    Code prefix = table_code_gf8();
    Profile base = cdp_via_minors(prefix);

    HybridCode h0 = hybrid_extend(prefix, 1, 0);
    CHECK(h0.full() == prefix);

    HybridCode h3 = hybrid_extend(prefix, 42, 3);
    CHECK(h3.full().deg() == prefix.deg() + 3);
    // the head of the hybrid code is the prefix, coefficient for coefficient
    for (int i = 0; i <= prefix.deg(); ++i)
        CHECK(h3.full().r(i, 1) == prefix.r(i, 1));
    // the minor chain through the prefix degrees is untouched
    CHECK(is_k_superregular(h3.full(), prefix.deg()).ok);

    HybridCode other = hybrid_extend(prefix, 43, 3);
    CHECK_FALSE(other.full() == h3.full());

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        HybridCode h = hybrid_extend(prefix, seed, 2);
        for (int j = 1; j <= prefix.k(); ++j) {
            CHECK(h.full().r(prefix.deg() + 1, j) != 0);
            CHECK(h.full().r(prefix.deg() + 2, j) != 0);
        }
        CHECK(is_k_superregular(h.full(), prefix.deg()).ok);
    }
}

TEST_CASE("hybrid streams decode through the extended degrees")
{
    Code prefix = table_code_gf8();
    HybridCode h = hybrid_extend(prefix, 11, 3);
    Stream s = encode_stream(h, random_info(h.full(), 30, 12));
    ErasureTrace tr = decode_erasures(s, {{2, 0}, {3, 1}, {4, 0}});
    CHECK(tr.unrecovered.empty());
    for (const Recovery& r : tr.recovered) CHECK(r.value == s.at(r.sym.block, r.sym.pos));
}

TEST_CASE("simulation statistics")
{
    Code c = table_code_gf8();

    SimStats clean = simulate(c, LossModel::make_iid(0.0), 500, 1);
    CHECK(clean.erased_info == 0);
    CHECK(clean.unrecovered_info == 0);
    CHECK(clean.delay_max == 0);
    CHECK(clean.delivered == clean.info_total);

    // parity-only losses: the information flow never notices
    Stream s = encode_stream(c, random_info(c, 200, 2));
    std::vector<SymbolRef> parity_losses;
    for (int t = 0; t < s.blocks; ++t) parity_losses.push_back({t, c.n() - 1});
    ErasureTrace tr = decode_erasures(s, parity_losses);
    for (const SymbolRef& u : tr.unrecovered) CHECK(u.pos == c.n() - 1);

    SimStats g = simulate(c, LossModel::make_gilbert(50, 2), 2000, 3);
    CHECK(g.erased_info > 0);
    CHECK(g.recovered_info + g.unrecovered_info == g.erased_info);

    CHECK(SimStats::csv_header().rfind("seed,", 0) == 0);
    CHECK(g.csv_row(3, LossModel::make_gilbert(50, 2)).find("gilbert:50:2") != std::string::npos);
}

TEST_CASE("moderate iid loss ends far below the uncoded loss rate")
{
    Code c = table_code_gf8();
    SimStats st = simulate(c, LossModel::make_iid(0.05), 100000, 12345);
    CHECK(st.info_total == 100000);
    double uncoded = 0.05;
    double residual = static_cast<double>(st.unrecovered_info) / st.info_total;
    CHECK(residual < uncoded);
    // frozen regression values for this seed
    CHECK(st.erased_info == 4990);
    CHECK(st.recovered_info == 4990);
    CHECK(st.unrecovered_info == 0);
    CHECK(st.delivered == 95010);
    CHECK(st.delay_p50 == 0);
    CHECK(st.delay_p99 == 1);
    CHECK(st.delay_max == 3);
}
