#include <cstdio>
#include <map>
#include <set>

#include "doctest.h"
#include "mdsconv/cdp.hpp"
#include "mdsconv/construct.hpp"
#include "mdsconv/search.hpp"

using namespace mdsconv;

namespace {

Code prefix_code(FieldPtr f, int n, int rows_through, const std::vector<Fe>& walk_values)
{
    std::vector<WalkPos> walk = search_walk(n - 1, rows_through);
    std::vector<std::vector<Fe>> rows(rows_through + 1, std::vector<Fe>(n - 1, 0));
    for (int j = 0; j < n - 1; ++j) rows[0][j] = 1;
    if (rows_through >= 1) rows[1][n - 2] = 1;
    std::size_t idx = 0;
    for (const WalkPos& w : walk) {
        if (idx >= walk_values.size()) break;
        rows[w.deg][w.pos - 1] = walk_values[idx++];
    }
    return Code(std::move(f), n, std::move(rows));
}

}  // namespace

TEST_CASE("walk order follows the last reduced-matrix row in reverse")
{
    std::vector<WalkPos> w = search_walk(3, 3);
    std::vector<WalkPos> expect = {{1, 2}, {1, 1}, {2, 3}, {2, 2}, {2, 1}, {3, 3}, {3, 2}, {3, 1}};
    CHECK(w == expect);
    CHECK(search_walk(1, 4) == std::vector<WalkPos>{{2, 1}, {3, 1}, {4, 1}});
    CHECK(search_walk(1, 1).empty());
}

TEST_CASE("legal values match the try-everything oracle")
{
    FieldPtr f = Field::make(3);
    // rate 1/2, target degree 3: depths are r(2,1), r(3,1)
    Searcher s(f, 2, 5, false);
    REQUIRE(s.depth_count() == 2);
    Fe a = f->alpha();
    s.set_prefix({a});  // r(2,1) = alpha
    std::vector<Fe> legal = s.legal_values(1);

    std::set<Fe> oracle;
    for (std::uint32_t v = 1; v < f->size(); ++v) {
        Code c = prefix_code(f, 2, 3, {a, static_cast<Fe>(v)});
        if (is_k_superregular(c, 3).ok) oracle.insert(static_cast<Fe>(v));
    }
    CHECK(std::set<Fe>(legal.begin(), legal.end()) == oracle);
    // the minor (r2, r1; r3, r2) forbids r2^2 / r1 = alpha^2
    CHECK(oracle.count(f->exp(2)) == 0);
}

TEST_CASE("legal values at the first depth only drop the duplicate of r(1,k)")
{
    FieldPtr f = Field::make(3);
    Searcher s(f, 3, 4, false);
    std::vector<Fe> legal = s.legal_values(0);
    CHECK(legal.size() == f->order() - 1);
    for (Fe v : legal) CHECK(v != 1);
}

TEST_CASE("a planted twin column makes the next depth dead")
{
    FieldPtr f = Field::make(3);
    Searcher s(f, 3, 4, false);
    // r(1,1) = 1 = r(1,2): illegal on purpose; the 3x3 minor spanning both
    // identical degree-1 columns is singular whatever r(2,2) is, so the next
    // depth is a dead branch with an empty legal set
    s.set_prefix({1});
    CHECK(s.legal_values(1).empty());
    // a legal prefix keeps the depth alive
    s.set_prefix({f->alpha()});
    CHECK_FALSE(s.legal_values(1).empty());
}

TEST_CASE("complete search finds the known rate-1/2 code over gf(8)")
{
    SearchOptions opt;
    opt.target_distance = 6;
    SearchResult r = run_search(Field::make(3), 2, opt);
    CHECK(r.found);
    REQUIRE(r.best);
    Profile p = cdp_via_minors(*r.best);
    CHECK(p.distances == std::vector<int>{2, 3, 4, 5, 6});
}

TEST_CASE("complete search exhausts one level above the maximum")
{
    SearchOptions opt;
    opt.target_distance = 7;
    SearchResult r = run_search(Field::make(3), 2, opt);
    CHECK_FALSE(r.found);
    CHECK(r.exhausted);
    CHECK(r.achieved_delta == 6);  // deepest record passes r(4,1) but never r(5,1)
}

TEST_CASE("search agrees with the combinatorial bound on infeasible rates")
{
    Field f16 = Field::with_default_poly(4);
    CHECK(max_k_bound(f16, 4) == 7);
    SearchOptions opt;
    opt.target_distance = 4;
    SearchResult r = run_search(Field::make(4), 9, opt);  // k = 8 > 7
    CHECK_FALSE(r.found);
    CHECK(r.exhausted);
}

TEST_CASE("establish_delta reproduces the exact small-field values")
{
    EstablishResult r42 = establish_delta(Field::make(2), 2);
    CHECK(r42.delta == 4);
    CHECK(r42.exact);

    EstablishResult r82 = establish_delta(Field::make(3), 2);
    CHECK(r82.delta == 6);
    CHECK(r82.exact);

    EstablishResult r163 = establish_delta(Field::make(4), 3);
    CHECK(r163.delta == 5);
    CHECK(r163.exact);
}

TEST_CASE("a node budget turns an unfinished level into a lower bound")
{
    // the distance-6 code over gf(64) at length 4 is found within the budget,
    // the distance-7 exhaustion is not: establish reports (6, lower bound)
    EstablishResult r = establish_delta(Field::make(6), 4, 2'000'000, 1);
    CHECK(r.delta == 6);
    CHECK_FALSE(r.exact);
}

TEST_CASE("micro-scale traversal equals brute-force filtration per depth")
{
    FieldPtr f = Field::make(2);
    int target = 6;  // degrees 2..4: three walk depths for n = 2
    std::vector<std::set<std::vector<Fe>>> visited(3);
    SearchOptions opt;
    opt.target_distance = target;
    opt.full_traversal = true;
    opt.stop_on_success = false;
    opt.symmetry_filters = false;
    opt.trace = [&](int depth, const std::vector<Fe>& prefix) {
        visited[depth].insert(prefix);
    };
    SearchResult res = run_search(f, 2, opt);
    CHECK(res.exhausted);

    for (int depth = 0; depth < 3; ++depth) {
        std::set<std::vector<Fe>> brute;
        std::vector<Fe> seq(depth + 1);
        std::function<void(int)> rec = [&](int idx) {
            if (idx == depth + 1) {
                Code c = prefix_code(f, 2, depth + 2, seq);
                if (is_k_superregular(c, depth + 2).ok) brute.insert(seq);
                return;
            }
            for (std::uint32_t v = 1; v < f->size(); ++v) {
                seq[idx] = static_cast<Fe>(v);
                rec(idx + 1);
            }
        };
        rec(0);
        CHECK(visited[depth] == brute);
    }
}

TEST_CASE("full traversal is independent of the worker count")
{
    auto run = [&](int jobs) {
        SearchOptions opt;
        opt.target_distance = 6;
        opt.full_traversal = true;
        opt.stop_on_success = false;
        opt.symmetry_filters = false;
        opt.jobs = jobs;
        return run_search(Field::make(3), 2, opt);
    };
    SearchResult a = run(1), b = run(4);
    CHECK(a.completions == b.completions);
    CHECK(a.nodes == b.nodes);
    CHECK(a.deepest_depth == b.deepest_depth);
    CHECK(a.deepest_values == b.deepest_values);
    CHECK(a.first_full_values == b.first_full_values);
    for (std::size_t d = 0; d < a.stats.size(); ++d) {
        CHECK(a.stats[d].assigns == b.stats[d].assigns);
        CHECK(a.stats[d].legal_total == b.stats[d].legal_total);
    }
}

TEST_CASE("symmetry filters keep the search complete for the existence question")
{
    // feasibility at every target must agree with the unfiltered search
    for (int m : {3, 4}) {
        for (int n : {3, 4}) {
            for (int target = 3; target <= 6; ++target) {
                SearchOptions filt;
                filt.target_distance = target;
                SearchOptions plain = filt;
                filt.symmetry_filters = true;
                plain.symmetry_filters = false;
                SearchResult a = run_search(Field::make(m), n, filt);
                SearchResult b = run_search(Field::make(m), n, plain);
                CAPTURE(m);
                CAPTURE(n);
                CAPTURE(target);
                CHECK(a.found == b.found);
            }
        }
    }
}

TEST_CASE("sequences excluded by the filters are transform images of included ones")
{
    // k = 2 over gf(16): the one degree-1 depth carries the cyclotomic filter
    FieldPtr f = Field::make(4);
    Searcher filt(f, 3, 4, true);
    Searcher plain(f, 3, 4, false);
    std::vector<Fe> kept = filt.legal_values(0);
    std::vector<Fe> all = plain.legal_values(0);
    CHECK(kept.size() < all.size());
    std::set<Fe> kept_set(kept.begin(), kept.end());
    for (Fe v : all) {
        if (kept_set.count(v)) continue;
        // some Frobenius power of the excluded value is kept, and the map
        // preserves the profile of any completion
        Fe img = v;
        bool reachable = false;
        for (int i = 0; i < f->m(); ++i) {
            img = f->sqr(img);
            if (kept_set.count(img)) {
                reachable = true;
                break;
            }
        }
        CHECK(reachable);
    }
}

TEST_CASE("probe mode with full width reproduces the complete traversal")
{
    SearchOptions wide;
    wide.target_distance = 6;
    wide.complete = false;
    wide.probe_width = 7;  // the whole field
    wide.full_traversal = true;
    wide.stop_on_success = false;
    wide.symmetry_filters = false;
    SearchOptions comp = wide;
    comp.complete = true;
    SearchResult a = run_search(Field::make(3), 2, wide);
    SearchResult b = run_search(Field::make(3), 2, comp);
    CHECK(a.completions == b.completions);
    CHECK(a.nodes == b.nodes);

    SearchOptions narrow = wide;
    narrow.probe_width = 2;
    narrow.seed = 9;
    SearchResult c = run_search(Field::make(3), 2, narrow);
    CHECK(c.nodes < b.nodes);
}

TEST_CASE("node budget stops the walk and reports it")
{
    SearchOptions opt;
    opt.target_distance = 7;
    opt.full_traversal = true;
    opt.stop_on_success = false;
    opt.node_budget = 50;
    SearchResult r = run_search(Field::make(4), 2, opt);
    CHECK(r.budget_exceeded);
    CHECK_FALSE(r.exhausted);
    CHECK(r.nodes >= 50);
    CHECK(r.deepest_depth >= 0);
}

TEST_CASE("checkpoint and resume complete an interrupted traversal")
{
    std::string path = "ckpt_test.bin";
    SearchOptions base;
    base.target_distance = 7;
    base.full_traversal = true;
    base.stop_on_success = false;
    base.symmetry_filters = false;
    SearchResult whole = run_search(Field::make(4), 2, base);

    SearchOptions cut = base;
    cut.node_budget = whole.nodes / 3;
    cut.checkpoint_path = path;
    cut.checkpoint_every = 16;
    SearchResult partial = run_search(Field::make(4), 2, cut);
    REQUIRE(partial.budget_exceeded);

    SearchResult resumed = resume_search(path);
    CHECK(resumed.exhausted);
    CHECK(resumed.completions == whole.completions);
    CHECK(resumed.nodes == whole.nodes);
    for (std::size_t d = 0; d < whole.stats.size(); ++d) {
        CHECK(resumed.stats[d].assigns == whole.stats[d].assigns);
        CHECK(resumed.stats[d].legal_total == whole.stats[d].legal_total);
    }
    std::remove(path.c_str());
}

TEST_CASE("probe checkpoints restore the subsampling stream")
{
    std::string path = "ckpt_probe.bin";
    SearchOptions base;
    base.target_distance = 7;
    base.complete = false;
    base.probe_width = 4;
    base.seed = 31;
    base.full_traversal = true;
    base.stop_on_success = false;
    base.symmetry_filters = false;
    SearchResult whole = run_search(Field::make(4), 2, base);

    SearchOptions cut = base;
    cut.node_budget = whole.nodes / 2;
    cut.checkpoint_path = path;
    cut.checkpoint_every = 8;
    SearchResult partial = run_search(Field::make(4), 2, cut);
    REQUIRE(partial.budget_exceeded);

    SearchResult resumed = resume_search(path);
    CHECK(resumed.exhausted);
    CHECK(resumed.completions == whole.completions);
    CHECK(resumed.nodes == whole.nodes);
    CHECK(resumed.first_full_values == whole.first_full_values);
    std::remove(path.c_str());
}
