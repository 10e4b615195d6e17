#include "mdsconv/rareness.hpp"

#include <cmath>
#include <sstream>

namespace mdsconv {

namespace {

RarenessReport report_from(const Field& f, int n, int D, const SearchResult& r, bool exact)
{
    RarenessReport rep;
    rep.m = f.m();
    rep.n = n;
    rep.target_degree = D;
    rep.exact = exact;
    std::vector<WalkPos> walk = search_walk(n - 1, D);
    long double q1 = f.order();
    long double cum = 0;
    for (std::size_t d = 0; d < walk.size(); ++d) {
        RarenessRow row;
        row.depth = static_cast<int>(d) + 1;
        row.pos = walk[d];
        row.samples = r.stats[d].visits;
        row.satisfying = r.stats[d].assigns;
        row.conditional =
            row.samples == 0
                ? 0.0L
                : static_cast<long double>(r.stats[d].legal_total) / (row.samples * q1);
        cum += row.conditional > 0 ? std::log2(row.conditional)
                                   : -std::numeric_limits<long double>::infinity();
        row.cum_log2 = cum;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace

long double RarenessReport::cumulative_log2() const
{
    return rows.empty() ? 0.0L : rows.back().cum_log2;
}

long double RarenessReport::cumulative() const
{
    return rows.empty() ? 1.0L : std::exp2(rows.back().cum_log2);
}

std::string RarenessReport::to_csv() const
{
    std::ostringstream out;
    out << "depth,deg,pos,conditional,cumulative,cumulative_log2,samples\n";
    for (const auto& r : rows) {
        out << r.depth << ',' << r.pos.deg << ',' << r.pos.pos << ',';
        out.precision(10);
        out << static_cast<double>(r.conditional) << ','
            << static_cast<double>(std::exp2(r.cum_log2)) << ','
            << static_cast<double>(r.cum_log2) << ',' << r.samples << '\n';
    }
    return out.str();
}

RarenessReport rareness_exact(FieldPtr field, int n, int D, int jobs,
                              std::uint64_t node_budget)
{
    SearchOptions opt;
    opt.target_distance = D + 2;
    opt.complete = true;
    opt.full_traversal = true;
    opt.stop_on_success = false;
    opt.symmetry_filters = false;
    opt.node_budget = node_budget;
    opt.jobs = jobs;
    const Field& f = *field;
    SearchResult r = run_search(std::move(field), n, opt);
    if (!r.exhausted)
        throw BudgetExceeded("complete traversal did not finish within the budget");
    return report_from(f, n, D, r, true);
}

RarenessReport rareness_estimate(FieldPtr field, int n, int D, int probe_width,
                                 std::uint64_t seed, int jobs, std::uint64_t node_budget)
{
    SearchOptions opt;
    opt.target_distance = D + 2;
    opt.complete = false;
    opt.full_traversal = true;
    opt.stop_on_success = false;
    opt.symmetry_filters = false;
    opt.probe_width = probe_width;
    opt.seed = seed;
    opt.node_budget = node_budget;
    opt.jobs = jobs;
    const Field& f = *field;
    SearchResult r = run_search(std::move(field), n, opt);
    // a probe wide enough to keep every value is a complete traversal
    bool exact = r.exhausted && probe_width >= static_cast<int>(f.order());
    return report_from(f, n, D, r, exact);
}

long double d4_construction_rareness_log10(int m)
{
    if (m < 2) throw BadDegree("closed-form rareness needs m >= 2");
    long double half = std::exp2(static_cast<long double>(m - 1));  // 2^(m-1)
    long double q1 = std::exp2(static_cast<long double>(m)) - 1.0L;
    long double ln = (m - 1) * std::log(2.0L) + std::lgamma(half) -
                     (std::exp2(static_cast<long double>(m)) - 3.0L) * std::log(q1);
    return ln / std::log(10.0L);
}

long double d4_construction_rareness(int m)
{
    return std::pow(10.0L, d4_construction_rareness_log10(m));
}

}  // namespace mdsconv
