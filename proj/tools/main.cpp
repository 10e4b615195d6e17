#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mdsconv/cdp.hpp"
#include "mdsconv/construct.hpp"
#include "mdsconv/erasure.hpp"
#include "mdsconv/rareness.hpp"
#include "mdsconv/search.hpp"
#include "mdsconv/tables.hpp"

using nlohmann::json;
using namespace mdsconv;

namespace {

std::string witness_text(const ProperSubmatrix& w)
{
    std::ostringstream out;
    out << "rows{";
    for (std::size_t i = 0; i < w.row_idx.size(); ++i)
        out << (i ? "," : "") << w.row_idx[i];
    out << "} cols{";
    for (std::size_t i = 0; i < w.col_idx.size(); ++i)
        out << (i ? "," : "") << w.col_idx[i];
    out << "}";
    return out.str();
}

// PASS iff the profile is the full MDS chain [2..delta]
int verify_one(const std::string& name, const Code& code, int delta, int jobs)
{
    Profile p = cdp_via_minors(code, jobs);
    bool pass = (p.mds_depth >= delta - 2) && (code.deg() >= delta - 2);
    if (pass) {
        std::cout << "PASS " << name << " delta=" << delta << " profile=[";
        for (std::size_t i = 0; i < p.distances.size(); ++i)
            std::cout << (i ? "," : "") << p.distances[i];
        std::cout << "]\n";
        return 0;
    }
    SuperregCheck chk = superreg_break_scan(code, code.deg(), jobs);
    std::cout << "FAIL " << name << " claimed_delta=" << delta
              << " achieved_delta=" << p.mds_depth + 2;
    if (!chk.ok) std::cout << " witness " << witness_text(chk.witness);
    std::cout << "\n";
    return 1;
}

json stats_json(const SearchResult& r, int target)
{
    json j;
    j["event"] = "result";
    j["target_distance"] = target;
    j["found"] = r.found;
    j["exhausted"] = r.exhausted;
    j["budget_exceeded"] = r.budget_exceeded;
    j["achieved_delta"] = r.achieved_delta;
    j["exact"] = r.exhausted && !r.found && r.achieved_delta == target - 1;
    j["nodes"] = r.nodes;
    j["completions"] = r.completions;
    j["deepest_depth"] = r.deepest_depth;
    if (r.best) j["code"] = code_to_string(*r.best);
    return j;
}

void print_depth_stats(const SearchResult& r, const Field&, int n, int target)
{
    std::vector<WalkPos> walk = search_walk(n - 1, target - 2);
    for (std::size_t d = 0; d < walk.size() && d < r.stats.size(); ++d) {
        json j;
        j["event"] = "depth";
        j["depth"] = d;
        j["deg"] = walk[d].deg;
        j["pos"] = walk[d].pos;
        j["visits"] = r.stats[d].visits;
        j["assigns"] = r.stats[d].assigns;
        j["legal_total"] = r.stats[d].legal_total;
        std::cout << j.dump() << "\n";
    }
}

Code load_code(const std::string& path) { return code_from_file(path); }

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"systematic rate (n-1)/n MDS convolutional codes over GF(2^m): "
                 "construction, verification, search, rareness, erasure simulation"};
    app.require_subcommand(1);
    int jobs = 1;
    app.add_option("-j,--jobs", jobs, "worker threads for search and verification");

    // verify
    auto* c_verify = app.add_subcommand("verify", "check codes against their claimed profile");
    std::vector<std::string> v_files;
    bool v_table_all = false, v_slow = false;
    c_verify->add_option("files", v_files, "code files to verify");
    c_verify->add_flag("--table-all", v_table_all, "verify every bundled table entry");
    c_verify->add_flag("--slow", v_slow, "include the large entries (m >= 10)");

    // search
    auto* c_search = app.add_subcommand("search", "depth-first coefficient search");
    int s_m = 0, s_n = 0, s_target = 0;
    bool s_probe = false, s_complete = false;
    std::uint64_t s_seed = 1, s_budget = 0, s_ckpt_every = 0;
    double s_seconds = 0;
    int s_width = 8;
    std::string s_ckpt, s_resume, s_out;
    c_search->add_option("m", s_m, "field degree");
    c_search->add_option("n", s_n, "block length");
    c_search->add_option("target", s_target, "target free distance");
    c_search->add_flag("--complete", s_complete, "complete search (default)");
    c_search->add_flag("--probe", s_probe, "incomplete probe search");
    c_search->add_option("--seed", s_seed, "probe RNG seed");
    c_search->add_option("--width", s_width, "probe values kept per depth");
    c_search->add_option("--budget-nodes", s_budget, "stop after this many assignments");
    c_search->add_option("--budget-seconds", s_seconds, "stop after this much wall time");
    c_search->add_option("--checkpoint", s_ckpt, "checkpoint file to write");
    c_search->add_option("--checkpoint-every", s_ckpt_every, "nodes between checkpoints");
    c_search->add_option("--resume", s_resume, "resume from a checkpoint file");
    c_search->add_option("--out", s_out, "write the found code to this file");

    // construct
    auto* c_construct = app.add_subcommand("construct", "closed-form constructions");
    bool d3 = false, d4 = false;
    int con_m = 0;
    int con_beta = -1, con_c = -1;
    std::string con_out;
    c_construct->add_flag("--d3", d3, "distance-3 construction (n = 2^m)");
    c_construct->add_flag("--d4", d4, "distance-4 construction (n = 2^(m-1))");
    c_construct->add_option("m", con_m, "field degree");
    c_construct->add_option("--beta", con_beta, "hyperplane parameter (polynomial form)");
    c_construct->add_option("--c", con_c, "offset constant (polynomial form)");
    c_construct->add_option("--out", con_out, "write the code to this file");

    // bound
    auto* c_bound = app.add_subcommand("bound", "combinatorial bound");
    int b_m = 0, b_n = 0, b_dist = 0;
    c_bound->add_option("m", b_m, "field degree");
    c_bound->add_option("n", b_n, "block length");
    c_bound->add_option("--distance", b_dist, "bound k for this free distance");

    // rareness
    auto* c_rare = app.add_subcommand("rareness", "per-depth survival probabilities");
    int r_m = 0, r_n = 0, r_d = 0;
    bool r_exact = false, r_probe = false;
    std::uint64_t r_seed = 1, r_budget = 0;
    int r_width = 8;
    c_rare->add_option("m", r_m, "field degree");
    c_rare->add_option("n", r_n, "block length");
    c_rare->add_option("D", r_d, "target degree");
    c_rare->add_flag("--exact", r_exact, "exact (complete traversal)");
    c_rare->add_flag("--probe", r_probe, "estimate from an incomplete traversal");
    c_rare->add_option("--seed", r_seed, "probe RNG seed");
    c_rare->add_option("--width", r_width, "probe values kept per depth");
    c_rare->add_option("--budget-nodes", r_budget, "node budget");

    // simulate
    auto* c_sim = app.add_subcommand("simulate", "stream a code through a lossy channel");
    std::string sim_file;
    double sim_p = -1;
    std::uint64_t sim_T = 0, sim_seed = 1;
    int sim_window = 0;
    std::vector<double> sim_gilbert;
    c_sim->add_option("codefile", sim_file, "code file")->required();
    c_sim->add_option("--iid", sim_p, "iid loss rate");
    c_sim->add_option("--gilbert", sim_gilbert, "mean good/bad run lengths")->expected(2);
    c_sim->add_option("-T,--blocks", sim_T, "number of blocks")->required();
    c_sim->add_option("--seed", sim_seed, "RNG seed");
    c_sim->add_option("--window", sim_window, "decoder window in blocks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(c_verify)) {
            if (!v_table_all && v_files.empty())
                throw CLI::CallForHelp();
            int fails = 0;
            if (v_table_all) {
                for (const TableEntry& e : bundled_tables()) {
                    if (e.slow() && !v_slow) {
                        std::cerr << "SKIP " << e.name() << " (rerun with --slow)\n";
                        continue;
                    }
                    fails += verify_one(e.name(), e.to_code(), e.delta, jobs);
                }
            }
            for (const std::string& path : v_files) {
                Code code = load_code(path);
                fails += verify_one(path, code, code.deg() + 2, jobs);
            }
            return fails ? 1 : 0;
        }

        if (app.got_subcommand(c_search)) {
            SearchResult res;
            FieldPtr field;
            int n, target;
            if (!s_resume.empty()) {
                res = resume_search(s_resume, s_budget, s_seconds);
                if (!res.best) throw Error("resume produced no code");
                field = res.best->field_ptr();
                n = res.best->n();
                target = res.target_distance;
                std::cerr << "resumed from " << s_resume << "\n";
                print_depth_stats(res, *field, n, target);
                std::cout << stats_json(res, target).dump() << "\n";
            } else {
                if (s_m <= 0 || s_n < 2 || s_target < 3)
                    throw CLI::ValidationError("search", "need m, n, target");
                if (s_probe && s_complete)
                    throw CLI::ValidationError("search", "pick one of --complete/--probe");
                field = Field::make(s_m);
                n = s_n;
                target = s_target;
                SearchOptions opt;
                opt.target_distance = target;
                opt.complete = !s_probe;
                opt.probe_width = s_width;
                opt.seed = s_seed;
                opt.node_budget = s_budget;
                opt.time_budget_s = s_seconds;
                opt.jobs = jobs;
                opt.checkpoint_path = s_ckpt;
                opt.checkpoint_every =
                    s_ckpt.empty() ? 0 : (s_ckpt_every ? s_ckpt_every : 1u << 20);
                res = run_search(field, n, opt);
                print_depth_stats(res, *field, n, target);
                std::cout << stats_json(res, target).dump() << "\n";
            }
            if (res.found) {
                std::cerr << "found a code with distance " << res.achieved_delta << "\n";
            } else if (res.exhausted) {
                std::cerr << "infeasible; delta = " << res.achieved_delta
                          << (res.achieved_delta == target - 1 ? " exact" : " established here")
                          << "\n";
            } else {
                std::cerr << "budget exhausted; deepest distance " << res.achieved_delta << "\n";
            }
            if (!s_out.empty() && res.best) code_to_file(*res.best, s_out);
            return res.found ? 0 : 1;
        }

        if (app.got_subcommand(c_construct)) {
            if (d3 == d4) throw CLI::ValidationError("construct", "pick one of --d3/--d4");
            if (con_m <= 0) throw CLI::ValidationError("construct", "need m");
            FieldPtr field = Field::make(con_m);
            Code code = d3 ? construct_d3(field)
                           : (con_beta >= 0 || con_c >= 0)
                                 ? construct_d4(field,
                                                static_cast<Fe>(con_beta >= 0 ? con_beta : 1),
                                                con_c >= 0 ? static_cast<Fe>(con_c)
                                                           : default_d4_constant(
                                                                 *field,
                                                                 static_cast<Fe>(
                                                                     con_beta >= 0 ? con_beta : 1)))
                                 : construct_d4(field);
            std::string text = code_to_string(code);
            if (!con_out.empty())
                code_to_file(code, con_out);
            else
                std::cout << text;
            std::cerr << "n=" << code.n() << " k=" << code.k() << " D=" << code.deg() << "\n";
            return 0;
        }

        if (app.got_subcommand(c_bound)) {
            if (b_m <= 0) throw CLI::ValidationError("bound", "need m");
            Field f = Field::with_default_poly(b_m);
            json j;
            j["m"] = b_m;
            if (b_dist > 0) {
                int k = max_k_bound(f, b_dist);
                j["distance"] = b_dist;
                j["max_k"] = k;
                j["max_n"] = k + 1;
            } else {
                if (b_n < 2) throw CLI::ValidationError("bound", "need n or --distance");
                j["n"] = b_n;
                j["max_delta"] = max_distance_bound(f, b_n);
            }
            std::cout << j.dump() << "\n";
            return 0;
        }

        if (app.got_subcommand(c_rare)) {
            if (r_exact == r_probe)
                throw CLI::ValidationError("rareness", "pick one of --exact/--probe");
            if (r_m <= 0 || r_n < 2 || r_d < 1)
                throw CLI::ValidationError("rareness", "need m, n, D");
            RarenessReport rep =
                r_exact ? rareness_exact(Field::make(r_m), r_n, r_d, jobs, r_budget)
                        : rareness_estimate(Field::make(r_m), r_n, r_d, r_width, r_seed, jobs,
                                            r_budget);
            std::cout << rep.to_csv();
            std::cerr << (rep.exact ? "exact" : "estimated") << " cumulative = "
                      << static_cast<double>(rep.cumulative()) << " (log2 "
                      << static_cast<double>(rep.cumulative_log2()) << ")\n";
            return 0;
        }

        if (app.got_subcommand(c_sim)) {
            Code code = load_code(sim_file);
            LossModel loss;
            if (sim_p >= 0 && !sim_gilbert.empty())
                throw CLI::ValidationError("simulate", "pick one of --iid/--gilbert");
            if (sim_p >= 0)
                loss = LossModel::make_iid(sim_p);
            else if (sim_gilbert.size() == 2)
                loss = LossModel::make_gilbert(sim_gilbert[0], sim_gilbert[1]);
            else
                throw CLI::ValidationError("simulate", "pick one of --iid/--gilbert");
            SimStats st = simulate(code, loss, sim_T, sim_seed, sim_window);
            std::cout << SimStats::csv_header() << "\n" << st.csv_row(sim_seed, loss) << "\n";
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const mdsconv::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const FieldMismatch& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const mdsconv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
