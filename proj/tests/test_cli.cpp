// End-to-end checks of the command-line tool: spawns the real binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "mdsconv/cdp.hpp"
#include "mdsconv/code.hpp"

using namespace mdsconv;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_cli(const std::string& args)
{
    std::string out_path = "cli_stdout.tmp", err_path = "cli_stderr.tmp";
    std::string cmd = std::string(MDSCONV_CLI_PATH) + " " + args + " >" + out_path + " 2>" +
                      err_path;
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::string last_json_line(const std::string& out)
{
    std::istringstream in(out);
    std::string line, last;
    while (std::getline(in, line))
        if (!line.empty() && line.front() == '{') last = line;
    return last;
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("verify accepts the fast bundled tables")
{
    RunResult r = run_cli("verify --table-all");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("PASS gf(2^3) n=2") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.err.find("SKIP") != std::string::npos);  // slow entries deferred
}

TEST_CASE("verify flags a perturbed code with a witness")
{
    write_file("perturbed.code", "gf 3 0b1011\nn 2\nrows 4\n0\n1\n4\n4\n");
    RunResult r = run_cli("verify perturbed.code");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("FAIL") != std::string::npos);
    CHECK(r.out.find("witness") != std::string::npos);
    std::remove("perturbed.code");
}

TEST_CASE("verify exits 2 on unparseable input")
{
    write_file("empty.code", "");
    RunResult r = run_cli("verify empty.code");
    CHECK(r.exit_code == 2);
    std::remove("empty.code");

    RunResult bogus = run_cli("bogus-subcommand");
    CHECK(bogus.exit_code == 2);
}

TEST_CASE("search finds, reports, and round-trips the rate-1/2 code")
{
    RunResult r = run_cli("search 3 2 6 --complete --out found.code");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(last_json_line(r.out));
    CHECK(j["found"] == true);
    CHECK(j["achieved_delta"] == 6);

    // the emitted code re-parses and has the claimed profile
    Code c = code_from_file("found.code");
    CHECK(cdp_via_minors(c).distances == std::vector<int>{2, 3, 4, 5, 6});
    CHECK(code_to_string(c) == j["code"].get<std::string>());
    std::remove("found.code");
}

TEST_CASE("search reports an exact ceiling when the target is infeasible")
{
    RunResult r = run_cli("search 4 3 6 --complete");
    CHECK(r.exit_code == 1);
    auto j = nlohmann::json::parse(last_json_line(r.out));
    CHECK(j["found"] == false);
    CHECK(j["exhausted"] == true);
    CHECK(j["achieved_delta"] == 5);
    CHECK(j["exact"] == true);
    CHECK(r.err.find("infeasible") != std::string::npos);
}

TEST_CASE("construct emits codes that verify")
{
    RunResult d4 = run_cli("construct --d4 4 --out d4.code");
    CHECK(d4.exit_code == 0);
    Code c = code_from_file("d4.code");
    CHECK(c.n() == 8);
    CHECK(cdp_via_minors(c).distances == std::vector<int>{2, 3, 4});
    RunResult v = run_cli("verify d4.code");
    CHECK(v.exit_code == 0);
    std::remove("d4.code");

    RunResult d3 = run_cli("construct --d3 3");
    CHECK(d3.exit_code == 0);
    Code c3 = code_from_string(d3.out);
    CHECK(c3.n() == 8);
    CHECK(c3.deg() == 1);
}

TEST_CASE("bound answers both directions")
{
    RunResult k = run_cli("bound 4 --distance 4");
    CHECK(k.exit_code == 0);
    auto jk = nlohmann::json::parse(last_json_line(k.out));
    CHECK(jk["max_k"] == 7);
    CHECK(jk["max_n"] == 8);

    RunResult d = run_cli("bound 3 2");
    auto jd = nlohmann::json::parse(last_json_line(d.out));
    CHECK(jd["max_delta"] == 9);
}

TEST_CASE("rareness emits the per-depth csv")
{
    RunResult r = run_cli("rareness 4 3 3 --exact");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("depth,", 0) == 0);
    // last csv row carries the cumulative probability; two significant
    // figures match the published 0.014
    std::istringstream in(r.out);
    std::string line, lastrow;
    while (std::getline(in, line))
        if (!line.empty() && isdigit(static_cast<unsigned char>(line[0]))) lastrow = line;
    std::istringstream row(lastrow);
    std::string cell;
    for (int i = 0; i < 5; ++i) std::getline(row, cell, ',');
    double cum = std::stod(cell);
    CHECK(cum >= 0.0135);
    CHECK(cum < 0.0145);
}

TEST_CASE("simulate prints one csv row per run")
{
    write_file("sim.code", "gf 3 0b1011\nn 2\nrows 4\n0\n1\n4\n3\n");
    RunResult r = run_cli("simulate sim.code --iid 0.05 -T 2000 --seed 7");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("seed,", 0) == 0);
    CHECK(r.out.find("\n7,iid:0.05,2000,") != std::string::npos);

    RunResult g = run_cli("simulate sim.code --gilbert 50 2 -T 500 --seed 1");
    CHECK(g.exit_code == 0);
    CHECK(g.out.find("gilbert:50:2") != std::string::npos);

    RunResult bad = run_cli("simulate sim.code -T 10");
    CHECK(bad.exit_code == 2);
    std::remove("sim.code");
}

TEST_CASE("search checkpoints through the cli and resumes to the exact ceiling")
{
    // target one above the maximum: the interrupted complete search resumes
    // and finishes the exhaustion proof
    RunResult cut =
        run_cli("search 4 2 8 --complete --budget-nodes 2000 --checkpoint cli_ckpt.bin "
                "--checkpoint-every 64");
    CHECK(cut.exit_code == 1);
    auto jc = nlohmann::json::parse(last_json_line(cut.out));
    CHECK(jc["budget_exceeded"] == true);
    RunResult res = run_cli("search --resume cli_ckpt.bin");
    CHECK(res.exit_code == 1);
    auto j = nlohmann::json::parse(last_json_line(res.out));
    CHECK(j["found"] == false);
    CHECK(j["exhausted"] == true);
    CHECK(j["achieved_delta"] == 7);
    CHECK(j["exact"] == true);
    std::remove("cli_ckpt.bin");
}
