#include "uipq/cli/commands.hpp"
#include "uipq/exactlaws/laws.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace uipq;
using namespace uipq::cli;

namespace {

struct Result {
    int code = 0;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "uipq");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json section(const nlohmann::json& report, const std::string& name) {
    for (const auto& s : report.at("sections"))
        if (s.at("name") == name)
            return s;
    FAIL("missing section " << name);
    return {};
}

double cell(const nlohmann::json& s, std::size_t row, const std::string& col) {
    const auto& cols = s.at("columns");
    for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == col)
            return s.at("rows").at(row).at(i).get<double>();
    FAIL("missing column " << col);
    return 0;
}

} // namespace

TEST_CASE("laws prints the exact hull law") {
    auto r = run_cli({"laws", "--radius", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("# uipq ") == 0);
    CHECK(r.out.find("\n1,5/27,") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli({"--bogus"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"mc", "--inner", "3", "--outer", "2"}).code == 2);
    CHECK(run_cli({"laws", "--format", "xml"}).code == 2);
    CHECK(run_cli({"--version"}).code == 0);
}

TEST_CASE("output is deterministic and independent of threads") {
    std::vector<std::vector<std::string>> cfgs = {
        {"mc", "--radius", "3", "--inner", "1", "--outer", "2", "--trials", "3000", "--seed", "7"},
        {"volume", "--radius", "8", "--trials", "400", "--seed", "8"},
        {"bridge", "--K", "16", "--k", "4,8", "--trials", "300", "--seed", "9"},
    };
    for (auto cfg : cfgs) {
        auto a = run_cli(cfg), b = run_cli(cfg);
        cfg.insert(cfg.end(), {"--threads", "3"});
        auto c = run_cli(cfg);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out == c.out);
    }
}

TEST_CASE("--out writes the same bytes") {
    std::string path = "test_cli_out.csv";
    auto a = run_cli({"cycles", "--R", "10", "--trials", "1000"});
    auto b = run_cli({"cycles", "--R", "10", "--trials", "1000", "--out", path});
    CHECK(b.code == 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == a.out);
    std::remove(path.c_str());
}

TEST_CASE("enumerate counts") {
    auto r = run_cli({"enumerate", "--n", "2", "--p", "1", "--format", "json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    auto s = section(j, "counts");
    CHECK(cell(s, 0, "count") == 2);
    auto d = run_cli({"enumerate", "--n", "1", "--p", "1", "--dump"});
    CHECK(d.out.find("# section maps") != std::string::npos);
}

TEST_CASE("mc reproduces P(N=1) for (1,2)") {
    auto r = run_cli({"mc", "--radius", "2", "--inner", "1", "--outer", "2", "--trials", "20000", "--format", "json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("config").at("command") == "mc");
    auto s = section(j, "n_trees_p_one");
    double p = cell(s, 0, "empirical");
    CHECK(std::fabs(p - 0.35) <= 3 * std::sqrt(0.35 * 0.65 / 20000));
}

TEST_CASE("cycles p_one within 3 sigma") {
    auto r = run_cli({"cycles", "--R", "50", "--trials", "20000", "--format", "json"});
    REQUIRE(r.code == 0);
    auto s = section(nlohmann::json::parse(r.out), "p_one");
    double exact = to_double(exactlaws::n_trees_law(50, 100, exactlaws::default_tail_eps()).p_one);
    CHECK(cell(s, 0, "exact_float") == doctest::Approx(exact));
    CHECK(std::fabs(cell(s, 0, "empirical") - exact) <= 3 * cell(s, 0, "stderr"));
}

TEST_CASE("bridge rows") {
    auto r = run_cli({"bridge", "--K", "8", "--k", "2,20", "--trials", "200", "--format", "json"});
    REQUIRE(r.code == 0);
    auto s = section(nlohmann::json::parse(r.out), "estimates");
    CHECK(s.at("rows").size() == 2);
    CHECK(cell(s, 1, "hits") == 0);
}
