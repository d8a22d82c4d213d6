#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace uipq::cli {

std::string version();

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum ExitCode { kOk = 0, kCriterionFailure = 1, kUsage = 2 };

// everything a run depends on; out and threads are left out of the echo
// because they never change the report bytes
struct RunConfig {
    std::string command;
    unsigned long radius = 0; // 0: per-command default
    unsigned long inner = 1, outer = 2;
    unsigned long R = 50;
    std::vector<std::size_t> k{2};
    std::size_t K = 32;
    long r = 1;
    double c = 1.0;
    std::size_t pmax = 20;
    std::size_t nmax = 4;
    std::size_t n = 0, p = 0; // 0: sweep
    std::size_t trials = 0;   // 0: per-command default
    std::uint64_t seed = 1;
    std::string tail_eps = "1/1000000000000";
    std::string out;
    std::string format = "csv";
    unsigned threads = 1;
    bool dump = false;

    // fill per-command defaults and check ranges; throws UsageError
    RunConfig resolved() const;
    nlohmann::json to_json() const;
};

// one table of a report; cells are json scalars, exact rationals as "num/den" strings
struct Section {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
};

struct Report {
    nlohmann::json config;
    std::vector<Section> sections;
    int status = kOk;

    std::string to_csv() const;
    std::string to_json() const;
};

Report cmd_laws(const RunConfig& cfg);
Report cmd_mc(const RunConfig& cfg);
Report cmd_volume(const RunConfig& cfg);
Report cmd_cycles(const RunConfig& cfg);
Report cmd_bridge(const RunConfig& cfg);
Report cmd_enumerate(const RunConfig& cfg);
Report cmd_selftest(const RunConfig& cfg);

// dispatch on cfg.command after resolving it
Report run(const RunConfig& cfg);
// writes the formatted report to cfg.out (or out when empty); returns the exit code
int run_and_write(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// full command line, including argv[0]
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace uipq::cli
