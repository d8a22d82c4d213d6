#include "uipq/cli/commands.hpp"

#include "uipq/acceptance.hpp"
#include "uipq/bridge/bridge.hpp"
#include "uipq/exactlaws/counts.hpp"
#include "uipq/exactlaws/laws.hpp"
#include "uipq/geometry/cycles.hpp"
#include "uipq/geometry/enumerate.hpp"
#include "uipq/geometry/volume.hpp"
#include "uipq/skeleton/counters.hpp"
#include "uipq/skeleton/samplers.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

namespace uipq::cli {

namespace el = uipq::exactlaws;
using nlohmann::json;

std::string version() { return UIPQ_VERSION; }

namespace {

constexpr std::size_t kShards = 16;
// two-sided normal p = 1e-4
constexpr double kHardZ = 3.8906;
constexpr double kHardP = 1e-4;

const std::set<std::string>& known_commands() {
    static const std::set<std::string> s{"laws", "mc", "volume", "cycles", "bridge", "enumerate", "selftest"};
    return s;
}

// trials split over a fixed number of shards; shard i of stage s draws from
// substream(s * kShards + i), results merge in shard order
template <class T, class Work, class Merge>
T sharded(std::size_t trials, std::uint64_t seed, std::uint64_t stage, unsigned threads, Work work, Merge merge) {
    std::vector<T> parts(kShards);
    std::vector<std::exception_ptr> errors(kShards);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < kShards; i = next++) {
            try {
                RngStream rng = RngStream(seed).substream(stage * kShards + i);
                std::size_t n = trials / kShards + (i < trials % kShards ? 1 : 0);
                parts[i] = work(n, rng);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned t = std::clamp<unsigned>(threads, 1, kShards);
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < t; ++j)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    T total = std::move(parts[0]);
    for (std::size_t i = 1; i < kShards; ++i)
        merge(total, parts[i]);
    return total;
}

void merge_histogram(Histogram& a, const Histogram& b) { a.merge(b); }

json exact(const Rational& q) { return to_string(q); }
json flt(const Rational& q) { return to_double(q); }

Rational parse_eps(const std::string& s) {
    Rational e;
    try {
        e = parse_rational(s);
    } catch (const std::exception&) {
        throw UsageError("--tail-eps: expected a rational like 1/1000000000000, got '" + s + "'");
    }
    if (sgn(e) <= 0 || e >= 1)
        throw UsageError("--tail-eps must lie in (0, 1)");
    return e;
}

std::string csv_cell(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"')
            q += '"';
        q += ch;
    }
    return q + '"';
}

Section chi_section() {
    return Section{"chi_square", {"test", "trials", "statistic", "dof", "p_value", "tv", "tv_noise_floor"}, {}};
}

void add_chi_row(Section& s, const std::string& test, const Histogram& h, const LawTable& law, int& status) {
    auto res = chi_square_test(h, law);
    s.rows.push_back({test, h.total, res.statistic, res.dof, res.p_value, res.total_variation,
                      tv_noise_floor(law.masses_double(), h.total)});
    if (res.p_value < kHardP)
        status = kCriterionFailure;
}

} // namespace

RunConfig RunConfig::resolved() const {
    RunConfig c = *this;
    if (!known_commands().count(c.command))
        throw UsageError("unknown command '" + c.command + "'");
    if (c.format != "csv" && c.format != "json")
        throw UsageError("--format must be csv or json");
    if (c.threads < 1)
        throw UsageError("--threads must be >= 1");
    if (c.radius == 0)
        c.radius = c.command == "volume" ? 16 : 5;
    if (c.trials == 0) {
        if (c.command == "mc" || c.command == "cycles")
            c.trials = 100000;
        else if (c.command == "volume" || c.command == "bridge")
            c.trials = 10000;
    }
    parse_eps(c.tail_eps);
    if (c.command == "mc" && c.trials < 1000)
        throw UsageError("mc needs --trials >= 1000");
    if ((c.command == "laws" || c.command == "mc") && (c.inner < 1 || c.outer <= c.inner))
        throw UsageError("need 1 <= --inner < --outer");
    if (c.command == "cycles" && c.R < 3)
        throw UsageError("cycles needs --R >= 3");
    if (c.command == "bridge") {
        if (c.K < 1 || c.r < 1 || !(c.c > 0))
            throw UsageError("bridge needs --K >= 1, --r >= 1, --c > 0");
        if (c.k.empty())
            throw UsageError("bridge needs at least one --k");
        for (auto k : c.k)
            if (k < 2)
                throw UsageError("bridge needs every --k >= 2");
    }
    if (c.command == "enumerate") {
        if (c.n > geometry::kEnumerateMaxFaces || c.nmax > geometry::kEnumerateMaxFaces)
            throw UsageError("enumerate supports at most " + std::to_string(geometry::kEnumerateMaxFaces) +
                             " inner faces");
        if (c.nmax < 1 && c.n == 0)
            throw UsageError("enumerate needs --n or --nmax >= 1");
    }
    return c;
}

json RunConfig::to_json() const {
    json j;
    j["command"] = command;
    j["radius"] = radius;
    j["inner"] = inner;
    j["outer"] = outer;
    j["R"] = R;
    j["k"] = k;
    j["K"] = K;
    j["r"] = r;
    j["c"] = c;
    j["pmax"] = pmax;
    j["nmax"] = nmax;
    j["n"] = n;
    j["p"] = p;
    j["trials"] = trials;
    j["seed"] = seed;
    j["tail_eps"] = tail_eps;
    j["format"] = format;
    j["dump"] = dump;
    return j;
}

std::string Report::to_csv() const {
    std::ostringstream out;
    out << "# uipq " << version() << '\n';
    out << "# config " << config.dump() << '\n';
    for (const auto& s : sections) {
        out << "# section " << s.name << '\n';
        for (std::size_t i = 0; i < s.columns.size(); ++i)
            out << (i ? "," : "") << s.columns[i];
        out << '\n';
        for (const auto& row : s.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << csv_cell(row[i]);
            out << '\n';
        }
    }
    return out.str();
}

std::string Report::to_json() const {
    json j;
    j["version"] = version();
    j["config"] = config;
    j["sections"] = json::array();
    for (const auto& s : sections) {
        json js;
        js["name"] = s.name;
        js["columns"] = s.columns;
        js["rows"] = s.rows;
        j["sections"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

Report cmd_laws(const RunConfig& cfg) {
    Report rep;
    Rational eps = parse_eps(cfg.tail_eps);

    Section theta{"theta", {"k", "exact", "float"}, {}};
    for (std::size_t k = 0; k <= cfg.pmax; ++k) {
        auto t = el::theta(k);
        theta.rows.push_back({k, exact(t), flt(t)});
    }
    rep.sections.push_back(std::move(theta));

    Section pi{"pi", {"r", "exact", "float"}, {}};
    for (unsigned long r = 0; r <= std::max(cfg.radius, cfg.outer); ++r) {
        auto v = el::pi(r);
        pi.rows.push_back({r, exact(v), flt(v)});
    }
    rep.sections.push_back(std::move(pi));

    auto hull = el::hull_perimeter_law(cfg.radius, eps);
    Section hs{"hull_perimeter r=" + std::to_string(cfg.radius), {"p", "exact", "float", "cumulative_float"}, {}};
    for (std::size_t p = 0; p < hull.masses.size(); ++p)
        hs.rows.push_back({p, exact(hull.masses[p]), flt(hull.masses[p]), flt(hull.cumulative[p])});
    rep.sections.push_back(std::move(hs));

    Section phi{"phi u=" + std::to_string(cfg.inner), {"p", "exact", "float"}, {}};
    for (std::size_t p = 1; p <= cfg.pmax; ++p) {
        auto v = el::phi(cfg.inner, p);
        phi.rows.push_back({p, exact(v), flt(v)});
    }
    rep.sections.push_back(std::move(phi));

    auto nt = el::n_trees_law(cfg.inner, cfg.outer, eps);
    std::string uw = "u=" + std::to_string(cfg.inner) + " w=" + std::to_string(cfg.outer);
    Section ns{"n_trees " + uw, {"n", "exact", "float", "cumulative_float"}, {}};
    for (std::size_t n = 0; n < nt.law.masses.size(); ++n)
        ns.rows.push_back({n, exact(nt.law.masses[n]), flt(nt.law.masses[n]), flt(nt.law.cumulative[n])});
    rep.sections.push_back(std::move(ns));

    Section summary{"summary", {"name", "exact", "float"}, {}};
    auto add = [&](const std::string& name, const Rational& q) { summary.rows.push_back({name, exact(q), flt(q)}); };
    add("hull_perimeter r=" + std::to_string(cfg.radius) + " tail_bound", hull.tail_bound);
    add("n_trees " + uw + " U shape", nt.u.shape);
    add("n_trees " + uw + " U success", nt.u.success);
    add("n_trees " + uw + " V shape", nt.v.shape);
    add("n_trees " + uw + " V success", nt.v.success);
    add("n_trees " + uw + " P(N=1)", nt.p_one);
    add("n_trees " + uw + " mean", nt.mean);
    add("n_trees " + uw + " tail_bound", nt.law.tail_bound);
    rep.sections.push_back(std::move(summary));
    return rep;
}

Report cmd_mc(const RunConfig& cfg) {
    Report rep;
    Rational eps = parse_eps(cfg.tail_eps);
    Section chi = chi_section();

    auto hull = el::hull_perimeter_law(cfg.radius, eps);
    const unsigned long radius = cfg.radius;
    auto hh = sharded<Histogram>(
        cfg.trials, cfg.seed, 0, cfg.threads,
        [radius](std::size_t n, RngStream& rng) {
            Histogram h;
            for (std::size_t t = 0; t < n; ++t)
                h.add(static_cast<long long>(skeleton::sample_hull_skeleton(radius, rng).q()));
            return h;
        },
        merge_histogram);
    add_chi_row(chi, "H_r r=" + std::to_string(radius), hh, hull, rep.status);

    struct Annulus {
        Histogram n, bottom;
    };
    const unsigned long u = cfg.inner, w = cfg.outer;
    auto ann = sharded<Annulus>(
        cfg.trials, cfg.seed, 1, cfg.threads,
        [u, w](std::size_t n, RngStream& rng) {
            Annulus a;
            for (std::size_t t = 0; t < n; ++t) {
                auto f = skeleton::sample_annulus_skeleton(u, w, rng);
                a.n.add(static_cast<long long>(skeleton::count_max_height_trees(f)));
                a.bottom.add(static_cast<long long>(f.p()));
            }
            return a;
        },
        [](Annulus& a, const Annulus& b) {
            a.n.merge(b.n);
            a.bottom.merge(b.bottom);
        });
    std::string uw = "u=" + std::to_string(u) + " w=" + std::to_string(w);
    auto nt = el::n_trees_law(u, w, eps);
    add_chi_row(chi, "N " + uw, ann.n, nt.law, rep.status);
    add_chi_row(chi, "annulus bottom " + uw + " vs H_u", ann.bottom, el::hull_perimeter_law(u, eps), rep.status);
    rep.sections.push_back(std::move(chi));

    Section one{"n_trees_p_one", {"u", "w", "trials", "empirical", "exact", "exact_float", "z"}, {}};
    double p1 = to_double(nt.p_one);
    double z = binomial_z(ann.n.count(1), ann.n.total, p1);
    one.rows.push_back({u, w, ann.n.total, ann.n.frequency(1), exact(nt.p_one), p1, z});
    if (std::abs(z) > kHardZ)
        rep.status = kCriterionFailure;
    rep.sections.push_back(std::move(one));
    return rep;
}

Report cmd_volume(const RunConfig& cfg) {
    Report rep;
    std::vector<unsigned long> radii;
    if (cfg.radius < 4)
        radii.push_back(cfg.radius);
    for (unsigned long r = 4; r <= cfg.radius; r *= 2)
        radii.push_back(r);

    Section rows{"hull_volume", {"r", "trials", "mean", "stderr", "scaled", "seed"}, {}};
    Section ratios{"scaled_ratios", {"r", "r_next", "ratio"}, {}};
    std::vector<geometry::VolumeRow> out;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const unsigned long r = radii[i];
        auto sums = sharded<geometry::VolumeSums>(
            cfg.trials, cfg.seed, i, cfg.threads,
            [r](std::size_t n, RngStream& rng) { return geometry::hull_volume_sums(r, n, rng); },
            [](geometry::VolumeSums& a, const geometry::VolumeSums& b) { a.merge(b); });
        auto row = geometry::volume_row(r, sums, cfg.seed);
        rows.rows.push_back({row.r, row.trials, row.mean, row.stderr_, row.scaled, row.seed});
        out.push_back(row);
    }
    for (std::size_t i = 0; i + 1 < out.size(); ++i)
        ratios.rows.push_back({out[i].r, out[i + 1].r, out[i + 1].scaled / out[i].scaled});
    rep.sections.push_back(std::move(rows));
    rep.sections.push_back(std::move(ratios));

    Section slots{"slot_mean_volume", {"p", "mean", "mean_over_p2"}, {}};
    auto means = el::slot_mean_volumes(200);
    for (std::size_t p : {1, 2, 5, 10, 20, 50, 100, 200}) {
        double m = to_double(means[p]);
        slots.rows.push_back({p, m, m / (static_cast<double>(p) * p)});
    }
    rep.sections.push_back(std::move(slots));
    return rep;
}

Report cmd_cycles(const RunConfig& cfg) {
    Report rep;
    const unsigned long R = cfg.R;
    auto hist = sharded<Histogram>(
        cfg.trials, cfg.seed, 0, cfg.threads,
        [R](std::size_t n, RngStream& rng) { return geometry::sample_cycle_lengths(R, n, rng); }, merge_histogram);
    auto tail = geometry::cycle_tail_report(R, hist, cfg.seed);

    Section main{"cycle_lengths", {"R", "trials", "mean", "p50", "p95", "max", "seed"}, {}};
    main.rows.push_back({tail.R, tail.trials, tail.mean, tail.p50, tail.p95, tail.max, tail.seed});
    rep.sections.push_back(std::move(main));

    Section ts{"tail", {"a", "empirical", "exact_float"}, {}};
    for (auto [a, emp] : tail.tail)
        ts.rows.push_back({a, emp, to_double(geometry::cycle_tail_exact(R, a))});
    rep.sections.push_back(std::move(ts));

    Section one{"p_one", {"empirical", "exact_float", "stderr", "z"}, {}};
    double p1 = to_double(tail.exact_p_one);
    double z = binomial_z(hist.count(2), hist.total, p1);
    one.rows.push_back({tail.p_one, p1, std::sqrt(p1 * (1 - p1) / hist.total), z});
    if (std::abs(z) > kHardZ)
        rep.status = kCriterionFailure;
    rep.sections.push_back(std::move(one));

    Section ratio{"ratio", {"R", "exact", "float", "at_most_3_4"}, {}};
    bool ok = tail.ratio <= make_rational(3, 4);
    ratio.rows.push_back({R, exact(tail.ratio), flt(tail.ratio), ok});
    if (!ok)
        rep.status = kCriterionFailure;
    rep.sections.push_back(std::move(ratio));
    return rep;
}

Report cmd_bridge(const RunConfig& cfg) {
    Report rep;
    Section est{"estimates", {}, {}};
    {
        std::string h = bridge::EventEstimate::csv_header();
        std::stringstream ss(h);
        for (std::string col; std::getline(ss, col, ',');)
            est.columns.push_back(col);
    }
    Section decay{"decay", {"k", "k_next", "ratio"}, {}};
    std::vector<bridge::EventEstimate> all;
    for (auto k : cfg.k) {
        // the same bridges for every k, so each row depends on its own parameters only
        const std::size_t K = cfg.K;
        const long r = cfg.r;
        const double c = cfg.c;
        auto e = sharded<bridge::EventEstimate>(
            cfg.trials, cfg.seed, 0, cfg.threads,
            [k, K, r, c](std::size_t n, RngStream& rng) {
                bridge::EventEstimate part{k, K, r, c, n, 0, 0};
                for (std::size_t t = 0; t < n; ++t)
                    part.hits += bridge::detect_event(bridge::sample_bridge(K, rng), k, r, c);
                return part;
            },
            [](bridge::EventEstimate& a, const bridge::EventEstimate& b) { a.merge(b); });
        e.seed = cfg.seed;
        est.rows.push_back({e.k, e.K, e.r, e.c, e.trials, e.hits, e.p_hat(), e.stderr_(), e.seed});
        all.push_back(e);
    }
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        json ratio = all[i].hits ? json(all[i + 1].p_hat() / all[i].p_hat()) : json(nullptr);
        decay.rows.push_back({all[i].k, all[i + 1].k, ratio});
    }
    rep.sections.push_back(std::move(est));
    rep.sections.push_back(std::move(decay));
    return rep;
}

Report cmd_enumerate(const RunConfig& cfg) {
    Report rep;
    std::size_t n_hi = cfg.n ? cfg.n : cfg.nmax;
    std::size_t n_lo = cfg.n ? cfg.n : 1;
    auto counts = el::qtr_counts(geometry::kEnumerateMaxFaces, geometry::kEnumerateMaxFaces + 2);
    Section cs{"counts", {"n", "p", "count", "qtr_count", "agree"}, {}};
    Section maps{"maps", {"n", "p", "index", "map"}, {}};
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
        std::size_t p_lo = cfg.p ? cfg.p : 1, p_hi = cfg.p ? cfg.p : n + 1;
        for (std::size_t p = p_lo; p <= p_hi; ++p) {
            const auto& list = geometry::truncated_catalog(n, p);
            BigInt expect = p < counts.table[n].size() ? counts.at(n, p) : BigInt(0);
            bool agree = BigInt(static_cast<unsigned long>(list.size())) == expect;
            cs.rows.push_back({n, p, list.size(), expect.get_str(), agree});
            if (!agree)
                rep.status = kCriterionFailure;
            if (cfg.dump)
                for (std::size_t i = 0; i < list.size(); ++i) {
                    json m = list[i].to_json();
                    maps.rows.push_back({n, p, i, cfg.format == "json" ? m : json(m.dump())});
                }
        }
    }
    rep.sections.push_back(std::move(cs));
    if (cfg.dump)
        rep.sections.push_back(std::move(maps));
    return rep;
}

Report cmd_selftest(const RunConfig&) {
    Report rep;
    auto results = acceptance::run_all(std::cerr);
    Section s{"criteria", {"id", "name", "status", "known_unattainable", "seconds", "detail"}, {}};
    for (const auto& r : results)
        s.rows.push_back({r.id, r.name, r.pass ? "PASS" : "FAIL", r.known_unattainable, r.seconds, r.detail});
    rep.sections.push_back(std::move(s));
    rep.status = acceptance::exit_status(results);
    return rep;
}

Report run(const RunConfig& raw) {
    RunConfig cfg = raw.resolved();
    Report rep;
    if (cfg.command == "laws")
        rep = cmd_laws(cfg);
    else if (cfg.command == "mc")
        rep = cmd_mc(cfg);
    else if (cfg.command == "volume")
        rep = cmd_volume(cfg);
    else if (cfg.command == "cycles")
        rep = cmd_cycles(cfg);
    else if (cfg.command == "bridge")
        rep = cmd_bridge(cfg);
    else if (cfg.command == "enumerate")
        rep = cmd_enumerate(cfg);
    else
        rep = cmd_selftest(cfg);
    rep.config = cfg.to_json();
    return rep;
}

int run_and_write(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Report rep;
    try {
        rep = run(cfg);
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kCriterionFailure;
    }
    std::string text = cfg.format == "json" ? rep.to_json() : rep.to_csv();
    if (cfg.out.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) {
            err << "error: cannot open " << cfg.out << '\n';
            return kCriterionFailure;
        }
        f << text;
    }
    return rep.status;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact laws, samplers and experiments for hull skeletons of random quadrangulations", "uipq"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--radius", cfg.radius, "hull radius r (laws, mc); largest r (volume)");
    app.add_option("--inner", cfg.inner, "inner radius u of the annulus");
    app.add_option("--outer", cfg.outer, "outer radius w of the annulus");
    app.add_option("--R", cfg.R, "cycle scale R (cycles)");
    app.add_option("--k", cfg.k, "number of points, comma separated list allowed (bridge)")->delimiter(',');
    app.add_option("--K", cfg.K, "bridge half length (bridge)");
    app.add_option("--r", cfg.r, "ball scale r (bridge)");
    app.add_option("--c", cfg.c, "spacing constant c (bridge)");
    app.add_option("--pmax", cfg.pmax, "largest tabulated p (laws)");
    app.add_option("--nmax", cfg.nmax, "largest inner face count (enumerate)");
    app.add_option("--n", cfg.n, "inner face count (enumerate)");
    app.add_option("--p", cfg.p, "boundary length (enumerate)");
    app.add_option("--trials", cfg.trials, "Monte Carlo trials");
    app.add_option("--seed", cfg.seed, "64-bit seed");
    app.add_option("--tail-eps", cfg.tail_eps, "exact tail bound for truncated laws, as num/den");
    app.add_option("--out", cfg.out, "output file (stdout when absent)");
    app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", cfg.threads, "worker threads; never changes the output")->check(CLI::PositiveNumber);
    app.add_flag("--dump", cfg.dump, "also emit the enumerated maps (enumerate)");

    const std::vector<std::pair<std::string, std::string>> subs{
        {"laws", "exact tables"},
        {"mc", "sampler versus exact law"},
        {"volume", "hull volume scaling"},
        {"cycles", "separating cycle lengths"},
        {"bridge", "bridge event estimates"},
        {"enumerate", "exhaustive truncated quadrangulations"},
        {"selftest", "run the acceptance suite"},
    };
    for (const auto& [name, help] : subs)
        app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kOk;
        }
        err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
        return kUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return run_and_write(cfg, out, err);
}

} // namespace uipq::cli
