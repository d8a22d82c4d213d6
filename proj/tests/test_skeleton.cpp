#include "uipq/exactlaws/laws.hpp"
#include "uipq/skeleton/counters.hpp"
#include "uipq/skeleton/forest.hpp"
#include "uipq/skeleton/rng.hpp"
#include "uipq/skeleton/samplers.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace uipq;
using namespace uipq::skeleton;
namespace el = uipq::exactlaws;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

bool within_3_sigma(std::uint64_t hits, std::uint64_t n, double p) { return std::fabs(binomial_z(hits, n, p)) <= 3; }

// all plane trees with exactly n vertices
std::vector<PlaneTree> trees_of_size(std::size_t n) {
    std::vector<PlaneTree> out;
    std::vector<std::uint32_t> seq;
    std::function<void(long)> rec = [&](long open) {
        if (seq.size() == n) {
            if (open == 0)
                out.emplace_back(seq);
            return;
        }
        if (open <= 0)
            return;
        for (std::uint32_t c = 0; c + seq.size() < n; ++c) {
            seq.push_back(c);
            rec(open - 1 + static_cast<long>(c));
            seq.pop_back();
        }
    };
    rec(1);
    return out;
}

// probability the samplers give an extinct tree with cap m, from their pmfs
Rational extinct_prob(const PlaneTree& t, std::uint32_t m) {
    auto d = t.depths();
    Rational p(1);
    for (std::size_t v = 0; v < t.size(); ++v)
        p *= extinct_pmf_exact(m - d[v], t.children(v));
    return p;
}

// same for the spine tree: spine vertices use the spine pmf and a uniform spine child
Rational spine_prob(const PlaneTree& t, std::uint32_t m) {
    auto d = t.depths();
    auto par = t.parents();
    std::vector<char> on_spine(t.size(), 0);
    for (std::size_t v = 0; v < t.size(); ++v)
        if (d[v] == m)
            for (std::size_t x = v;; x = par[x]) {
                on_spine[x] = 1;
                if (x == 0)
                    break;
            }
    Rational p(1);
    for (std::size_t v = 0; v < t.size(); ++v) {
        if (d[v] == m)
            continue;
        if (on_spine[v])
            p *= spine_pmf_exact(m - d[v], t.children(v)) / static_cast<long>(t.children(v));
        else
            p *= extinct_pmf_exact(m - d[v], t.children(v));
    }
    return p;
}

} // namespace

TEST_CASE("plane trees") {
    PlaneTree t({2, 1, 0, 0});
    CHECK(t.height() == 2);
    CHECK(t.generation_sizes() == std::vector<std::size_t>{1, 2, 1});
    CHECK(t.population(1) == 2);
    CHECK(t.parents() == std::vector<std::size_t>{0, 0, 1, 0});
    CHECK(t.truncated(1) == PlaneTree({2, 0, 0}));
    CHECK(PlaneTree::is_lukasiewicz({1, 0}));
    CHECK_FALSE(PlaneTree::is_lukasiewicz({0, 0}));
    CHECK_FALSE(PlaneTree::is_lukasiewicz({2, 0}));
    CHECK_THROWS_AS(PlaneTree({1, 1}), std::invalid_argument);
    CHECK(trees_of_size(4).size() == 5); // Catalan
}

TEST_CASE("forest invariants and json") {
    PlaneForest f({PlaneTree({1, 1, 0}), PlaneTree({0}), PlaneTree({2, 0, 1, 0})}, 2, Distinguished{0, 2});
    CHECK(f.p() == 2);
    CHECK(f.q() == 3);
    CHECK(f.inner_vertex_count() == 6);
    CHECK(count_max_height_trees(f) == 2);
    auto back = PlaneForest::from_json(f.to_json());
    CHECK(back == f);
    CHECK_THROWS(PlaneForest({PlaneTree({0})}, 1));
    CHECK_THROWS(PlaneForest({PlaneTree({1, 0})}, 1, Distinguished{0, 0}));
    CHECK_THROWS(PlaneForest({PlaneTree({0}), PlaneTree({1, 0})}, 1, Distinguished{1, 1}));
    CHECK_THROWS(f.rotated(1));
    PlaneForest g({PlaneTree({0}), PlaneTree({1, 0})}, 1);
    CHECK(g.rotated(1).tree(0) == PlaneTree({1, 0}));
    // the mark follows its ancestor under truncation
    auto h = f.truncated(1);
    CHECK(h.distinguished()->vertex == 1);
    CHECK(h.p() == 3);
    PlaneForest three({PlaneTree({1, 0}), PlaneTree({1, 0}), PlaneTree({1, 0})}, 1);
    CHECK(count_max_height_trees(three) == 3);
}

TEST_CASE("rng streams") {
    RngStream a(42), b(42);
    for (int i = 0; i < 100; ++i)
        CHECK(a.next_u64() == b.next_u64());
    CHECK(a.counter() == 100);
    RngStream c(3);
    for (int i = 0; i < 1000; ++i) {
        CHECK(c.below(7) < 7);
        double u = c.uniform();
        CHECK(u >= 0);
        CHECK(u < 1);
    }
    CHECK(RngStream(5).substream(0).next_u64() != RngStream(5).substream(1).next_u64());
    CHECK(RngStream(5).substream(1).next_u64() != RngStream(6).substream(0).next_u64());
}

TEST_CASE("chi-square helper") {
    Histogram h;
    h.add(0, 500);
    h.add(1, 500);
    auto r = chi_square_test(h, std::vector<double>{0.5, 0.5});
    CHECK(r.statistic == doctest::Approx(0));
    CHECK(r.p_value == doctest::Approx(1));
    CHECK(r.total_variation == doctest::Approx(0));
    Histogram bad;
    bad.add(0, 1000);
    CHECK(chi_square_test(bad, std::vector<double>{0.5, 0.5}).p_value < 1e-10);
    CHECK(binomial_z(50, 100, 0.5) == 0);
    CHECK(tv_noise_floor({0.5, 0.5}, 100) > 0);
}

TEST_CASE("tilted offspring") {
    RngStream rng(1);
    std::uint64_t zeros = 0;
    const std::uint64_t n = 1000000;
    for (std::uint64_t i = 0; i < n; ++i)
        zeros += sample_offspring_tilted(1.0, rng) == 0;
    CHECK(within_3_sigma(zeros, n, 2.0 / 3));
    for (int i = 0; i < 100; ++i)
        CHECK(sample_offspring_tilted(0.0, rng) == 0);
    CHECK(tilted_offspring(2.0 / 3).cumulative()[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK_THROWS(sample_offspring_tilted(1.5, rng));
}

TEST_CASE("exact pmfs are the Doob transforms") {
    // extinct: theta(c) pi_{d-1}^c / pi_d ; spine: theta(c) c pi_{d-1}^{c-1} / g'(pi_{d-1})
    for (std::uint32_t d = 1; d <= 4; ++d) {
        Rational se(0), ss(0);
        for (std::uint32_t c = 0; c <= 30; ++c) {
            Rational e = el::theta(c) * pow(el::pi(d - 1), c) / el::pi(d);
            CHECK(extinct_pmf_exact(d, c) == e);
            se += e;
            if (c >= 1) {
                Rational s = el::theta(c) * static_cast<long>(c) * pow(el::pi(d - 1), c - 1) /
                             el::g_theta_prime_at_pi(d - 1);
                CHECK(spine_pmf_exact(d, c) == s);
                ss += s;
            }
        }
        CHECK(se <= 1);
        CHECK(ss <= 1);
        if (d >= 2) {
            CHECK(to_double(se) > 0.999);
            CHECK(to_double(ss) > 0.99);
        }
    }
    CHECK(extinct_pmf_exact(2, 0) == q(4, 5));
    CHECK(spine_pmf_exact(1, 1) == 1);
    CHECK(spine_pmf_exact(2, 1) == q(100, 189));
    // normalization identity phi_d(1) = g'(pi_{d-1}) phi_{d-1}(1)
    for (unsigned long d = 1; d <= 10; ++d)
        CHECK(el::phi(d, 1) == el::g_theta_prime_at_pi(d - 1) * el::phi(d - 1, 1));
}

TEST_CASE("small-space oracle: sampler probabilities equal mu weights") {
    for (std::uint32_t r : {1u, 2u, 3u}) {
        auto hull = el::hull_perimeter_law(r, el::default_tail_eps());
        auto kappa = el::kappa_ratios(3);
        std::vector<PlaneTree> pool;
        for (std::size_t n = 1; n <= 6; ++n)
            for (auto& t : trees_of_size(n))
                if (t.height() <= r)
                    pool.push_back(t);
        std::size_t checked = 0;
        std::function<void(std::vector<PlaneTree>&, std::size_t)> rec = [&](std::vector<PlaneTree>& f,
                                                                           std::size_t size) {
            if (!f.empty()) {
                std::size_t p = 0, spine = 0;
                for (std::size_t i = 0; i < f.size(); ++i)
                    if (f[i].height() == r) {
                        p += f[i].population(r);
                        spine = i;
                    }
                if (p == 1) {
                    std::size_t qq = f.size();
                    Rational sampler = hull.mass(qq) / static_cast<long>(qq) * spine_prob(f[spine], r);
                    Rational mu = el::h_ratio(qq, kappa);
                    for (std::size_t i = 0; i < qq; ++i) {
                        if (i != spine)
                            sampler *= extinct_prob(f[i], r);
                        auto d = f[i].depths();
                        for (std::size_t v = 0; v < f[i].size(); ++v)
                            if (d[v] < r)
                                mu *= el::theta(f[i].children(v));
                    }
                    CHECK(sampler == mu);
                    ++checked;
                }
            }
            if (f.size() == 3)
                return;
            for (const auto& t : pool)
                if (size + t.size() <= 6) {
                    f.push_back(t);
                    rec(f, size + t.size());
                    f.pop_back();
                }
        };
        std::vector<PlaneTree> f;
        rec(f, 0);
        CHECK(checked > 0);
    }
}

TEST_CASE("extinct trees") {
    RngStream rng(2);
    for (int i = 0; i < 100; ++i)
        CHECK(sample_extinct_tree(1, rng).size() == 1);
    const std::uint64_t n = 100000;
    std::uint64_t single = 0;
    for (std::uint64_t i = 0; i < n; ++i)
        single += sample_extinct_tree(2, rng).size() == 1;
    CHECK(within_3_sigma(single, n, 0.8));
    // height law given extinction by generation m: (pi_{k+1} - pi_k) / pi_m
    const std::uint32_t m = 3;
    Histogram h;
    for (std::uint64_t i = 0; i < n; ++i) {
        auto t = sample_extinct_tree(m, rng);
        CHECK(t.height() < m);
        h.add(t.height());
    }
    std::vector<double> pmf;
    for (unsigned long k = 0; k < m; ++k)
        pmf.push_back(to_double((el::pi(k + 1) - el::pi(k)) / el::pi(m)));
    CHECK(chi_square_test(h, pmf).p_value > 0.01);
}

TEST_CASE("spine trees") {
    RngStream rng(3);
    for (int i = 0; i < 100; ++i)
        CHECK(sample_spine_tree(1, rng) == PlaneTree({1, 0}));
    const std::uint64_t n = 100000;
    std::uint64_t one = 0;
    for (std::uint64_t i = 0; i < n; ++i)
        one += sample_spine_tree(2, rng).children(0) == 1;
    CHECK(within_3_sigma(one, n, 100.0 / 189));
    for (int i = 0; i < 10000; ++i) {
        auto t = sample_spine_tree(5, rng);
        CHECK(t.height() == 5);
        CHECK(t.population(5) == 1);
    }
}

TEST_CASE("hull skeletons") {
    RngStream rng(4);
    const std::uint64_t n = 100000;
    std::uint64_t q1 = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        auto f = sample_hull_skeleton(1, rng);
        q1 += f.q() == 1;
        if (i < 1000) {
            f.validate();
            CHECK(f.p() == 1);
            REQUIRE(f.distinguished().has_value());
            CHECK(f.distinguished()->tree == 0);
            CHECK(count_max_height_trees(f) == 1);
        }
    }
    CHECK(within_3_sigma(q1, n, 5.0 / 27));
    // the unrooted variant spreads the surviving tree over all positions
    std::uint64_t first = 0, total = 0;
    for (int i = 0; i < 20000; ++i) {
        auto f = sample_hull_skeleton(3, rng, HullVariant::unrooted);
        CHECK_FALSE(f.distinguished().has_value());
        if (f.q() == 2) {
            ++total;
            first += f.tree(0).height() == 3;
        }
    }
    CHECK(within_3_sigma(first, total, 0.5));
}

TEST_CASE("annulus skeletons") {
    RngStream a(5), b(5);
    for (int i = 0; i < 50; ++i)
        CHECK(sample_annulus_skeleton(0, 4, a) == sample_hull_skeleton(4, b));
    RngStream rng(6);
    const std::uint64_t n = 100000;
    Histogram nt;
    for (std::uint64_t i = 0; i < n; ++i) {
        auto f = sample_annulus_skeleton(1, 2, rng);
        nt.add(static_cast<long long>(count_max_height_trees(f)));
    }
    CHECK(within_3_sigma(nt.count(1), n, 0.35));
    double mean = nt.mean(), var = 0;
    for (const auto& [v, c] : nt.counts)
        var += c * (v - mean) * (v - mean);
    var /= n - 1;
    double target = 2.5 + 1.0 / 98;
    CHECK(std::fabs(mean - target) <= 3 * std::sqrt(var / n));
    CHECK_THROWS(sample_annulus_skeleton(3, 3, rng));
}

TEST_CASE("truncation consistency") {
    RngStream rng(7);
    for (int i = 0; i < 300; ++i) {
        auto f = sample_hull_skeleton(8, rng);
        for (std::uint32_t g = 1; g < 8; ++g)
            for (std::uint32_t g2 = 1; g2 < g; ++g2)
                CHECK(f.truncated(g).truncated(g2) == f.truncated(g2));
    }
}

TEST_CASE("property P") {
    PlaneTree chain({1, 1, 0});
    CHECK(satisfies_property_P(chain, q(1), 1));
    CHECK_FALSE(satisfies_property_P(PlaneTree({1, 0}), q(1), 1));
    PlaneForest f({chain, PlaneTree({0})}, 2);
    CHECK(count_property_P(f, q(1), 1) == 1);
    CHECK_THROWS(count_property_P(f, q(1), 2));
    // frequency among annulus trees of height cap 2r = 20 across seeds
    std::vector<double> freq;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RngStream rng(100 + seed);
        std::size_t hits = 0, trees = 0;
        for (int i = 0; i < 60; ++i) {
            auto g = sample_annulus_skeleton(20, 40, rng);
            hits += count_property_P(g, q(1, 10), 10);
            trees += count_max_height_trees(g);
        }
        freq.push_back(static_cast<double>(hits) / trees);
    }
    double lo = *std::min_element(freq.begin(), freq.end()), hi = *std::max_element(freq.begin(), freq.end());
    CHECK(lo > 0);
    CHECK(hi < 3 * lo);
}

TEST_CASE("distinct streams are uncorrelated") {
    const int n = 10000;
    RngStream a = RngStream(9).substream(0), b = RngStream(9).substream(1);
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        double x = static_cast<double>(sample_hull_skeleton(2, a).q());
        double y = static_cast<double>(sample_hull_skeleton(2, b).q());
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    double cov = sxy / n - sx / n * sy / n;
    double corr = cov / std::sqrt((sxx / n - sx / n * sx / n) * (syy / n - sy / n * sy / n));
    CHECK(std::fabs(corr) < 3 / std::sqrt(static_cast<double>(n)));
}
