#include "uipq/exactlaws/counts.hpp"
#include "uipq/exactlaws/laws.hpp"

#include <doctest.h>

#include <cmath>

using namespace uipq;
namespace el = uipq::exactlaws;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

// sqrt((9-y)/(1-y)) as an exact series, straight from the closed form
TruncatedSeries root_series(std::size_t order) {
    std::vector<Rational> geo(order + 1, Rational(1));
    TruncatedSeries inv_one_minus(geo, order);
    TruncatedSeries nine_minus(std::vector<Rational>{q(9), q(-1)}, order);
    return (nine_minus * inv_one_minus).sqrt();
}

// Tutte: rooted planar maps with n edges
BigInt tutte(unsigned long n) {
    BigInt f2n, fn, fn2;
    mpz_fac_ui(f2n.get_mpz_t(), 2 * n);
    mpz_fac_ui(fn.get_mpz_t(), n);
    mpz_fac_ui(fn2.get_mpz_t(), n + 2);
    BigInt three;
    mpz_ui_pow_ui(three.get_mpz_t(), 3, n);
    return 2 * three * f2n / (fn * fn2);
}

} // namespace

TEST_CASE("rational helpers") {
    CHECK(to_string(q(-6, 4)) == "-3/2");
    CHECK(parse_rational("10/4") == q(5, 2));
    CHECK(parse_rational(to_string(q(7, 13))) == q(7, 13));
    CHECK_THROWS(parse_rational("1/0"));
    CHECK(to_double(q(1, 3)) == 1.0 / 3.0);
    CHECK(exact_sqrt(q(25, 9)) == q(5, 3));
    CHECK_FALSE(exact_sqrt(q(2)).has_value());
    CHECK(pow(q(2, 3), 3) == q(8, 27));
}

TEST_CASE("truncated series arithmetic") {
    TruncatedSeries a(std::vector<Rational>{q(1), q(2), q(1)}, 6); // (1+y)^2
    auto s = a.sqrt();
    CHECK(s[0] == 1);
    CHECK(s[1] == 1);
    for (std::size_t i = 2; i <= 6; ++i)
        CHECK(s[i] == 0);
    auto one = a * a.reciprocal();
    CHECK(one[0] == 1);
    for (std::size_t i = 1; i <= 6; ++i)
        CHECK(one[i] == 0);
    TruncatedSeries bad(std::vector<Rational>{q(2), q(1)}, 4);
    CHECK_THROWS_AS(bad.sqrt(), std::domain_error);
    TruncatedSeries zero(std::vector<Rational>{q(0), q(1)}, 4);
    CHECK_THROWS_AS(zero.reciprocal(), std::domain_error);
}

TEST_CASE("Z coefficients: two independent expansions agree") {
    auto u = el::series_U(60);
    auto z = el::z_coefficients(60);
    CHECK(u[0] == 0);
    CHECK(z[0] == 0);
    for (std::size_t p = 1; p <= 60; ++p) {
        CHECK(u[p] == z[p]);
        CHECK(sgn(z[p]) > 0);
    }
    CHECK(z[1] == q(1, 9));
    CHECK(z[2] == q(5, 324));
}

TEST_CASE("theta against the closed-form pgf") {
    // g(y) = 1 - 8 / ((s + 2)^2 - 1), s = sqrt((9-y)/(1-y))
    const std::size_t order = 40;
    auto s = root_series(order);
    TruncatedSeries two(std::vector<Rational>{q(2)}, order);
    auto t = s + two;
    auto den = t * t - TruncatedSeries(std::vector<Rational>{q(1)}, order);
    auto g = den.reciprocal() * q(-8);
    g[0] += 1;
    auto law = el::theta_law(order);
    for (std::size_t k = 0; k <= order; ++k)
        CHECK(law.mass(k) == g[k]);
    CHECK(el::theta(0) == q(2, 3));
    CHECK(el::theta(1) == q(5, 27));
    CHECK(law.is_consistent());
}

TEST_CASE("theta tail and criticality") {
    auto t = el::theta_numeric_table(10000);
    long double a = std::pow(1000.0L, 2.5L) * t[1000], b = std::pow(10000.0L, 2.5L) * t[10000];
    CHECK(std::fabs(static_cast<double>(b / a) - 1) < 0.05);
    CHECK(std::fabs(static_cast<double>(b / el::theta_asymptotic_constant()) - 1) < 0.01);
    // the float table matches the exact masses where both exist
    auto law = el::theta_law(60);
    for (std::size_t k = 0; k <= 60; ++k)
        CHECK(std::fabs(static_cast<double>(t[k] / to_long_double(law.mass(k))) - 1) < 1e-12);

    auto c = el::theta_criticality(1000000);
    CHECK(std::fabs(static_cast<double>(1 - c.partial_mean)) < 1e-2);
    CHECK(c.partial_mean < 1);
    CHECK(static_cast<double>((1 - c.partial_mean) / c.envelope) == doctest::Approx(1).epsilon(0.01));
    auto c2 = el::theta_criticality(10000);
    CHECK(c2.partial_mean < c.partial_mean);
}

TEST_CASE("kappa ratios") {
    auto k = el::kappa_ratios(400);
    CHECK(k[0] == 1);
    CHECK(k[1] == q(7, 9));
    // h(p)/h(1) from the stationary measure's expansion
    auto s = root_series(30);
    for (std::size_t p = 1; p <= 30; ++p)
        CHECK(el::h_ratio(p, k) == s[p] / s[1]);
    auto norm = [&](std::size_t p) {
        return to_double(k[p - 1]) * std::pow(2.0, static_cast<double>(p)) / std::sqrt(static_cast<double>(p));
    };
    CHECK(std::fabs(norm(400) / norm(200) - 1) < 0.05);
    for (std::size_t p = 1; p <= 400; p += 37) {
        double scaled = static_cast<double>(el::kappa_ratio_scaled_numeric(p));
        CHECK(scaled == doctest::Approx(to_double(k[p - 1] * pow(q(2), static_cast<unsigned long>(p - 1)))).epsilon(1e-12));
    }
}

TEST_CASE("g_theta and pi") {
    CHECK(*el::g_theta_exact(q(0)) == q(2, 3));
    CHECK(*el::g_theta_exact(q(2, 3)) == q(5, 6));
    CHECK_THROWS_AS(el::g_theta(1.0L), std::domain_error);
    long double prev = 0;
    for (int k = 2; k <= 6; ++k) {
        long double v = el::g_theta(1 - std::pow(10.0L, -k));
        CHECK(v > prev);
        CHECK(v < 1);
        prev = v;
    }
    CHECK(el::pi(0) == 0);
    CHECK(el::pi(3) == q(9, 10));
    Rational y(0);
    for (unsigned long r = 1; r <= 50; ++r) {
        Rational a = 3 + 2 * q(static_cast<long>(r));
        CHECK(el::pi(r) == 1 - 8 / (a * a - 1));
        y = *el::g_theta_exact(y);
        CHECK(y == el::pi(r));
        CHECK(*el::g_theta_iter_exact(r, q(0)) == el::pi(r));
    }
    CHECK(el::g_theta_prime_at_pi(1) == q(7, 20));
}

TEST_CASE("iterates: closed form against composition and semigroup") {
    for (int i = 0; i < 20; ++i) {
        long double y = i / 20.0L;
        long double comp = y;
        for (unsigned long r = 1; r <= 5; ++r) {
            comp = el::g_theta(comp);
            CHECK(std::fabs(static_cast<double>(el::g_theta_iter(r, y) - comp)) < 1e-12);
        }
    }
    for (unsigned long r = 1; r <= 5; ++r)
        for (unsigned long s = 1; s <= 5; ++s)
            for (long double y : {0.0L, 0.3L, 0.9L})
                CHECK(std::fabs(static_cast<double>(el::g_theta_iter(r + s, y) -
                                                    el::g_theta_iter(r, el::g_theta_iter(s, y)))) < 1e-12);
    CHECK(std::fabs(static_cast<double>(el::g_theta_iter(2, 0.5L) - el::g_theta(el::g_theta(0.5L)))) < 1e-12);
}

TEST_CASE("phi") {
    CHECK(el::phi(0, 1) == 1);
    CHECK(el::phi(0, 2) == 0);
    CHECK(el::phi(1, 1) == q(5, 27));
    CHECK(el::phi(1, 1) == el::theta(1));
    CHECK(el::phi(2, 1) == q(7, 108));
    CHECK(el::phi(2, 1) == el::g_theta_prime_at_pi(1) * el::theta(1));
    for (unsigned long u = 1; u <= 6; ++u)
        for (unsigned long p = 1; p <= 12; ++p) {
            Rational v = el::phi(u, p);
            CHECK(v == static_cast<long>(p) * pow(el::pi(u), p - 1) * el::phi(u, 1));
            CHECK(sgn(v) > 0);
            CHECK(v <= 1);
        }
}

TEST_CASE("hull perimeter law") {
    auto eps = el::default_tail_eps();
    auto h1 = el::hull_perimeter_law(1, eps);
    CHECK(h1.mass(0) == 0);
    CHECK(h1.mass(1) == q(5, 27));
    CHECK(h1.mass(2) == q(140, 729));
    auto kappa = el::kappa_ratios(50);
    for (unsigned long r = 1; r <= 10; ++r) {
        auto law = el::hull_perimeter_law(r, eps);
        CHECK(law.is_consistent());
        CHECK(law.tail_bound < q(1, 1000000000));
        for (std::size_t p = 1; p <= 50; ++p)
            CHECK(law.mass(p) == el::h_ratio(p, kappa) * el::phi(r, p));
        CHECK(el::hull_partial_sum(r, 40) == law.cumulative[40]);
    }
    CHECK_THROWS(el::hull_perimeter_law(0, eps));
}

TEST_CASE("perimeter tails at r=20") {
    std::vector<double> lower;
    for (double a : {0.05, 0.1, 0.2}) {
        auto t = el::perimeter_tail_check(20, a);
        lower.push_back(to_double(t.lower_tail) / std::pow(a, 1.5));
    }
    for (double v : lower) {
        CHECK(v > 0);
        CHECK(v < 2 * lower.front());
    }
    std::vector<double> logs;
    for (double a : {2.0, 4.0, 8.0})
        logs.push_back(std::log(to_double(el::perimeter_tail_check(20, a).upper_tail)));
    // slopes per unit a do not flatten
    double s1 = (logs[1] - logs[0]) / 2, s2 = (logs[2] - logs[1]) / 4;
    CHECK(s1 < 0);
    CHECK(s2 <= s1 * 0.5);
    CHECK(el::perimeter_tail_check(20, 0.001).lower_tail == 0);
}

TEST_CASE("number of maximal trees") {
    auto eps = el::default_tail_eps();
    auto n = el::n_trees_law(1, 2, eps);
    CHECK(n.u.shape == q(1, 2));
    CHECK(n.v.shape == q(3, 2));
    CHECK(n.u.success == q(1, 50));
    CHECK(n.v.success == q(1, 2));
    CHECK(n.p_one == q(7, 20));
    CHECK(n.law.mass(1) == q(7, 20));
    CHECK(n.mean == q(5, 2) + q(1, 98));
    CHECK(n.law.is_consistent());
    for (auto [u, w] : {std::pair{1ul, 2ul}, {5ul, 10ul}, {50ul, 100ul}}) {
        auto l = el::n_trees_law(u, w, eps);
        CHECK(static_cast<double>(l.pgf_closed(1)) == doctest::Approx(1).epsilon(1e-15));
        for (int i = 1; i <= 9; ++i) {
            long double a = i / 10.0L;
            CHECK(std::fabs(static_cast<double>(l.pgf_closed(a) - l.pgf_table(a))) < 1e-10);
            CHECK(std::fabs(static_cast<double>(l.pgf_closed(a) - a * l.u.pgf(a) * l.v.pgf(a))) < 1e-12);
        }
    }
    CHECK_THROWS(el::n_trees_law(2, 2, eps));
    CHECK_THROWS(el::n_trees_law(0, 2, eps));
}

TEST_CASE("survival scaling") {
    CHECK(el::survival_scaling(1, 1).survival_prob == q(1, 3));
    for (unsigned long r = 1; r <= 30; ++r)
        CHECK(el::survival_scaling(r, 1).survival_prob == 1 - el::pi(r));
    auto s = el::survival_scaling(1000, 2);
    CHECK(std::fabs(static_cast<double>(s.scaled_laplace) / 0.75 - 1) < 0.02);
    CHECK(static_cast<double>(s.limit) == doctest::Approx(0.75));
}

TEST_CASE("stationary measure") {
    CHECK(el::stationary_Pi(0) == 0);
    CHECK_THROWS_AS(el::stationary_Pi(1), std::domain_error);
    long double pi1 = el::stationary_Pi(2.0L / 3);
    for (int i = 1; i <= 9; ++i) {
        long double y = i / 10.0L;
        CHECK(std::fabs(static_cast<double>(el::stationary_Pi(el::g_theta(y)) - pi1 - el::stationary_Pi(y))) < 1e-12);
    }
    long double x = 1e-7L;
    double slope = static_cast<double>(el::stationary_Pi(x) / x);
    CHECK(slope == doctest::Approx(static_cast<double>(64 / std::sqrt(3 * M_PIl))).epsilon(1e-6));
    CHECK(slope == doctest::Approx(static_cast<double>(2 * el::kappa1())).epsilon(1e-6));
}

TEST_CASE("truncated quadrangulation counts") {
    auto c = el::qtr_counts(8, 8);
    CHECK(c.at(1, 1) == 1);
    CHECK(c.at(2, 1) == 2);
    for (std::size_t n = 1; n <= 8; ++n)
        for (std::size_t p = n + 1; p <= 8; ++p)
            CHECK(c.at(n, p) == 0);
    // column p=1 is the rooted quadrangulations with one face fewer
    auto maps = el::rooted_map_counts(7);
    for (unsigned long n = 1; n <= 7; ++n) {
        CHECK(maps[n] == tutte(n));
        CHECK(c.at(n + 1, 1) == maps[n]);
    }
    CHECK_THROWS_AS(el::qtr_counts(el::kQtrCountsMaxN + 1, 2), std::range_error);
}

TEST_CASE("row sums stay below Z(p)") {
    const std::size_t N = 120;
    auto c = el::qtr_counts(N, 4);
    auto z = el::z_coefficients(4);
    for (std::size_t p = 1; p <= 4; ++p) {
        Rational s(0), w(1);
        for (std::size_t n = 1; n <= N; ++n) {
            w /= 12;
            s += w * c.at(n, p);
        }
        CHECK(s < z[p]);
        CHECK(to_double(s / z[p]) > 0.95);
    }
}

TEST_CASE("slot volume law and means") {
    auto law = el::slot_volume_law(1, 30);
    CHECK(law.mass(0) == 0);
    CHECK(law.mass(1) == q(3, 4));
    CHECK(law.mass(2) == q(1, 8));
    CHECK(law.is_consistent());
    CHECK(el::slot_mean_volume(1) == 2);
    // partial first moments creep up to the exact mean
    auto longer = el::slot_volume_law(1, 100).mean_partial();
    CHECK(law.mean_partial() < longer);
    CHECK(longer < 2);
    auto means = el::slot_mean_volumes(200);
    for (std::size_t p = 2; p <= 50; ++p) {
        CHECK(sgn(means[p]) > 0);
        CHECK(means[p] > means[p - 1]);
    }
    auto sc = [&](std::size_t p) { return to_double(means[p]) / (static_cast<double>(p) * p); };
    CHECK(std::fabs(sc(100) / sc(50) - 1) < 0.05);
    CHECK(std::fabs(sc(200) / sc(100) - 1) < 0.05);
}

TEST_CASE("law table json round trip") {
    auto t = el::hull_perimeter_law(2, q(1, 1000));
    auto back = LawTable::from_json(t.to_json());
    CHECK(back.masses == t.masses);
    CHECK(back.tail_bound == t.tail_bound);
    CHECK(back.is_consistent());
    auto csv = t.to_csv();
    CHECK(csv.rfind("value,mass_num,mass_den", 0) == 0);
}
