#pragma once

#include "uipq/exactlaws/law_table.hpp"
#include "uipq/exactlaws/rational.hpp"
#include "uipq/exactlaws/series.hpp"

#include <optional>
#include <vector>

namespace uipq::exactlaws {

// U(1/12, y) through Newton square root; coefficient p is Z(p)
TruncatedSeries series_U(std::size_t order);
// Z(0..pmax) through the linear recurrence for sqrt((18-y)(2-y)^3)
std::vector<Rational> z_coefficients(std::size_t pmax);

// kappa_p / kappa_1 for p = 1..pmax, stored at index p-1
std::vector<Rational> kappa_ratios(std::size_t pmax);
// 144^m [y^m] (1-y/18)^{-1/2}(1-y/2)^{-3/2}, m = 0..n; kappa_{m+1}/kappa_1 = I_m / 144^m
std::vector<BigInt> kappa_scaled_integers(std::size_t n);
// the scale kappa_1 = 32/sqrt(3 pi), display only
long double kappa1();
// h(p)/h(1) = 2^{p-1} (kappa_p/kappa_1) / p
Rational h_ratio(std::size_t p, const std::vector<Rational>& kappa);

// floating companions valid at any index (positive convolutions, no cancellation)
// 2^{p-1} kappa_p / kappa_1, p >= 1
long double kappa_ratio_scaled_numeric(std::size_t p);
std::vector<long double> kappa_ratio_scaled_table(std::size_t pmax); // index p, [0] unused

Rational theta(std::size_t k);
LawTable theta_law(std::size_t kmax);
std::vector<long double> theta_numeric_table(std::size_t kmax);
// sum_{k <= K} k theta(k) and the tail envelope c * sum_{k > K} k^{-3/2}
struct CriticalityReport {
    long double partial_mean;
    long double envelope;
};
CriticalityReport theta_criticality(std::size_t K);
long double theta_asymptotic_constant(); // 3 sqrt2 / (4 sqrt pi)

Rational pi(unsigned long r);
std::optional<Rational> g_theta_exact(const Rational& y);
long double g_theta(long double y);
long double g_theta_prime(long double y);
// g_theta'(pi_d), exact
Rational g_theta_prime_at_pi(unsigned long d);
std::optional<Rational> g_theta_iter_exact(unsigned long r, const Rational& y);
long double g_theta_iter(unsigned long r, long double y);

// phi_u(1) = (64/3)(3+2u)/((3+2u)^2-1)^2
Rational phi_one(unsigned long u);
Rational phi(unsigned long u, unsigned long p);

Rational hull_mass(unsigned long r, std::size_t p, const std::vector<Rational>& kappa);
LawTable hull_perimeter_law(unsigned long r, const Rational& tail_eps);
// floating masses for p = 0..pmax (for samplers at large r)
std::vector<long double> hull_mass_numeric(unsigned long r, std::size_t pmax);

struct TailCheck {
    std::size_t upper_threshold; // ceil(a r^2)
    std::size_t lower_threshold; // floor(a r^2)
    Rational upper_tail;         // P(H_r >= upper_threshold)
    Rational lower_tail;         // P(H_r <= lower_threshold)
};
// exact P(H_r <= P) without building the table
Rational hull_partial_sum(unsigned long r, std::size_t P);
TailCheck perimeter_tail_check(unsigned long r, double a);

struct NegBinomialParams {
    Rational shape;
    Rational success;
    long double pgf(long double a) const;
};

struct NTreesLaw {
    unsigned long inner = 0, outer = 0;
    NegBinomialParams u, v;
    LawTable law;
    Rational p_one;
    Rational mean;
    // the displayed closed form, independent of the table
    long double pgf_closed(long double a) const;
    // sum of table masses times a^n, plus nothing for the tail
    long double pgf_table(long double a) const;
};
NTreesLaw n_trees_law(unsigned long u, unsigned long w, const Rational& tail_eps);

struct SurvivalScaling {
    Rational survival_prob;
    long double scaled_laplace;
    long double limit; // 1 - (1 + sqrt(2/lambda))^{-2}
};
SurvivalScaling survival_scaling(unsigned long r, long double lambda);

long double stationary_Pi(long double x);

// sum_n n 12^{-n} #Qtr_{n,p} for p = 0..pmax
std::vector<Rational> first_moment_coefficients(std::size_t pmax);
Rational slot_mean_volume(std::size_t p);
std::vector<Rational> slot_mean_volumes(std::size_t pmax); // index p, [0] unused

Rational default_tail_eps();

} // namespace uipq::exactlaws
