#include "uipq/exactlaws/laws.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace uipq::exactlaws {

namespace {

// (18-y)(2-y)^3 = 144 - 224y + 120y^2 - 24y^3 + y^4
std::vector<Rational> quartic() {
    return {Rational(144), Rational(-224), Rational(120), Rational(-24), Rational(1)};
}

// (18-y)(2-y) = 36 - 20y + y^2
std::vector<Rational> quadratic() {
    return {Rational(36), Rational(-20), Rational(1)};
}

// grows on demand; callers get a copy of the prefix they asked for
class Cache {
public:
    using Fill = std::vector<Rational> (*)(std::size_t);
    explicit Cache(Fill f) : fill_(f) {}
    std::vector<Rational> get(std::size_t n) {
        std::lock_guard<std::mutex> lock(m_);
        if (data_.size() < n + 1)
            data_ = fill_(std::max(n, 2 * data_.size()));
        return std::vector<Rational>(data_.begin(), data_.begin() + n + 1);
    }

private:
    Fill fill_;
    std::mutex m_;
    std::vector<Rational> data_;
};

std::vector<Rational> sqrt_quartic(std::size_t n) {
    return algebraic_power(quartic(), Rational(1, 2), Rational(12), n);
}
std::vector<Rational> inv_sqrt_quadratic(std::size_t n) {
    return algebraic_power(quadratic(), Rational(-1, 2), Rational(1, 6), n);
}

Cache& sqrt_quartic_cache() {
    static Cache c(sqrt_quartic);
    return c;
}

Rational r_of(unsigned long r) { return Rational(static_cast<long>(r)); }

} // namespace

Rational default_tail_eps() { return Rational(1, 1000000000000L); }

TruncatedSeries series_U(std::size_t order) {
    if (order < 1)
        throw std::invalid_argument("series_U: order must be >= 1");
    auto q = quartic();
    TruncatedSeries p(q, order);
    TruncatedSeries u = p.sqrt() * Rational(1, 24);
    u[0] -= Rational(1, 2);
    if (order >= 1)
        u[1] += Rational(1, 2);
    if (order >= 2)
        u[2] -= Rational(1, 24);
    return u;
}

std::vector<Rational> z_coefficients(std::size_t pmax) {
    auto g = sqrt_quartic_cache().get(pmax);
    std::vector<Rational> z(pmax + 1);
    for (std::size_t p = 0; p <= pmax; ++p)
        z[p] = g[p] / 24;
    z[0] -= Rational(1, 2);
    if (pmax >= 1)
        z[1] += Rational(1, 2);
    if (pmax >= 2)
        z[2] -= Rational(1, 24);
    return z;
}

std::vector<BigInt> kappa_scaled_integers(std::size_t n) {
    // I_m = 144^m [y^m] (1-y/18)^{-1/2} (1-y/2)^{-3/2} is an integer, and
    // (36 - 20y + y^2) G' = (28 - 2y) G turns into
    // I_{m+1} = 4 (20m + 28) I_m / (m+1) - 576 I_{m-1}
    std::vector<BigInt> I(n + 1);
    I[0] = 1;
    if (n >= 1)
        I[1] = 112; // 144 * 7/9
    BigInt t;
    for (std::size_t m = 1; m < n; ++m) {
        t = I[m] * static_cast<unsigned long>(4 * (20 * m + 28));
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(m + 1));
        I[m + 1] = t - 576 * I[m - 1];
    }
    return I;
}

std::vector<Rational> kappa_ratios(std::size_t pmax) {
    if (pmax < 1)
        throw std::invalid_argument("kappa_ratios: pmax must be >= 1");
    auto I = kappa_scaled_integers(pmax - 1);
    std::vector<Rational> k(pmax);
    BigInt den(1);
    for (std::size_t p = 1; p <= pmax; ++p) {
        k[p - 1] = make_rational(I[p - 1], den);
        den *= 144;
    }
    return k;
}

long double kappa1() { return 32.0L / std::sqrt(3.0L * M_PIl); }

Rational h_ratio(std::size_t p, const std::vector<Rational>& kappa) {
    Rational two_pow(BigInt(1) << static_cast<mp_bitcnt_t>(p - 1));
    return two_pow * kappa.at(p - 1) / static_cast<unsigned long>(p);
}

namespace {

// [y^i] (1 - y/18)^{-1/2} * 2^i, decays like 9^{-i}
std::vector<long double> alpha_scaled(std::size_t n) {
    std::vector<long double> a(n + 1);
    a[0] = 1;
    for (std::size_t i = 0; i < n; ++i)
        a[i + 1] = a[i] * (i + 0.5L) / ((i + 1) * 9.0L);
    return a;
}

constexpr std::size_t kShortSum = 40;

} // namespace

std::vector<long double> kappa_ratio_scaled_table(std::size_t pmax) {
    // 2^m [y^m] (1-y/18)^{-1/2} (1-y/2)^{-3/2} with m = p-1, written as
    // sum_i (alpha_i 2^i) * binom(j + 1/2, j), j = m - i
    std::vector<long double> beta(pmax + 1);
    beta[0] = 1;
    for (std::size_t j = 0; j < pmax; ++j)
        beta[j + 1] = beta[j] * (j + 1.5L) / (j + 1);
    auto a = alpha_scaled(kShortSum);
    std::vector<long double> out(pmax + 1, 0.0L);
    for (std::size_t p = 1; p <= pmax; ++p) {
        std::size_t m = p - 1;
        long double s = 0;
        for (std::size_t i = 0; i <= std::min(m, kShortSum); ++i)
            s += a[i] * beta[m - i];
        out[p] = s;
    }
    return out;
}

long double kappa_ratio_scaled_numeric(std::size_t p) {
    return kappa_ratio_scaled_table(p)[p];
}

Rational theta(std::size_t k) {
    auto z = z_coefficients(k + 1);
    Rational two_pow(BigInt(1) << static_cast<mp_bitcnt_t>(k));
    return 6 * two_pow * z[k + 1];
}

LawTable theta_law(std::size_t kmax) {
    if (kmax < 1)
        throw std::invalid_argument("theta_law: kmax must be >= 1");
    auto z = z_coefficients(kmax + 1);
    std::vector<Rational> m(kmax + 1);
    Rational two_pow(1);
    for (std::size_t k = 0; k <= kmax; ++k) {
        m[k] = 6 * two_pow * z[k + 1];
        two_pow *= 2;
    }
    return LawTable::from_masses("theta", std::move(m));
}

std::vector<long double> theta_numeric_table(std::size_t kmax) {
    // theta(k) = (3/2) [y^{k+1}] (1-y/9)^{1/2} (1-y)^{3/2} for k >= 2
    std::vector<long double> a(kShortSum + 1), b(kmax + 2);
    a[0] = 1;
    for (std::size_t i = 0; i < kShortSum; ++i)
        a[i + 1] = a[i] * (i - 0.5L) / ((i + 1) * 9.0L);
    b[0] = 1;
    for (std::size_t j = 0; j + 1 < b.size(); ++j)
        b[j + 1] = b[j] * (j - 1.5L) / (j + 1);
    std::vector<long double> t(kmax + 1);
    t[0] = 2.0L / 3;
    if (kmax >= 1)
        t[1] = 5.0L / 27;
    for (std::size_t k = 2; k <= kmax; ++k) {
        std::size_t n = k + 1;
        long double s = 0;
        // small terms first
        for (std::size_t i = std::min(n, kShortSum) + 1; i-- > 0;)
            s += a[i] * b[n - i];
        t[k] = 1.5L * s;
    }
    return t;
}

long double theta_asymptotic_constant() {
    return 3.0L * std::sqrt(2.0L) / (4.0L * std::sqrt(M_PIl));
}

CriticalityReport theta_criticality(std::size_t K) {
    auto t = theta_numeric_table(K);
    long double mean = 0;
    for (std::size_t k = K + 1; k-- > 1;)
        mean += k * t[k];
    // sum_{k>K} k^{-3/2} <= integral from K of x^{-3/2} = 2/sqrt(K)
    long double env = theta_asymptotic_constant() * 2.0L / std::sqrt(static_cast<long double>(K));
    return {mean, env};
}

Rational pi(unsigned long r) {
    Rational rr = r_of(r);
    return rr * (rr + 3) / ((rr + 1) * (rr + 2));
}

namespace {

Rational g_from_root(const Rational& s, unsigned long shift) {
    Rational t = s + 2 * r_of(shift);
    return 1 - Rational(8) / (t * t - 1);
}

void check_unit(long double y) {
    if (!(y >= 0) || y >= 1)
        throw std::domain_error("argument must lie in [0,1)");
}

void check_unit(const Rational& y) {
    if (sgn(y) < 0 || y >= 1)
        throw std::domain_error("argument must lie in [0,1)");
}

} // namespace

std::optional<Rational> g_theta_exact(const Rational& y) { return g_theta_iter_exact(1, y); }

std::optional<Rational> g_theta_iter_exact(unsigned long r, const Rational& y) {
    check_unit(y);
    auto s = exact_sqrt((9 - y) / (1 - y));
    if (!s)
        return std::nullopt;
    return g_from_root(*s, r);
}

long double g_theta_iter(unsigned long r, long double y) {
    check_unit(y);
    long double s = std::sqrt((9 - y) / (1 - y)) + 2.0L * r;
    return 1 - 8 / (s * s - 1);
}

long double g_theta(long double y) { return g_theta_iter(1, y); }

long double g_theta_prime(long double y) {
    check_unit(y);
    long double s = std::sqrt((9 - y) / (1 - y));
    long double ds = 4 / (s * (1 - y) * (1 - y));
    long double t = s + 2;
    long double d = t * t - 1;
    return 16 * t * ds / (d * d);
}

Rational g_theta_prime_at_pi(unsigned long d) {
    // sqrt((9 - pi_d)/(1 - pi_d)) = 3 + 2d, so the derivative is phi_{d+1}(1)/phi_d(1)
    return phi_one(d + 1) / phi_one(d);
}

Rational phi_one(unsigned long u) {
    Rational a = 3 + 2 * r_of(u);
    Rational d = a * a - 1;
    return Rational(64, 3) * a / (d * d);
}

Rational phi(unsigned long u, unsigned long p) {
    if (p < 1)
        throw std::invalid_argument("phi: p must be >= 1");
    if (u == 0)
        return Rational(p == 1 ? 1 : 0);
    return phi_one(u) * static_cast<unsigned long>(p) * pow(pi(u), p - 1);
}

Rational hull_mass(unsigned long r, std::size_t p, const std::vector<Rational>& kappa) {
    if (p == 0)
        return Rational(0);
    Rational two_pi = 2 * pi(r);
    return phi_one(r) * kappa.at(p - 1) * pow(two_pi, p - 1);
}

LawTable hull_perimeter_law(unsigned long r, const Rational& tail_eps) {
    if (r < 1)
        throw std::invalid_argument("hull_perimeter_law: r must be >= 1");
    if (sgn(tail_eps) <= 0)
        throw std::invalid_argument("hull_perimeter_law: tail_eps must be positive");
    static std::mutex m;
    static std::map<std::pair<unsigned long, std::string>, LawTable> cache;
    auto key = std::make_pair(r, to_string(tail_eps));
    {
        std::lock_guard<std::mutex> lock(m);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
    }
    // mass_p = f I_{p-1} a^{p-1} / (144 b)^{p-1} with 2 pi_r = a/b and
    // I the integers from kappa_scaled_integers; the running sum is kept as
    // f T_p / (144 b)^{p-1}, all in integers
    Rational f = phi_one(r), two_pi = 2 * pi(r);
    const BigInt a = two_pi.get_num(), d = 144 * two_pi.get_den();
    std::vector<BigInt> I = kappa_scaled_integers(64 + 20 * static_cast<std::size_t>(r) * r);
    const BigInt e_num = tail_eps.get_num(), e_den = tail_eps.get_den();
    const long double eps_d = to_long_double(tail_eps);

    LawTable t;
    t.description = "P(H_" + std::to_string(r) + " = p)";
    t.masses.push_back(Rational(0));
    t.cumulative.push_back(Rational(0));
    BigInt apow(1), dpow(1), T(0), term;
    long double run_d = 0;
    for (std::size_t p = 1;; ++p) {
        if (p > I.size())
            I = kappa_scaled_integers(2 * I.size());
        if (p > 1) {
            apow *= a;
            dpow *= d;
            T *= d;
        }
        term = I[p - 1] * apow;
        T += term;
        Rational mass = f * make_rational(term, dpow);
        run_d += to_long_double(mass);
        t.masses.push_back(mass);
        t.cumulative.push_back(f * make_rational(T, dpow));
        if (1 - run_d < eps_d * 1.001L + 1e-17L) {
            // 1 - f T / d^{p-1} < eps, cross-multiplied
            BigInt gap = dpow * f.get_den() - f.get_num() * T;
            if (gap * e_den < e_num * f.get_den() * dpow) {
                t.tail_bound = 1 - t.cumulative.back();
                break;
            }
        }
    }
    std::lock_guard<std::mutex> lock(m);
    cache.emplace(key, t);
    return t;
}

std::vector<long double> hull_mass_numeric(unsigned long r, std::size_t pmax) {
    auto k = kappa_ratio_scaled_table(pmax);
    long double f = to_long_double(phi_one(r));
    long double lp = std::log(to_long_double(pi(r)));
    std::vector<long double> out(pmax + 1, 0.0L);
    for (std::size_t p = 1; p <= pmax; ++p)
        out[p] = f * k[p] * std::exp((p - 1) * lp);
    return out;
}

Rational hull_partial_sum(unsigned long r, std::size_t P) {
    if (P == 0)
        return Rational(0);
    Rational f = phi_one(r), two_pi = 2 * pi(r);
    const BigInt a = two_pi.get_num(), d = 144 * two_pi.get_den();
    std::vector<BigInt> I = kappa_scaled_integers(P - 1);
    // Horner: T = sum_{p<=P} I_{p-1} a^{p-1} d^{P-p}
    BigInt T(0), apow(1);
    std::vector<BigInt> terms(P);
    for (std::size_t p = 1; p <= P; ++p) {
        terms[p - 1] = I[p - 1] * apow;
        apow *= a;
    }
    for (std::size_t p = 1; p <= P; ++p) {
        T *= d;
        T += terms[p - 1];
    }
    BigInt dpow;
    mpz_pow_ui(dpow.get_mpz_t(), d.get_mpz_t(), P - 1);
    return f * make_rational(T, dpow);
}

TailCheck perimeter_tail_check(unsigned long r, double a) {
    if (r < 1 || !(a > 0))
        throw std::invalid_argument("perimeter_tail_check: need r >= 1, a > 0");
    double x = a * static_cast<double>(r) * static_cast<double>(r);
    TailCheck c;
    c.upper_threshold = static_cast<std::size_t>(std::ceil(x));
    c.lower_threshold = static_cast<std::size_t>(std::floor(x));
    c.lower_tail = hull_partial_sum(r, c.lower_threshold);
    c.upper_tail = 1 - hull_partial_sum(r, c.upper_threshold == 0 ? 0 : c.upper_threshold - 1);
    return c;
}

long double NegBinomialParams::pgf(long double a) const {
    long double q = to_long_double(success);
    return std::pow((1 - q) / (1 - q * a), to_long_double(shape));
}

long double NTreesLaw::pgf_closed(long double a) const {
    long double pw = to_long_double(pi(outer)), pwu = to_long_double(pi(outer - inner));
    long double mix = a * pw + (1 - a) * pwu;
    return a * std::sqrt((9 - pw) / (9 - mix)) * std::pow((1 - pw) / (1 - mix), 1.5L);
}

long double NTreesLaw::pgf_table(long double a) const {
    long double s = 0, an = 1;
    for (std::size_t n = 0; n < law.masses.size(); ++n) {
        s += to_long_double(law.masses[n]) * an;
        an *= a;
    }
    return s;
}

NTreesLaw n_trees_law(unsigned long u, unsigned long w, const Rational& tail_eps) {
    if (u < 1 || u >= w)
        throw std::invalid_argument("n_trees_law: need 1 <= u < w");
    NTreesLaw out;
    out.inner = u;
    out.outer = w;
    Rational pw = pi(w), pwu = pi(w - u);
    Rational q1 = (pw - pwu) / (9 - pwu);
    Rational q2 = (pw - pwu) / (1 - pwu);
    out.u = {Rational(1, 2), q1};
    out.v = {Rational(3, 2), q2};
    // (1-q1)^{1/2}(1-q2)^{3/2} = phi_w(1)/phi_{w-u}(1), always rational
    Rational s = phi_one(w) / phi_one(w - u);
    if (s * s != (1 - q1) * pow(1 - q2, 3))
        throw std::logic_error("n_trees_law: normalizing constant mismatch");
    out.p_one = s;
    out.mean = 1 + Rational(1, 2) * q1 / (1 - q1) + Rational(3, 2) * q2 / (1 - q2);

    std::vector<Rational> uu{Rational(1)}, vv{Rational(1)};
    auto mass = [&](std::size_t n) -> Rational {
        if (n == 0)
            return Rational(0);
        std::size_t m = n - 1;
        while (uu.size() <= m) {
            std::size_t i = uu.size() - 1;
            uu.push_back(uu[i] * Rational(2 * i + 1, 2 * i + 2) * q1);
            vv.push_back(vv[i] * Rational(2 * i + 3, 2 * i + 2) * q2);
        }
        Rational c(0);
        for (std::size_t i = 0; i <= m; ++i)
            c += uu[i] * vv[m - i];
        return s * c;
    };
    out.law = LawTable::until_tail("N_{" + std::to_string(u) + "," + std::to_string(w) + "}", mass, tail_eps, 1u << 20);
    return out;
}

SurvivalScaling survival_scaling(unsigned long r, long double lambda) {
    if (r < 1 || !(lambda > 0))
        throw std::invalid_argument("survival_scaling: need r >= 1, lambda > 0");
    SurvivalScaling s;
    Rational a = 3 + 2 * r_of(r);
    s.survival_prob = Rational(8) / (a * a - 1);
    long double rr = static_cast<long double>(r);
    long double t = -std::expm1(-lambda / (rr * rr)); // 1 - e^{-lambda/r^2}
    long double root = std::sqrt(1 + 8 / t) + 2 * rr;
    long double val = to_long_double(s.survival_prob) - 8 / (root * root - 1);
    s.scaled_laplace = rr * rr / 2 * val;
    long double b = 1 + std::sqrt(2 / lambda);
    s.limit = 1 - 1 / (b * b);
    return s;
}

long double stationary_Pi(long double x) {
    check_unit(x);
    return 48.0L / std::sqrt(3.0L * M_PIl) * (std::sqrt((9 - x) / (1 - x)) - 3);
}

std::vector<Rational> first_moment_coefficients(std::size_t pmax) {
    // dU/dx(1/12,y) = -y^2/2 - (y/2)(y^2 - 10y - 32) ((18-y)(2-y))^{-1/2},
    // scaled by 1/12 (see the notes on normalization)
    auto rq = inv_sqrt_quadratic(pmax);
    std::vector<Rational> out(pmax + 1);
    for (std::size_t p = 1; p <= pmax; ++p) {
        // [y^{p-1}] (y^2 - 10y - 32) R
        std::size_t m = p - 1;
        Rational c = -32 * rq[m];
        if (m >= 1)
            c -= 10 * rq[m - 1];
        if (m >= 2)
            c += rq[m - 2];
        Rational d = -c / 2;
        if (p == 2)
            d -= Rational(1, 2);
        out[p] = d / 12;
    }
    return out;
}

std::vector<Rational> slot_mean_volumes(std::size_t pmax) {
    auto fm = first_moment_coefficients(pmax);
    auto z = z_coefficients(pmax);
    std::vector<Rational> out(pmax + 1);
    for (std::size_t p = 1; p <= pmax; ++p)
        out[p] = fm[p] / z[p];
    return out;
}

Rational slot_mean_volume(std::size_t p) {
    if (p < 1)
        throw std::invalid_argument("slot_mean_volume: p must be >= 1");
    return slot_mean_volumes(p)[p];
}

} // namespace uipq::exactlaws
