#include "uipq/exactlaws/series.hpp"

#include <algorithm>
#include <stdexcept>

namespace uipq {

Rational make_rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational make_rational(const BigInt& num, const BigInt& den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& x) {
    if (x.get_den() == 1)
        return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos)
        return Rational(BigInt(s));
    BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0)
        throw std::invalid_argument("zero denominator in " + s);
    return make_rational(num, den);
}

double to_double(const Rational& x) {
    return static_cast<double>(to_long_double(x));
}

long double to_long_double(const Rational& x) {
    double hi = x.get_d();
    Rational rest = x - Rational(hi);
    return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

std::optional<Rational> exact_sqrt(const Rational& x) {
    if (sgn(x) < 0)
        return std::nullopt;
    if (!mpz_perfect_square_p(x.get_num_mpz_t()) || !mpz_perfect_square_p(x.get_den_mpz_t()))
        return std::nullopt;
    BigInt n, d;
    mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
    return make_rational(n, d);
}

Rational pow(const Rational& x, unsigned long e) {
    BigInt n, d;
    mpz_pow_ui(n.get_mpz_t(), x.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), x.get_den_mpz_t(), e);
    return Rational(n, d); // already coprime
}

TruncatedSeries::TruncatedSeries(std::size_t order) : coeffs_(order + 1) {}

TruncatedSeries::TruncatedSeries(std::vector<Rational> coeffs, std::size_t order)
    : coeffs_(std::move(coeffs)) {
    coeffs_.resize(order + 1);
}

TruncatedSeries TruncatedSeries::truncated(std::size_t order) const {
    if (order > this->order())
        throw std::out_of_range("cannot extend a truncated series");
    return TruncatedSeries(std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + order + 1), order);
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
    std::size_t n = std::min(order(), o.order());
    TruncatedSeries r(n);
    for (std::size_t i = 0; i <= n; ++i)
        r.coeffs_[i] = coeffs_[i] + o.coeffs_[i];
    return r;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
    std::size_t n = std::min(order(), o.order());
    TruncatedSeries r(n);
    for (std::size_t i = 0; i <= n; ++i)
        r.coeffs_[i] = coeffs_[i] - o.coeffs_[i];
    return r;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
    std::size_t n = std::min(order(), o.order());
    TruncatedSeries r(n);
    Rational t;
    for (std::size_t i = 0; i <= n; ++i) {
        if (sgn(coeffs_[i]) == 0)
            continue;
        for (std::size_t j = 0; i + j <= n; ++j) {
            if (sgn(o.coeffs_[j]) == 0)
                continue;
            t = coeffs_[i] * o.coeffs_[j];
            r.coeffs_[i + j] += t;
        }
    }
    return r;
}

TruncatedSeries TruncatedSeries::operator*(const Rational& c) const {
    TruncatedSeries r(order());
    for (std::size_t i = 0; i <= order(); ++i)
        r.coeffs_[i] = coeffs_[i] * c;
    return r;
}

TruncatedSeries TruncatedSeries::shifted_up(std::size_t k) const {
    TruncatedSeries r(order());
    for (std::size_t i = 0; i + k <= order(); ++i)
        r.coeffs_[i + k] = coeffs_[i];
    return r;
}

TruncatedSeries TruncatedSeries::shifted_down(std::size_t k) const {
    if (k > order())
        throw std::out_of_range("shift past order");
    for (std::size_t i = 0; i < k; ++i)
        if (sgn(coeffs_[i]) != 0)
            throw std::domain_error("series not divisible by y^k");
    return TruncatedSeries(std::vector<Rational>(coeffs_.begin() + k, coeffs_.end()), order() - k);
}

TruncatedSeries TruncatedSeries::derivative() const {
    if (order() == 0)
        return TruncatedSeries(0);
    TruncatedSeries r(order() - 1);
    for (std::size_t i = 1; i <= order(); ++i)
        r.coeffs_[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
    return r;
}

TruncatedSeries TruncatedSeries::reciprocal() const {
    if (sgn(coeffs_[0]) == 0)
        throw std::domain_error("reciprocal of a series with zero constant term");
    std::size_t n = order();
    TruncatedSeries r(std::vector<Rational>{1 / coeffs_[0]}, 0);
    std::size_t prec = 0;
    while (prec < n) {
        prec = std::min(n, 2 * prec + 1);
        TruncatedSeries rr(r.coeffs_, prec);
        // r <- r (2 - f r)
        TruncatedSeries fr = truncated(prec) * rr;
        for (auto& c : fr.coeffs_)
            c = -c;
        fr.coeffs_[0] += 2;
        r = rr * fr;
    }
    return r;
}

TruncatedSeries TruncatedSeries::sqrt() const {
    auto c0 = exact_sqrt(coeffs_[0]);
    if (!c0 || sgn(*c0) == 0)
        throw std::domain_error("constant term is not a nonzero rational square");
    std::size_t n = order();
    TruncatedSeries s(std::vector<Rational>{*c0}, 0);
    std::size_t prec = 0;
    Rational half(1, 2);
    while (prec < n) {
        prec = std::min(n, 2 * prec + 1);
        TruncatedSeries ss(s.coeffs_, prec);
        // s <- (s + f/s) / 2
        TruncatedSeries q = truncated(prec) * ss.reciprocal();
        s = (ss + q) * half;
    }
    return s;
}

std::vector<Rational> poly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    if (a.empty() || b.empty())
        return {};
    std::vector<Rational> r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

std::vector<Rational> algebraic_power(const std::vector<Rational>& poly,
                                      const Rational& alpha,
                                      const Rational& c0,
                                      std::size_t order) {
    if (poly.empty() || sgn(poly[0]) == 0)
        throw std::domain_error("algebraic_power needs P(0) != 0");
    // check c0^den == P(0)^num, with signs moved to the right side
    {
        long num = alpha.get_num().get_si();
        unsigned long den = alpha.get_den().get_ui();
        Rational lhs = pow(c0, den);
        Rational rhs = num >= 0 ? pow(poly[0], num) : pow(1 / poly[0], -num);
        if (lhs != rhs)
            throw std::domain_error("c0 is not P(0)^alpha");
    }
    const std::size_t d = poly.size() - 1;
    std::vector<Rational> f(order + 1);
    f[0] = c0;
    // [y^n] of P F' - alpha P' F = 0:
    //   sum_j P_j (n-j+1) F_{n-j+1} - alpha sum_j (j+1) P_{j+1} F_{n-j} = 0
    Rational acc, t;
    for (std::size_t n = 0; n < order; ++n) {
        acc = 0;
        for (std::size_t j = 1; j <= d && j <= n + 1; ++j) {
            t = poly[j] * f[n - j + 1];
            acc += t * static_cast<unsigned long>(n - j + 1);
        }
        for (std::size_t j = 0; j < d && j <= n; ++j) {
            t = poly[j + 1] * f[n - j];
            t *= alpha;
            acc -= t * static_cast<unsigned long>(j + 1);
        }
        f[n + 1] = -acc / (poly[0] * static_cast<unsigned long>(n + 1));
    }
    return f;
}

} // namespace uipq
