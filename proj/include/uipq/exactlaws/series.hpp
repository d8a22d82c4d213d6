#pragma once

#include "uipq/exactlaws/rational.hpp"

#include <cstddef>
#include <vector>

namespace uipq {

// Power series known modulo y^(order+1). Every operation truncates to the
// smaller order of its operands.
class TruncatedSeries {
public:
    explicit TruncatedSeries(std::size_t order = 0);
    TruncatedSeries(std::vector<Rational> coeffs, std::size_t order);

    std::size_t order() const { return coeffs_.size() - 1; }
    const Rational& operator[](std::size_t i) const { return coeffs_.at(i); }
    Rational& operator[](std::size_t i) { return coeffs_.at(i); }
    const std::vector<Rational>& coefficients() const { return coeffs_; }

    TruncatedSeries truncated(std::size_t order) const;

    TruncatedSeries operator+(const TruncatedSeries& o) const;
    TruncatedSeries operator-(const TruncatedSeries& o) const;
    TruncatedSeries operator*(const TruncatedSeries& o) const;
    TruncatedSeries operator*(const Rational& c) const;

    // multiply by y^k, dropping what falls past the order
    TruncatedSeries shifted_up(std::size_t k) const;
    // divide by y^k; the k lowest coefficients must vanish, order drops by k
    TruncatedSeries shifted_down(std::size_t k) const;

    TruncatedSeries derivative() const;

    // Newton iterations; both throw std::domain_error on a bad constant term
    TruncatedSeries reciprocal() const;
    TruncatedSeries sqrt() const;

    bool operator==(const TruncatedSeries& o) const { return coeffs_ == o.coeffs_; }

private:
    std::vector<Rational> coeffs_;
};

// Coefficients 0..order of P(y)^alpha for a polynomial P with P(0) != 0,
// from the linear recurrence P F' = alpha P' F. c0 must be P(0)^alpha
// (checked). Linear in order, which is what makes large orders cheap.
std::vector<Rational> algebraic_power(const std::vector<Rational>& poly,
                                      const Rational& alpha,
                                      const Rational& c0,
                                      std::size_t order);

// coefficients of a product of polynomials
std::vector<Rational> poly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b);

} // namespace uipq
