#include "uipq/exactlaws/counts.hpp"

#include "uipq/exactlaws/laws.hpp"

#include <stdexcept>

namespace uipq::exactlaws {

namespace {

using Poly2 = std::vector<std::vector<BigInt>>; // [n][L]

// maps by edges n and root-face degree L, via Tutte's equation
// M = 1 + z y^2 M^2 + z y (y M(y) - M(1)) / (y - 1)
Poly2 tutte_root_face(std::size_t nmax) {
    Poly2 m(nmax + 1);
    m[0] = {BigInt(1)};
    for (std::size_t n = 1; n <= nmax; ++n) {
        m[n].assign(2 * n + 1, BigInt(0));
        // bridge at the root
        for (std::size_t a = 0; a < n; ++a) {
            std::size_t b = n - 1 - a;
            for (std::size_t la = 0; la < m[a].size(); ++la) {
                if (m[a][la] == 0)
                    continue;
                for (std::size_t lb = 0; lb < m[b].size(); ++lb)
                    m[n][la + lb + 2] += m[a][la] * m[b][lb];
            }
        }
        // root edge splits a face of degree L into j and L+1-j, j = 1..L+1
        for (std::size_t l = 0; l < m[n - 1].size(); ++l)
            for (std::size_t j = 1; j <= l + 1; ++j)
                m[n][j] += m[n - 1][l];
    }
    return m;
}

Poly2 zero(std::size_t nmax, std::size_t lmax) {
    return Poly2(nmax + 1, std::vector<BigInt>(lmax + 1, BigInt(0)));
}

Poly2 mul(const Poly2& a, const Poly2& b, std::size_t nmax, std::size_t lmax) {
    Poly2 c = zero(nmax, lmax);
    for (std::size_t n1 = 0; n1 <= nmax; ++n1)
        for (std::size_t l1 = 0; l1 <= lmax && l1 < a[n1].size(); ++l1) {
            if (a[n1][l1] == 0)
                continue;
            for (std::size_t n2 = 0; n1 + n2 <= nmax; ++n2)
                for (std::size_t l2 = 0; l1 + l2 <= lmax && l2 < b[n2].size(); ++l2)
                    if (b[n2][l2] != 0)
                        c[n1 + n2][l1 + l2] += a[n1][l1] * b[n2][l2];
        }
    return c;
}

} // namespace

std::vector<BigInt> rooted_map_counts(std::size_t nmax) {
    auto m = tutte_root_face(nmax);
    std::vector<BigInt> out(nmax + 1);
    for (std::size_t n = 0; n <= nmax; ++n)
        for (auto& c : m[n])
            out[n] += c;
    return out;
}

QtrCounts qtr_counts(std::size_t nmax, std::size_t pmax) {
    if (nmax < 1 || pmax < 1)
        throw std::invalid_argument("qtr_counts: nmax, pmax must be >= 1");
    if (nmax > kQtrCountsMaxN)
        throw std::range_error("qtr_counts: no validated method configured for nmax > " + std::to_string(kQtrCountsMaxN));
    auto m = tutte_root_face(nmax);
    // Peel off the boundary: a map whose root edge is not a bridge is a map
    // with simple root face and an arbitrary rooted map hanging in every
    // boundary corner, so M = 1 + z y^2 M^2 + S(y M).
    const std::size_t lmax = pmax;
    Poly2 mm = zero(nmax, lmax);
    for (std::size_t n = 0; n <= nmax; ++n)
        for (std::size_t l = 0; l <= lmax && l < m[n].size(); ++l)
            mm[n][l] = m[n][l];
    Poly2 ym = zero(nmax, lmax);
    for (std::size_t n = 0; n <= nmax; ++n)
        for (std::size_t l = 0; l + 1 <= lmax; ++l)
            ym[n][l + 1] = mm[n][l];
    Poly2 rest = mm;
    rest[0][0] -= 1;
    Poly2 sq = mul(mm, mm, nmax, lmax);
    for (std::size_t n = 0; n + 1 <= nmax; ++n)
        for (std::size_t l = 0; l + 2 <= lmax; ++l)
            rest[n + 1][l + 2] -= sq[n][l];

    std::vector<Poly2> pw{zero(nmax, lmax)};
    pw[0][0][0] = 1;
    for (std::size_t q = 1; q <= pmax; ++q)
        pw.push_back(mul(pw.back(), ym, nmax, lmax));

    QtrCounts out;
    out.nmax = nmax;
    out.pmax = pmax;
    out.table = zero(nmax, pmax);
    auto& s = out.table;
    // triangular in n: S_{n,p} plus lower-order corrections equals rest[n][p]
    for (std::size_t n = 1; n <= nmax; ++n)
        for (std::size_t p = 1; p <= pmax; ++p) {
            BigInt t = rest[n][p];
            for (std::size_t n2 = 1; n2 < n; ++n2)
                for (std::size_t q = 1; q <= p; ++q)
                    if (s[n2][q] != 0)
                        t -= s[n2][q] * pw[q][n - n2][p];
            s[n][p] = t;
        }
    return out;
}

LawTable slot_volume_law(std::size_t p, std::size_t nmax) {
    auto counts = qtr_counts(nmax, p);
    Rational zp = z_coefficients(p)[p];
    std::vector<Rational> m(nmax + 1);
    Rational w(1);
    for (std::size_t n = 1; n <= nmax; ++n) {
        w /= 12;
        m[n] = w * Rational(counts.at(n, p)) / zp;
    }
    return LawTable::from_masses("inner faces of a Boltzmann truncated quadrangulation, p=" + std::to_string(p), std::move(m));
}

} // namespace uipq::exactlaws
