#include "uipq/skeleton/counters.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>

namespace uipq {

double Histogram::frequency(long long v) const {
    auto it = counts.find(v);
    return total == 0 || it == counts.end() ? 0.0 : static_cast<double>(it->second) / total;
}

double Histogram::mean() const {
    if (total == 0)
        return 0;
    long double s = 0;
    for (const auto& [v, n] : counts)
        s += static_cast<long double>(v) * n;
    return static_cast<double>(s / total);
}

ChiSquareResult chi_square_test(const Histogram& h, const std::vector<double>& pmf, double min_expected) {
    if (h.total == 0)
        throw std::invalid_argument("chi_square_test: empty histogram");
    const double n = static_cast<double>(h.total);
    ChiSquareResult res;

    std::vector<double> obs(pmf.size() + 1, 0.0), expct(pmf.size() + 1, 0.0);
    double covered = 0;
    for (std::size_t v = 0; v < pmf.size(); ++v) {
        expct[v] = n * pmf[v];
        covered += pmf[v];
    }
    expct.back() = n * std::max(0.0, 1.0 - covered);
    for (const auto& [v, c] : h.counts) {
        if (v < 0)
            throw std::invalid_argument("chi_square_test: negative value");
        std::size_t i = static_cast<std::size_t>(v) < pmf.size() ? static_cast<std::size_t>(v) : pmf.size();
        obs[i] += static_cast<double>(c);
    }
    for (std::size_t i = 0; i < obs.size(); ++i)
        res.total_variation += std::abs(obs[i] / n - expct[i] / n);
    res.total_variation /= 2;

    std::vector<double> po, pe;
    double acc_o = 0, acc_e = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        acc_o += obs[i];
        acc_e += expct[i];
        if (acc_e >= min_expected) {
            po.push_back(acc_o);
            pe.push_back(acc_e);
            acc_o = acc_e = 0;
        }
    }
    if (!pe.empty()) {
        po.back() += acc_o;
        pe.back() += acc_e;
    } else {
        po.push_back(acc_o);
        pe.push_back(acc_e);
    }
    for (std::size_t i = 0; i < pe.size(); ++i) {
        if (pe[i] > 0) {
            double d = po[i] - pe[i];
            res.statistic += d * d / pe[i];
        } else if (po[i] > 0) {
            res.statistic = INFINITY;
        }
    }
    res.dof = pe.size() > 1 ? pe.size() - 1 : 0;
    if (res.dof == 0)
        res.p_value = 1;
    else if (std::isinf(res.statistic))
        res.p_value = 0;
    else
        res.p_value = boost::math::gamma_q(res.dof / 2.0, res.statistic / 2.0);
    return res;
}

ChiSquareResult chi_square_test(const Histogram& h, const LawTable& law, double min_expected) {
    return chi_square_test(h, law.masses_double(), min_expected);
}

double binomial_z(std::uint64_t hits, std::uint64_t trials, double p) {
    double n = static_cast<double>(trials);
    double sd = std::sqrt(n * p * (1 - p));
    if (sd == 0)
        return hits == static_cast<std::uint64_t>(std::llround(n * p)) ? 0.0 : INFINITY;
    return (static_cast<double>(hits) - n * p) / sd;
}

double tv_noise_floor(const std::vector<double>& pmf, std::uint64_t n) {
    // E|X/n - p| ~ sqrt(2 p (1-p) / (pi n)) per bin
    const double pi = 3.14159265358979323846;
    double s = 0;
    for (double p : pmf)
        s += std::sqrt(2 * p * (1 - p) / (pi * static_cast<double>(n)));
    return s / 2;
}

} // namespace uipq
