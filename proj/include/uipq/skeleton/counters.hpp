#pragma once

#include "uipq/exactlaws/law_table.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

namespace uipq {

// integer histogram; merge is plain addition so shards combine in any order
struct Histogram {
    std::map<long long, std::uint64_t> counts;
    std::uint64_t total = 0;

    void add(long long v, std::uint64_t n = 1) {
        counts[v] += n;
        total += n;
    }
    void merge(const Histogram& o) {
        for (const auto& [v, n] : o.counts)
            counts[v] += n;
        total += o.total;
    }
    std::uint64_t count(long long v) const {
        auto it = counts.find(v);
        return it == counts.end() ? 0 : it->second;
    }
    double frequency(long long v) const;
    double mean() const;
};

struct ChiSquareResult {
    double statistic = 0;
    std::size_t dof = 0;
    double p_value = 1;
    double total_variation = 0;
};

// bins with expected count below min_expected are pooled with their
// right neighbour; the tail past the table forms one last bin
ChiSquareResult chi_square_test(const Histogram& h, const std::vector<double>& pmf,
                                double min_expected = 5.0);
ChiSquareResult chi_square_test(const Histogram& h, const LawTable& law, double min_expected = 5.0);

// expected total variation of an n-sample empirical pmf from its own law
double tv_noise_floor(const std::vector<double>& pmf, std::uint64_t n);

// binomial z-score of an observed count against probability p
double binomial_z(std::uint64_t hits, std::uint64_t trials, double p);

} // namespace uipq
