#pragma once

#include "uipq/skeleton/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace uipq::bridge {

// range-minimum over a fixed array in O(1) per query
class SparseTable {
public:
    SparseTable() = default;
    explicit SparseTable(const std::vector<long>& values);
    // min over [i, j], i <= j
    long range_min(std::size_t i, std::size_t j) const;

private:
    std::vector<std::vector<long>> levels_;
};

class DiscreteBridge {
public:
    DiscreteBridge() = default;
    // values b(0..2K); throws unless b(0) = b(2K) = 0 and every step is +-1
    explicit DiscreteBridge(std::vector<long> values);

    std::size_t K() const { return (values_.size() - 1) / 2; }
    std::size_t length() const { return values_.size() - 1; } // 2K
    long operator[](std::size_t i) const { return values_[i]; }
    const std::vector<long>& values() const { return values_; }

    // min over the cyclic interval [i, j] of positions 0..2K-1
    long arc_min(std::size_t i, std::size_t j) const;

    bool operator==(const DiscreteBridge& o) const { return values_ == o.values_; }

private:
    std::vector<long> values_;
    SparseTable table_;
};

DiscreteBridge sample_bridge(std::size_t K, RngStream& rng);
// every bridge of length 2K, in lexicographic order of steps (down before up)
std::vector<DiscreteBridge> all_bridges(std::size_t K);

long cactus_distance(const DiscreteBridge& b, std::size_t i, std::size_t j);
long cactus_distance_naive(const DiscreteBridge& b, std::size_t i, std::size_t j);

// ceil(c r^2), at least 1
std::size_t event_spacing(long r, double c);

// positions m_1 < ... < m_k in 0..2K-1 with every cyclic gap (wrap included) >= ceil(c r^2)
// and all pairwise cactus distances <= 5r
bool detect_event(const DiscreteBridge& b, std::size_t k, long r, double c);
bool detect_event_brute_force(const DiscreteBridge& b, std::size_t k, long r, double c);

DiscreteBridge reroot_bridge(const DiscreteBridge& b, std::size_t ell);

struct EventEstimate {
    std::size_t k = 0, K = 0;
    long r = 0;
    double c = 0;
    std::size_t trials = 0, hits = 0;
    std::uint64_t seed = 0;
    double p_hat() const { return trials ? static_cast<double>(hits) / trials : 0.0; }
    double stderr_() const;
    void merge(const EventEstimate& o) {
        trials += o.trials;
        hits += o.hits;
    }
    static std::string csv_header() { return "k,K,r,c,trials,hits,p_hat,stderr,seed"; }
    std::string csv_row() const;
};
EventEstimate estimate_event_probability(std::size_t k, std::size_t K, long r, double c, std::size_t trials,
                                         RngStream& rng);

} // namespace uipq::bridge
