#include "uipq/geometry/volume.hpp"

#include "uipq/exactlaws/laws.hpp"
#include "uipq/skeleton/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace uipq::geometry {

namespace el = uipq::exactlaws;
using skeleton::PlaneForest;

namespace {

std::vector<std::uint32_t> inner_counts(const PlaneForest& f) {
    std::vector<std::uint32_t> out;
    for (const auto& t : f.trees()) {
        auto d = t.depths();
        for (std::size_t v = 0; v < d.size(); ++v)
            if (d[v] < f.height_cap())
                out.push_back(t.children(v));
    }
    return out;
}

} // namespace

Rational hull_volume_from_counts(std::size_t p, const std::vector<std::uint32_t>& child_counts) {
    std::uint32_t cmax = 0;
    for (auto c : child_counts)
        cmax = std::max(cmax, c);
    auto means = el::slot_mean_volumes(cmax + 1);
    Rational s(static_cast<long>(p));
    for (auto c : child_counts)
        s += means[c + 1] - static_cast<long>(c);
    return s;
}

Rational hull_volume_conditional_mean(const PlaneForest& f) {
    return hull_volume_from_counts(f.p(), inner_counts(f));
}

std::vector<double> slot_means_double(std::size_t bmax) {
    static std::vector<double> cache;
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    if (cache.size() <= bmax) {
        std::size_t n = 64;
        while (n <= bmax)
            n *= 2;
        auto exact = el::slot_mean_volumes(n);
        cache.assign(exact.size(), 0.0);
        for (std::size_t b = 1; b < exact.size(); ++b)
            cache[b] = to_double(exact[b]);
    }
    return std::vector<double>(cache.begin(), cache.begin() + bmax + 1);
}

double hull_volume_conditional_mean_numeric(const PlaneForest& f) {
    auto counts = inner_counts(f);
    std::uint32_t cmax = 0;
    for (auto c : counts)
        cmax = std::max(cmax, c);
    auto means = slot_means_double(cmax + 1);
    long double s = static_cast<long double>(f.p());
    for (auto c : counts)
        s += means[c + 1] - c;
    return static_cast<double>(s);
}

void VolumeSums::merge(const VolumeSums& o) {
    n += o.n;
    s += o.s;
    s2 += o.s2;
}

VolumeSums hull_volume_sums(unsigned long r, std::size_t trials, RngStream& rng) {
    if (r < 1)
        throw std::invalid_argument("hull_volume_sums: need r >= 1");
    VolumeSums acc;
    for (std::size_t t = 0; t < trials; ++t) {
        auto f = skeleton::sample_hull_skeleton(r, rng);
        long double v = hull_volume_conditional_mean_numeric(f);
        acc.n += 1;
        acc.s += v;
        acc.s2 += v * v;
    }
    return acc;
}

VolumeRow volume_row(unsigned long r, const VolumeSums& sums, std::uint64_t seed) {
    if (sums.n < 1)
        throw std::invalid_argument("volume_row: no samples");
    VolumeRow row;
    row.r = r;
    row.trials = sums.n;
    row.seed = seed;
    long double n = sums.n;
    long double mean = sums.s / n;
    long double var = sums.n > 1 ? (sums.s2 - n * mean * mean) / (n - 1) : 0;
    row.mean = static_cast<double>(mean);
    row.stderr_ = static_cast<double>(std::sqrt(std::max(0.0L, var) / n));
    row.scaled = row.mean / std::pow(static_cast<double>(r), 4);
    return row;
}

VolumeRow hull_volume_experiment(unsigned long r, std::size_t trials, RngStream& rng) {
    if (r < 1 || trials < 1)
        throw std::invalid_argument("hull_volume_experiment: need r >= 1 and trials >= 1");
    std::uint64_t seed = rng.seed();
    return volume_row(r, hull_volume_sums(r, trials, rng), seed);
}

} // namespace uipq::geometry
