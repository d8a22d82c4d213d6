#pragma once

#include "uipq/exactlaws/counts.hpp"
#include "uipq/exactlaws/rational.hpp"
#include "uipq/skeleton/forest.hpp"
#include "uipq/skeleton/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace uipq::geometry {

using exactlaws::slot_volume_law;

// p + sum over F* of (E[Inn(M_{c_v+1})] - c_v)
Rational hull_volume_conditional_mean(const skeleton::PlaneForest& f);
Rational hull_volume_from_counts(std::size_t p, const std::vector<std::uint32_t>& child_counts);
double hull_volume_conditional_mean_numeric(const skeleton::PlaneForest& f);

// E[Inn(M_b)] as doubles for b = 0..bmax ([0] unused), from the exact values
std::vector<double> slot_means_double(std::size_t bmax);

struct VolumeRow {
    unsigned long r = 0;
    std::size_t trials = 0;
    double mean = 0;   // Monte Carlo mean of the conditional mean
    double stderr_ = 0;
    double scaled = 0; // r^-4 mean
    std::uint64_t seed = 0;
};
struct VolumeSums {
    std::size_t n = 0;
    long double s = 0, s2 = 0;
    void merge(const VolumeSums& o);
};
VolumeSums hull_volume_sums(unsigned long r, std::size_t trials, RngStream& rng);
VolumeRow volume_row(unsigned long r, const VolumeSums& sums, std::uint64_t seed);

// hull skeletons of radius r drawn from rng
VolumeRow hull_volume_experiment(unsigned long r, std::size_t trials, RngStream& rng);

} // namespace uipq::geometry
