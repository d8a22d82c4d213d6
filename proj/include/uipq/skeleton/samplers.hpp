#pragma once

#include "uipq/exactlaws/rational.hpp"
#include "uipq/skeleton/forest.hpp"
#include "uipq/skeleton/rng.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace uipq::skeleton {

struct CutoffExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// inverse-CDF sampler over 0..size-1; the mass left past the table is an error
class DiscreteSampler {
public:
    DiscreteSampler() = default;
    DiscreteSampler(std::vector<double> cumulative, std::string label)
        : cumulative_(std::move(cumulative)), label_(std::move(label)) {}

    std::uint32_t sample(RngStream& rng) const;
    std::size_t size() const { return cumulative_.size(); }
    double uncovered() const { return cumulative_.empty() ? 1.0 : 1.0 - cumulative_.back(); }
    const std::vector<double>& cumulative() const { return cumulative_; }

    // masses from next(c) for c = 0, 1, ... until 1 - sum < eps or max_size terms
    template <class F>
    static DiscreteSampler build(F next, double eps, std::size_t max_size, std::string label);

private:
    std::vector<double> cumulative_;
    std::string label_;
};

constexpr double kSamplingEps = 1e-12;
constexpr std::size_t kMaxSupport = std::size_t(1) << 21;

// theta(c) x^c / g(x)
const DiscreteSampler& tilted_offspring(double x);
// theta(c) pi_{d-1}^c / pi_d, the offspring law of a vertex d generations above the forbidden one
const DiscreteSampler& extinct_offspring(std::uint32_t d);
// theta(c) c pi_{d-1}^{c-1} / g'(pi_{d-1}), the spine vertex d generations above the target
const DiscreteSampler& spine_offspring(std::uint32_t d);
const DiscreteSampler& hull_perimeter_sampler(unsigned long r);

// the same pmfs exactly
Rational extinct_pmf_exact(std::uint32_t d, std::uint32_t c);
Rational spine_pmf_exact(std::uint32_t d, std::uint32_t c);

std::uint32_t sample_offspring_tilted(double x, RngStream& rng);
// no vertex at generation m
PlaneTree sample_extinct_tree(std::uint32_t m, RngStream& rng);
// exactly one vertex at generation m
PlaneTree sample_spine_tree(std::uint32_t m, RngStream& rng);

enum class HullVariant { rooted, unrooted };
// rooted: the surviving tree comes first and carries the mark (the F° law);
// unrooted: independent uniform rotation, no mark
PlaneForest sample_hull_skeleton(unsigned long r, RngStream& rng, HullVariant variant = HullVariant::rooted);
PlaneForest sample_annulus_skeleton(unsigned long u, unsigned long w, RngStream& rng);

std::size_t count_max_height_trees(const PlaneForest& f);
bool satisfies_property_P(const PlaneTree& t, const Rational& c0, unsigned long r);
std::size_t count_property_P(const PlaneForest& f, const Rational& c0, unsigned long r);

template <class F>
DiscreteSampler DiscreteSampler::build(F next, double eps, std::size_t max_size, std::string label) {
    std::vector<double> cum;
    long double s = 0;
    for (std::size_t c = 0; c < max_size; ++c) {
        s += next(c);
        cum.push_back(static_cast<double>(s));
        if (1.0L - s < eps)
            break;
    }
    return DiscreteSampler(std::move(cum), std::move(label));
}

} // namespace uipq::skeleton
