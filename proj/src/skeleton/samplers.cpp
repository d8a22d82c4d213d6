#include "uipq/skeleton/samplers.hpp"

#include "uipq/exactlaws/laws.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace uipq::skeleton {

namespace el = uipq::exactlaws;

std::uint32_t DiscreteSampler::sample(RngStream& rng) const {
    double u = rng.uniform();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end())
        throw CutoffExceeded(label_ + ": draw landed beyond the tabulated support");
    return static_cast<std::uint32_t>(it - cumulative_.begin());
}

namespace {

std::mutex cache_mutex;

// theta as long double, grown by doubling
std::shared_ptr<const std::vector<long double>> theta_values(std::size_t kmax) {
    static std::shared_ptr<const std::vector<long double>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    if (!cache || cache->size() <= kmax) {
        std::size_t n = 1024;
        while (n <= kmax)
            n *= 2;
        cache = std::make_shared<const std::vector<long double>>(el::theta_numeric_table(n));
    }
    return cache;
}

// theta(c) x^c scaled by norm, with theta fetched in growing blocks
template <class Term>
DiscreteSampler build_theta_sampler(Term term, std::string label) {
    std::size_t have = 4096;
    auto th = theta_values(have);
    auto next = [&](std::size_t c) -> long double {
        if (c >= th->size())
            th = theta_values(std::min(2 * c, kMaxSupport));
        return term(c, (*th)[c]);
    };
    return DiscreteSampler::build(next, kSamplingEps, kMaxSupport, std::move(label));
}

template <class Key>
using SamplerCache = std::map<Key, std::unique_ptr<DiscreteSampler>>;

template <class Key, class Make>
const DiscreteSampler& cached(SamplerCache<Key>& cache, std::mutex& m, const Key& k, Make make) {
    {
        std::lock_guard<std::mutex> lock(m);
        auto it = cache.find(k);
        if (it != cache.end())
            return *it->second;
    }
    auto s = std::make_unique<DiscreteSampler>(make());
    std::lock_guard<std::mutex> lock(m);
    auto [it, fresh] = cache.emplace(k, std::move(s));
    return *it->second;
}

} // namespace

const DiscreteSampler& tilted_offspring(double x) {
    if (!(x >= 0) || x > 1)
        throw std::domain_error("tilted offspring: x must lie in [0,1]");
    static SamplerCache<double> cache;
    static std::mutex m;
    return cached(cache, m, x, [x] {
        long double g = x < 1 ? el::g_theta(x) : 1.0L;
        long double lx = std::log(static_cast<long double>(x));
        return build_theta_sampler(
            [&](std::size_t c, long double th) -> long double {
                if (c == 0)
                    return th / g;
                if (x == 0)
                    return 0;
                return th * std::exp(c * lx) / g;
            },
            "tilted offspring");
    });
}

const DiscreteSampler& extinct_offspring(std::uint32_t d) {
    if (d < 1)
        throw std::invalid_argument("extinct offspring: depth must be >= 1");
    static SamplerCache<std::uint32_t> cache;
    static std::mutex m;
    return cached(cache, m, d, [d] {
        long double x = to_long_double(el::pi(d - 1));
        long double norm = to_long_double(el::pi(d));
        long double lx = std::log(x);
        return build_theta_sampler(
            [&](std::size_t c, long double th) -> long double {
                if (c == 0)
                    return th / norm;
                if (x == 0)
                    return 0;
                return th * std::exp(c * lx) / norm;
            },
            "extinct offspring");
    });
}

const DiscreteSampler& spine_offspring(std::uint32_t d) {
    if (d < 1)
        throw std::invalid_argument("spine offspring: depth must be >= 1");
    static SamplerCache<std::uint32_t> cache;
    static std::mutex m;
    return cached(cache, m, d, [d] {
        long double x = to_long_double(el::pi(d - 1));
        long double norm = to_long_double(el::g_theta_prime_at_pi(d - 1));
        long double lx = std::log(x);
        return build_theta_sampler(
            [&](std::size_t c, long double th) -> long double {
                if (c == 0)
                    return 0;
                if (c == 1)
                    return th / norm;
                if (x == 0)
                    return 0;
                return th * c * std::exp((c - 1) * lx) / norm;
            },
            "spine offspring");
    });
}

const DiscreteSampler& hull_perimeter_sampler(unsigned long r) {
    if (r < 1)
        throw std::invalid_argument("hull perimeter sampler: r must be >= 1");
    static SamplerCache<unsigned long> cache;
    static std::mutex m;
    return cached(cache, m, r, [r] {
        std::size_t pmax = 256;
        for (;;) {
            auto masses = el::hull_mass_numeric(r, pmax);
            long double s = 0;
            for (auto x : masses)
                s += x;
            if (1.0L - s < kSamplingEps || pmax >= kMaxSupport)
                return DiscreteSampler::build([&](std::size_t c) { return masses[c]; }, kSamplingEps,
                                              masses.size(), "hull perimeter");
            pmax *= 2;
        }
    });
}

Rational extinct_pmf_exact(std::uint32_t d, std::uint32_t c) {
    if (d < 1)
        throw std::invalid_argument("extinct pmf: depth must be >= 1");
    return el::theta(c) * uipq::pow(el::pi(d - 1), c) / el::pi(d);
}

Rational spine_pmf_exact(std::uint32_t d, std::uint32_t c) {
    if (d < 1)
        throw std::invalid_argument("spine pmf: depth must be >= 1");
    if (c == 0)
        return Rational(0);
    return el::theta(c) * c * uipq::pow(el::pi(d - 1), c - 1) / el::g_theta_prime_at_pi(d - 1);
}

std::uint32_t sample_offspring_tilted(double x, RngStream& rng) {
    return tilted_offspring(x).sample(rng);
}

namespace {

struct DepthTables {
    std::vector<const DiscreteSampler*> ext, sp;
};

const DepthTables& depth_tables(std::uint32_t m) {
    static std::map<std::uint32_t, std::unique_ptr<DepthTables>> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(m);
        if (it != cache.end())
            return *it->second;
    }
    auto t = std::make_unique<DepthTables>();
    t->ext.assign(m + 1, nullptr);
    t->sp.assign(m + 1, nullptr);
    for (std::uint32_t d = 1; d <= m; ++d) {
        t->ext[d] = &extinct_offspring(d);
        t->sp[d] = &spine_offspring(d);
    }
    std::lock_guard<std::mutex> lock(mtx);
    return *cache.emplace(m, std::move(t)).first->second;
}

// preorder generation; each stack entry is (generations left above the cap, on spine)
PlaneTree grow(std::uint32_t m, bool spine, RngStream& rng) {
    const auto& tables = depth_tables(m);
    const auto& ext = tables.ext;
    const auto& sp = tables.sp;
    std::vector<std::uint32_t> counts;
    std::vector<std::pair<std::uint32_t, bool>> st{{m, spine}};
    std::vector<std::pair<std::uint32_t, bool>> kids;
    while (!st.empty()) {
        auto [d, on_spine] = st.back();
        st.pop_back();
        if (d == 0) {
            counts.push_back(0);
            continue;
        }
        std::uint32_t c = on_spine ? sp[d]->sample(rng) : ext[d]->sample(rng);
        counts.push_back(c);
        kids.assign(c, {d - 1, false});
        if (on_spine)
            kids[rng.below(c)].second = true;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it)
            st.push_back(*it);
    }
    return PlaneTree(std::move(counts));
}

} // namespace

PlaneTree sample_extinct_tree(std::uint32_t m, RngStream& rng) {
    if (m < 1)
        throw std::invalid_argument("sample_extinct_tree: m must be >= 1");
    return grow(m, false, rng);
}

PlaneTree sample_spine_tree(std::uint32_t m, RngStream& rng) {
    if (m < 1)
        throw std::invalid_argument("sample_spine_tree: m must be >= 1");
    return grow(m, true, rng);
}

namespace {

std::size_t unique_vertex_at(const PlaneTree& t, std::uint32_t g) {
    auto d = t.depths();
    for (std::size_t v = 0; v < d.size(); ++v)
        if (d[v] == g)
            return v;
    throw std::logic_error("no vertex at the requested generation");
}

} // namespace

PlaneForest sample_hull_skeleton(unsigned long r, RngStream& rng, HullVariant variant) {
    if (r < 1)
        throw std::invalid_argument("sample_hull_skeleton: r must be >= 1");
    std::size_t q = hull_perimeter_sampler(r).sample(rng);
    if (q < 1)
        throw std::logic_error("hull perimeter sampled 0");
    auto h = static_cast<std::uint32_t>(r);
    std::vector<PlaneTree> trees;
    trees.reserve(q);
    trees.push_back(sample_spine_tree(h, rng));
    for (std::size_t i = 1; i < q; ++i)
        trees.push_back(sample_extinct_tree(h, rng));
    if (variant == HullVariant::rooted) {
        Distinguished mark{0, unique_vertex_at(trees[0], h)};
        return PlaneForest(std::move(trees), h, mark);
    }
    std::size_t k = rng.below(q);
    std::rotate(trees.begin(), trees.begin() + k, trees.end());
    return PlaneForest(std::move(trees), h);
}

PlaneForest sample_annulus_skeleton(unsigned long u, unsigned long w, RngStream& rng) {
    if (u >= w)
        throw std::invalid_argument("sample_annulus_skeleton: need u < w");
    auto f = sample_hull_skeleton(w, rng, HullVariant::rooted);
    if (u == 0)
        return f;
    return f.truncated(static_cast<std::uint32_t>(w - u));
}

std::size_t count_max_height_trees(const PlaneForest& f) {
    std::size_t n = 0;
    for (const auto& t : f.trees())
        n += t.height() == f.height_cap();
    return n;
}

bool satisfies_property_P(const PlaneTree& t, const Rational& c0, unsigned long r) {
    auto d = t.depths();
    std::size_t hits = 0;
    for (std::size_t v = 0; v < d.size(); ++v)
        hits += d[v] + 1 == 2 * r && t.children(v) > 0;
    return Rational(static_cast<long>(hits)) >= c0 * static_cast<long>(r * r);
}

std::size_t count_property_P(const PlaneForest& f, const Rational& c0, unsigned long r) {
    if (f.height_cap() != 2 * r)
        throw std::invalid_argument("count_property_P: forest height cap must equal 2r");
    std::size_t n = 0;
    for (const auto& t : f.trees())
        n += satisfies_property_P(t, c0, r);
    return n;
}

} // namespace uipq::skeleton
