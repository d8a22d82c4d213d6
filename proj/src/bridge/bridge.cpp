#include "uipq/bridge/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace uipq::bridge {

SparseTable::SparseTable(const std::vector<long>& values) {
    levels_.push_back(values);
    for (std::size_t w = 1; 2 * w <= values.size(); w *= 2) {
        const auto& prev = levels_.back();
        std::vector<long> next(prev.size() - w);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = std::min(prev[i], prev[i + w]);
        levels_.push_back(std::move(next));
    }
}

long SparseTable::range_min(std::size_t i, std::size_t j) const {
    std::size_t len = j - i + 1;
    std::size_t lv = 0;
    while ((std::size_t(2) << lv) <= len)
        ++lv;
    return std::min(levels_[lv][i], levels_[lv][j + 1 - (std::size_t(1) << lv)]);
}

DiscreteBridge::DiscreteBridge(std::vector<long> values) : values_(std::move(values)) {
    if (values_.size() < 3 || values_.size() % 2 == 0)
        throw std::invalid_argument("bridge: need 2K+1 values with K >= 1");
    if (values_.front() != 0 || values_.back() != 0)
        throw std::invalid_argument("bridge: must start and end at 0");
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (std::labs(values_[i] - values_[i - 1]) != 1)
            throw std::invalid_argument("bridge: steps must be +1 or -1");
    table_ = SparseTable(std::vector<long>(values_.begin(), values_.end() - 1));
}

long DiscreteBridge::arc_min(std::size_t i, std::size_t j) const {
    if (i <= j)
        return table_.range_min(i, j);
    return std::min(table_.range_min(i, length() - 1), table_.range_min(0, j));
}

DiscreteBridge sample_bridge(std::size_t K, RngStream& rng) {
    if (K < 1)
        throw std::invalid_argument("sample_bridge: K must be >= 1");
    std::vector<int> steps(2 * K, -1);
    std::fill(steps.begin(), steps.begin() + K, 1);
    for (std::size_t i = steps.size() - 1; i > 0; --i)
        std::swap(steps[i], steps[rng.below(i + 1)]);
    std::vector<long> v{0};
    for (auto s : steps)
        v.push_back(v.back() + s);
    return DiscreteBridge(std::move(v));
}

std::vector<DiscreteBridge> all_bridges(std::size_t K) {
    if (K < 1)
        throw std::invalid_argument("all_bridges: K must be >= 1");
    std::vector<int> steps(2 * K, -1);
    std::fill(steps.begin() + K, steps.end(), 1);
    std::vector<DiscreteBridge> out;
    do {
        std::vector<long> v{0};
        for (auto s : steps)
            v.push_back(v.back() + s);
        out.emplace_back(std::move(v));
    } while (std::next_permutation(steps.begin(), steps.end()));
    return out;
}

long cactus_distance(const DiscreteBridge& b, std::size_t i, std::size_t j) {
    if (i >= b.length() || j >= b.length())
        throw std::out_of_range("cactus_distance: position out of range");
    if (i == j)
        return 0;
    return b[i] + b[j] - 2 * std::max(b.arc_min(i, j), b.arc_min(j, i));
}

long cactus_distance_naive(const DiscreteBridge& b, std::size_t i, std::size_t j) {
    const std::size_t n = b.length();
    auto arc = [&](std::size_t a, std::size_t z) {
        long m = b[a];
        for (std::size_t x = a; x != z; x = (x + 1) % n)
            m = std::min(m, b[(x + 1) % n]);
        return m;
    };
    return b[i] + b[j] - 2 * std::max(arc(i, j), arc(j, i));
}

std::size_t event_spacing(long r, double c) {
    double s = std::ceil(c * static_cast<double>(r) * static_cast<double>(r) - 1e-12);
    return s < 1 ? 1 : static_cast<std::size_t>(s);
}

namespace {

void check_event_args(std::size_t k, long r, double c) {
    if (k < 2 || r < 1 || !(c > 0))
        throw std::invalid_argument("event: need k >= 2, r >= 1, c > 0");
}

// k eligible positions on the circle with all gaps >= s, greedy from every start
bool spaced_choice(const std::vector<char>& eligible, std::size_t k, std::size_t s) {
    const std::size_t n = eligible.size();
    std::vector<std::size_t> next_ok(n + 1, n);
    for (std::size_t x = n; x-- > 0;)
        next_ok[x] = eligible[x] ? x : next_ok[x + 1];
    for (std::size_t first = next_ok[0]; first < n; first = next_ok[first + 1]) {
        std::size_t last = first, picked = 1;
        while (picked < k) {
            std::size_t want = last + s;
            if (want >= n)
                break;
            std::size_t x = next_ok[want];
            if (x >= n)
                break;
            last = x;
            ++picked;
        }
        if (picked < k)
            continue;
        if (first + n - last >= s)
            return true;
    }
    return false;
}

} // namespace

bool detect_event(const DiscreteBridge& b, std::size_t k, long r, double c) {
    check_event_args(k, r, c);
    const std::size_t n = b.length(), s = event_spacing(r, c);
    if (k * s > n)
        return false;
    const long D = 5 * r;
    std::vector<char> eligible(n);
    std::vector<long> dx(n), dy(n);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y)
            dx[y] = cactus_distance(b, x, y);
        // ball around the vertex at position x
        std::size_t cnt = 0;
        for (std::size_t y = 0; y < n; ++y) {
            eligible[y] = 2 * dx[y] <= D;
            cnt += eligible[y];
        }
        if (cnt >= k && spaced_choice(eligible, k, s))
            return true;
        // ball around the midpoint of the step from x to x+1
        std::size_t x1 = (x + 1) % n;
        cnt = 0;
        for (std::size_t y = 0; y < n; ++y) {
            dy[y] = cactus_distance(b, x1, y);
            eligible[y] = dx[y] + dy[y] <= D;
            cnt += eligible[y];
        }
        if (cnt >= k && spaced_choice(eligible, k, s))
            return true;
    }
    return false;
}

bool detect_event_brute_force(const DiscreteBridge& b, std::size_t k, long r, double c) {
    check_event_args(k, r, c);
    const std::size_t n = b.length(), s = event_spacing(r, c);
    const long D = 5 * r;
    std::vector<std::size_t> pick;
    // plain depth-first search over increasing tuples
    auto rec = [&](auto&& self, std::size_t from) -> bool {
        if (pick.size() == k)
            return pick.front() + n - pick.back() >= s;
        for (std::size_t x = from; x < n; ++x) {
            bool ok = true;
            for (auto y : pick)
                ok = ok && cactus_distance_naive(b, x, y) <= D;
            if (!ok)
                continue;
            pick.push_back(x);
            bool found = self(self, x + s);
            pick.pop_back();
            if (found)
                return true;
        }
        return false;
    };
    return rec(rec, 0);
}

DiscreteBridge reroot_bridge(const DiscreteBridge& b, std::size_t ell) {
    const std::size_t n = b.length();
    if (ell >= n)
        throw std::invalid_argument("reroot_bridge: ell out of range");
    std::vector<long> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        v[i] = b[(ell + i) % n] - b[ell];
    return DiscreteBridge(std::move(v));
}

double EventEstimate::stderr_() const {
    if (trials == 0)
        return 0;
    double p = p_hat();
    return std::sqrt(p * (1 - p) / trials);
}

std::string EventEstimate::csv_row() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%ld,%.17g,%zu,%zu,%.17g,%.17g,%llu", k, K, r, c, trials, hits, p_hat(),
                  stderr_(), static_cast<unsigned long long>(seed));
    return buf;
}

EventEstimate estimate_event_probability(std::size_t k, std::size_t K, long r, double c, std::size_t trials,
                                         RngStream& rng) {
    check_event_args(k, r, c);
    if (trials < 1)
        throw std::invalid_argument("estimate_event_probability: trials must be >= 1");
    EventEstimate e{k, K, r, c, trials, 0, rng.seed()};
    if (k * event_spacing(r, c) > 2 * K)
        return e;
    for (std::size_t t = 0; t < trials; ++t)
        e.hits += detect_event(sample_bridge(K, rng), k, r, c);
    return e;
}

} // namespace uipq::bridge
