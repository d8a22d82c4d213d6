#include "uipq/geometry/enumerate.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace uipq::geometry {

namespace {

struct Partial {
    HalfEdgeMap map;
    // each hole is a closed walk of half-edges still missing a twin, with the hole on their right
    std::vector<std::vector<HalfEdge>> holes;
    std::size_t quads_left = 0;
};

void explore(Partial& s, std::size_t p, HalfEdge root, std::vector<TruncatedQuad>& out) {
    if (s.holes.empty()) {
        if (s.quads_left != 0)
            return;
        TruncatedQuad t{s.map, root};
        auto vid = t.map.vertex_ids();
        std::vector<std::int32_t> bv;
        for (auto h : t.boundary_inner())
            bv.push_back(vid[h]);
        std::sort(bv.begin(), bv.end());
        if (std::adjacent_find(bv.begin(), bv.end()) != bv.end() || bv.size() != p)
            return;
        out.push_back(t.canonical());
        return;
    }
    auto& hole = s.holes.back();
    const HalfEdge h = hole.front();

    if (s.quads_left > 0) {
        Partial t = s;
        HalfEdge q0 = t.map.add_face(4);
        t.map.twin[h] = q0;
        t.map.twin[q0] = h;
        auto& th = t.holes.back();
        th.erase(th.begin());
        th.insert(th.begin(), {q0 + 1, q0 + 2, q0 + 3});
        --t.quads_left;
        explore(t, p, root, out);
    }
    for (std::size_t j = 1; j < hole.size(); ++j) {
        Partial t = s;
        auto walk = std::move(t.holes.back());
        t.holes.pop_back();
        HalfEdge x = walk[j];
        t.map.twin[h] = x;
        t.map.twin[x] = h;
        std::vector<HalfEdge> a(walk.begin() + 1, walk.begin() + j);
        std::vector<HalfEdge> b(walk.begin() + j + 1, walk.end());
        if (!b.empty())
            t.holes.push_back(std::move(b));
        if (!a.empty())
            t.holes.push_back(std::move(a));
        explore(t, p, root, out);
    }
}

} // namespace

std::vector<TruncatedQuad> enumerate_truncated(std::size_t n, std::size_t p) {
    if (n > kEnumerateMaxFaces)
        throw std::invalid_argument("enumerate_truncated: n is capped at 5");
    if (p < 1)
        throw std::invalid_argument("enumerate_truncated: p must be >= 1");
    std::vector<TruncatedQuad> out;
    if (n < p)
        return out;

    Partial s;
    // outer face runs backwards: next(o_j) = o_{j-1}
    for (std::size_t j = 0; j < p; ++j) {
        s.map.next.push_back(static_cast<HalfEdge>((j + p - 1) % p));
        s.map.twin.push_back(kNone);
    }
    std::vector<HalfEdge> beta(p);
    for (std::size_t j = 0; j < p; ++j) {
        beta[j] = s.map.add_face(3);
        s.map.twin[beta[j]] = static_cast<HalfEdge>(j);
        s.map.twin[j] = beta[j];
    }
    std::vector<HalfEdge> walk{beta[0] + 1, beta[0] + 2};
    for (std::size_t j = p - 1; j >= 1; --j) {
        walk.push_back(beta[j] + 1);
        walk.push_back(beta[j] + 2);
    }
    s.holes.push_back(std::move(walk));
    s.quads_left = n - p;
    explore(s, p, beta[0], out);

    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw std::logic_error("enumerate_truncated: duplicate rooted map");
    return out;
}

const std::vector<TruncatedQuad>& truncated_catalog(std::size_t n, std::size_t p) {
    static std::map<std::pair<std::size_t, std::size_t>, std::vector<TruncatedQuad>> cache;
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    auto key = std::make_pair(n, p);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, enumerate_truncated(n, p)).first;
    return it->second;
}

} // namespace uipq::geometry
