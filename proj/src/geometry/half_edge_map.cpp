#include "uipq/geometry/half_edge_map.hpp"

#include <deque>
#include <stdexcept>

namespace uipq::geometry {

HalfEdge HalfEdgeMap::add_face(std::size_t degree) {
    auto first = static_cast<HalfEdge>(next.size());
    for (std::size_t i = 0; i < degree; ++i) {
        next.push_back(first + static_cast<HalfEdge>((i + 1) % degree));
        twin.push_back(kNone);
    }
    return first;
}

std::vector<HalfEdge> HalfEdgeMap::prev() const {
    std::vector<HalfEdge> p(size(), kNone);
    for (std::size_t h = 0; h < size(); ++h)
        p[next[h]] = static_cast<HalfEdge>(h);
    return p;
}

namespace {

template <class Step>
std::vector<std::int32_t> orbits(std::size_t n, Step step, std::size_t* count) {
    std::vector<std::int32_t> id(n, -1);
    std::int32_t c = 0;
    for (std::size_t h = 0; h < n; ++h) {
        if (id[h] >= 0)
            continue;
        auto x = static_cast<HalfEdge>(h);
        do {
            id[x] = c;
            x = step(x);
        } while (x != static_cast<HalfEdge>(h));
        ++c;
    }
    if (count)
        *count = static_cast<std::size_t>(c);
    return id;
}

} // namespace

std::vector<std::int32_t> HalfEdgeMap::vertex_ids(std::size_t* count) const {
    return orbits(size(), [this](HalfEdge h) { return rotate_cw(h); }, count);
}

std::vector<std::int32_t> HalfEdgeMap::face_ids(std::size_t* count) const {
    return orbits(size(), [this](HalfEdge h) { return next[h]; }, count);
}

std::size_t HalfEdgeMap::face_degree(HalfEdge h) const {
    std::size_t d = 0;
    HalfEdge x = h;
    do {
        ++d;
        x = next[x];
    } while (x != h);
    return d;
}

std::vector<HalfEdge> HalfEdgeMap::face_of(HalfEdge h) const {
    std::vector<HalfEdge> out;
    HalfEdge x = h;
    do {
        out.push_back(x);
        x = next[x];
    } while (x != h);
    return out;
}

void HalfEdgeMap::check_permutations() const {
    if (twin.size() != next.size())
        throw std::invalid_argument("map: next and twin differ in size");
    std::vector<bool> seen(size(), false);
    for (auto h : next) {
        if (h < 0 || static_cast<std::size_t>(h) >= size() || seen[h])
            throw std::invalid_argument("map: next is not a permutation");
        seen[h] = true;
    }
    for (std::size_t h = 0; h < size(); ++h) {
        auto t = twin[h];
        if (t < 0 || static_cast<std::size_t>(t) >= size() || t == static_cast<HalfEdge>(h) ||
            twin[t] != static_cast<HalfEdge>(h))
            throw std::invalid_argument("map: twin is not a fixed-point-free involution");
    }
}

bool HalfEdgeMap::connected() const {
    if (size() == 0)
        return true;
    std::vector<bool> seen(size(), false);
    std::vector<HalfEdge> st{0};
    seen[0] = true;
    std::size_t n = 1;
    while (!st.empty()) {
        auto h = st.back();
        st.pop_back();
        for (auto x : {next[h], twin[h]})
            if (!seen[x]) {
                seen[x] = true;
                ++n;
                st.push_back(x);
            }
    }
    return n == size();
}

long HalfEdgeMap::euler_characteristic() const {
    std::size_t v = 0, f = 0;
    vertex_ids(&v);
    face_ids(&f);
    return static_cast<long>(v) - static_cast<long>(size() / 2) + static_cast<long>(f);
}

std::vector<HalfEdge> HalfEdgeMap::canonical_order(HalfEdge root) const {
    std::vector<HalfEdge> order;
    std::vector<bool> seen(size(), false);
    std::deque<HalfEdge> q{root};
    seen[root] = true;
    while (!q.empty()) {
        auto h = q.front();
        q.pop_front();
        order.push_back(h);
        for (auto x : {next[h], twin[h]})
            if (!seen[x]) {
                seen[x] = true;
                q.push_back(x);
            }
    }
    if (order.size() != size())
        throw std::invalid_argument("map: not connected");
    return order;
}

HalfEdgeMap HalfEdgeMap::permuted(const std::vector<HalfEdge>& order) const {
    std::vector<HalfEdge> inv(size());
    for (std::size_t i = 0; i < order.size(); ++i)
        inv[order[i]] = static_cast<HalfEdge>(i);
    HalfEdgeMap out;
    out.next.resize(size());
    out.twin.resize(size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.next[i] = inv[next[order[i]]];
        out.twin[i] = inv[twin[order[i]]];
    }
    return out;
}

std::vector<HalfEdge> HalfEdgeMap::compact(const std::vector<bool>& keep) {
    std::vector<HalfEdge> remap(size(), kNone);
    HalfEdge n = 0;
    for (std::size_t h = 0; h < size(); ++h)
        if (keep[h])
            remap[h] = n++;
    std::vector<HalfEdge> nx(n), tw(n);
    for (std::size_t h = 0; h < size(); ++h) {
        if (!keep[h])
            continue;
        nx[remap[h]] = remap[next[h]];
        tw[remap[h]] = remap[twin[h]];
    }
    next = std::move(nx);
    twin = std::move(tw);
    return remap;
}

nlohmann::json map_to_json(const HalfEdgeMap& m) {
    std::vector<HalfEdge> rot(m.size());
    for (std::size_t h = 0; h < m.size(); ++h)
        rot[h] = m.rotate_cw(static_cast<HalfEdge>(h));
    return {{"next", rot}, {"twin", m.twin}};
}

HalfEdgeMap map_from_json(const nlohmann::json& j) {
    HalfEdgeMap m;
    auto rot = j.at("next").get<std::vector<HalfEdge>>();
    m.twin = j.at("twin").get<std::vector<HalfEdge>>();
    if (rot.size() != m.twin.size())
        throw std::invalid_argument("map json: next and twin differ in size");
    m.next.resize(rot.size());
    // face successor is sigma o twin
    for (std::size_t h = 0; h < rot.size(); ++h) {
        auto t = m.twin[h];
        if (t < 0 || static_cast<std::size_t>(t) >= rot.size())
            throw std::invalid_argument("map json: twin out of range");
        m.next[h] = rot[t];
    }
    m.check_permutations();
    return m;
}

} // namespace uipq::geometry
