#include "uipq/geometry/truncated_quad.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace uipq::geometry {

std::size_t TruncatedQuad::inner_faces() const {
    std::size_t f = 0;
    map.face_ids(&f);
    return f - 1;
}

std::vector<HalfEdge> TruncatedQuad::boundary_inner() const {
    auto prev = map.prev();
    std::size_t c = boundary_size();
    std::vector<HalfEdge> b{root};
    for (std::size_t j = 1; j < c; ++j)
        b.push_back(map.twin[prev[map.twin[b.back()]]]);
    return b;
}

void TruncatedQuad::validate() const {
    map.check_permutations();
    if (root < 0 || static_cast<std::size_t>(root) >= map.size())
        throw std::invalid_argument("truncated quad: root out of range");
    if (!map.connected())
        throw std::invalid_argument("truncated quad: not connected");
    if (map.euler_characteristic() != 2)
        throw std::invalid_argument("truncated quad: not planar");
    auto fid = map.face_ids();
    auto vid = map.vertex_ids();
    auto outer_face = fid[outer()];
    auto b = boundary_inner();

    std::vector<std::int32_t> bverts, btri;
    for (auto h : b) {
        bverts.push_back(vid[h]);
        if (map.face_degree(h) != 3)
            throw std::invalid_argument("truncated quad: boundary face is not a triangle");
        if (fid[h] == outer_face)
            throw std::invalid_argument("truncated quad: boundary edge is a bridge");
        btri.push_back(fid[h]);
    }
    std::sort(bverts.begin(), bverts.end());
    std::sort(btri.begin(), btri.end());
    if (std::adjacent_find(bverts.begin(), bverts.end()) != bverts.end())
        throw std::invalid_argument("truncated quad: boundary is not simple");
    if (std::adjacent_find(btri.begin(), btri.end()) != btri.end())
        throw std::invalid_argument("truncated quad: two boundary edges share a triangle");

    bool inner_vertex = false;
    for (std::size_t h = 0; h < map.size(); ++h) {
        auto f = fid[h];
        if (f != outer_face && !std::binary_search(btri.begin(), btri.end(), f) &&
            map.face_degree(static_cast<HalfEdge>(h)) != 4)
            throw std::invalid_argument("truncated quad: inner face of degree other than 4");
        inner_vertex = inner_vertex || !std::binary_search(bverts.begin(), bverts.end(), vid[h]);
    }
    if (!inner_vertex)
        throw std::invalid_argument("truncated quad: no inner vertex");
}

TruncatedQuad TruncatedQuad::canonical() const {
    auto order = map.canonical_order(root);
    return TruncatedQuad{map.permuted(order), 0};
}

bool TruncatedQuad::operator<(const TruncatedQuad& o) const {
    return std::tie(map.next, map.twin, root) < std::tie(o.map.next, o.map.twin, o.root);
}

nlohmann::json TruncatedQuad::to_json() const {
    auto j = map_to_json(map);
    j["root"] = root;
    return j;
}

TruncatedQuad TruncatedQuad::from_json(const nlohmann::json& j) {
    TruncatedQuad t{map_from_json(j), j.at("root").get<HalfEdge>()};
    t.validate();
    return t;
}

TruncatedQuad minimal_fill() {
    // 0: root loop (inner), 1: a -> x, 2: x -> a, 3: outer side of the loop
    TruncatedQuad t;
    t.map.next = {1, 2, 0, 3};
    t.map.twin = {3, 2, 1, 0};
    t.root = 0;
    return t.canonical();
}

} // namespace uipq::geometry
