#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace uipq::geometry {

using HalfEdge = std::int32_t;
constexpr HalfEdge kNone = -1;

// faces are the cycles of next (face on the left, counterclockwise);
// the vertex rotation is sigma = next o twin, clockwise around the origin
struct HalfEdgeMap {
    std::vector<HalfEdge> next;
    std::vector<HalfEdge> twin;

    std::size_t size() const { return next.size(); }
    HalfEdge add_face(std::size_t degree); // returns the first half-edge; next is cyclic
    std::vector<HalfEdge> prev() const;
    HalfEdge rotate_cw(HalfEdge h) const { return next[twin[h]]; }

    // orbit ids; *_count set the number of orbits
    std::vector<std::int32_t> vertex_ids(std::size_t* count = nullptr) const;
    std::vector<std::int32_t> face_ids(std::size_t* count = nullptr) const;
    std::size_t face_degree(HalfEdge h) const;
    std::vector<HalfEdge> face_of(HalfEdge h) const;

    // next and twin are permutations, twin is a fixed-point-free involution
    void check_permutations() const;
    bool connected() const;
    // V - E + F
    long euler_characteristic() const;

    // relabel so that ids appear in breadth-first order from root; returns old id of each new id
    std::vector<HalfEdge> canonical_order(HalfEdge root) const;
    HalfEdgeMap permuted(const std::vector<HalfEdge>& order) const; // new i is old order[i]

    // drop every half-edge with keep[h] == false; returns old -> new (kNone when dropped)
    std::vector<HalfEdge> compact(const std::vector<bool>& keep);

    bool operator==(const HalfEdgeMap& o) const { return next == o.next && twin == o.twin; }
};

// vertex rotation of the map for export, as the "next" array of a rotation system
nlohmann::json map_to_json(const HalfEdgeMap& m);
HalfEdgeMap map_from_json(const nlohmann::json& j);

} // namespace uipq::geometry
