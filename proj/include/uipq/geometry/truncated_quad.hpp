#pragma once

#include "uipq/geometry/half_edge_map.hpp"

#include <cstddef>
#include <vector>

namespace uipq::geometry {

// planar map with a distinguished outer face of simple boundary; root is the
// inner half-edge of the root boundary edge
struct TruncatedQuad {
    HalfEdgeMap map;
    HalfEdge root = 0;

    HalfEdge outer() const { return map.twin[root]; }
    std::size_t boundary_size() const { return map.face_degree(outer()); }
    std::size_t inner_faces() const;
    // inner half-edges along the boundary, root first
    std::vector<HalfEdge> boundary_inner() const;

    // throws std::invalid_argument on the first violated condition
    void validate() const;
    TruncatedQuad canonical() const;

    bool operator==(const TruncatedQuad& o) const { return root == o.root && map == o.map; }
    bool operator<(const TruncatedQuad& o) const;

    nlohmann::json to_json() const;
    static TruncatedQuad from_json(const nlohmann::json& j);
};

// boundary 1 and a single inner face: the loop and one pendant edge
TruncatedQuad minimal_fill();

} // namespace uipq::geometry
