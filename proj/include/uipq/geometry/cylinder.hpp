#pragma once

#include "uipq/geometry/truncated_quad.hpp"
#include "uipq/skeleton/forest.hpp"
#include "uipq/skeleton/rng.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace uipq::geometry {

using VertexKey = std::pair<std::size_t, std::size_t>; // (tree, preorder id)

struct SlotFill {
    std::size_t inner_faces = 0;
    std::shared_ptr<const TruncatedQuad> quad; // null when only the volume is kept

    bool is_explicit() const { return quad != nullptr; }
    static SlotFill volume(std::size_t n) { return SlotFill{n, nullptr}; }
    static SlotFill explicit_fill(const TruncatedQuad& t);
};
using FillMap = std::map<VertexKey, SlotFill>;

// one edge of the layer boundary at distance k from the bottom; for k >= 1
// d runs from its left end down to the apex and r from the apex up to its right end
struct LayerEdge {
    VertexKey vertex;
    HalfEdge d = kNone;
    HalfEdge r = kNone;
    HalfEdge upper = kNone; // bottom layer only: the inner side, running left to right
    std::size_t apex = 0;   // index in the layer below whose right end is the apex
};

struct CylinderMap {
    HalfEdgeMap map;
    HalfEdge root = kNone;   // inner side of a bottom edge
    HalfEdge bottom = kNone; // a half-edge of the bottom face
    HalfEdge top = kNone;    // a half-edge of the top face
    std::uint32_t height = 0;
    std::vector<std::uint32_t> labels; // by vertex id
    std::vector<std::int32_t> vertex;  // vertex id of each half-edge's origin
    // filled by assemble: layers[k] lists the edges of the k-th boundary left to right
    std::vector<std::vector<LayerEdge>> layers;

    std::size_t p() const { return map.face_degree(bottom); }
    std::size_t q() const { return map.face_degree(top); }
    std::size_t inner_faces() const;
    std::uint32_t label_of(HalfEdge h) const { return labels[vertex[h]]; }

    // recompute vertex ids and distances from the bottom cycle
    void relabel();
    // throws std::invalid_argument on the first violated invariant
    void validate() const;

    nlohmann::json to_json() const;
};

CylinderMap assemble(const skeleton::PlaneForest& f, const FillMap& fills);

struct Decomposition {
    skeleton::PlaneForest forest;
    FillMap fills;
};
Decomposition decompose(const CylinderMap& m);

// inner faces predicted by the forest: p + sum over F* of (Inn(M_v) - c_v)
std::size_t predicted_inner_faces(const skeleton::PlaneForest& f, const FillMap& fills);

// (generation g vertices in left-to-right order) for g = 0..cap
std::vector<std::vector<VertexKey>> generations(const skeleton::PlaneForest& f);

// small random instance: forest of height h with at most max_vertices vertices,
// a distinguished vertex in tree 0 and fills drawn from the enumerated catalog
struct Instance {
    skeleton::PlaneForest forest;
    FillMap fills;
};
Instance random_instance(std::uint32_t h, std::size_t max_vertices, RngStream& rng);

} // namespace uipq::geometry
