#pragma once

#include "uipq/exactlaws/rational.hpp"
#include "uipq/geometry/cylinder.hpp"
#include "uipq/skeleton/counters.hpp"
#include "uipq/skeleton/forest.hpp"
#include "uipq/skeleton/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace uipq::geometry {

// faces with corner labels k-1, k, k+1, k whose diagonal joins the two k-corners;
// returns, left to right, the half-edge of each face of the outermost diagonal cycle
// running from the (k-1)-corner to the right end of the diagonal
std::vector<HalfEdge> extract_maximal_cycle(const CylinderMap& m, std::uint32_t k);

struct GeodesicPath {
    std::vector<HalfEdge> edges;      // each runs one layer down
    std::vector<std::int32_t> vertices; // edges.size() + 1 vertex ids, top first
};
struct Geodesics {
    GeodesicPath left, right;
};
// both paths start at the left end of the tree's root edge
Geodesics downward_geodesics(const CylinderMap& m, std::size_t tree_index);

// bottom positions (index of the left end on the bottom cycle, as the right end of edge index-1)
// reached by the left and right paths, from the forest alone
struct GeodesicEnds {
    std::size_t left, right;
};
GeodesicEnds geodesic_ends(const skeleton::PlaneForest& f, std::size_t tree_index);

struct SeparatingCycle {
    std::size_t N = 0;
    std::uint32_t h = 0;
    std::vector<std::size_t> trees; // maximal-height trees used, in order
    std::vector<HalfEdge> edges;    // closed walk on the assembled map, empty when built from the forest
    std::vector<std::int32_t> vertices;
    std::size_t length() const { return 2 * N * h; }
};
SeparatingCycle krikun_cycle(const skeleton::PlaneForest& f);
SeparatingCycle krikun_cycle(const skeleton::PlaneForest& f, const CylinderMap& m);

// removing the cycle's vertices leaves no path from the remaining bottom vertices to the top
bool separates_by_vertices(const CylinderMap& m, const SeparatingCycle& c);
// no face path from the bottom face to the top face avoids the cycle's edges
bool separates_faces(const CylinderMap& m, const SeparatingCycle& c);

// (pi_{2R} - pi_R) / (1 - pi_R), which is the success parameter of the 3/2-shape factor
Rational cycle_ratio(unsigned long R);

struct CycleTailReport {
    unsigned long R = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double mean = 0;
    std::size_t p50 = 0, p95 = 0, max = 0; // of 2N = L/R
    double p_one = 0;                      // empirical P(N = 1)
    Rational exact_p_one;
    Rational ratio;
    std::vector<std::pair<std::size_t, double>> tail; // a -> empirical P(2N >= a)

    std::string csv_header() const { return "R,trials,mean,p50,p95,max,seed"; }
    std::string csv_row() const;
};
// histogram of 2N_{R,2R}, drawn from the exact law
Histogram sample_cycle_lengths(unsigned long R, std::size_t trials, RngStream& rng);
CycleTailReport cycle_tail_report(unsigned long R, const Histogram& two_n, std::uint64_t seed);
CycleTailReport cycle_length_tail(unsigned long R, std::size_t trials, RngStream& rng);

// exact P(2 N_{R,2R} >= a)
Rational cycle_tail_exact(unsigned long R, std::size_t a);

} // namespace uipq::geometry
