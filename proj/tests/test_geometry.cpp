#include "uipq/exactlaws/counts.hpp"
#include "uipq/exactlaws/laws.hpp"
#include "uipq/geometry/cycles.hpp"
#include "uipq/geometry/cylinder.hpp"
#include "uipq/geometry/enumerate.hpp"
#include "uipq/geometry/half_edge_map.hpp"
#include "uipq/geometry/truncated_quad.hpp"
#include "uipq/geometry/volume.hpp"
#include "uipq/skeleton/counters.hpp"
#include "uipq/skeleton/forest.hpp"
#include "uipq/skeleton/rng.hpp"
#include "uipq/skeleton/samplers.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace uipq;
using namespace uipq::geometry;
namespace el = uipq::exactlaws;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

bool same_fills(const FillMap& a, const FillMap& b) {
    if (a.size() != b.size())
        return false;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        if (it == b.end() || it->second.inner_faces != v.inner_faces)
            return false;
        if (v.quad && (!it->second.quad || !(*it->second.quad == *v.quad)))
            return false;
    }
    return true;
}

CylinderMap shuffled(const CylinderMap& m, RngStream& rng) {
    std::vector<HalfEdge> order(m.map.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);
    std::vector<HalfEdge> inv(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        inv[order[i]] = static_cast<HalfEdge>(i);
    CylinderMap out;
    out.map = m.map.permuted(order);
    out.root = inv[m.root];
    out.bottom = inv[m.bottom];
    out.top = inv[m.top];
    out.height = m.height;
    out.relabel();
    return out;
}

} // namespace

TEST_CASE("half-edge maps") {
    HalfEdgeMap m;
    auto a = m.add_face(4);
    CHECK(a == 0);
    CHECK(m.face_degree(0) == 4);
    CHECK(m.prev()[0] == 3);
    // glue a square to itself along two opposite pairs: a torus
    m.twin = {2, 3, 0, 1};
    m.check_permutations();
    CHECK(m.euler_characteristic() == 0);
    // two squares glued along all four sides: a sphere
    HalfEdgeMap s;
    s.add_face(4);
    s.add_face(4);
    s.twin = {7, 6, 5, 4, 3, 2, 1, 0};
    s.check_permutations();
    CHECK(s.connected());
    CHECK(s.euler_characteristic() == 2);
    std::size_t nv = 0, nf = 0;
    s.vertex_ids(&nv);
    s.face_ids(&nf);
    CHECK(nv == 4);
    CHECK(nf == 2);
    CHECK(map_from_json(map_to_json(s)) == s);

    HalfEdgeMap bad;
    bad.add_face(2);
    bad.twin = {0, 1};
    CHECK_THROWS(bad.check_permutations());
}

TEST_CASE("canonical order is a relabeling invariant") {
    auto t = minimal_fill();
    t.validate();
    CHECK(t.boundary_size() == 1);
    CHECK(t.inner_faces() == 1);
    CHECK(t.map.euler_characteristic() == 2);
    RngStream rng(11);
    for (const auto& x : enumerate_truncated(3, 2)) {
        std::vector<HalfEdge> order(x.map.size());
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);
        std::vector<HalfEdge> inv(order.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            inv[order[i]] = static_cast<HalfEdge>(i);
        TruncatedQuad y{x.map.permuted(order), inv[x.root]};
        CHECK(y.canonical() == x);
        CHECK(TruncatedQuad::from_json(x.to_json()) == x);
    }
}

TEST_CASE("truncated quadrangulation validation") {
    auto t = minimal_fill();
    auto broken = t;
    std::swap(broken.map.next[0], broken.map.next[1]);
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
}

TEST_CASE("enumeration matches exact counts") {
    auto counts = el::qtr_counts(4, 5);
    for (std::size_t n = 1; n <= 4; ++n)
        for (std::size_t p = 1; p <= n + 1; ++p) {
            auto list = enumerate_truncated(n, p);
            CHECK(BigInt(static_cast<unsigned long>(list.size())) == counts.at(n, p));
            std::set<TruncatedQuad> distinct(list.begin(), list.end());
            CHECK(distinct.size() == list.size());
            for (const auto& x : list) {
                x.validate();
                CHECK(x.inner_faces() == n);
                CHECK(x.boundary_size() == p);
                CHECK(x.canonical() == x);
            }
        }
    CHECK(enumerate_truncated(1, 1).size() == 1);
    CHECK(enumerate_truncated(1, 1).front() == minimal_fill().canonical());
    // a quadrangle boundary admits at most one face per two boundary edges
    CHECK(enumerate_truncated(1, 3).empty());
}

TEST_CASE("assemble and decompose round trip") {
    RngStream rng(12);
    for (int it = 0; it < 300; ++it) {
        std::uint32_t h = 1 + static_cast<std::uint32_t>(rng.below(4));
        auto inst = random_instance(h, 30, rng);
        auto m = assemble(inst.forest, inst.fills);
        m.validate();
        CHECK(m.p() == inst.forest.p());
        CHECK(m.q() == inst.forest.q());
        CHECK(m.height == h);
        CHECK(m.map.euler_characteristic() == 2);
        CHECK(m.inner_faces() == predicted_inner_faces(inst.forest, inst.fills));
        auto d = decompose(m);
        CHECK(d.forest == inst.forest);
        CHECK(same_fills(d.fills, inst.fills));
        // decomposing a relabeled copy gives back the same forest
        auto s = shuffled(m, rng);
        s.validate();
        CHECK(decompose(s).forest == inst.forest);
    }
}

TEST_CASE("assemble rejects a mark outside tree 0") {
    skeleton::PlaneForest f({skeleton::PlaneTree({0}), skeleton::PlaneTree({1, 0})}, 1);
    FillMap fills;
    fills[{1, 0}] = SlotFill::volume(2);
    CHECK_THROWS(assemble(f, fills));
}

TEST_CASE("maximal cycle extraction commutes with relabeling") {
    RngStream rng(13);
    std::size_t found = 0;
    for (int it = 0; it < 200; ++it) {
        std::uint32_t h = 2 + static_cast<std::uint32_t>(rng.below(3));
        auto inst = random_instance(h, 30, rng);
        auto m = assemble(inst.forest, inst.fills);
        std::vector<HalfEdge> order(m.map.size());
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);
        std::vector<HalfEdge> inv(order.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            inv[order[i]] = static_cast<HalfEdge>(i);
        CylinderMap s;
        s.map = m.map.permuted(order);
        s.root = inv[m.root];
        s.bottom = inv[m.bottom];
        s.top = inv[m.top];
        s.height = m.height;
        s.relabel();
        for (std::uint32_t k = 1; k < h; ++k) {
            std::vector<HalfEdge> a, b;
            bool ta = false, tb = false;
            try {
                a = extract_maximal_cycle(m, k);
            } catch (const std::invalid_argument&) {
                ta = true;
            }
            try {
                b = extract_maximal_cycle(s, k);
            } catch (const std::invalid_argument&) {
                tb = true;
            }
            REQUIRE(ta == tb);
            if (ta)
                continue;
            ++found;
            REQUIRE(a.size() == b.size());
            std::vector<HalfEdge> mapped;
            for (auto x : a)
                mapped.push_back(inv[x]);
            auto pos = std::find(b.begin(), b.end(), mapped.front());
            REQUIRE(pos != b.end());
            std::rotate(b.begin(), pos, b.end());
            CHECK(b == mapped);
        }
    }
    CHECK(found > 0);
}

TEST_CASE("Krikun cycles separate") {
    RngStream rng(14);
    for (int it = 0; it < 200; ++it) {
        std::uint32_t h = 1 + static_cast<std::uint32_t>(rng.below(4));
        auto inst = random_instance(h, 30, rng);
        auto m = assemble(inst.forest, inst.fills);
        auto from_forest = krikun_cycle(inst.forest);
        auto c = krikun_cycle(inst.forest, m);
        CHECK(c.N == skeleton::count_max_height_trees(inst.forest));
        CHECK(from_forest.N == c.N);
        CHECK(from_forest.trees == c.trees);
        CHECK(c.edges.size() == 2 * c.N * h);
        CHECK(c.vertices.size() == c.edges.size());
        CHECK(separates_by_vertices(m, c));
        CHECK(separates_faces(m, c));
    }
}

TEST_CASE("cycle ratio and tail") {
    for (unsigned long R = 1; R <= 300; ++R) {
        // 1 - pi_r = 2 / ((r+1)(r+2)) gives the ratio in closed form
        Rational closed = 1 - q(static_cast<long>(R + 2), static_cast<long>(4 * R + 2));
        CHECK(cycle_ratio(R) == closed);
        CHECK(cycle_ratio(R) <= q(3, 4));
    }
    CHECK(cycle_ratio(1) == q(1, 2));
    for (unsigned long R : {1ul, 5ul, 50ul}) {
        CHECK(cycle_tail_exact(R, 2) == 1);
        auto law = el::n_trees_law(R, 2 * R, el::default_tail_eps());
        CHECK(cycle_tail_exact(R, 4) == 1 - law.p_one);
        Rational prev(1);
        for (std::size_t a = 2; a <= 40; a += 2) {
            auto t = cycle_tail_exact(R, a);
            CHECK(t <= prev);
            CHECK(t == cycle_tail_exact(R, a - 1));
            prev = t;
        }
    }
}

TEST_CASE("sampled cycle lengths follow the exact tail") {
    RngStream rng(15);
    const std::size_t n = 50000;
    auto hist = sample_cycle_lengths(20, n, rng);
    for (const auto& [v, c] : hist.counts)
        CHECK(v % 2 == 0);
    std::uint64_t ge8 = 0;
    for (const auto& [v, c] : hist.counts)
        if (v >= 8)
            ge8 += c;
    CHECK(std::fabs(binomial_z(ge8, n, to_double(cycle_tail_exact(20, 8)))) <= 3);
    auto rep = cycle_tail_report(20, hist, 15);
    CHECK(rep.trials == n);
    CHECK(rep.exact_p_one == el::n_trees_law(20, 40, el::default_tail_eps()).p_one);
}

TEST_CASE("hull volume helpers") {
    CHECK(hull_volume_from_counts(1, {0}) == 3);
    CHECK(hull_volume_from_counts(2, {1, 0}) == 2 + (el::slot_mean_volume(2) - 1) + el::slot_mean_volume(1));
    skeleton::PlaneForest f({skeleton::PlaneTree({1, 0})}, 1);
    CHECK(hull_volume_conditional_mean(f) == hull_volume_from_counts(1, {1}));
    CHECK(hull_volume_conditional_mean_numeric(f) == doctest::Approx(to_double(hull_volume_conditional_mean(f))));
    auto means = slot_means_double(5);
    for (std::size_t b = 1; b <= 5; ++b)
        CHECK(means[b] == doctest::Approx(to_double(el::slot_mean_volume(b))));

    RngStream a(16), b(16);
    auto row = hull_volume_experiment(4, 2000, a);
    VolumeSums s1 = hull_volume_sums(4, 1000, b), s2 = hull_volume_sums(4, 1000, b);
    s1.merge(s2);
    CHECK(s1.n == 2000);
    auto row2 = volume_row(4, s1, 16);
    CHECK(row.mean == doctest::Approx(row2.mean));
    CHECK(row.scaled == doctest::Approx(row.mean / 256));
    CHECK(row.stderr_ > 0);
}
