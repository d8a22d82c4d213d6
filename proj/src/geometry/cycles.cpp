#include "uipq/geometry/cycles.hpp"

#include "uipq/exactlaws/laws.hpp"
#include "uipq/skeleton/samplers.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>

namespace uipq::geometry {

namespace el = uipq::exactlaws;
using skeleton::PlaneForest;

std::vector<HalfEdge> extract_maximal_cycle(const CylinderMap& m, std::uint32_t k) {
    if (k < 1)
        throw std::invalid_argument("extract_maximal_cycle: k must be >= 1");
    if (m.vertex.size() != m.map.size())
        throw std::invalid_argument("extract_maximal_cycle: map carries no labels");
    if (*std::max_element(m.labels.begin(), m.labels.end()) <= k)
        throw std::invalid_argument("extract_maximal_cycle: no vertex beyond level k");

    std::size_t nf = 0;
    auto fid = m.map.face_ids(&nf);
    const auto bottom_face = fid[m.bottom], top_face = fid[m.top];
    // h0 of each k-simple face, with corners (k-1, k, k+1, k) from h0 on
    std::vector<HalfEdge> h0_of(nf, kNone);
    std::vector<bool> done(nf, false);
    for (std::size_t s = 0; s < m.map.size(); ++s) {
        auto f = fid[s];
        if (done[f] || f == bottom_face || f == top_face)
            continue;
        done[f] = true;
        auto w = m.map.face_of(static_cast<HalfEdge>(s));
        if (w.size() != 4)
            continue;
        for (std::size_t r = 0; r < 4; ++r) {
            auto l0 = m.label_of(w[r]), l1 = m.label_of(w[(r + 1) % 4]);
            auto l2 = m.label_of(w[(r + 2) % 4]), l3 = m.label_of(w[(r + 3) % 4]);
            if (l0 + 1 == k && l1 == k && l2 == k + 1 && l3 == k) {
                h0_of[f] = w[r];
                break;
            }
        }
    }
    // split faces contribute an upper node (corner k+1) and a lower node
    auto node = [&](HalfEdge x) -> std::size_t {
        auto f = fid[x];
        if (h0_of[f] == kNone)
            return 2 * static_cast<std::size_t>(f);
        HalfEdge h0 = h0_of[f], h1 = m.map.next[h0], h2 = m.map.next[h1];
        return 2 * static_cast<std::size_t>(f) + (x == h1 || x == h2 ? 1 : 0);
    };
    std::vector<std::vector<HalfEdge>> members(2 * nf);
    for (std::size_t x = 0; x < m.map.size(); ++x)
        members[node(static_cast<HalfEdge>(x))].push_back(static_cast<HalfEdge>(x));
    std::vector<bool> reached(2 * nf, false);
    std::deque<std::size_t> todo{node(m.top)};
    reached[todo.front()] = true;
    while (!todo.empty()) {
        auto u = todo.front();
        todo.pop_front();
        for (auto x : members[u]) {
            auto v = node(m.map.twin[x]);
            if (!reached[v]) {
                reached[v] = true;
                todo.push_back(v);
            }
        }
    }
    std::map<std::int32_t, HalfEdge> from_left_end;
    for (std::size_t f = 0; f < nf; ++f) {
        if (h0_of[f] == kNone || !reached[2 * f + 1] || reached[2 * f])
            continue;
        HalfEdge h0 = h0_of[f], h3 = m.map.next[m.map.next[m.map.next[h0]]];
        if (!from_left_end.emplace(m.vertex[h3], h0).second)
            throw std::logic_error("extract_maximal_cycle: diagonal cycle is not simple");
    }
    if (from_left_end.empty())
        throw std::invalid_argument("extract_maximal_cycle: no diagonal cycle at this level");
    std::vector<HalfEdge> out;
    auto start = from_left_end.begin()->second;
    HalfEdge cur = start;
    do {
        out.push_back(cur);
        auto right_end = m.vertex[m.map.next[cur]];
        auto it = from_left_end.find(right_end);
        if (it == from_left_end.end())
            throw std::logic_error("extract_maximal_cycle: diagonals do not close up");
        cur = it->second;
    } while (cur != start && out.size() <= from_left_end.size());
    if (out.size() != from_left_end.size())
        throw std::logic_error("extract_maximal_cycle: diagonals form several cycles");
    return out;
}

namespace {

void require_layers(const CylinderMap& m) {
    if (m.layers.size() != m.height + 1)
        throw std::invalid_argument("map has no layer bookkeeping (build it with assemble)");
}

void extend_left(const CylinderMap& m, std::uint32_t k, std::size_t w, GeodesicPath& path) {
    // w is the index of the edge whose right end is the current vertex of layer k
    while (k >= 1) {
        const auto& e = m.layers[k][w];
        HalfEdge down = m.map.twin[e.r];
        path.edges.push_back(down);
        path.vertices.push_back(m.vertex[e.r]);
        w = e.apex;
        --k;
    }
}

} // namespace

Geodesics downward_geodesics(const CylinderMap& m, std::size_t tree_index) {
    require_layers(m);
    const std::uint32_t h = m.height;
    const auto& top = m.layers[h];
    if (tree_index >= top.size())
        throw std::invalid_argument("downward_geodesics: tree index out of range");
    bool maximal = false;
    for (const auto& e : m.layers[0])
        maximal = maximal || e.vertex.first == tree_index;
    if (!maximal)
        throw std::invalid_argument("downward_geodesics: tree does not reach the height cap");
    const std::size_t q = top.size(), i = tree_index;
    Geodesics g;
    g.left.vertices.push_back(m.vertex[m.map.twin[top[(i + q - 1) % q].r]]);
    extend_left(m, h, (i + q - 1) % q, g.left);

    g.right.vertices.push_back(m.vertex[top[i].d]);
    g.right.edges.push_back(top[i].d);
    g.right.vertices.push_back(m.vertex[m.map.twin[top[i].d]]);
    extend_left(m, h - 1, top[i].apex, g.right);
    return g;
}

namespace {

// apex indices per layer from the forest alone
std::vector<std::vector<std::size_t>> forest_apexes(const PlaneForest& f) {
    const std::uint32_t h = f.height_cap();
    auto gens = generations(f);
    std::vector<std::vector<std::size_t>> apex(h + 1);
    for (std::uint32_t k = 1; k <= h; ++k) {
        const auto& L = gens[h - k];
        const std::size_t below = gens[h - k + 1].size();
        std::size_t acc = 0;
        for (const auto& key : L) {
            acc += f.tree(key.first).children(key.second);
            apex[k].push_back((acc + below - 1) % below);
        }
    }
    return apex;
}

} // namespace

GeodesicEnds geodesic_ends(const PlaneForest& f, std::size_t tree_index) {
    if (tree_index >= f.q())
        throw std::invalid_argument("geodesic_ends: tree index out of range");
    if (f.tree(tree_index).height() != f.height_cap())
        throw std::invalid_argument("geodesic_ends: tree does not reach the height cap");
    auto apex = forest_apexes(f);
    const std::uint32_t h = f.height_cap();
    const std::size_t q = f.q();
    std::size_t l = (tree_index + q - 1) % q;
    for (std::uint32_t k = h; k >= 1; --k)
        l = apex[k][l];
    std::size_t r = apex[h][tree_index];
    for (std::uint32_t k = h - 1; k >= 1; --k)
        r = apex[k][r];
    return {l, r};
}

SeparatingCycle krikun_cycle(const PlaneForest& f) {
    SeparatingCycle c;
    c.h = f.height_cap();
    for (std::size_t t = 0; t < f.q(); ++t)
        if (f.tree(t).height() == f.height_cap())
            c.trees.push_back(t);
    c.N = c.trees.size();
    // consecutive maximal trees meet at the bottom
    for (std::size_t a = 0; a < c.N; ++a) {
        auto ea = geodesic_ends(f, c.trees[a]);
        auto eb = geodesic_ends(f, c.trees[(a + 1) % c.N]);
        if (ea.right != eb.left)
            throw std::logic_error("krikun_cycle: geodesics of consecutive maximal trees do not meet");
    }
    return c;
}

SeparatingCycle krikun_cycle(const PlaneForest& f, const CylinderMap& m) {
    auto c = krikun_cycle(f);
    for (std::size_t a = 0; a < c.N; ++a) {
        auto ga = downward_geodesics(m, c.trees[a]);
        auto gb = downward_geodesics(m, c.trees[(a + 1) % c.N]);
        if (ga.right.vertices.back() != gb.left.vertices.back())
            throw std::logic_error("krikun_cycle: paths do not meet on the bottom cycle");
        for (std::size_t s = 0; s < ga.right.edges.size(); ++s) {
            c.edges.push_back(ga.right.edges[s]);
            c.vertices.push_back(ga.right.vertices[s]);
        }
        for (std::size_t s = gb.left.edges.size(); s-- > 0;) {
            c.edges.push_back(m.map.twin[gb.left.edges[s]]);
            c.vertices.push_back(gb.left.vertices[s + 1]);
        }
    }
    if (c.edges.size() != c.length())
        throw std::logic_error("krikun_cycle: walk length differs from 2Nh");
    return c;
}

bool separates_by_vertices(const CylinderMap& m, const SeparatingCycle& c) {
    std::set<std::int32_t> removed(c.vertices.begin(), c.vertices.end());
    std::size_t nv = m.labels.size();
    std::vector<std::vector<std::int32_t>> adj(nv);
    for (std::size_t h = 0; h < m.map.size(); ++h)
        adj[m.vertex[h]].push_back(m.vertex[m.map.twin[h]]);
    std::set<std::int32_t> top;
    for (auto x : m.map.face_of(m.top))
        top.insert(m.vertex[x]);
    std::vector<bool> seen(nv, false);
    std::deque<std::int32_t> q;
    for (auto x : m.map.face_of(m.bottom)) {
        auto v = m.vertex[x];
        if (!removed.count(v) && !seen[v]) {
            seen[v] = true;
            q.push_back(v);
        }
    }
    while (!q.empty()) {
        auto v = q.front();
        q.pop_front();
        if (top.count(v))
            return false;
        for (auto w : adj[v])
            if (!removed.count(w) && !seen[w]) {
                seen[w] = true;
                q.push_back(w);
            }
    }
    return true;
}

bool separates_faces(const CylinderMap& m, const SeparatingCycle& c) {
    std::set<HalfEdge> cut;
    for (auto e : c.edges) {
        cut.insert(e);
        cut.insert(m.map.twin[e]);
    }
    std::size_t nf = 0;
    auto fid = m.map.face_ids(&nf);
    std::vector<std::vector<HalfEdge>> faces(nf);
    for (std::size_t x = 0; x < m.map.size(); ++x)
        faces[fid[x]].push_back(static_cast<HalfEdge>(x));
    std::vector<bool> seen(nf, false);
    std::deque<std::int32_t> q{fid[m.bottom]};
    seen[q.front()] = true;
    while (!q.empty()) {
        auto f = q.front();
        q.pop_front();
        if (f == fid[m.top])
            return false;
        for (auto x : faces[f]) {
            if (cut.count(x))
                continue;
            auto g = fid[m.map.twin[x]];
            if (!seen[g]) {
                seen[g] = true;
                q.push_back(g);
            }
        }
    }
    return true;
}

Rational cycle_ratio(unsigned long R) {
    if (R < 1)
        throw std::invalid_argument("cycle_ratio: R must be >= 1");
    return (el::pi(2 * R) - el::pi(R)) / (1 - el::pi(R));
}

Rational cycle_tail_exact(unsigned long R, std::size_t a) {
    auto law = el::n_trees_law(R, 2 * R, el::default_tail_eps());
    std::size_t nmin = (a + 1) / 2;
    Rational below(0);
    for (std::size_t n = 0; n < nmin; ++n)
        below += law.law.mass(n);
    return 1 - below;
}

std::string CycleTailReport::csv_row() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%lu,%zu,%.17g,%zu,%zu,%zu,%llu", R, trials, mean, p50, p95, max,
                  static_cast<unsigned long long>(seed));
    return buf;
}

Histogram sample_cycle_lengths(unsigned long R, std::size_t trials, RngStream& rng) {
    if (R < 3)
        throw std::invalid_argument("sample_cycle_lengths: R must be >= 3");
    static std::mutex mu;
    static std::map<unsigned long, std::shared_ptr<const skeleton::DiscreteSampler>> cache;
    std::shared_ptr<const skeleton::DiscreteSampler> sampler;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[R];
        if (!slot) {
            auto law = el::n_trees_law(R, 2 * R, el::default_tail_eps());
            slot = std::make_shared<skeleton::DiscreteSampler>(law.law.cumulative_double(), "N law");
        }
        sampler = slot;
    }
    Histogram h;
    for (std::size_t t = 0; t < trials; ++t)
        h.add(2 * static_cast<long long>(sampler->sample(rng)));
    return h;
}

CycleTailReport cycle_tail_report(unsigned long R, const Histogram& two_n, std::uint64_t seed) {
    if (two_n.total == 0)
        throw std::invalid_argument("cycle_tail_report: no samples");
    CycleTailReport rep;
    rep.R = R;
    rep.trials = two_n.total;
    rep.seed = seed;
    rep.exact_p_one = el::n_trees_law(R, 2 * R, el::default_tail_eps()).p_one;
    rep.ratio = cycle_ratio(R);
    rep.mean = two_n.mean();
    rep.p_one = two_n.frequency(2);
    auto quant = [&](double u) {
        auto need = std::min<std::uint64_t>(two_n.total, static_cast<std::uint64_t>(u * two_n.total) + 1);
        std::uint64_t seen = 0;
        for (const auto& [v, n] : two_n.counts) {
            seen += n;
            if (seen >= need)
                return static_cast<std::size_t>(v);
        }
        return static_cast<std::size_t>(two_n.counts.rbegin()->first);
    };
    rep.p50 = quant(0.5);
    rep.p95 = quant(0.95);
    rep.max = static_cast<std::size_t>(two_n.counts.rbegin()->first);
    for (std::size_t a : {4, 8, 16}) {
        std::uint64_t above = 0;
        for (auto it = two_n.counts.lower_bound(static_cast<long long>(a)); it != two_n.counts.end(); ++it)
            above += it->second;
        rep.tail.emplace_back(a, static_cast<double>(above) / two_n.total);
    }
    return rep;
}

CycleTailReport cycle_length_tail(unsigned long R, std::size_t trials, RngStream& rng) {
    if (trials < 1)
        throw std::invalid_argument("cycle_length_tail: trials must be >= 1");
    std::uint64_t seed = rng.seed();
    return cycle_tail_report(R, sample_cycle_lengths(R, trials, rng), seed);
}

} // namespace uipq::geometry
