#include "uipq/geometry/cylinder.hpp"

#include "uipq/geometry/cycles.hpp"
#include "uipq/geometry/enumerate.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace uipq::geometry {

using skeleton::PlaneForest;
using skeleton::PlaneTree;

SlotFill SlotFill::explicit_fill(const TruncatedQuad& t) {
    auto c = std::make_shared<const TruncatedQuad>(t.canonical());
    return SlotFill{c->inner_faces(), c};
}

std::vector<std::vector<VertexKey>> generations(const PlaneForest& f) {
    std::vector<std::vector<VertexKey>> g(f.height_cap() + 1);
    for (std::size_t t = 0; t < f.q(); ++t) {
        auto d = f.tree(t).depths();
        for (std::size_t v = 0; v < d.size(); ++v)
            g[d[v]].emplace_back(t, v);
    }
    return g;
}

std::size_t predicted_inner_faces(const PlaneForest& f, const FillMap& fills) {
    long long n = static_cast<long long>(f.p());
    for (std::size_t t = 0; t < f.q(); ++t) {
        auto d = f.tree(t).depths();
        for (std::size_t v = 0; v < d.size(); ++v) {
            if (d[v] >= f.height_cap())
                continue;
            auto it = fills.find({t, v});
            if (it == fills.end())
                throw std::invalid_argument("predicted_inner_faces: missing fill");
            n += static_cast<long long>(it->second.inner_faces) - f.tree(t).children(v);
        }
    }
    return static_cast<std::size_t>(n);
}

std::size_t CylinderMap::inner_faces() const {
    std::size_t f = 0;
    map.face_ids(&f);
    return f - 2;
}

void CylinderMap::relabel() {
    std::size_t nv = 0;
    vertex = map.vertex_ids(&nv);
    const std::uint32_t unset = ~std::uint32_t(0);
    labels.assign(nv, unset);
    std::vector<std::vector<HalfEdge>> out(nv);
    for (std::size_t h = 0; h < map.size(); ++h)
        out[vertex[h]].push_back(static_cast<HalfEdge>(h));
    std::deque<std::int32_t> q;
    HalfEdge x = bottom;
    do {
        if (labels[vertex[x]] == unset) {
            labels[vertex[x]] = 0;
            q.push_back(vertex[x]);
        }
        x = map.next[x];
    } while (x != bottom);
    while (!q.empty()) {
        auto v = q.front();
        q.pop_front();
        for (auto h : out[v]) {
            auto w = vertex[map.twin[h]];
            if (labels[w] == unset) {
                labels[w] = labels[v] + 1;
                q.push_back(w);
            }
        }
    }
}

namespace {

std::vector<HalfEdge> face_walk(const HalfEdgeMap& m, HalfEdge h) { return m.face_of(h); }

void check_simple_boundary(const CylinderMap& c, HalfEdge start, const char* what) {
    std::set<std::int32_t> seen;
    for (auto x : face_walk(c.map, start))
        if (!seen.insert(c.vertex[x]).second)
            throw std::invalid_argument(std::string("cylinder: ") + what + " cycle is not simple");
}

} // namespace

void CylinderMap::validate() const {
    map.check_permutations();
    if (!map.connected())
        throw std::invalid_argument("cylinder: not connected");
    if (map.euler_characteristic() != 2)
        throw std::invalid_argument("cylinder: Euler characteristic is not 2");
    auto fid = map.face_ids();
    if (fid[bottom] == fid[top])
        throw std::invalid_argument("cylinder: top and bottom faces coincide");
    if (vertex.size() != map.size())
        throw std::invalid_argument("cylinder: labels are stale");
    check_simple_boundary(*this, bottom, "bottom");
    check_simple_boundary(*this, top, "top");
    if (fid[map.twin[root]] != fid[bottom])
        throw std::invalid_argument("cylinder: root is not on the bottom cycle");

    std::set<std::int32_t> triangles;
    for (auto start : {bottom, top})
        for (auto x : face_walk(map, start)) {
            auto in = map.twin[x];
            if (map.face_degree(in) != 3)
                throw std::invalid_argument("cylinder: boundary edge not incident to a triangle");
            if (fid[in] == fid[bottom] || fid[in] == fid[top] || !triangles.insert(fid[in]).second)
                throw std::invalid_argument("cylinder: boundary triangles are not distinct");
        }
    std::set<HalfEdge> boundary_edges;
    for (auto start : {bottom, top})
        for (auto x : face_walk(map, start)) {
            boundary_edges.insert(x);
            boundary_edges.insert(map.twin[x]);
        }
    for (std::size_t h = 0; h < map.size(); ++h) {
        auto f = fid[h];
        if (f == fid[bottom] || f == fid[top] || triangles.count(f))
            continue;
        if (map.face_degree(static_cast<HalfEdge>(h)) != 4)
            throw std::invalid_argument("cylinder: inner face of degree other than 4");
    }
    for (std::size_t h = 0; h < map.size(); ++h) {
        if (boundary_edges.count(static_cast<HalfEdge>(h)))
            continue;
        auto a = labels[vertex[h]], b = labels[vertex[map.twin[h]]];
        if (a + 1 != b && b + 1 != a)
            throw std::invalid_argument("cylinder: adjacent labels do not differ by one");
    }
    for (auto x : face_walk(map, top)) {
        if (label_of(x) != height)
            throw std::invalid_argument("cylinder: top vertex not at distance h");
        bool below = false;
        for (auto y : face_walk(map, map.twin[x]))
            below = below || label_of(y) + 1 == height;
        if (!below)
            throw std::invalid_argument("cylinder: top triangle without a vertex at h-1");
    }
}

nlohmann::json CylinderMap::to_json() const {
    auto j = map_to_json(map);
    j["root"] = root;
    j["height"] = height;
    std::vector<std::int32_t> bc, tc;
    for (auto x : face_walk(map, bottom))
        bc.push_back(vertex[x]);
    for (auto x : face_walk(map, top))
        tc.push_back(vertex[x]);
    j["bottom_cycle"] = bc;
    j["top_cycle"] = tc;
    j["labels"] = labels;
    return j;
}

CylinderMap assemble(const PlaneForest& f, const FillMap& fills) {
    const std::uint32_t h = f.height_cap();
    if (!f.distinguished())
        throw std::invalid_argument("assemble: forest needs a distinguished vertex");
    auto gens = generations(f);
    // layer k holds generation h - k
    auto layer = [&](std::uint32_t k) -> const std::vector<VertexKey>& { return gens[h - k]; };
    std::map<VertexKey, std::size_t> index_in_layer;
    for (const auto& g : gens)
        for (std::size_t i = 0; i < g.size(); ++i)
            index_in_layer[g[i]] = i;

    HalfEdgeMap m;
    // downward triangles: t (top, right to left), d = next(t), r = next(d)
    std::vector<std::vector<HalfEdge>> tri(h + 1);
    for (std::uint32_t k = 1; k <= h; ++k)
        for (std::size_t i = 0; i < layer(k).size(); ++i)
            tri[k].push_back(m.add_face(3));
    auto t_of = [&](std::uint32_t k, std::size_t i) { return tri[k][i]; };
    auto d_of = [&](std::uint32_t k, std::size_t i) { return tri[k][i] + 1; };
    auto r_of = [&](std::uint32_t k, std::size_t i) { return tri[k][i] + 2; };
    auto link = [&](HalfEdge a, HalfEdge b) {
        m.twin[a] = b;
        m.twin[b] = a;
    };

    const std::size_t q = layer(h).size(), p = layer(0).size();
    HalfEdge top0 = m.add_face(q);
    for (std::size_t i = 0; i < q; ++i)
        link(top0 + static_cast<HalfEdge>(i), t_of(h, i));
    // bottom face runs right to left
    auto bot0 = static_cast<HalfEdge>(m.size());
    for (std::size_t j = 0; j < p; ++j) {
        m.next.push_back(bot0 + static_cast<HalfEdge>((j + p - 1) % p));
        m.twin.push_back(kNone);
    }
    auto lower_of = [&](std::uint32_t k, std::size_t j) {
        return k == 0 ? bot0 + static_cast<HalfEdge>(j) : t_of(k, j);
    };

    std::vector<bool> drop;
    std::vector<std::vector<LayerEdge>> layers(h + 1);
    for (std::uint32_t k = 1; k <= h; ++k) {
        const auto& L = layer(k);
        const std::size_t mk = L.size();
        std::size_t next_child = 0;
        for (std::size_t i = 0; i < mk; ++i) {
            const auto key = L[i];
            const std::uint32_t c = f.tree(key.first).children(key.second);
            auto it = fills.find(key);
            if (it == fills.end() || !it->second.is_explicit())
                throw std::invalid_argument("assemble: missing explicit fill");
            const TruncatedQuad& M = *it->second.quad;
            if (M.boundary_size() != c + 1)
                throw std::invalid_argument("assemble: fill boundary does not match c_v + 1");
            const HalfEdge r_left = r_of(k, (i + mk - 1) % mk), d_right = d_of(k, i);

            const HalfEdge rho = M.root, rho1 = M.map.next[rho], rho2 = M.map.next[rho1];
            if (M.map.twin[rho1] == rho2) {
                link(r_left, d_right);
            } else {
                auto off = static_cast<HalfEdge>(m.size());
                for (std::size_t x = 0; x < M.map.size(); ++x) {
                    m.next.push_back(M.map.next[x] + off);
                    m.twin.push_back(M.map.twin[x] + off);
                }
                drop.resize(m.size(), false);
                for (auto x : M.map.face_of(rho))
                    drop[x + off] = true;
                for (auto x : M.map.face_of(M.outer()))
                    drop[x + off] = true;
                link(M.map.twin[rho1] + off, r_left);
                link(M.map.twin[rho2] + off, d_right);
                auto beta = M.boundary_inner();
                for (std::uint32_t j = 1; j <= c; ++j)
                    link(beta[j] + off, lower_of(k - 1, next_child + j - 1));
            }
            next_child += c;
            layers[k].push_back(LayerEdge{key, d_right, r_of(k, i), kNone, (next_child + layer(k - 1).size() - 1) % layer(k - 1).size()});
        }
    }
    drop.resize(m.size(), false);
    for (std::size_t j = 0; j < p; ++j)
        layers[0].push_back(LayerEdge{layer(0)[j], kNone, kNone, m.twin[bot0 + static_cast<HalfEdge>(j)], 0});

    // intermediate boundaries are diagonals: fuse each downward triangle with the face above it
    auto prev = m.prev();
    for (std::uint32_t k = 1; k < h; ++k)
        for (std::size_t i = 0; i < layer(k).size(); ++i) {
            HalfEdge t = t_of(k, i), b = m.twin[t];
            m.next[prev[b]] = m.next[t];
            m.next[prev[t]] = m.next[b];
            drop[t] = drop[b] = true;
        }
    std::vector<bool> keep(drop.size());
    for (std::size_t x = 0; x < drop.size(); ++x)
        keep[x] = !drop[x];
    auto remap = m.compact(keep);

    CylinderMap c;
    c.map = std::move(m);
    c.height = h;
    c.bottom = remap[bot0];
    c.top = remap[top0];
    for (auto& L : layers)
        for (auto& e : L) {
            if (e.d != kNone)
                e.d = remap[e.d];
            if (e.r != kNone)
                e.r = remap[e.r];
            if (e.upper != kNone)
                e.upper = remap[e.upper];
        }
    c.layers = std::move(layers);
    auto mark = *f.distinguished();
    c.root = c.layers[0][index_in_layer.at({mark.tree, mark.vertex})].upper;
    c.relabel();
    return c;
}

namespace {

struct Layer {
    std::vector<HalfEdge> lower, upper, d, r; // per edge, left to right
};

} // namespace

Decomposition decompose(const CylinderMap& input) {
    CylinderMap cm = input;
    cm.relabel();
    cm.validate();
    const std::uint32_t h = cm.label_of(cm.top);
    if (h < 1)
        throw std::invalid_argument("decompose: height must be >= 1");

    // the diagonals of every intermediate boundary, as apex-to-right-end half-edges
    std::vector<std::vector<HalfEdge>> diag(h + 1);
    for (std::uint32_t k = 1; k < h; ++k)
        diag[k] = extract_maximal_cycle(cm, k);

    HalfEdgeMap q = cm.map;
    std::vector<Layer> layers(h + 1);
    std::set<HalfEdge> structural;
    auto new_edge = [&]() {
        auto u = static_cast<HalfEdge>(q.size());
        q.next.push_back(kNone);
        q.next.push_back(kNone);
        q.twin.push_back(u + 1);
        q.twin.push_back(u);
        return u;
    };
    for (std::uint32_t k = 1; k < h; ++k)
        for (auto h0 : diag[k]) {
            HalfEdge h1 = q.next[h0], h2 = q.next[h1], h3 = q.next[h2];
            HalfEdge u = new_edge(), l = u + 1;
            q.next[h2] = u;
            q.next[u] = h1;
            q.next[h0] = l;
            q.next[l] = h3;
            layers[k].lower.push_back(l);
            layers[k].upper.push_back(u);
        }
    for (auto x : face_walk(q, cm.top)) {
        layers[h].lower.push_back(q.twin[x]);
        structural.insert(x);
    }
    {
        auto fw = face_walk(q, cm.bottom);
        std::reverse(fw.begin() + 1, fw.end()); // left to right
        for (auto x : fw) {
            layers[0].lower.push_back(x);
            layers[0].upper.push_back(q.twin[x]);
            structural.insert(x);
        }
    }
    for (std::uint32_t k = 1; k <= h; ++k) {
        auto& L = layers[k];
        for (auto t : L.lower) {
            HalfEdge d = q.next[t], r = q.next[d];
            if (q.next[r] != t)
                throw std::invalid_argument("decompose: downward face is not a triangle");
            L.d.push_back(d);
            L.r.push_back(r);
            structural.insert(t);
            structural.insert(q.twin[t]);
            structural.insert(d);
            structural.insert(r);
        }
    }

    // parent of each edge of layer k-1 among the edges of layer k
    auto qprev = q.prev();
    std::vector<std::vector<std::vector<std::size_t>>> children(h + 1);
    for (std::uint32_t k = 1; k <= h; ++k) {
        const auto& up = layers[k - 1].upper;
        const std::size_t mb = up.size(), mk = layers[k].r.size();
        std::map<HalfEdge, std::size_t> r_index;
        for (std::size_t i = 0; i < mk; ++i)
            r_index[layers[k].r[i]] = i;
        // rightmost apex at the left end of each lower edge, if any
        std::vector<long> apex_at(mb, -1);
        std::size_t hits = 0;
        for (std::size_t j = 0; j < mb; ++j) {
            HalfEdge stop = q.twin[up[(j + mb - 1) % mb]];
            HalfEdge x = up[j];
            std::size_t guard = 0;
            while (x != stop) {
                auto it = r_index.find(x);
                if (it != r_index.end()) {
                    if (apex_at[j] < 0)
                        apex_at[j] = static_cast<long>(it->second);
                    ++hits;
                }
                x = q.twin[qprev[x]];
                if (++guard > q.size())
                    throw std::invalid_argument("decompose: corner walk does not close");
            }
        }
        if (hits != mk)
            throw std::invalid_argument("decompose: downward triangles do not match the layer below");
        std::size_t start = 0;
        while (apex_at[start] < 0)
            ++start;
        children[k].assign(mk, {});
        std::size_t parent = 0;
        for (std::size_t s = 0; s < mb; ++s) {
            std::size_t j = (start + s) % mb;
            if (apex_at[j] >= 0)
                parent = (static_cast<std::size_t>(apex_at[j]) + 1) % mk;
            children[k][parent].push_back(j);
        }
    }

    // root edge on the bottom, then its ancestors
    std::size_t j0 = layers[0].upper.size();
    for (std::size_t j = 0; j < layers[0].upper.size(); ++j)
        if (layers[0].upper[j] == cm.root)
            j0 = j;
    if (j0 == layers[0].upper.size())
        throw std::invalid_argument("decompose: root is not the inner side of a bottom edge");
    std::vector<std::vector<std::size_t>> parent_of(h + 1);
    for (std::uint32_t k = 1; k <= h; ++k) {
        parent_of[k - 1].assign(layers[k - 1].upper.size(), 0);
        for (std::size_t i = 0; i < children[k].size(); ++i)
            for (auto j : children[k][i])
                parent_of[k - 1][j] = i;
    }
    std::size_t i0 = j0;
    for (std::uint32_t k = 0; k < h; ++k)
        i0 = parent_of[k][i0];

    // depth-first read-off
    const std::size_t qn = layers[h].lower.size();
    std::vector<PlaneTree> trees;
    std::map<std::pair<std::uint32_t, std::size_t>, VertexKey> key_of;
    for (std::size_t t = 0; t < qn; ++t) {
        std::vector<std::uint32_t> counts;
        std::vector<std::pair<std::uint32_t, std::size_t>> st{{h, (i0 + t) % qn}};
        while (!st.empty()) {
            auto [k, i] = st.back();
            st.pop_back();
            key_of[{k, i}] = {t, counts.size()};
            if (k == 0) {
                counts.push_back(0);
                continue;
            }
            const auto& ch = children[k][i];
            counts.push_back(static_cast<std::uint32_t>(ch.size()));
            for (auto it = ch.rbegin(); it != ch.rend(); ++it)
                st.emplace_back(k - 1, *it);
        }
        trees.emplace_back(std::move(counts));
    }
    auto mark = key_of.at({0, j0});
    PlaneForest forest(std::move(trees), h, skeleton::Distinguished{mark.first, mark.second});

    // slot contents
    FillMap fills;
    for (std::uint32_t k = 1; k <= h; ++k) {
        const auto& L = layers[k];
        const std::size_t mk = L.r.size();
        for (std::size_t i = 0; i < mk; ++i) {
            const HalfEdge r_left = L.r[(i + mk - 1) % mk], d_right = L.d[i];
            const auto& ch = children[k][i];
            const VertexKey key = key_of.at({k, i});
            if (q.twin[r_left] == d_right) {
                if (!ch.empty())
                    throw std::invalid_argument("decompose: empty slot above children");
                fills[key] = SlotFill::explicit_fill(minimal_fill());
                continue;
            }
            // flood the faces of the slot
            std::vector<HalfEdge> members;
            std::set<HalfEdge> in_slot;
            std::deque<HalfEdge> todo{q.twin[r_left]};
            while (!todo.empty()) {
                HalfEdge s = todo.front();
                todo.pop_front();
                if (in_slot.count(s))
                    continue;
                for (auto x : face_walk(q, s)) {
                    in_slot.insert(x);
                    members.push_back(x);
                }
                for (auto x : face_walk(q, s))
                    if (!structural.count(x) && !structural.count(q.twin[x]) && !in_slot.count(q.twin[x]))
                        todo.push_back(q.twin[x]);
            }
            std::map<HalfEdge, HalfEdge> child_slot; // lower half-edge of a child -> boundary index
            for (std::size_t j = 0; j < ch.size(); ++j)
                child_slot[layers[k - 1].lower[ch[j]]] = static_cast<HalfEdge>(j + 1);

            const auto n = static_cast<HalfEdge>(members.size());
            const auto c = static_cast<HalfEdge>(ch.size());
            std::map<HalfEdge, HalfEdge> id;
            for (HalfEdge a = 0; a < n; ++a)
                id[members[a]] = a;
            const HalfEdge rho = n, rho1 = n + 1, rho2 = n + 2, o0 = n + 3;
            TruncatedQuad M;
            M.map.next.assign(o0 + c + 1, kNone);
            M.map.twin.assign(o0 + c + 1, kNone);
            std::vector<HalfEdge> beta(c + 1, kNone);
            beta[0] = rho;
            for (HalfEdge a = 0; a < n; ++a) {
                HalfEdge x = members[a], y = q.twin[x];
                M.map.next[a] = id.at(q.next[x]);
                if (auto it = id.find(y); it != id.end()) {
                    M.map.twin[a] = it->second;
                } else if (y == r_left) {
                    M.map.twin[a] = rho1;
                    M.map.twin[rho1] = a;
                } else if (y == d_right) {
                    M.map.twin[a] = rho2;
                    M.map.twin[rho2] = a;
                } else if (auto jt = child_slot.find(y); jt != child_slot.end()) {
                    beta[jt->second] = a;
                } else {
                    throw std::invalid_argument("decompose: slot leaks across a structural edge");
                }
            }
            M.map.next[rho] = rho1;
            M.map.next[rho1] = rho2;
            M.map.next[rho2] = rho;
            for (HalfEdge j = 0; j <= c; ++j) {
                if (beta[j] == kNone)
                    throw std::invalid_argument("decompose: child edge not on the slot boundary");
                M.map.twin[beta[j]] = o0 + j;
                M.map.twin[o0 + j] = beta[j];
                M.map.next[o0 + j] = o0 + (j + c) % (c + 1);
            }
            M.root = rho;
            M.validate();
            fills[key] = SlotFill::explicit_fill(M);
        }
    }
    return {std::move(forest), std::move(fills)};
}

Instance random_instance(std::uint32_t h, std::size_t max_vertices, RngStream& rng) {
    if (h < 1)
        throw std::invalid_argument("random_instance: h must be >= 1");
    for (;;) {
        std::size_t q = 1 + rng.below(3);
        std::vector<PlaneTree> trees;
        std::size_t total = 0;
        bool ok = true;
        for (std::size_t t = 0; t < q && ok; ++t) {
            // offspring 0..3 with mean just under 1, cut at the cap
            std::vector<std::uint32_t> counts;
            std::vector<std::uint32_t> st{0};
            while (!st.empty() && ok) {
                auto d = st.back();
                st.pop_back();
                std::uint32_t c = 0;
                if (d < h) {
                    auto u = rng.below(8);
                    c = u < 3 ? 0 : u < 6 ? 1 : u < 7 ? 2 : 3;
                }
                counts.push_back(c);
                for (std::uint32_t i = 0; i < c; ++i)
                    st.push_back(d + 1);
                ok = counts.size() + total <= max_vertices;
            }
            if (!ok)
                break;
            total += counts.size();
            trees.emplace_back(std::move(counts));
        }
        if (!ok || trees[0].height() != h)
            continue;
        auto d0 = trees[0].depths();
        std::vector<std::size_t> cands;
        for (std::size_t v = 0; v < d0.size(); ++v)
            if (d0[v] == h)
                cands.push_back(v);
        skeleton::Distinguished mark{0, cands[rng.below(cands.size())]};
        PlaneForest f(std::move(trees), h, mark);
        FillMap fills;
        for (std::size_t t = 0; t < f.q(); ++t) {
            auto d = f.tree(t).depths();
            for (std::size_t v = 0; v < d.size(); ++v) {
                if (d[v] >= h)
                    continue;
                std::size_t b = f.tree(t).children(v) + 1;
                std::size_t n = b + rng.below(kEnumerateMaxFaces - b + 1);
                const auto& cat = truncated_catalog(n, b);
                fills[{t, v}] = SlotFill::explicit_fill(cat[rng.below(cat.size())]);
            }
        }
        return {std::move(f), std::move(fills)};
    }
}

} // namespace uipq::geometry
