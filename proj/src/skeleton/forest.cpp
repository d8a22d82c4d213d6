#include "uipq/skeleton/forest.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace uipq::skeleton {

bool PlaneTree::is_lukasiewicz(const std::vector<std::uint32_t>& c) {
    // open slots must stay positive until the last vertex
    long long open = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
        open += static_cast<long long>(c[i]) - 1;
        if (open == 0)
            return i + 1 == c.size();
    }
    return false;
}

PlaneTree::PlaneTree(std::vector<std::uint32_t> child_counts) : child_counts_(std::move(child_counts)) {
    if (!is_lukasiewicz(child_counts_))
        throw std::invalid_argument("PlaneTree: not a valid child-count sequence");
}

std::vector<std::uint32_t> PlaneTree::depths() const {
    std::vector<std::uint32_t> d(size());
    // stack of (depth, remaining children) along the current path
    std::vector<std::pair<std::uint32_t, std::uint32_t>> st;
    for (std::size_t v = 0; v < size(); ++v) {
        while (!st.empty() && st.back().second == 0)
            st.pop_back();
        if (st.empty()) {
            d[v] = 0;
        } else {
            d[v] = st.back().first + 1;
            --st.back().second;
        }
        st.emplace_back(d[v], child_counts_[v]);
    }
    return d;
}

std::uint32_t PlaneTree::height() const {
    auto d = depths();
    return *std::max_element(d.begin(), d.end());
}

std::vector<std::size_t> PlaneTree::generation_sizes() const {
    std::vector<std::size_t> g;
    for (auto x : depths()) {
        if (x >= g.size())
            g.resize(x + 1, 0);
        ++g[x];
    }
    return g;
}

std::size_t PlaneTree::population(std::uint32_t generation) const {
    auto g = generation_sizes();
    return generation < g.size() ? g[generation] : 0;
}

std::vector<std::size_t> PlaneTree::parents() const {
    std::vector<std::size_t> par(size(), 0);
    std::vector<std::pair<std::size_t, std::uint32_t>> st;
    for (std::size_t v = 0; v < size(); ++v) {
        while (!st.empty() && st.back().second == 0)
            st.pop_back();
        if (!st.empty()) {
            par[v] = st.back().first;
            --st.back().second;
        }
        st.emplace_back(v, child_counts_[v]);
    }
    return par;
}

std::vector<std::vector<std::size_t>> PlaneTree::child_lists() const {
    std::vector<std::vector<std::size_t>> ch(size());
    auto par = parents();
    for (std::size_t v = 1; v < size(); ++v)
        ch[par[v]].push_back(v);
    return ch;
}

PlaneTree PlaneTree::truncated(std::uint32_t g) const {
    auto d = depths();
    std::vector<std::uint32_t> out;
    out.reserve(size());
    for (std::size_t v = 0; v < size(); ++v) {
        if (d[v] > g)
            continue;
        out.push_back(d[v] == g ? 0 : child_counts_[v]);
    }
    return PlaneTree(std::move(out));
}

PlaneForest::PlaneForest(std::vector<PlaneTree> trees, std::uint32_t height_cap,
                         std::optional<Distinguished> distinguished)
    : trees_(std::move(trees)), height_cap_(height_cap), distinguished_(distinguished) {
    p_ = 0;
    for (const auto& t : trees_)
        for (auto d : t.depths())
            p_ += d == height_cap_;
    validate();
}

std::size_t PlaneForest::inner_vertex_count() const {
    std::size_t n = 0;
    for (const auto& t : trees_)
        for (auto d : t.depths())
            n += d < height_cap_;
    return n;
}

void PlaneForest::validate() const {
    if (height_cap_ < 1)
        throw std::invalid_argument("forest: height cap must be >= 1");
    if (trees_.empty())
        throw std::invalid_argument("forest: q must be >= 1");
    std::size_t p = 0;
    bool attained = false;
    for (const auto& t : trees_) {
        for (auto d : t.depths()) {
            if (d > height_cap_)
                throw std::invalid_argument("forest: tree exceeds the height cap");
            attained = attained || d == height_cap_;
            p += d == height_cap_;
        }
    }
    if (p != p_)
        throw std::invalid_argument("forest: stored p disagrees with generation size");
    if (p < 1 || !attained)
        throw std::invalid_argument("forest: no tree reaches the height cap");
    if (distinguished_) {
        if (distinguished_->tree != 0)
            throw std::invalid_argument("forest: distinguished vertex must lie in the first tree");
        const auto& t = trees_[0];
        if (distinguished_->vertex >= t.size() || t.depths()[distinguished_->vertex] != height_cap_)
            throw std::invalid_argument("forest: distinguished vertex is not at the cap generation");
    }
}

PlaneForest PlaneForest::truncated(std::uint32_t g) const {
    if (g < 1 || g > height_cap_)
        throw std::invalid_argument("forest: truncation level out of range");
    std::vector<PlaneTree> out;
    out.reserve(trees_.size());
    for (const auto& t : trees_)
        out.push_back(t.truncated(g));
    std::optional<Distinguished> mark;
    if (distinguished_) {
        // follow the mark up to its ancestor at generation g, renumbered in the truncated tree
        const auto& t = trees_[0];
        auto par = t.parents();
        auto d = t.depths();
        std::size_t v = distinguished_->vertex;
        while (d[v] > g)
            v = par[v];
        std::size_t id = 0;
        for (std::size_t u = 0; u < v; ++u)
            id += d[u] <= g;
        mark = Distinguished{0, id};
    }
    return PlaneForest(std::move(out), g, mark);
}

PlaneForest PlaneForest::rotated(std::size_t k) const {
    if (k >= trees_.size())
        throw std::invalid_argument("forest: rotation index out of range");
    if (k != 0 && distinguished_)
        throw std::invalid_argument("forest: rotating would move the distinguished tree");
    std::vector<PlaneTree> out(trees_.begin() + k, trees_.end());
    out.insert(out.end(), trees_.begin(), trees_.begin() + k);
    return PlaneForest(std::move(out), height_cap_, distinguished_);
}

std::string PlaneForest::to_json() const {
    nlohmann::json j;
    j["height_cap"] = height_cap_;
    auto arr = nlohmann::json::array();
    for (const auto& t : trees_)
        arr.push_back(t.child_counts());
    j["trees"] = arr;
    if (distinguished_)
        j["distinguished"] = {distinguished_->tree, distinguished_->vertex};
    else
        j["distinguished"] = nullptr;
    return j.dump();
}

PlaneForest PlaneForest::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::vector<PlaneTree> trees;
    for (const auto& t : j.at("trees"))
        trees.emplace_back(t.get<std::vector<std::uint32_t>>());
    std::optional<Distinguished> mark;
    if (!j.at("distinguished").is_null()) {
        auto m = j.at("distinguished").get<std::vector<std::size_t>>();
        if (m.size() != 2)
            throw std::invalid_argument("forest json: distinguished must be [tree, vertex]");
        mark = Distinguished{m[0], m[1]};
    }
    return PlaneForest(std::move(trees), j.at("height_cap").get<std::uint32_t>(), mark);
}

} // namespace uipq::skeleton
