#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace uipq::skeleton {

// plane tree stored as its depth-first sequence of child counts
class PlaneTree {
public:
    PlaneTree() : child_counts_{0} {}
    explicit PlaneTree(std::vector<std::uint32_t> child_counts);

    const std::vector<std::uint32_t>& child_counts() const { return child_counts_; }
    std::size_t size() const { return child_counts_.size(); }
    std::uint32_t children(std::size_t v) const { return child_counts_[v]; }

    // depth of every vertex, root at 0
    std::vector<std::uint32_t> depths() const;
    std::uint32_t height() const;
    // population of each generation 0..height
    std::vector<std::size_t> generation_sizes() const;
    std::size_t population(std::uint32_t generation) const;
    // preorder ids of the children of every vertex
    std::vector<std::vector<std::size_t>> child_lists() const;
    std::vector<std::size_t> parents() const; // root maps to itself

    // drop everything strictly below generation g
    PlaneTree truncated(std::uint32_t g) const;

    bool operator==(const PlaneTree& o) const { return child_counts_ == o.child_counts_; }

    static bool is_lukasiewicz(const std::vector<std::uint32_t>& c);

private:
    std::vector<std::uint32_t> child_counts_;
};

struct Distinguished {
    std::size_t tree = 0;
    std::size_t vertex = 0;
    bool operator==(const Distinguished& o) const { return tree == o.tree && vertex == o.vertex; }
};

class PlaneForest {
public:
    PlaneForest() = default;
    PlaneForest(std::vector<PlaneTree> trees, std::uint32_t height_cap,
                std::optional<Distinguished> distinguished = std::nullopt);

    const std::vector<PlaneTree>& trees() const { return trees_; }
    const PlaneTree& tree(std::size_t i) const { return trees_[i]; }
    std::uint32_t height_cap() const { return height_cap_; }
    std::size_t p() const { return p_; }
    std::size_t q() const { return trees_.size(); }
    const std::optional<Distinguished>& distinguished() const { return distinguished_; }

    // vertices strictly below the cap, i.e. the ones carrying slots
    std::size_t inner_vertex_count() const;

    // throws std::invalid_argument with the first violated invariant
    void validate() const;

    PlaneForest truncated(std::uint32_t g) const;
    // tree k becomes tree 0; the mark follows its tree
    PlaneForest rotated(std::size_t k) const;

    std::string to_json() const;
    static PlaneForest from_json(const std::string& text);

    bool operator==(const PlaneForest& o) const {
        return height_cap_ == o.height_cap_ && trees_ == o.trees_ && distinguished_ == o.distinguished_;
    }

private:
    std::vector<PlaneTree> trees_;
    std::uint32_t height_cap_ = 0;
    std::size_t p_ = 0;
    std::optional<Distinguished> distinguished_;
};

} // namespace uipq::skeleton
