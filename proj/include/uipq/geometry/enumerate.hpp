#pragma once

#include "uipq/geometry/truncated_quad.hpp"

#include <cstddef>
#include <vector>

namespace uipq::geometry {

constexpr std::size_t kEnumerateMaxFaces = 5;

// every rooted truncated quadrangulation with n inner faces and boundary p, canonical and sorted
std::vector<TruncatedQuad> enumerate_truncated(std::size_t n, std::size_t p);

// cached lists, for drawing small fills
const std::vector<TruncatedQuad>& truncated_catalog(std::size_t n, std::size_t p);

} // namespace uipq::geometry
