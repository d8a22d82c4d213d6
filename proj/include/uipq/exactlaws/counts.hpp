#pragma once

#include "uipq/exactlaws/law_table.hpp"
#include "uipq/exactlaws/rational.hpp"

#include <vector>

namespace uipq::exactlaws {

// #Qtr_{n,p}: truncated quadrangulations with boundary p and n inner faces.
// Counted as rooted planar maps with n edges whose root face is a simple
// p-cycle; see the README for the transfer and its four checks.
struct QtrCounts {
    std::size_t nmax = 0, pmax = 0;
    std::vector<std::vector<BigInt>> table; // [n][p]
    const BigInt& at(std::size_t n, std::size_t p) const { return table.at(n).at(p); }
};

constexpr std::size_t kQtrCountsMaxN = 240;

// throws std::range_error past kQtrCountsMaxN
QtrCounts qtr_counts(std::size_t nmax, std::size_t pmax);

// rooted planar maps with n edges (= rooted quadrangulations with n faces)
std::vector<BigInt> rooted_map_counts(std::size_t nmax);

// Boltzmann law of the inner-face count: 12^{-n} #Qtr_{n,p} / Z(p), n <= nmax
LawTable slot_volume_law(std::size_t p, std::size_t nmax);

} // namespace uipq::exactlaws
