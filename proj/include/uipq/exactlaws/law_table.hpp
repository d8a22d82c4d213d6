#pragma once

#include "uipq/exactlaws/rational.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace uipq {

// pmf on 0..cutoff with exact masses; whatever lies beyond the cutoff is
// accounted for by tail_bound = 1 - sum(masses).
struct LawTable {
    std::string description;
    std::vector<Rational> masses;
    std::vector<Rational> cumulative;
    Rational tail_bound;

    std::size_t cutoff() const { return masses.empty() ? 0 : masses.size() - 1; }
    const Rational& mass(std::size_t v) const;
    Rational total() const { return cumulative.empty() ? Rational(0) : cumulative.back(); }

    // sum(masses) + tail_bound == 1 and cumulative is the running sum
    bool is_consistent() const;

    Rational mean_partial() const;
    std::vector<double> masses_double() const;
    std::vector<double> cumulative_double() const;

    std::string to_csv() const;
    nlohmann::json to_json() const;
    static LawTable from_json(const nlohmann::json& j);

    static LawTable from_masses(std::string description, std::vector<Rational> masses);

    // Append masses(v) for v = 0, 1, ... until the remaining mass
    // 1 - sum drops strictly below eps (exact comparison), never past
    // hard_cap. Throws std::runtime_error if hard_cap is hit first.
    static LawTable until_tail(std::string description,
                               const std::function<Rational(std::size_t)>& mass,
                               const Rational& eps,
                               std::size_t hard_cap);
};

} // namespace uipq
