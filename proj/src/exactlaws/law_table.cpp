#include "uipq/exactlaws/law_table.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace uipq {

const Rational& LawTable::mass(std::size_t v) const {
    static const Rational zero(0);
    return v < masses.size() ? masses[v] : zero;
}

bool LawTable::is_consistent() const {
    if (masses.size() != cumulative.size())
        return false;
    Rational run(0);
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (sgn(masses[i]) < 0)
            return false;
        run += masses[i];
        if (run != cumulative[i])
            return false;
    }
    return sgn(tail_bound) >= 0 && run + tail_bound == 1;
}

Rational LawTable::mean_partial() const {
    Rational m(0);
    for (std::size_t i = 1; i < masses.size(); ++i)
        m += masses[i] * static_cast<unsigned long>(i);
    return m;
}

std::vector<double> LawTable::masses_double() const {
    std::vector<double> r;
    r.reserve(masses.size());
    for (auto& m : masses)
        r.push_back(to_double(m));
    return r;
}

std::vector<double> LawTable::cumulative_double() const {
    std::vector<double> r;
    r.reserve(cumulative.size());
    for (auto& c : cumulative)
        r.push_back(to_double(c));
    return r;
}

std::string LawTable::to_csv() const {
    std::ostringstream out;
    out << "value,mass_num,mass_den,mass_float,cumulative_float\n";
    char buf[64];
    for (std::size_t i = 0; i < masses.size(); ++i) {
        out << i << ',' << masses[i].get_num().get_str() << ',' << masses[i].get_den().get_str() << ',';
        std::snprintf(buf, sizeof buf, "%.17g", to_double(masses[i]));
        out << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", to_double(cumulative[i]));
        out << buf << '\n';
    }
    return out.str();
}

nlohmann::json LawTable::to_json() const {
    nlohmann::json j;
    j["description"] = description;
    j["cutoff"] = cutoff();
    auto& ms = j["masses"] = nlohmann::json::array();
    for (auto& m : masses)
        ms.push_back(to_string(m));
    j["tail_bound"] = to_string(tail_bound);
    return j;
}

LawTable LawTable::from_json(const nlohmann::json& j) {
    std::vector<Rational> ms;
    for (auto& m : j.at("masses"))
        ms.push_back(parse_rational(m.get<std::string>()));
    LawTable t = from_masses(j.at("description").get<std::string>(), std::move(ms));
    if (t.tail_bound != parse_rational(j.at("tail_bound").get<std::string>()))
        throw std::runtime_error("law table json: tail_bound does not match masses");
    return t;
}

LawTable LawTable::from_masses(std::string description, std::vector<Rational> masses) {
    LawTable t;
    t.description = std::move(description);
    t.masses = std::move(masses);
    t.cumulative.resize(t.masses.size());
    Rational run(0);
    for (std::size_t i = 0; i < t.masses.size(); ++i) {
        run += t.masses[i];
        t.cumulative[i] = run;
    }
    t.tail_bound = 1 - run;
    return t;
}

LawTable LawTable::until_tail(std::string description,
                              const std::function<Rational(std::size_t)>& mass,
                              const Rational& eps,
                              std::size_t hard_cap) {
    LawTable t;
    t.description = std::move(description);
    Rational run(0), rest(1);
    for (std::size_t v = 0; v <= hard_cap; ++v) {
        t.masses.push_back(mass(v));
        run += t.masses.back();
        t.cumulative.push_back(run);
        rest = 1 - run;
        if (rest < eps) {
            t.tail_bound = rest;
            return t;
        }
    }
    throw std::runtime_error(t.description + ": tail still above eps at hard cap " + std::to_string(hard_cap));
}

} // namespace uipq
