#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fttc/model.hpp"
#include "fttc/problem_io.hpp"

namespace test {

using fttc::AgentId;
using fttc::Matrix;
using fttc::ObjectId;
using fttc::Problem;
using fttc::Rational;
using fttc::WeakPreference;

inline Rational R(const std::string& s) { return Rational::parse(s); }

inline Problem load(const std::string& name) {
    return fttc::parse_problem(fttc::read_file(std::string(FTTC_DATA_DIR) + "/" + name));
}

inline fttc::Assignment assignment(const Problem& p,
                                   const std::map<std::string, std::map<std::string, std::string>>& rows) {
    fttc::Assignment a(p.num_agents(), p.num_objects());
    for (const auto& [agent, row] : rows) {
        for (const auto& [object, share] : row) a(*p.find_agent(agent), *p.find_object(object)) = R(share);
    }
    return a;
}

inline std::vector<std::string> names(const std::string& prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k + 1));
    return out;
}

/// Random weak order: a shuffled strict order cut at random places.
inline WeakPreference random_weak(std::mt19937_64& rng, std::size_t m, double cut_prob = 0.4) {
    std::vector<ObjectId> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution cut(cut_prob);
    std::vector<std::vector<ObjectId>> classes{{order[0]}};
    for (std::size_t k = 1; k < m; ++k) {
        if (cut(rng)) classes.emplace_back();
        classes.back().push_back(order[k]);
    }
    return WeakPreference(std::move(classes), m);
}

inline Rational random_fraction(std::mt19937_64& rng, long max_den) {
    std::uniform_int_distribution<long> den(1, max_den);
    const long d = den(rng);
    std::uniform_int_distribution<long> num(0, d);
    return Rational(num(rng), d);
}

/// Fractional endowment exchange problem: n agents, m objects of unit
/// supply (m <= n), endowments a convex combination of random partial
/// matchings so that every row sums to at most one.
inline Problem random_fee(std::mt19937_64& rng, std::size_t n, std::size_t m, std::size_t terms = 3,
                          double cut_prob = 0.4) {
    Problem p;
    p.agents = names("i", n);
    p.objects = names("o", m);
    p.endowments = Matrix(n, m);
    std::vector<long> weights(terms);
    std::uniform_int_distribution<long> wd(1, 4);
    for (auto& w : weights) w = wd(rng);
    const long total = std::accumulate(weights.begin(), weights.end(), 0L);
    for (std::size_t t = 0; t < terms; ++t) {
        std::vector<AgentId> owners(n);
        std::iota(owners.begin(), owners.end(), 0);
        std::shuffle(owners.begin(), owners.end(), rng);
        const Rational c(weights[t], total);
        for (ObjectId o = 0; o < m; ++o) p.endowments(owners[o], o) += c;
    }
    for (std::size_t i = 0; i < n; ++i) p.preferences.push_back(random_weak(rng, m, cut_prob));
    return p;
}

/// Makes agents a and b hold identical endowments (their average).
inline void equalize(Problem& p, AgentId a, AgentId b) {
    for (ObjectId o = 0; o < p.num_objects(); ++o) {
        const Rational avg = (p.endowments(a, o) + p.endowments(b, o)) / Rational(2);
        p.endowments(a, o) = avg;
        p.endowments(b, o) = avg;
    }
}

inline Problem random_house(std::mt19937_64& rng, std::size_t n, double cut_prob = 0.4) {
    Problem p;
    p.agents = names("i", n);
    p.objects = names("o", n);
    p.endowments = Matrix(n, n);
    const Rational share(1, static_cast<long>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t o = 0; o < n; ++o) p.endowments(i, o) = share;
        p.preferences.push_back(random_weak(rng, n, cut_prob));
    }
    return p;
}

}  // namespace test
