#include "fttc/model.hpp"

#include <algorithm>
#include <sstream>

#include "fttc/errors.hpp"

namespace fttc {

WeakPreference::WeakPreference(std::vector<std::vector<ObjectId>> classes, std::size_t num_objects)
    : classes_(std::move(classes)), rank_(num_objects, num_objects) {
    std::size_t seen = 0;
    for (std::size_t k = 0; k < classes_.size(); ++k) {
        if (classes_[k].empty()) throw InvalidInput("preference has an empty indifference class");
        for (ObjectId o : classes_[k]) {
            if (o >= num_objects) throw InvalidInput("preference mentions an unknown object");
            if (rank_[o] != num_objects) throw InvalidInput("object appears twice in a preference");
            rank_[o] = k;
            ++seen;
        }
        std::sort(classes_[k].begin(), classes_[k].end());
    }
    if (seen != num_objects) throw InvalidInput("preference does not rank every object");
}

WeakPreference WeakPreference::strict(std::span<const ObjectId> ranking) {
    std::vector<std::vector<ObjectId>> classes;
    classes.reserve(ranking.size());
    for (ObjectId o : ranking) classes.push_back({o});
    return WeakPreference(std::move(classes), ranking.size());
}

Rational Lottery::total() const {
    Rational s;
    for (const auto& v : shares) s += v;
    return s;
}

Lottery Assignment::lottery(AgentId i) const {
    const auto r = shares.row(i);
    return Lottery{{r.begin(), r.end()}};
}

std::optional<AgentId> Problem::find_agent(std::string_view name) const {
    const auto it = std::find(agents.begin(), agents.end(), name);
    if (it == agents.end()) return std::nullopt;
    return static_cast<AgentId>(it - agents.begin());
}

std::optional<ObjectId> Problem::find_object(std::string_view name) const {
    const auto it = std::find(objects.begin(), objects.end(), name);
    if (it == objects.end()) return std::nullopt;
    return static_cast<ObjectId>(it - objects.begin());
}

Lottery Problem::endowment(AgentId i) const {
    const auto r = endowments.row(i);
    return Lottery{{r.begin(), r.end()}};
}

const char* to_string(DominanceVerdict v) {
    switch (v) {
        case DominanceVerdict::Equal: return "equal";
        case DominanceVerdict::WeakNotStrict: return "weak-not-strict";
        case DominanceVerdict::Strict: return "strict";
        case DominanceVerdict::Incomparable: return "incomparable";
    }
    return "?";
}

const char* to_string(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::ShapeMismatch: return "shape mismatch";
        case Violation::Kind::EntryOutOfRange: return "entry outside [0,1]";
        case Violation::Kind::RowSumExceedsOne: return "row sum > 1";
        case Violation::Kind::SupplyNotInteger: return "supply not an integer";
        case Violation::Kind::SupplyZero: return "supply is zero";
        case Violation::Kind::PreferenceSize: return "preference does not cover the object set";
    }
    return "?";
}

ValidationReport validate_problem(const Problem& problem) {
    ValidationReport report;
    auto add = [&](Violation::Kind kind, std::optional<AgentId> i, std::optional<ObjectId> o,
                   const std::string& detail) {
        std::ostringstream msg;
        msg << to_string(kind);
        if (i) msg << " for agent " << problem.agents.at(*i);
        if (o) msg << " for object " << problem.objects.at(*o);
        if (!detail.empty()) msg << " (" << detail << ")";
        report.violations.push_back({kind, i, o, msg.str()});
    };

    const std::size_t n = problem.num_agents();
    const std::size_t m = problem.num_objects();
    if (problem.endowments.rows() != n || problem.endowments.cols() != m ||
        problem.preferences.size() != n) {
        add(Violation::Kind::ShapeMismatch, std::nullopt, std::nullopt,
            "endowment matrix or preference list does not match agents/objects");
        return report;
    }

    const Rational one(1);
    for (AgentId i = 0; i < n; ++i) {
        for (ObjectId o = 0; o < m; ++o) {
            const auto& w = problem.endowments(i, o);
            if (w.is_negative() || w > one) {
                add(Violation::Kind::EntryOutOfRange, i, o, w.str());
            }
        }
        const Rational row = problem.endowments.row_sum(i);
        if (row > one) add(Violation::Kind::RowSumExceedsOne, i, std::nullopt, row.str());
        if (problem.preferences[i].num_objects() != m) {
            add(Violation::Kind::PreferenceSize, i, std::nullopt, "");
        }
    }
    for (ObjectId o = 0; o < m; ++o) {
        const Rational q = problem.supply(o);
        if (!q.is_integer()) {
            add(Violation::Kind::SupplyNotInteger, std::nullopt, o, q.str());
        } else if (q.is_zero()) {
            add(Violation::Kind::SupplyZero, std::nullopt, o, "");
        }
    }
    return report;
}

Rational cumulative_share(const Lottery& lottery, const WeakPreference& pref, ObjectId o) {
    if (o >= pref.num_objects() || o >= lottery.shares.size()) {
        throw std::out_of_range("cumulative_share: unknown object");
    }
    const std::size_t k = pref.rank(o);
    Rational s;
    for (std::size_t c = 0; c <= k; ++c) {
        for (ObjectId x : pref.classes()[c]) s += lottery.shares[x];
    }
    return s;
}

std::vector<Rational> cumulative_profile(std::span<const Rational> shares, const WeakPreference& pref) {
    std::vector<Rational> out;
    out.reserve(pref.num_classes());
    Rational running;
    for (const auto& cls : pref.classes()) {
        for (ObjectId x : cls) running += shares[x];
        out.push_back(running);
    }
    return out;
}

DominanceVerdict sd_compare(const Lottery& l1, const Lottery& l2, const WeakPreference& pref) {
    const auto c1 = cumulative_profile(l1.shares, pref);
    const auto c2 = cumulative_profile(l2.shares, pref);
    bool some_greater = false;
    for (std::size_t k = 0; k < c1.size(); ++k) {
        if (c1[k] < c2[k]) return DominanceVerdict::Incomparable;
        if (c1[k] > c2[k]) some_greater = true;
    }
    return some_greater ? DominanceVerdict::Strict : DominanceVerdict::Equal;
}

bool is_house_allocation(const Problem& problem) {
    const std::size_t n = problem.num_agents();
    if (n == 0 || problem.num_objects() != n) return false;
    const Rational share(1, static_cast<long>(n));
    for (AgentId i = 0; i < n; ++i) {
        for (ObjectId o = 0; o < n; ++o) {
            if (problem.endowments(i, o) != share) return false;
        }
    }
    return true;
}

}  // namespace fttc
