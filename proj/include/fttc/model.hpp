#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fttc/matrix.hpp"
#include "fttc/rational.hpp"

namespace fttc {

using AgentId = std::size_t;
using ObjectId = std::size_t;

/// Complete, transitive preference over objects, possibly with ties.
///
/// Stored as an ordered list of indifference classes (best first) that
/// partition the object set, plus the class rank of every object.
class WeakPreference {
public:
    WeakPreference() = default;

    /// Throws InvalidInput unless `classes` is an ordered partition of
    /// {0, ..., num_objects - 1} into non-empty classes.
    WeakPreference(std::vector<std::vector<ObjectId>> classes, std::size_t num_objects);

    /// Strict order from a best-to-worst ranking.
    static WeakPreference strict(std::span<const ObjectId> ranking);

    [[nodiscard]] const std::vector<std::vector<ObjectId>>& classes() const { return classes_; }
    [[nodiscard]] std::size_t num_classes() const { return classes_.size(); }
    [[nodiscard]] std::size_t num_objects() const { return rank_.size(); }

    /// Index of the indifference class containing `o` (0 is best).
    [[nodiscard]] std::size_t rank(ObjectId o) const { return rank_.at(o); }
    [[nodiscard]] bool indifferent(ObjectId a, ObjectId b) const { return rank(a) == rank(b); }
    [[nodiscard]] bool prefers(ObjectId a, ObjectId b) const { return rank(a) < rank(b); }
    [[nodiscard]] bool weakly_prefers(ObjectId a, ObjectId b) const { return rank(a) <= rank(b); }

    friend bool operator==(const WeakPreference&, const WeakPreference&) = default;

private:
    std::vector<std::vector<ObjectId>> classes_;
    std::vector<std::size_t> rank_;
};

/// Probability shares over objects.
struct Lottery {
    std::vector<Rational> shares;

    [[nodiscard]] Rational total() const;
    friend bool operator==(const Lottery&, const Lottery&) = default;
};

/// Matrix of shares, agents by objects.
struct Assignment {
    Matrix shares;

    Assignment() = default;
    Assignment(std::size_t agents, std::size_t objects) : shares(agents, objects) {}
    explicit Assignment(Matrix m) : shares(std::move(m)) {}

    [[nodiscard]] std::size_t num_agents() const { return shares.rows(); }
    [[nodiscard]] std::size_t num_objects() const { return shares.cols(); }
    Rational& operator()(AgentId i, ObjectId o) { return shares(i, o); }
    const Rational& operator()(AgentId i, ObjectId o) const { return shares(i, o); }
    [[nodiscard]] Lottery lottery(AgentId i) const;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// A fractional endowment exchange problem.
struct Problem {
    std::vector<std::string> agents;
    std::vector<std::string> objects;
    Matrix endowments;  // agents x objects
    std::vector<WeakPreference> preferences;

    [[nodiscard]] std::size_t num_agents() const { return agents.size(); }
    [[nodiscard]] std::size_t num_objects() const { return objects.size(); }
    [[nodiscard]] std::optional<AgentId> find_agent(std::string_view name) const;
    [[nodiscard]] std::optional<ObjectId> find_object(std::string_view name) const;

    /// q_o, the total amount of object o in the market.
    [[nodiscard]] Rational supply(ObjectId o) const { return endowments.col_sum(o); }
    [[nodiscard]] Lottery endowment(AgentId i) const;

    friend bool operator==(const Problem&, const Problem&) = default;
};

/// Outcome of comparing l1 against l2 under a weak preference.
///
/// The comparison is one-directional: it asks whether l1 stochastically
/// dominates l2. `WeakNotStrict` is part of the verdict vocabulary but is
/// never produced by sd_compare, because weak dominance with no strict
/// cumulative inequality is exactly `Equal`.
enum class DominanceVerdict { Equal, WeakNotStrict, Strict, Incomparable };

[[nodiscard]] const char* to_string(DominanceVerdict v);

/// True for the verdicts meaning "l1 weakly dominates l2".
[[nodiscard]] inline bool weakly_dominates(DominanceVerdict v) { return v != DominanceVerdict::Incomparable; }

struct Violation {
    enum class Kind {
        ShapeMismatch,
        EntryOutOfRange,
        RowSumExceedsOne,
        SupplyNotInteger,
        SupplyZero,
        PreferenceSize,
    };
    Kind kind;
    std::optional<AgentId> agent;
    std::optional<ObjectId> object;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    [[nodiscard]] bool ok() const { return violations.empty(); }
};

[[nodiscard]] const char* to_string(Violation::Kind k);

/// Collects every violated problem invariant. Never throws.
[[nodiscard]] ValidationReport validate_problem(const Problem& problem);

/// Total share on objects weakly preferred to `o`.
[[nodiscard]] Rational cumulative_share(const Lottery& lottery, const WeakPreference& pref, ObjectId o);

/// Cumulative shares at each class boundary, best class first.
[[nodiscard]] std::vector<Rational> cumulative_profile(std::span<const Rational> shares,
                                                       const WeakPreference& pref);

[[nodiscard]] DominanceVerdict sd_compare(const Lottery& l1, const Lottery& l2, const WeakPreference& pref);

/// House-allocation instance: |I| = |O| and every agent owns 1/|I| of everything.
[[nodiscard]] bool is_house_allocation(const Problem& problem);

}  // namespace fttc
