#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fttc/engine.hpp"
#include "fttc/model.hpp"

namespace fttc {

enum class Axiom { IR, SdEfficiency, ETE, EENE, EF, BE, StepwiseETE, StepwiseEEET, BoundedAdvantage };

[[nodiscard]] const char* to_string(Axiom a);
/// Accepts "ir", "sd-efficiency", "ete", "eene", "ef", "be", "stepwise-ete",
/// "stepwise-eeet", "bounded-advantage".
[[nodiscard]] std::optional<Axiom> axiom_from_name(std::string_view name);

struct AgentWitness {
    AgentId agent;
    friend bool operator==(const AgentWitness&, const AgentWitness&) = default;
};
/// `agent` envies or is treated differently from `other`.
struct PairWitness {
    AgentId agent;
    AgentId other;
    friend bool operator==(const PairWitness&, const PairWitness&) = default;
};
struct DominatingAssignment {
    Assignment assignment;
    friend bool operator==(const DominatingAssignment&, const DominatingAssignment&) = default;
};
/// 1-based step; `object` is set when the violation concerns one object.
struct StepWitness {
    std::size_t step;
    AgentId agent;
    AgentId other;
    std::optional<ObjectId> object;
    friend bool operator==(const StepWitness&, const StepWitness&) = default;
};

using Witness = std::variant<std::monostate, AgentWitness, PairWitness, DominatingAssignment, StepWitness>;

struct AxiomReport {
    Axiom axiom;
    bool holds = true;
    Witness witness;
    std::string detail;
    friend bool operator==(const AxiomReport&, const AxiomReport&) = default;
};

[[nodiscard]] AxiomReport check_ir(const Problem& problem, const Assignment& p);

/// Solves an exact LP over alternative assignments p' (rows at most one,
/// columns at most supply) maximizing the total cumulative slack over p.
/// A positive optimum yields the dominating p' as witness.
[[nodiscard]] AxiomReport check_sd_efficiency(const Problem& problem, const Assignment& p);

[[nodiscard]] AxiomReport check_ete(const Problem& problem, const Assignment& p);
[[nodiscard]] AxiomReport check_eene(const Problem& problem, const Assignment& p);
[[nodiscard]] AxiomReport check_ef(const Problem& problem, const Assignment& p);
[[nodiscard]] AxiomReport check_be(const Problem& problem, const Assignment& p);

/// Step-by-step parameter conditions on a recorded trace. `property` must be
/// StepwiseETE, StepwiseEEET or BoundedAdvantage.
[[nodiscard]] AxiomReport check_stepwise(const Trace& trace, Axiom property);

/// Dispatches any axiom; the stepwise ones need the trace.
[[nodiscard]] AxiomReport check_axiom(Axiom axiom, const Problem& problem, const Assignment& p,
                                      const Trace* trace = nullptr);

/// True when every agent's lottery under `dominating` weakly dominates its
/// lottery under `p` and at least one strictly.
[[nodiscard]] bool sd_dominates(const Problem& problem, const Assignment& dominating, const Assignment& p);

/// All weak orders over m objects (ordered set partitions), in a fixed order.
/// Throws EnumerationBudgetExceeded when m > max_objects.
[[nodiscard]] std::vector<WeakPreference> enumerate_weak_orders(std::size_t m, std::size_t max_objects = 4);

enum class ManipulationMode { Weak, Strong };
/// Candidate misreports: every weak order, or only those with at most two
/// indifference classes.
enum class MisreportDomain { Full, Dichotomous };

struct Manipulation {
    std::size_t index;  // position among the candidate misreports
    WeakPreference misreport;
    Assignment outcome;
    DominanceVerdict verdict;  // misreport outcome against the truthful one, under the true preference
};

/// Tries every misreport for `agent`; returns the first (lowest-index) one
/// that manipulates in the given sense, if any.
[[nodiscard]] std::optional<Manipulation> find_manipulation(const Problem& problem, const Policy& policy,
                                                            ManipulationMode mode, AgentId agent,
                                                            MisreportDomain domain = MisreportDomain::Full,
                                                            std::size_t max_objects = 4);
/// Single-threaded reference for find_manipulation.
[[nodiscard]] std::optional<Manipulation> find_manipulation_serial(const Problem& problem, const Policy& policy,
                                                                   ManipulationMode mode, AgentId agent,
                                                                   MisreportDomain domain = MisreportDomain::Full,
                                                                   std::size_t max_objects = 4);

}  // namespace fttc
