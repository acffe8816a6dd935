#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netforge/gfield.hpp"
#include "netforge/netcons.hpp"
#include "netforge/profile.hpp"

namespace netforge {

struct ILPTerm {
    int var = 0;
    Digit coeff = 0;
};

/// One disequation in integer form. Hard rows encode
///   0 < sum(coeff * x) + constant + b*k < b,
/// weak rows encode
///   nu <= sum(coeff * x) + constant + b*k <= (b-1) nu.
struct ILPRow {
    std::vector<ILPTerm> terms;
    Digit constant = 0;
    int k_lower = 0;
    int k_upper = 0;
    std::optional<Weight> weight;
    int source = -1;  // index into the disequation list it came from
};

struct ILPModel {
    PrimeBase base{2};
    std::vector<UnknownSlot> variables;
    std::vector<ILPRow> hard;
    std::vector<ILPRow> weak;
    /// Set when a hard row has an identically zero form.
    bool infeasible_at_build = false;
};

ILPModel build_ilp(PrimeBase base, std::span<const Disequation> hard, std::span<const Disequation> weak);

enum class SolveStatus {
    Optimal,
    Suboptimal,      // node budget ran out; best incumbent returned
    HardInfeasible,  // proven: no assignment satisfies every hard row
    Unknown,         // budget ran out before any hard-feasible assignment was found
};

std::string to_string(SolveStatus status);

struct Assignment {
    std::vector<Digit> values;      // per model variable
    std::vector<bool> satisfied;    // nu per weak row
    Weight objective{0};

    SlotValues slot_values(const ILPModel& model) const;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Unknown;
    Assignment assignment;
    std::uint64_t nodes = 0;

    bool feasible() const { return status == SolveStatus::Optimal || status == SolveStatus::Suboptimal; }
};

struct SolveOptions {
    std::uint64_t budget = 1'000'000;
    std::uint64_t seed = 0;
    /// 1-flip hill climbing on the incumbent when the budget runs out.
    bool polish = true;
};

SolveResult solve(const ILPModel& model, const SolveOptions& options = {});

/// Objective of an arbitrary assignment, or nullopt when a hard row fails.
/// Throws std::invalid_argument unless there is one value per variable.
std::optional<Weight> evaluate(const ILPModel& model, std::span<const Digit> values);

/// CPLEX LP text (Maximize / Subject To / Bounds / General / End).
std::string export_lp(const ILPModel& model);

std::string lp_variable_name(const UnknownSlot& slot);

}  // namespace netforge
