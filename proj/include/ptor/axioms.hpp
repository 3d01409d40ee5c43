#pragma once

// Machine check of the axiom list of T (items 1-17) and the three extra
// sentences of phi (items 18-20) on a finite twisted model.
//
// Each axiom is quantified frame by frame: a frame fixes the discrete
// parameters (level, faces, cell, designated positions) and leaves the
// group-valued arguments free. When every frame has at most
// `exhaustive_bound` argument tuples and the axiom as a whole at most
// `total_bound`, all tuples are enumerated; otherwise `samples` uniform
// points are drawn and the result is marked as sampled.

#include "ptor/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ptor {

struct AxiomOptions {
    std::uint64_t exhaustive_bound = std::uint64_t{1} << 20;
    std::uint64_t total_bound = std::uint64_t{1} << 28;
    std::uint64_t samples = 1000;
    std::uint64_t seed = 0;
};

enum class CheckMode { exhaustive, sampled };
const char* mode_name(CheckMode mode) noexcept;

struct AxiomResult {
    unsigned id = 0;
    std::string name;
    bool ok = true;
    CheckMode mode = CheckMode::exhaustive;
    /// Argument tuples examined.
    std::uint64_t points = 0;
    /// Description of the first counterexample found.
    std::string witness;
};

struct AxiomReport {
    std::vector<AxiomResult> results;

    bool ok() const noexcept;
    bool exhaustive() const noexcept;
    /// Lowest-numbered failing axiom, or nullptr.
    const AxiomResult* first_failure() const noexcept;
};

inline constexpr unsigned num_axioms = 20;
/// Short name of axiom `id` (1-based).
const char* axiom_name(unsigned id);

AxiomReport check_axioms(const TwistedModel& m, const AxiomOptions& options = {});

}  // namespace ptor
