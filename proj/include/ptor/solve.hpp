#pragma once

// Solutions: coherent choices of base points in every torsor G^b(l, u) and
// H^b(u) making each applicable Q_l instance true. Validity checking,
// greedy extension, amalgamation of systems of partial solutions, extension
// by one atom, whole-model solvers and pullback along embeddings.

#include "ptor/extension.hpp"
#include "ptor/model.hpp"
#include "ptor/sampling.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace ptor {

/// Sets of atoms as bit masks over universe positions (see Universe::mask_of).
using AtomMask = std::uint64_t;

struct Solution {
    std::map<std::pair<Level, FaceId>, GElem> g_part;
    std::map<FaceId, HElem> h_part;

    const GElem* g(Level l, FaceId u) const;
    const HElem* h(FaceId u) const;
    void set(GElem x);
    void set(HElem x);
    bool empty() const noexcept { return g_part.empty() && h_part.empty(); }

    friend bool operator==(const Solution&, const Solution&) = default;
};

/// small ⊆ big as partial functions.
bool extends(const Solution& big, const Solution& small);

/// The part of f whose faces lie inside `mask`.
Solution restrict(const Universe& u, const Solution& f, AtomMask mask);

/// True iff f's domain is exactly levels × [mask]^k ∪ [mask]^k.
bool is_total_on(const Universe& u, const Solution& f, AtomMask mask);

/// A Q_l instance: the cell, its designated h-face and the level.
struct Constraint {
    Level level = 0;
    CellId cell = 0;
    FaceId h_face = 0;
};

struct SolutionCheck {
    bool ok = true;
    std::optional<Constraint> violated;
};

/// Raised when a stated precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Checks every Q_l instance on cells inside `scope` whose k g-arguments and
/// h-argument are all in f's domain. Throws PreconditionError when f names
/// elements that are not in the model, keys disagree with their elements, or
/// the domain leaves the scope.
SolutionCheck is_solution(const TwistedModel& m, const Solution& f, AtomMask scope);
SolutionCheck is_solution(const TwistedModel& m, const Solution& f);

std::string describe(const Universe& u, const Constraint& c);

/// Counts from one completion run.
struct FillTrace {
    std::size_t h_assigned = 0;
    std::size_t g_assigned = 0;
    /// Coordinates fixed to satisfy a constraint cell.
    std::size_t constraints_solved = 0;
    std::size_t max_constraints_per_step = 0;
    /// Cells checked for the "at least two undetermined faces" observation.
    std::size_t vacuity_cells = 0;
};

/// Extends an A-solution to a B-solution: h on new faces first (canonical
/// coset representatives, or uniform within the coset when rng is given),
/// then new (l, u) pairs with levels outer and faces lexicographic inner,
/// each offset chosen to meet every constraint the assignment completes.
Solution greedy_extend(const TwistedModel& m, const Solution& f, AtomMask a, AtomMask b,
                       Rng* rng = nullptr, FillTrace* trace = nullptr);

/// Partial solutions indexed by proper subsets s of {0, ..., m'-1}, given as
/// bit masks; parts[s] is a solution on base ∪ {extras[t] : t ∈ s}.
struct SystemOfSolutions {
    AtomMask base = 0;
    std::vector<AtomId> extras;
    std::map<std::uint32_t, Solution> parts;
};

/// A solution on base ∪ extras extending every part. Refuses m' >= k.
Solution amalgamate(const TwistedModel& m, const SystemOfSolutions& sys, Rng* rng = nullptr,
                    FillTrace* trace = nullptr);

/// A random compatible system over base and extras (m' < k): parts are
/// built in order of subset size, each a randomized completion of the union
/// of the parts below it.
SystemOfSolutions random_compatible_system(const TwistedModel& m, AtomMask base,
                                           std::vector<AtomId> extras, Rng& rng);

/// Extends an A-solution to A ∪ {b}. For k >= 3 this walks A in atom order
/// and glues prefixes with the two-extra amalgamation; for k = 2 (where that
/// amalgamation is unavailable) and for empty A it extends greedily.
Solution extend_solution(const TwistedModel& m, const Solution& f, AtomMask a, AtomId b,
                         Rng* rng = nullptr);

enum class SolveMethod { greedy, linear, brute };
const char* method_name(SolveMethod method) noexcept;
std::optional<SolveMethod> parse_method(std::string_view name) noexcept;

/// Unknown offsets y(l, u, w) for every level and every pair of faces u ≠ w
/// of a cell, plus h-corrections (w, l) for l below the cutoff. One row per
/// (level, cell, h-face).
struct CompiledSystem {
    Gf2System system;
    struct GVar {
        Level level;
        FaceId g_face;
        FaceId coord;
    };
    struct HVar {
        FaceId face;
        Level level;
    };
    std::vector<GVar> g_vars;
    std::vector<HVar> h_vars;
};

CompiledSystem compile_system(const TwistedModel& m);
/// The solution encoded by an assignment to the compiled unknowns;
/// uncompiled offset coordinates are zero.
Solution decode_assignment(const TwistedModel& m, const CompiledSystem& cs, const Gf2Vec& x);

inline constexpr std::size_t brute_solve_bound = 20;

/// A total solution, or nullopt if none exists. Brute refuses systems with
/// more than brute_solve_bound unknowns.
std::optional<Solution> full_solve(const TwistedModel& m, SolveMethod method);

/// Pulls a total target solution back to the source of the embedding:
/// h-points are kept, g-offsets are restricted to the old faces.
Solution pull_back(const Embedding& e, const Solution& f_target);

}  // namespace ptor
