#pragma once

// The isomorphism between two models over the same P-part induced by a
// solution of each: base points go to base points and every other torsor
// element keeps its offset from the base point. Verification compares every
// predicate of the language before and after the map.

#include "ptor/axioms.hpp"
#include "ptor/model.hpp"
#include "ptor/solve.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ptor {

/// Two models with literally the same universe, hence the same P-part.
struct PIdentification {
    TwistedModel source;
    TwistedModel target;
};

/// Throws PreconditionError unless the universes are identical.
PIdentification identify(TwistedModel source, TwistedModel target);

class IsoMap {
public:
    IsoMap(PIdentification pid, Solution f_source, Solution f_target);

    const PIdentification& identification() const noexcept { return pid_; }
    const TwistedModel& source() const noexcept { return pid_.source; }
    const TwistedModel& target() const noexcept { return pid_.target; }
    const Solution& source_solution() const noexcept { return f_m_; }
    const Solution& target_solution() const noexcept { return f_n_; }

    /// j(x): identity on the P-part, offset-preserving on the torsors.
    Element operator()(const Element& x) const;
    /// The map j^-1 computed from the solutions (overrides are ignored).
    Element inverse(const Element& y) const;

    /// Forces j(x) = y. Only used to inject faults into verification.
    void set_image(const Element& x, Element y) { overrides_[x] = std::move(y); }

private:
    PIdentification pid_;
    Solution f_m_;
    Solution f_n_;
    std::map<Element, Element> overrides_;
};

/// Requires both solutions to be total and valid on their models.
IsoMap build_iso(PIdentification pid, const Solution& f_source, const Solution& f_target);

struct IsoOptions {
    std::uint64_t exhaustive_bound = std::uint64_t{1} << 20;
    std::uint64_t samples = 1000;
    std::uint64_t seed = 0;
};

/// One predicate family. The torsor relations (G^b, H^b, g, h, Q_l) are
/// compared on argument tuples drawn from the torsors they are about; any
/// other tuple is ill-sorted on both sides once j preserves the torsors,
/// which the G^b and H^b checks establish.
struct IsoCheck {
    std::string predicate;
    bool ok = true;
    CheckMode mode = CheckMode::exhaustive;
    std::uint64_t points = 0;
    std::string witness;
};

struct IsoReport {
    std::vector<IsoCheck> checks;

    bool ok() const noexcept;
    bool exhaustive() const noexcept;
    const IsoCheck* first_failure() const noexcept;
};

/// Checks, in order: j is the identity on P; the unary predicates; membership,
/// pi, rho and +; G^b and H^b with bijectivity of j on every torsor; the
/// actions g and h; both directions of every Q_l instance; and the parity
/// bookkeeping (offsets z_i from the base points satisfy sum z_i = z_k
/// exactly when Q_l holds) on both sides.
IsoReport verify_iso(const IsoMap& iso, const IsoOptions& options = {});

}  // namespace ptor
