#pragma once

// Finite models in twisted-canonical form and evaluation of every predicate
// of the language: sorts I, K, R, P, G^a, H^a, membership, the torsor
// predicates G^b / H^b, projections pi / rho, addition, the actions g / h,
// and the parity predicates Q_l.

#include "ptor/gf2.hpp"
#include "ptor/universe.hpp"

#include <compare>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ptor {

struct AtomElem {
    AtomId id = 0;
    friend auto operator<=>(const AtomElem&, const AtomElem&) = default;
};
struct FaceElem {
    FaceId id = 0;
    friend auto operator<=>(const FaceElem&, const FaceElem&) = default;
};
/// The level constant c_l.
struct LevelElem {
    Level level = 0;
    friend auto operator<=>(const LevelElem&, const LevelElem&) = default;
};
/// The constants c_0, c_1 indexed by Z_2.
struct BitElem {
    bool value = false;
    friend auto operator<=>(const BitElem&, const BitElem&) = default;
};
/// Element of G^a: a vector over the faces.
struct GaElem {
    Gf2Vec vec;
    friend auto operator<=>(const GaElem&, const GaElem&) = default;
};
/// Element of H^a: a vector over the levels supported below the cutoff.
struct HaElem {
    Gf2Vec vec;
    friend auto operator<=>(const HaElem&, const HaElem&) = default;
};
/// Element (l, u, offset) of the torsor G^b(l, u).
struct GElem {
    Level level = 0;
    FaceId face = 0;
    Gf2Vec offset;
    friend auto operator<=>(const GElem&, const GElem&) = default;
};
/// Element (u, vec) of H^b(u); vec lies in the coset twisted onto u.
struct HElem {
    FaceId face = 0;
    Gf2Vec vec;
    friend auto operator<=>(const HElem&, const HElem&) = default;
};

using Element = std::variant<AtomElem, FaceElem, LevelElem, BitElem, GaElem, HaElem, GElem, HElem>;

enum class Sort { atom, face, level, bit, ga, ha, gb, hb };
Sort sort_of(const Element& e) noexcept;
const char* sort_name(Sort s) noexcept;

using TwistKey = std::pair<CellId, FaceId>;
/// Sparse parity twist per (cell, h-face); absent entries are zero.
using TwistTable = std::map<TwistKey, Gf2Vec>;

class TwistedModel {
public:
    /// Validates: one coset per face over the universe's levels and cutoff,
    /// each twist key names a face of its cell, twist vectors span the levels.
    /// Zero twist entries are dropped so equal models compare equal.
    TwistedModel(Universe universe, std::vector<CutoffCoset> h_twist, TwistTable q_twist = {});

    /// Skips the twist-key validation. Used to inject faults for the axiom
    /// checker and to inspect damaged model files.
    static TwistedModel unchecked(Universe universe, std::vector<CutoffCoset> h_twist,
                                  TwistTable q_twist);

    const Universe& universe() const noexcept { return universe_; }
    const CutoffCoset& h_twist(FaceId u) const { return h_twist_.at(u); }
    const std::vector<CutoffCoset>& h_twists() const noexcept { return h_twist_; }
    const TwistTable& q_twist() const noexcept { return q_twist_; }
    /// Twist vector for (cell, face); the zero vector when absent.
    const Gf2Vec& twist(CellId cell, FaceId face) const;
    bool twist_bit(CellId cell, FaceId face, Level l) const;

    // Canonical elements.
    GElem zero_g(Level l, FaceId u) const { return GElem{l, u, universe_.zero_offset()}; }
    /// The canonical representative of H^b(u).
    HElem base_h(FaceId u) const { return HElem{u, h_twist_.at(u).rep()}; }
    GaElem zero_ga() const { return GaElem{universe_.zero_offset()}; }
    HaElem zero_ha() const { return HaElem{universe_.zero_levels()}; }

    // Membership of typed elements in their sorts.
    bool valid_atom(AtomId a) const noexcept { return universe_.has_atom(a); }
    bool valid_ga(const Gf2Vec& v) const noexcept;
    bool valid_ha(const Gf2Vec& v) const noexcept;
    bool valid_g(const GElem& x) const noexcept;
    bool valid_h(const HElem& x) const noexcept;
    bool valid(const Element& e) const noexcept;

    // Unary predicates.
    bool is_I(const Element& e) const noexcept;
    bool is_K(const Element& e) const noexcept;
    bool is_R(const Element& e) const noexcept;
    bool is_Ga(const Element& e) const noexcept;
    bool is_Ha(const Element& e) const noexcept;
    bool is_P(const Element& e) const noexcept;
    bool is_bit_constant(const Element& e) const noexcept;

    // Relations over arbitrary elements; ill-sorted arguments make them false.
    bool member(const Element& x, const Element& y) const noexcept;
    bool Gb(const Element& l, const Element& u, const Element& x) const noexcept;
    bool Hb(const Element& u, const Element& x) const noexcept;
    bool pi(const Element& u, const Element& x, const Element& a) const noexcept;
    bool rho(const Element& l, const Element& x, const Element& a) const noexcept;
    bool plus(const Element& x, const Element& y, const Element& z) const noexcept;
    bool g_rel(const Element& l, const Element& u, const Element& a, const Element& x,
               const Element& y) const noexcept;
    bool h_rel(const Element& u, const Element& a, const Element& x, const Element& y) const noexcept;
    /// Q_l(x_0, ..., x_k): k torsor elements at level l whose faces together
    /// with the face of the final H^b element are all faces of one cell.
    bool Q(Level l, std::span<const Element* const> args) const;

    // Typed fast paths used by the checkers.
    bool g_holds(Level l, FaceId u, const Gf2Vec& a, const GElem& x, const GElem& y) const noexcept;
    bool h_holds(FaceId u, const Gf2Vec& a, const HElem& x, const HElem& y) const noexcept;
    /// The parity test of Q_l on a known (cell, h-face) instance:
    /// sum of the g offsets at h_face == h(l) + twist(cell, h_face)(l).
    bool q_holds(Level l, CellId cell, FaceId h_face, std::span<const GElem* const> g_args,
                 const HElem& h) const;

    // Group actions as functions (the unique witnesses of g and h).
    GElem g_act(const Gf2Vec& a, const GElem& x) const { return GElem{x.level, x.face, x.offset + a}; }
    HElem h_act(const Gf2Vec& a, const HElem& x) const { return HElem{x.face, x.vec + a}; }
    /// The unique a with g(l, u, a, x, y).
    Gf2Vec g_diff(const GElem& x, const GElem& y) const { return x.offset + y.offset; }
    Gf2Vec h_diff(const HElem& x, const HElem& y) const { return x.vec + y.vec; }

    std::string describe(const Element& e) const;

    friend bool operator==(const TwistedModel& a, const TwistedModel& b)
    {
        return a.universe_ == b.universe_ && a.h_twist_ == b.h_twist_ && a.q_twist_ == b.q_twist_;
    }

private:
    struct Unchecked {};
    TwistedModel(Unchecked, Universe universe, std::vector<CutoffCoset> h_twist, TwistTable q_twist);
    void build_index();

    Universe universe_;
    std::vector<CutoffCoset> h_twist_;
    TwistTable q_twist_;
    // Dense lookup (cell * (k + 1) + slot of face in cell) -> 1 + index into
    // twist_values_, 0 when absent. Built when the table is non-empty.
    std::vector<std::uint32_t> twist_index_;
    std::vector<Gf2Vec> twist_values_;
    Gf2Vec zero_levels_;
};

/// The standard model: every H^b(u) is the cutoff subgroup itself.
TwistedModel standard_model(const Universe& universe);

/// The canonical structure M_g: H^b(u) = {u} x g(u).
TwistedModel canonical_model(const Universe& universe, const std::map<Face, CutoffCoset>& g);
TwistedModel canonical_model(const Universe& universe, std::vector<CutoffCoset> g);

/// Q_l evaluated on a (cell, h-face) instance with g-arguments keyed by face.
/// Throws std::invalid_argument when faces, levels or arity do not match.
bool q_holds(const TwistedModel& m, Level l, const Cell& cell, const Face& h_face,
             const std::map<Face, GElem>& g_args, const HElem& h_arg);

}  // namespace ptor
