#pragma once

// Invariants read off a model through a family of anchor points in the
// torsors G^b(l, u). The cardinals aleph_m become finite thresholds t_m:
// two functions are ~_m-equal when they differ at fewer than t_m points.

#include "ptor/model.hpp"
#include "ptor/solve.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ptor {

/// t_0 < t_1 < ..., all positive.
class Thresholds {
public:
    Thresholds() = default;
    explicit Thresholds(std::vector<std::size_t> t);

    std::size_t size() const noexcept { return t_.size(); }
    std::size_t operator[](std::size_t m) const { return t_.at(m); }
    const std::vector<std::size_t>& values() const noexcept { return t_; }

    friend bool operator==(const Thresholds&, const Thresholds&) = default;

private:
    std::vector<std::size_t> t_;
};

/// A coset (leaf) or a function from atoms to classes one level down,
/// compared with ~_m for its threshold index m. An m-invariant is a node
/// with index m whose leaves sit m + 1 levels down.
class InvariantClass {
public:
    static InvariantClass leaf(CutoffCoset coset);
    static InvariantClass node(std::size_t threshold_index, std::map<AtomId, InvariantClass> children);

    bool is_leaf() const noexcept { return children_.empty() && has_coset_; }
    /// 0 for a leaf, 1 + depth of the children otherwise.
    std::size_t depth() const noexcept { return depth_; }
    const CutoffCoset& coset() const;
    std::size_t threshold_index() const noexcept { return index_; }
    const std::map<AtomId, InvariantClass>& children() const noexcept { return children_; }

    /// Literal structural equality.
    friend bool operator==(const InvariantClass&, const InvariantClass&) = default;

    /// Nested bracket form: leaves as coset representatives, nodes as
    /// "m[atom:child ...]".
    std::string to_string() const;

private:
    CutoffCoset coset_;
    bool has_coset_ = false;
    std::size_t index_ = 0;
    std::size_t depth_ = 0;
    std::map<AtomId, InvariantClass> children_;
};

/// Threshold equality: leaves compare as cosets; nodes need the same domain
/// and fewer than th[index] points whose children are not equivalent.
/// Reflexive and symmetric, not transitive.
bool equivalent(const InvariantClass& a, const InvariantClass& b, const Thresholds& th);

/// Points of the common domain where the children are not equivalent.
std::size_t differing_points(const InvariantClass& a, const InvariantClass& b, const Thresholds& th);

/// A partial map (level, face) -> offset of an element of G^b(level, face).
/// Besides explicit entries it may hold zero regions: every face inside a
/// region gets the zero offset at every level, unless set explicitly.
class AnchorFamily {
public:
    AnchorFamily() = default;
    /// The zero anchor everywhere.
    static AnchorFamily zero(const Universe& u);

    void set(Level l, FaceId face, Gf2Vec offset);
    void add_zero_region(AtomMask atoms);

    bool covers(const Universe& u, Level l, FaceId face) const;
    /// The anchor at (l, face); throws PreconditionError when uncovered.
    GElem at(const Universe& u, Level l, FaceId face) const;

    /// This family, with `other` filling in where this one is undefined.
    AnchorFamily united_with(const Universe& u, const AnchorFamily& other) const;

    const std::map<std::pair<Level, FaceId>, Gf2Vec>& entries() const noexcept { return entries_; }
    const std::vector<AtomMask>& zero_regions() const noexcept { return zero_regions_; }

private:
    std::map<std::pair<Level, FaceId>, Gf2Vec> entries_;
    std::vector<AtomMask> zero_regions_;
};

/// The level-indexed function g(l) = 0 iff Q_l holds of the anchors on the
/// faces chain - i_j (j = 1..k) and y on the h-face {i_1, ..., i_k}, taken
/// modulo the cutoff subgroup. chain = (i_0, ..., i_k).
CutoffCoset invariant_k(const TwistedModel& m, const std::vector<AtomId>& chain, const AnchorFamily& f,
                        const HElem& y);

/// |I_j| = t_0 + ... + t_j: the nested prefixes grow by a band of t_j atoms,
/// so a function on band j can differ at t_j points.
std::size_t nested_size(const Thresholds& th, std::size_t j);

/// The m-invariant for base, tail via the prefixes I_j = base[0, |I_j|) for
/// j < m and the anchors f. Depth 0 maps each a in base to invariant_k of
/// (a, tail) with the canonical y. Depth m > 0 first extends f to
/// [I_{m-1} + tail]^k by `f_prime` where given and the zero anchor
/// elsewhere, then recurses on base I_{m-1} and tail (a, tail) for each a
/// in base \ I_{m-1}. Requires m = 0 or m <= k - 2,
/// |tail| = k - m, tail disjoint from base, |base| >= |I_{m - 1}|, f covering
/// every face of base + tail not containing all of tail, and f_prime
/// agreeing with f where both are defined.
InvariantClass invariant_m(const TwistedModel& model, std::size_t m, const std::vector<AtomId>& base,
                           const std::vector<AtomId>& tail, const AnchorFamily& f, const Thresholds& th,
                           const AnchorFamily* f_prime = nullptr);

}  // namespace ptor
