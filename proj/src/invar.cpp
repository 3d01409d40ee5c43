#include "ptor/invar.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ptor {

Thresholds::Thresholds(std::vector<std::size_t> t) : t_(std::move(t))
{
    for (std::size_t i = 0; i < t_.size(); ++i) {
        if (t_[i] == 0)
            throw std::invalid_argument("thresholds must be positive");
        if (i > 0 && t_[i] <= t_[i - 1])
            throw std::invalid_argument("thresholds must be strictly increasing");
    }
}

InvariantClass InvariantClass::leaf(CutoffCoset coset)
{
    InvariantClass c;
    c.coset_ = std::move(coset);
    c.has_coset_ = true;
    return c;
}

InvariantClass InvariantClass::node(std::size_t threshold_index, std::map<AtomId, InvariantClass> children)
{
    InvariantClass c;
    c.index_ = threshold_index;
    c.depth_ = 1;
    if (!children.empty()) {
        const std::size_t d = children.begin()->second.depth();
        for (const auto& [a, child] : children)
            if (child.depth() != d)
                throw std::invalid_argument("InvariantClass::node: children of different depths");
        c.depth_ = d + 1;
    }
    c.children_ = std::move(children);
    return c;
}

const CutoffCoset& InvariantClass::coset() const
{
    if (!has_coset_)
        throw std::logic_error("InvariantClass::coset: not a leaf");
    return coset_;
}

std::string InvariantClass::to_string() const
{
    if (has_coset_)
        return coset_.rep().to_string();
    std::string s = std::to_string(index_) + "[";
    bool first = true;
    for (const auto& [a, child] : children_) {
        if (!first)
            s += ' ';
        first = false;
        s += std::to_string(a) + ":" + child.to_string();
    }
    return s + "]";
}

namespace {

bool same_shape(const InvariantClass& a, const InvariantClass& b)
{
    if (a.is_leaf() || b.is_leaf())
        return a.is_leaf() && b.is_leaf();
    if (a.threshold_index() != b.threshold_index() || a.children().size() != b.children().size())
        return false;
    return std::ranges::equal(a.children(), b.children(),
                              [](const auto& x, const auto& y) { return x.first == y.first; });
}

}  // namespace

std::size_t differing_points(const InvariantClass& a, const InvariantClass& b, const Thresholds& th)
{
    std::size_t n = 0;
    for (const auto& [atom, child] : a.children()) {
        auto it = b.children().find(atom);
        if (it != b.children().end() && !equivalent(child, it->second, th))
            ++n;
    }
    return n;
}

bool equivalent(const InvariantClass& a, const InvariantClass& b, const Thresholds& th)
{
    if (!same_shape(a, b))
        return false;
    if (a.is_leaf())
        return a.coset() == b.coset();
    if (a.threshold_index() >= th.size())
        throw std::out_of_range("equivalent: no threshold t_" + std::to_string(a.threshold_index()));
    return differing_points(a, b, th) < th[a.threshold_index()];
}

AnchorFamily AnchorFamily::zero(const Universe& u)
{
    AnchorFamily f;
    f.add_zero_region(u.num_atoms() >= 64 ? ~AtomMask{0} : (AtomMask{1} << u.num_atoms()) - 1);
    return f;
}

void AnchorFamily::set(Level l, FaceId face, Gf2Vec offset)
{
    entries_.insert_or_assign({l, face}, std::move(offset));
}

void AnchorFamily::add_zero_region(AtomMask atoms)
{
    zero_regions_.push_back(atoms);
}

bool AnchorFamily::covers(const Universe& u, Level l, FaceId face) const
{
    if (l >= u.levels() || face >= u.num_faces())
        return false;
    if (entries_.count({l, face}))
        return true;
    return std::ranges::any_of(zero_regions_, [&](AtomMask r) { return u.face_within(face, r); });
}

GElem AnchorFamily::at(const Universe& u, Level l, FaceId face) const
{
    if (auto it = entries_.find({l, face}); it != entries_.end())
        return GElem{l, face, it->second};
    if (covers(u, l, face))
        return GElem{l, face, u.zero_offset()};
    throw PreconditionError("anchor family is undefined at level " + std::to_string(l) + ", face {" +
                            (face < u.num_faces() ? u.face(face).to_string() : "#" + std::to_string(face)) + "}");
}

AnchorFamily AnchorFamily::united_with(const Universe& u, const AnchorFamily& other) const
{
    AnchorFamily out = *this;
    for (const auto& [key, offset] : other.entries_)
        if (!covers(u, key.first, key.second))
            out.entries_.emplace(key, offset);
    out.zero_regions_.insert(out.zero_regions_.end(), other.zero_regions_.begin(), other.zero_regions_.end());
    return out;
}

std::size_t nested_size(const Thresholds& th, std::size_t j)
{
    std::size_t n = 0;
    for (std::size_t i = 0; i <= j; ++i)
        n += th[i];
    return n;
}

namespace {

AtomMask mask_of(const Universe& u, const std::vector<AtomId>& atoms)
{
    return u.mask_of(std::span<const AtomId>(atoms));
}

FaceId face_of(const Universe& u, AtomMask mask)
{
    const auto f = u.face_by_mask(mask);
    if (!f)
        throw PreconditionError("no face with atoms {" + Face::of(u.atoms_of_mask(mask)).to_string() + "}");
    return *f;
}

void require_atoms(const Universe& u, const std::vector<AtomId>& atoms, const char* what)
{
    std::set<AtomId> seen;
    for (AtomId a : atoms) {
        if (!u.has_atom(a))
            throw PreconditionError(std::string(what) + ": atom " + std::to_string(a) + " is not in the universe");
        if (!seen.insert(a).second)
            throw PreconditionError(std::string(what) + ": atom " + std::to_string(a) + " is repeated");
    }
}

AtomMask faces_union(const Universe& u, const std::vector<AtomId>& a, const std::vector<AtomId>& b)
{
    return mask_of(u, a) | mask_of(u, b);
}

// The chain's faces are taken as given; callers have checked the shape.
CutoffCoset read_invariant(const TwistedModel& m, const std::vector<AtomId>& chain, const AnchorFamily& f,
                           const HElem& y)
{
    const Universe& u = m.universe();
    const AtomMask all = mask_of(u, chain);
    const CellId cell = *u.cell_by_mask(all);
    const FaceId h_face = face_of(u, all & ~(AtomMask{1} << u.atom_position(chain[0])));
    if (y.face != h_face || !m.valid_h(y))
        throw PreconditionError("invariant: y is not an element of H^b({" + u.face(h_face).to_string() + "})");
    std::vector<FaceId> g_faces;
    for (std::size_t j = 1; j < chain.size(); ++j)
        g_faces.push_back(face_of(u, all & ~(AtomMask{1} << u.atom_position(chain[j]))));

    Gf2Vec g = u.zero_levels();
    std::vector<GElem> anchors(g_faces.size());
    std::vector<const GElem*> args(g_faces.size());
    for (Level l = 0; l < u.levels(); ++l) {
        for (std::size_t j = 0; j < g_faces.size(); ++j) {
            anchors[j] = f.at(u, l, g_faces[j]);
            args[j] = &anchors[j];
        }
        if (!m.q_holds(l, cell, h_face, args, y))
            g.set(l);
    }
    return CutoffCoset(g, u.cutoff());
}

void require_covered(const Universe& u, const AnchorFamily& f, AtomMask atoms, AtomMask tail)
{
    for (FaceId face : u.faces_within(atoms)) {
        if ((u.face_mask(face) & tail) == tail)
            continue;
        for (Level l = 0; l < u.levels(); ++l)
            if (!f.covers(u, l, face))
                throw PreconditionError("anchor family is undefined at level " + std::to_string(l) + ", face {" +
                                        u.face(face).to_string() + "}");
    }
}

// f on the faces of `region`, then f_prime, then the zero anchor.
AnchorFamily extend_to(const Universe& u, const AnchorFamily& f, const AnchorFamily* f_prime, AtomMask region)
{
    AnchorFamily fill;
    if (f_prime) {
        for (const auto& [key, offset] : f_prime->entries())
            if (u.face_within(key.second, region))
                fill.set(key.first, key.second, offset);
        for (AtomMask r : f_prime->zero_regions())
            fill.add_zero_region(r & region);
        for (FaceId face : u.faces_within(region))
            for (Level l = 0; l < u.levels(); ++l)
                if (f.covers(u, l, face) && fill.covers(u, l, face) && !(f.at(u, l, face) == fill.at(u, l, face)))
                    throw PreconditionError("f_prime disagrees with f at level " + std::to_string(l) + ", face {" +
                                            u.face(face).to_string() + "}");
    }
    AnchorFamily zero;
    zero.add_zero_region(region);
    return f.united_with(u, fill).united_with(u, zero);
}

InvariantClass invariant_rec(const TwistedModel& model, std::size_t m, const std::vector<AtomId>& base,
                             const std::vector<AtomId>& tail, const AnchorFamily& f, const Thresholds& th,
                             const AnchorFamily* f_prime)
{
    const Universe& u = model.universe();
    std::map<AtomId, InvariantClass> children;
    if (m == 0) {
        const HElem y = model.base_h(face_of(u, mask_of(u, tail)));
        std::vector<AtomId> chain;
        chain.reserve(tail.size() + 1);
        chain.push_back(0);
        chain.insert(chain.end(), tail.begin(), tail.end());
        for (AtomId a : base) {
            chain[0] = a;
            children.emplace(a, InvariantClass::leaf(read_invariant(model, chain, f, y)));
        }
        return InvariantClass::node(0, std::move(children));
    }
    const std::vector<AtomId> prefix(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(nested_size(th, m - 1)));
    const AnchorFamily g = extend_to(u, f, f_prime, faces_union(u, prefix, tail));
    std::vector<AtomId> next_tail;
    next_tail.reserve(tail.size() + 1);
    next_tail.push_back(0);
    next_tail.insert(next_tail.end(), tail.begin(), tail.end());
    for (std::size_t i = prefix.size(); i < base.size(); ++i) {
        next_tail[0] = base[i];
        children.emplace(base[i], invariant_rec(model, m - 1, prefix, next_tail, g, th, f_prime));
    }
    return InvariantClass::node(m, std::move(children));
}

}  // namespace

CutoffCoset invariant_k(const TwistedModel& m, const std::vector<AtomId>& chain, const AnchorFamily& f,
                        const HElem& y)
{
    const Universe& u = m.universe();
    require_atoms(u, chain, "invariant_k");
    if (chain.size() != u.k() + 1)
        throw PreconditionError("invariant_k: the chain needs k + 1 = " + std::to_string(u.k() + 1) + " atoms");
    return read_invariant(m, chain, f, y);
}

InvariantClass invariant_m(const TwistedModel& model, std::size_t m, const std::vector<AtomId>& base,
                           const std::vector<AtomId>& tail, const AnchorFamily& f, const Thresholds& th,
                           const AnchorFamily* f_prime)
{
    const Universe& u = model.universe();
    const std::size_t k = u.k();
    if (m > 0 && m + 2 > k)
        throw PreconditionError("invariant_m: m = " + std::to_string(m) + " exceeds k - 2");
    if (th.size() <= m)
        throw PreconditionError("invariant_m: no threshold t_" + std::to_string(m));
    if (tail.size() != k - m)
        throw PreconditionError("invariant_m: the tail needs k - m = " + std::to_string(k - m) + " atoms");
    require_atoms(u, base, "invariant_m base");
    require_atoms(u, tail, "invariant_m tail");
    const AtomMask tail_mask = mask_of(u, tail);
    if (mask_of(u, base) & tail_mask)
        throw PreconditionError("invariant_m: base and tail overlap");
    if (m > 0 && base.size() < nested_size(th, m - 1))
        throw PreconditionError("invariant_m: the base has fewer than |I_" + std::to_string(m - 1) + "| = " +
                                std::to_string(nested_size(th, m - 1)) + " atoms");
    require_covered(u, f, faces_union(u, base, tail), tail_mask);
    return invariant_rec(model, m, base, tail, f, th, f_prime);
}

}  // namespace ptor
