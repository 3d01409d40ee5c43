#include "ptor/extension.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ptor {

namespace {

std::vector<AtomId> mapped(const std::vector<AtomId>& members, const std::map<AtomId, AtomId>& am)
{
    std::vector<AtomId> out;
    out.reserve(members.size());
    for (AtomId a : members)
        out.push_back(am.at(a));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Embedding::Embedding(TwistedModel source, TwistedModel target, std::map<AtomId, AtomId> atom_map)
    : source_(std::move(source)), target_(std::move(target)), atom_map_(std::move(atom_map))
{
    const Universe& su = source_.universe();
    const Universe& tu = target_.universe();
    if (su.k() != tu.k() || su.levels() != tu.levels() || su.cutoff() != tu.cutoff())
        throw std::invalid_argument("Embedding: source and target differ in k, levels or cutoff");
    if (atom_map_.size() != su.num_atoms())
        throw std::invalid_argument("Embedding: atom map must cover exactly the source atoms");
    std::set<AtomId> images;
    for (const auto& [a, b] : atom_map_) {
        if (!su.has_atom(a))
            throw std::invalid_argument("Embedding: atom " + std::to_string(a) + " is not in the source");
        if (!tu.has_atom(b))
            throw std::invalid_argument("Embedding: image atom " + std::to_string(b) +
                                        " is not in the target");
        if (!images.insert(b).second)
            throw std::invalid_argument("Embedding: atom map is not injective");
    }

    face_map_.reserve(su.num_faces());
    for (FaceId f = 0; f < su.num_faces(); ++f) {
        const FaceId g = tu.require_face(Face{mapped(su.face(f).members, atom_map_)});
        if (!(source_.h_twist(f) == target_.h_twist(g)))
            throw std::invalid_argument("Embedding: h-twist differs on face {" + su.face(f).to_string() + "}");
        face_map_.push_back(g);
    }
    cell_map_.reserve(su.num_cells());
    for (CellId c = 0; c < su.num_cells(); ++c) {
        const CellId d = *tu.cell_id(Cell{mapped(su.cell(c).members, atom_map_)});
        for (FaceId f : su.cell_faces(c))
            if (!(source_.twist(c, f) == target_.twist(d, face_map_[f])))
                throw std::invalid_argument("Embedding: parity twist differs on cell {" +
                                            su.cell(c).to_string() + "}, face {" +
                                            su.face(f).to_string() + "}");
        cell_map_.push_back(d);
    }
}

Embedding Embedding::inclusion(TwistedModel source, TwistedModel target)
{
    std::map<AtomId, AtomId> am;
    for (AtomId a : source.universe().atoms())
        am.emplace(a, a);
    return Embedding(std::move(source), std::move(target), std::move(am));
}

Gf2Vec Embedding::embed_offset(const Gf2Vec& source_offset) const
{
    if (!source_.valid_ga(source_offset))
        throw std::invalid_argument("embed_offset: not a vector over the source faces");
    Gf2Vec out = target_.universe().zero_offset();
    for (std::size_t f : source_offset.support())
        out.set(face_map_[f]);
    return out;
}

Gf2Vec Embedding::restrict_offset(const Gf2Vec& target_offset) const
{
    if (!target_.valid_ga(target_offset))
        throw std::invalid_argument("restrict_offset: not a vector over the target faces");
    Gf2Vec out = source_.universe().zero_offset();
    for (FaceId f = 0; f < face_map_.size(); ++f)
        out.set(f, target_offset.test(face_map_[f]));
    return out;
}

GElem Embedding::embed(const GElem& x) const
{
    return GElem{x.level, map_face(x.face), embed_offset(x.offset)};
}

HElem Embedding::embed(const HElem& x) const
{
    return HElem{map_face(x.face), x.vec};
}

std::vector<HElem> base_anchor(const TwistedModel& m)
{
    std::vector<HElem> out;
    out.reserve(m.universe().num_faces());
    for (FaceId f = 0; f < m.universe().num_faces(); ++f)
        out.push_back(m.base_h(f));
    return out;
}

std::pair<TwistedModel, Embedding> extend_model(const TwistedModel& m,
                                                const std::vector<AtomId>& new_atoms,
                                                const std::vector<HElem>& anchor,
                                                const std::map<AtomId, std::string>& new_labels)
{
    const Universe& su = m.universe();
    if (anchor.size() != su.num_faces())
        throw std::invalid_argument("extend_model: anchor must give one element per face of the source");
    for (FaceId f = 0; f < anchor.size(); ++f)
        if (anchor[f].face != f || !m.valid_h(anchor[f]))
            throw std::invalid_argument("extend_model: anchor for face {" + su.face(f).to_string() +
                                        "} is not an element of its H^b");
    std::vector<AtomId> atoms = su.atoms();
    for (AtomId a : new_atoms) {
        if (su.has_atom(a))
            throw std::invalid_argument("extend_model: atom " + std::to_string(a) + " already present");
        atoms.push_back(a);
    }
    std::map<AtomId, std::string> labels = su.labels();
    for (const auto& [a, name] : new_labels)
        labels[a] = name;
    Universe tu(std::move(atoms), su.k(), su.levels(), su.cutoff(), std::move(labels));

    const std::uint64_t old_mask = tu.mask_of(su.atoms());
    std::vector<CutoffCoset> h_twist;
    h_twist.reserve(tu.num_faces());
    for (FaceId f = 0; f < tu.num_faces(); ++f) {
        if (tu.face_within(f, old_mask))
            h_twist.push_back(m.h_twist(su.require_face(tu.face(f))));
        else
            h_twist.push_back(tu.zero_coset());
    }

    TwistTable tau;
    for (CellId c = 0; c < tu.num_cells(); ++c) {
        const std::uint64_t outside = tu.cell_mask(c) & ~old_mask;
        if (outside == 0) {
            const CellId sc = *su.cell_id(tu.cell(c));
            for (FaceId f : tu.cell_faces(c)) {
                const Gf2Vec& t = m.twist(sc, su.require_face(tu.face(f)));
                if (!t.none())
                    tau.emplace(TwistKey{c, f}, t);
            }
        } else if ((outside & (outside - 1)) == 0) {
            // Exactly one new atom: its complement in the cell is the only old face.
            const FaceId f = *tu.face_by_mask(tu.cell_mask(c) & ~outside);
            const Gf2Vec& vec = anchor[su.require_face(tu.face(f))].vec;
            if (!vec.none())
                tau.emplace(TwistKey{c, f}, vec);
        }
    }

    TwistedModel target(std::move(tu), std::move(h_twist), std::move(tau));
    Embedding e = Embedding::inclusion(m, target);
    return {std::move(target), std::move(e)};
}

std::pair<TwistedModel, Embedding> extend_model(const TwistedModel& m,
                                                const std::vector<AtomId>& new_atoms,
                                                const std::map<Face, HElem>& anchor)
{
    const Universe& su = m.universe();
    std::vector<HElem> dense;
    dense.reserve(su.num_faces());
    for (const Face& f : su.faces()) {
        auto it = anchor.find(f);
        if (it == anchor.end())
            throw std::invalid_argument("extend_model: anchor undefined on face {" + f.to_string() + "}");
        dense.push_back(it->second);
    }
    if (anchor.size() != su.num_faces())
        throw std::invalid_argument("extend_model: anchor names faces outside the source");
    return extend_model(m, new_atoms, dense);
}

}  // namespace ptor
