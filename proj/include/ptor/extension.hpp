#pragma once

// Embeddings between twisted models and the construction of a larger model
// containing a given one.

#include "ptor/model.hpp"

#include <map>
#include <utility>
#include <vector>

namespace ptor {

/// An atom-level embedding M ⊆ N. Faces and G^a embed by zero-extension;
/// torsor elements keep their offsets on old faces and get zero elsewhere.
class Embedding {
public:
    /// Validates injectivity, identical k / levels / cutoff, agreement of
    /// h-twists on old faces and of parity twists on old cells.
    Embedding(TwistedModel source, TwistedModel target, std::map<AtomId, AtomId> atom_map);

    /// The inclusion of a model into one over a superset of its atoms.
    static Embedding inclusion(TwistedModel source, TwistedModel target);

    const TwistedModel& source() const noexcept { return source_; }
    const TwistedModel& target() const noexcept { return target_; }
    const std::map<AtomId, AtomId>& atom_map() const noexcept { return atom_map_; }

    FaceId map_face(FaceId source_face) const { return face_map_.at(source_face); }
    CellId map_cell(CellId source_cell) const { return cell_map_.at(source_cell); }
    /// Zero-extends a vector over the source faces.
    Gf2Vec embed_offset(const Gf2Vec& source_offset) const;
    /// Restricts a vector over the target faces to the old faces.
    Gf2Vec restrict_offset(const Gf2Vec& target_offset) const;
    GElem embed(const GElem& x) const;
    HElem embed(const HElem& x) const;

private:
    TwistedModel source_;
    TwistedModel target_;
    std::map<AtomId, AtomId> atom_map_;
    std::vector<FaceId> face_map_;
    std::vector<CellId> cell_map_;
};

/// Builds N ⊇ M over atoms(M) ∪ new_atoms. Old faces keep their h-twist and
/// new faces get the cutoff subgroup. Parity twists: cells inside M copy
/// M's twists; a cell whose only old face is u gets twist anchor(u).vec on
/// (cell, u); every other entry is zero. `anchor` holds one element of
/// H^b(u) per face of M, indexed by face id.
std::pair<TwistedModel, Embedding> extend_model(const TwistedModel& m,
                                                const std::vector<AtomId>& new_atoms,
                                                const std::vector<HElem>& anchor,
                                                const std::map<AtomId, std::string>& new_labels = {});

std::pair<TwistedModel, Embedding> extend_model(const TwistedModel& m,
                                                const std::vector<AtomId>& new_atoms,
                                                const std::map<Face, HElem>& anchor);

/// The canonical representatives base_h(u) for every face.
std::vector<HElem> base_anchor(const TwistedModel& m);

}  // namespace ptor
