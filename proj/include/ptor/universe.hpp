#pragma once

// Atoms, k-element faces, (k+1)-element cells and levels.

#include "ptor/gf2.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ptor {

using AtomId = std::uint32_t;
using FaceId = std::uint32_t;
using CellId = std::uint32_t;
using Level = std::uint32_t;

/// Atom positions are encoded in 64-bit masks.
inline constexpr std::size_t max_atoms = 64;

/// A k-element set of atoms, members sorted ascending.
struct Face {
    std::vector<AtomId> members;

    /// Sorts and rejects repeated atoms.
    static Face of(std::vector<AtomId> atoms);
    std::string to_string() const;  // "0,1,4"

    friend bool operator==(const Face&, const Face&) = default;
    friend auto operator<=>(const Face&, const Face&) = default;
};

/// A (k+1)-element set of atoms, members sorted ascending.
struct Cell {
    std::vector<AtomId> members;

    static Cell of(std::vector<AtomId> atoms);
    std::string to_string() const;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// All k-subsets of a sorted atom list, in lexicographic order.
std::vector<std::vector<AtomId>> k_subsets(std::span<const AtomId> atoms, std::size_t k);

/// The k+1 faces of a cell, lexicographic order.
std::vector<Face> faces_of(const Cell& cell);

/// Cells v with u strictly inside v and v within the given atoms; one per
/// atom of `within` outside u, in increasing order of that atom.
std::vector<Cell> cells_containing(const Face& u, std::span<const AtomId> within);

/// All k-element faces of `within` in lexicographic order.
std::vector<Face> all_faces(std::span<const AtomId> within, std::size_t k);

class Universe {
public:
    Universe(std::vector<AtomId> atoms, unsigned k, unsigned levels, unsigned cutoff,
             std::map<AtomId, std::string> labels = {});

    /// Atoms 0..n-1.
    static Universe range(std::size_t n, unsigned k, unsigned levels, unsigned cutoff);

    const std::vector<AtomId>& atoms() const noexcept { return atoms_; }
    std::size_t num_atoms() const noexcept { return atoms_.size(); }
    unsigned k() const noexcept { return k_; }
    unsigned levels() const noexcept { return levels_; }
    unsigned cutoff() const noexcept { return cutoff_; }
    const std::map<AtomId, std::string>& labels() const noexcept { return labels_; }
    bool has_atom(AtomId a) const noexcept { return position_.count(a) != 0; }
    std::size_t atom_position(AtomId a) const;

    std::size_t num_faces() const noexcept { return faces_.size(); }
    const Face& face(FaceId id) const { return faces_.at(id); }
    const std::vector<Face>& faces() const noexcept { return faces_; }
    std::optional<FaceId> face_id(const Face& f) const;
    FaceId require_face(const Face& f) const;
    std::uint64_t face_mask(FaceId id) const noexcept { return face_masks_[id]; }
    std::optional<FaceId> face_by_mask(std::uint64_t mask) const;

    std::size_t num_cells() const noexcept { return cells_.size(); }
    const Cell& cell(CellId id) const { return cells_.at(id); }
    std::optional<CellId> cell_id(const Cell& c) const;
    std::uint64_t cell_mask(CellId id) const noexcept { return cell_masks_[id]; }
    std::optional<CellId> cell_by_mask(std::uint64_t mask) const;
    /// Faces of a cell as ids, lexicographic order.
    const std::vector<FaceId>& cell_faces(CellId id) const { return cell_faces_.at(id); }
    /// The cell u ∪ w for two faces sharing k-1 atoms.
    std::optional<CellId> cell_of_pair(FaceId u, FaceId w) const;
    /// The cell whose faces are exactly the given k+1 distinct faces.
    std::optional<CellId> cell_of_faces(std::span<const FaceId> faces) const;
    /// Cells containing the face, in increasing order of the extra atom.
    const std::vector<CellId>& cells_with_face(FaceId id) const { return cells_with_face_.at(id); }

    std::uint64_t mask_of(std::span<const AtomId> atoms) const;
    std::vector<AtomId> atoms_of_mask(std::uint64_t mask) const;
    bool face_within(FaceId id, std::uint64_t mask) const noexcept
    {
        return (face_masks_[id] & ~mask) == 0;
    }
    std::vector<FaceId> faces_within(std::uint64_t mask) const;
    std::vector<CellId> cells_within(std::uint64_t mask) const;

    FamilyTag face_family() const noexcept { return face_family_; }
    FamilyTag level_family() const noexcept { return level_family_; }
    /// Zero vector over the face family (an element of G^a).
    Gf2Vec zero_offset() const { return Gf2Vec(faces_.size(), face_family_); }
    /// Zero vector over the levels.
    Gf2Vec zero_levels() const { return Gf2Vec(levels_, level_family_); }
    CutoffCoset zero_coset() const { return CutoffCoset::zero(levels_, cutoff_, level_family_); }

    std::string atom_name(AtomId a) const;

    friend bool operator==(const Universe& a, const Universe& b)
    {
        return a.atoms_ == b.atoms_ && a.k_ == b.k_ && a.levels_ == b.levels_ &&
               a.cutoff_ == b.cutoff_ && a.labels_ == b.labels_;
    }

private:
    std::vector<AtomId> atoms_;
    unsigned k_;
    unsigned levels_;
    unsigned cutoff_;
    std::map<AtomId, std::string> labels_;
    std::unordered_map<AtomId, std::size_t> position_;

    std::vector<Face> faces_;
    std::vector<std::uint64_t> face_masks_;
    std::unordered_map<std::uint64_t, FaceId> face_by_mask_;
    std::vector<Cell> cells_;
    std::vector<std::uint64_t> cell_masks_;
    std::unordered_map<std::uint64_t, CellId> cell_by_mask_;
    std::vector<std::vector<FaceId>> cell_faces_;
    std::vector<std::vector<CellId>> cells_with_face_;

    FamilyTag face_family_;
    FamilyTag level_family_;
};

}  // namespace ptor
