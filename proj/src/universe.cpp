#include "ptor/universe.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace ptor {

namespace {

std::vector<AtomId> sorted_distinct(std::vector<AtomId> atoms, const char* what)
{
    std::sort(atoms.begin(), atoms.end());
    if (std::adjacent_find(atoms.begin(), atoms.end()) != atoms.end())
        throw std::invalid_argument(std::string(what) + ": repeated atom");
    return atoms;
}

std::string join(const std::vector<AtomId>& atoms)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        out << (i ? "," : "") << atoms[i];
    return out.str();
}

}  // namespace

Face Face::of(std::vector<AtomId> atoms)
{
    return Face{sorted_distinct(std::move(atoms), "Face")};
}

std::string Face::to_string() const
{
    return join(members);
}

Cell Cell::of(std::vector<AtomId> atoms)
{
    return Cell{sorted_distinct(std::move(atoms), "Cell")};
}

std::string Cell::to_string() const
{
    return join(members);
}

std::vector<std::vector<AtomId>> k_subsets(std::span<const AtomId> atoms, std::size_t k)
{
    std::vector<std::vector<AtomId>> out;
    const std::size_t n = atoms.size();
    if (k > n)
        return out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    while (true) {
        std::vector<AtomId> pick(k);
        for (std::size_t i = 0; i < k; ++i)
            pick[i] = atoms[idx[i]];
        out.push_back(std::move(pick));
        // Advance the rightmost index that still has room.
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1))
            --i;
        if (i == 0)
            break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    return out;
}

std::vector<Face> faces_of(const Cell& cell)
{
    const std::size_t n = cell.members.size();
    std::vector<Face> out;
    out.reserve(n);
    // Dropping the last member first yields lexicographic order.
    for (std::size_t drop = n; drop-- > 0;) {
        Face f;
        for (std::size_t i = 0; i < n; ++i)
            if (i != drop)
                f.members.push_back(cell.members[i]);
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<Cell> cells_containing(const Face& u, std::span<const AtomId> within)
{
    std::vector<AtomId> pool(within.begin(), within.end());
    std::sort(pool.begin(), pool.end());
    for (AtomId a : u.members)
        if (!std::binary_search(pool.begin(), pool.end(), a))
            throw std::invalid_argument("cells_containing: face not inside the atom set");
    std::vector<Cell> out;
    for (AtomId x : pool) {
        if (std::binary_search(u.members.begin(), u.members.end(), x))
            continue;
        std::vector<AtomId> members = u.members;
        members.insert(std::upper_bound(members.begin(), members.end(), x), x);
        out.push_back(Cell{std::move(members)});
    }
    return out;
}

std::vector<Face> all_faces(std::span<const AtomId> within, std::size_t k)
{
    std::vector<AtomId> pool(within.begin(), within.end());
    pool = sorted_distinct(std::move(pool), "all_faces");
    std::vector<Face> out;
    for (auto& s : k_subsets(pool, k))
        out.push_back(Face{std::move(s)});
    return out;
}

Universe::Universe(std::vector<AtomId> atoms, unsigned k, unsigned levels, unsigned cutoff,
                   std::map<AtomId, std::string> labels)
    : atoms_(sorted_distinct(std::move(atoms), "Universe")),
      k_(k),
      levels_(levels),
      cutoff_(cutoff),
      labels_(std::move(labels))
{
    if (k_ < 2)
        throw std::invalid_argument("Universe: k must be at least 2");
    if (atoms_.size() < k_)
        throw std::invalid_argument("Universe: need at least k atoms");
    if (atoms_.size() > max_atoms)
        throw std::invalid_argument("Universe: at most 64 atoms are supported");
    if (levels_ < 1)
        throw std::invalid_argument("Universe: need at least one level");
    if (cutoff_ < 1 || cutoff_ > levels_)
        throw std::invalid_argument("Universe: cutoff must satisfy 0 < c <= L");
    for (const auto& [a, name] : labels_) {
        if (!std::binary_search(atoms_.begin(), atoms_.end(), a))
            throw std::invalid_argument("Universe: label for unknown atom " + std::to_string(a));
        if (name.empty() || name.find_first_of(" \t\n,:") != std::string::npos)
            throw std::invalid_argument("Universe: labels must be non-empty without spaces, ',' or ':'");
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        position_.emplace(atoms_[i], i);

    for (auto& members : k_subsets(atoms_, k_)) {
        const std::uint64_t mask = mask_of(members);
        face_by_mask_.emplace(mask, static_cast<FaceId>(faces_.size()));
        face_masks_.push_back(mask);
        faces_.push_back(Face{std::move(members)});
    }
    cells_with_face_.resize(faces_.size());
    for (auto& members : k_subsets(atoms_, k_ + 1)) {
        const std::uint64_t mask = mask_of(members);
        const auto id = static_cast<CellId>(cells_.size());
        cell_by_mask_.emplace(mask, id);
        cell_masks_.push_back(mask);
        std::vector<FaceId> fs;
        for (const Face& f : faces_of(Cell{members})) {
            const FaceId fid = face_by_mask_.at(mask_of(f.members));
            fs.push_back(fid);
            cells_with_face_[fid].push_back(id);
        }
        cell_faces_.push_back(std::move(fs));
        cells_.push_back(Cell{std::move(members)});
    }

    std::vector<std::uint64_t> data{k_};
    data.insert(data.end(), atoms_.begin(), atoms_.end());
    face_family_ = make_family_tag("faces", data);
    const std::uint64_t lv = levels_;
    level_family_ = make_family_tag("levels", std::span<const std::uint64_t>(&lv, 1));
}

Universe Universe::range(std::size_t n, unsigned k, unsigned levels, unsigned cutoff)
{
    std::vector<AtomId> atoms(n);
    for (std::size_t i = 0; i < n; ++i)
        atoms[i] = static_cast<AtomId>(i);
    return Universe(std::move(atoms), k, levels, cutoff);
}

std::size_t Universe::atom_position(AtomId a) const
{
    auto it = position_.find(a);
    if (it == position_.end())
        throw std::invalid_argument("unknown atom " + std::to_string(a));
    return it->second;
}

std::optional<FaceId> Universe::face_id(const Face& f) const
{
    if (f.members.size() != k_)
        return std::nullopt;
    std::uint64_t mask = 0;
    for (AtomId a : f.members) {
        auto it = position_.find(a);
        if (it == position_.end())
            return std::nullopt;
        mask |= std::uint64_t{1} << it->second;
    }
    return face_by_mask(mask);
}

FaceId Universe::require_face(const Face& f) const
{
    auto id = face_id(f);
    if (!id)
        throw std::invalid_argument("not a face of the universe: {" + f.to_string() + "}");
    return *id;
}

std::optional<FaceId> Universe::face_by_mask(std::uint64_t mask) const
{
    auto it = face_by_mask_.find(mask);
    if (it == face_by_mask_.end())
        return std::nullopt;
    return it->second;
}

std::optional<CellId> Universe::cell_id(const Cell& c) const
{
    if (c.members.size() != k_ + 1)
        return std::nullopt;
    std::uint64_t mask = 0;
    for (AtomId a : c.members) {
        auto it = position_.find(a);
        if (it == position_.end())
            return std::nullopt;
        mask |= std::uint64_t{1} << it->second;
    }
    return cell_by_mask(mask);
}

std::optional<CellId> Universe::cell_by_mask(std::uint64_t mask) const
{
    auto it = cell_by_mask_.find(mask);
    if (it == cell_by_mask_.end())
        return std::nullopt;
    return it->second;
}

std::optional<CellId> Universe::cell_of_pair(FaceId u, FaceId w) const
{
    if (u == w)
        return std::nullopt;
    return cell_by_mask(face_masks_[u] | face_masks_[w]);
}

std::optional<CellId> Universe::cell_of_faces(std::span<const FaceId> faces) const
{
    if (faces.size() != k_ + 1)
        return std::nullopt;
    std::uint64_t all = 0;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        if (faces[i] >= faces_.size())
            return std::nullopt;
        for (std::size_t j = 0; j < i; ++j)
            if (faces[i] == faces[j])
                return std::nullopt;
        all |= face_masks_[faces[i]];
    }
    // k+1 distinct k-subsets of a (k+1)-set are all of its faces.
    if (std::popcount(all) != static_cast<int>(k_ + 1))
        return std::nullopt;
    return cell_by_mask(all);
}

std::uint64_t Universe::mask_of(std::span<const AtomId> atoms) const
{
    std::uint64_t mask = 0;
    for (AtomId a : atoms)
        mask |= std::uint64_t{1} << atom_position(a);
    return mask;
}

std::vector<AtomId> Universe::atoms_of_mask(std::uint64_t mask) const
{
    std::vector<AtomId> out;
    while (mask != 0) {
        out.push_back(atoms_.at(static_cast<std::size_t>(std::countr_zero(mask))));
        mask &= mask - 1;
    }
    return out;
}

std::vector<FaceId> Universe::faces_within(std::uint64_t mask) const
{
    std::vector<FaceId> out;
    for (FaceId f = 0; f < faces_.size(); ++f)
        if (face_within(f, mask))
            out.push_back(f);
    return out;
}

std::vector<CellId> Universe::cells_within(std::uint64_t mask) const
{
    std::vector<CellId> out;
    for (CellId c = 0; c < cells_.size(); ++c)
        if ((cell_masks_[c] & ~mask) == 0)
            out.push_back(c);
    return out;
}

std::string Universe::atom_name(AtomId a) const
{
    auto it = labels_.find(a);
    if (it == labels_.end())
        return std::to_string(a);
    return std::to_string(a) + ":" + it->second;
}

}  // namespace ptor
