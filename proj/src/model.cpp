#include "ptor/model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ptor {

namespace {

template <class T>
const T* as(const Element& e) noexcept
{
    return std::get_if<T>(&e);
}

std::optional<std::size_t> slot_in_cell(const Universe& u, CellId cell, FaceId face)
{
    const auto& fs = u.cell_faces(cell);
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (fs[i] == face)
            return i;
    return std::nullopt;
}

void validate_twists(const Universe& u, const std::vector<CutoffCoset>& h_twist)
{
    if (h_twist.size() != u.num_faces())
        throw std::invalid_argument("TwistedModel: h_twist must assign a coset to each of the " +
                                    std::to_string(u.num_faces()) + " faces");
    const Gf2Vec zero = u.zero_levels();
    for (std::size_t f = 0; f < h_twist.size(); ++f) {
        const CutoffCoset& c = h_twist[f];
        if (!c.rep().compatible(zero) || c.cutoff() != u.cutoff())
            throw std::invalid_argument("TwistedModel: coset for face {" + u.face(f).to_string() +
                                        "} does not match the universe's levels and cutoff");
    }
}

}  // namespace

Sort sort_of(const Element& e) noexcept
{
    return static_cast<Sort>(e.index());
}

const char* sort_name(Sort s) noexcept
{
    switch (s) {
    case Sort::atom: return "I";
    case Sort::face: return "K";
    case Sort::level: return "R";
    case Sort::bit: return "Z2";
    case Sort::ga: return "Ga";
    case Sort::ha: return "Ha";
    case Sort::gb: return "Gb";
    case Sort::hb: return "Hb";
    }
    return "?";
}

TwistedModel::TwistedModel(Universe universe, std::vector<CutoffCoset> h_twist, TwistTable q_twist)
    : TwistedModel(Unchecked{}, std::move(universe), std::move(h_twist), std::move(q_twist))
{
    for (const auto& [key, vec] : q_twist_) {
        if (!slot_in_cell(universe_, key.first, key.second))
            throw std::invalid_argument("TwistedModel: twist key face {" +
                                        universe_.face(key.second).to_string() +
                                        "} is not a face of cell {" +
                                        universe_.cell(key.first).to_string() + "}");
    }
}

TwistedModel TwistedModel::unchecked(Universe universe, std::vector<CutoffCoset> h_twist,
                                     TwistTable q_twist)
{
    return TwistedModel(Unchecked{}, std::move(universe), std::move(h_twist), std::move(q_twist));
}

TwistedModel::TwistedModel(Unchecked, Universe universe, std::vector<CutoffCoset> h_twist,
                           TwistTable q_twist)
    : universe_(std::move(universe)),
      h_twist_(std::move(h_twist)),
      q_twist_(std::move(q_twist)),
      zero_levels_(universe_.zero_levels())
{
    validate_twists(universe_, h_twist_);
    for (auto it = q_twist_.begin(); it != q_twist_.end();) {
        const auto& [key, vec] = *it;
        if (key.first >= universe_.num_cells() || key.second >= universe_.num_faces())
            throw std::invalid_argument("TwistedModel: twist key out of range");
        if (!vec.compatible(zero_levels_))
            throw std::invalid_argument("TwistedModel: twist vector must span the levels");
        it = vec.none() ? q_twist_.erase(it) : std::next(it);
    }
    build_index();
}

void TwistedModel::build_index()
{
    twist_index_.clear();
    twist_values_.clear();
    if (q_twist_.empty())
        return;
    const std::size_t slots = universe_.k() + 1;
    twist_index_.assign(universe_.num_cells() * slots, 0);
    for (const auto& [key, vec] : q_twist_) {
        if (auto s = slot_in_cell(universe_, key.first, key.second)) {
            twist_values_.push_back(vec);
            twist_index_[key.first * slots + *s] = static_cast<std::uint32_t>(twist_values_.size());
        }
    }
}

const Gf2Vec& TwistedModel::twist(CellId cell, FaceId face) const
{
    if (q_twist_.empty())
        return zero_levels_;
    if (cell < universe_.num_cells()) {
        if (auto s = slot_in_cell(universe_, cell, face)) {
            const std::uint32_t i = twist_index_[cell * (universe_.k() + 1) + *s];
            return i ? twist_values_[i - 1] : zero_levels_;
        }
    }
    auto it = q_twist_.find({cell, face});
    return it == q_twist_.end() ? zero_levels_ : it->second;
}

bool TwistedModel::twist_bit(CellId cell, FaceId face, Level l) const
{
    return twist(cell, face).test(l);
}

bool TwistedModel::valid_ga(const Gf2Vec& v) const noexcept
{
    return v.size() == universe_.num_faces() && v.family() == universe_.face_family();
}

bool TwistedModel::valid_ha(const Gf2Vec& v) const noexcept
{
    return v.compatible(zero_levels_) && in_cutoff_subgroup(v, universe_.cutoff());
}

bool TwistedModel::valid_g(const GElem& x) const noexcept
{
    return x.level < universe_.levels() && x.face < universe_.num_faces() && valid_ga(x.offset);
}

bool TwistedModel::valid_h(const HElem& x) const noexcept
{
    return x.face < universe_.num_faces() && x.vec.compatible(zero_levels_) &&
           h_twist_[x.face].contains(x.vec);
}

bool TwistedModel::valid(const Element& e) const noexcept
{
    return std::visit(
        [this](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, AtomElem>)
                return valid_atom(x.id);
            else if constexpr (std::is_same_v<T, FaceElem>)
                return x.id < universe_.num_faces();
            else if constexpr (std::is_same_v<T, LevelElem>)
                return x.level < universe_.levels();
            else if constexpr (std::is_same_v<T, BitElem>)
                return true;
            else if constexpr (std::is_same_v<T, GaElem>)
                return valid_ga(x.vec);
            else if constexpr (std::is_same_v<T, HaElem>)
                return valid_ha(x.vec);
            else if constexpr (std::is_same_v<T, GElem>)
                return valid_g(x);
            else
                return valid_h(x);
        },
        e);
}

bool TwistedModel::is_I(const Element& e) const noexcept
{
    return as<AtomElem>(e) && valid(e);
}

bool TwistedModel::is_K(const Element& e) const noexcept
{
    return as<FaceElem>(e) && valid(e);
}

bool TwistedModel::is_R(const Element& e) const noexcept
{
    return as<LevelElem>(e) && valid(e);
}

bool TwistedModel::is_Ga(const Element& e) const noexcept
{
    return as<GaElem>(e) && valid(e);
}

bool TwistedModel::is_Ha(const Element& e) const noexcept
{
    return as<HaElem>(e) && valid(e);
}

bool TwistedModel::is_bit_constant(const Element& e) const noexcept
{
    return as<BitElem>(e) != nullptr;
}

bool TwistedModel::is_P(const Element& e) const noexcept
{
    if (!valid(e))
        return false;
    const Sort s = sort_of(e);
    return s != Sort::gb && s != Sort::hb;
}

bool TwistedModel::member(const Element& x, const Element& y) const noexcept
{
    const auto* a = as<AtomElem>(x);
    const auto* u = as<FaceElem>(y);
    if (!a || !u || !valid(x) || !valid(y))
        return false;
    return (universe_.face_mask(u->id) >> universe_.atom_position(a->id)) & 1U;
}

bool TwistedModel::Gb(const Element& l, const Element& u, const Element& x) const noexcept
{
    const auto* lv = as<LevelElem>(l);
    const auto* f = as<FaceElem>(u);
    const auto* g = as<GElem>(x);
    return lv && f && g && valid_g(*g) && g->level == lv->level && g->face == f->id;
}

bool TwistedModel::Hb(const Element& u, const Element& x) const noexcept
{
    const auto* f = as<FaceElem>(u);
    const auto* h = as<HElem>(x);
    return f && h && valid_h(*h) && h->face == f->id;
}

bool TwistedModel::pi(const Element& u, const Element& x, const Element& a) const noexcept
{
    const auto* f = as<FaceElem>(u);
    const auto* v = as<GaElem>(x);
    const auto* b = as<BitElem>(a);
    return f && v && b && is_K(u) && valid_ga(v->vec) && v->vec.test(f->id) == b->value;
}

bool TwistedModel::rho(const Element& l, const Element& x, const Element& a) const noexcept
{
    const auto* lv = as<LevelElem>(l);
    const auto* v = as<HaElem>(x);
    const auto* b = as<BitElem>(a);
    return lv && v && b && is_R(l) && valid_ha(v->vec) && v->vec.test(lv->level) == b->value;
}

bool TwistedModel::plus(const Element& x, const Element& y, const Element& z) const noexcept
{
    if (const auto* a = as<BitElem>(x)) {
        const auto* b = as<BitElem>(y);
        const auto* c = as<BitElem>(z);
        return b && c && (a->value != b->value) == c->value;
    }
    if (const auto* a = as<GaElem>(x)) {
        const auto* b = as<GaElem>(y);
        const auto* c = as<GaElem>(z);
        if (!b || !c || !valid_ga(a->vec) || !valid_ga(b->vec) || !valid_ga(c->vec))
            return false;
        return a->vec + b->vec == c->vec;
    }
    if (const auto* a = as<HaElem>(x)) {
        const auto* b = as<HaElem>(y);
        const auto* c = as<HaElem>(z);
        if (!b || !c || !valid_ha(a->vec) || !valid_ha(b->vec) || !valid_ha(c->vec))
            return false;
        return a->vec + b->vec == c->vec;
    }
    return false;
}

bool TwistedModel::g_rel(const Element& l, const Element& u, const Element& a, const Element& x,
                         const Element& y) const noexcept
{
    const auto* lv = as<LevelElem>(l);
    const auto* f = as<FaceElem>(u);
    const auto* v = as<GaElem>(a);
    const auto* gx = as<GElem>(x);
    const auto* gy = as<GElem>(y);
    if (!lv || !f || !v || !gx || !gy)
        return false;
    return g_holds(lv->level, f->id, v->vec, *gx, *gy);
}

bool TwistedModel::h_rel(const Element& u, const Element& a, const Element& x,
                         const Element& y) const noexcept
{
    const auto* f = as<FaceElem>(u);
    const auto* v = as<HaElem>(a);
    const auto* hx = as<HElem>(x);
    const auto* hy = as<HElem>(y);
    if (!f || !v || !hx || !hy)
        return false;
    return h_holds(f->id, v->vec, *hx, *hy);
}

bool TwistedModel::g_holds(Level l, FaceId u, const Gf2Vec& a, const GElem& x,
                           const GElem& y) const noexcept
{
    if (l >= universe_.levels() || u >= universe_.num_faces() || !valid_ga(a))
        return false;
    if (x.level != l || y.level != l || x.face != u || y.face != u || !valid_g(x) || !valid_g(y))
        return false;
    for (std::size_t w = 0; w < a.num_words(); ++w)
        if ((x.offset.word(w) ^ a.word(w)) != y.offset.word(w))
            return false;
    return true;
}

bool TwistedModel::h_holds(FaceId u, const Gf2Vec& a, const HElem& x, const HElem& y) const noexcept
{
    if (u >= universe_.num_faces() || !valid_ha(a))
        return false;
    if (x.face != u || y.face != u || !valid_h(x) || !valid_h(y))
        return false;
    return x.vec + a == y.vec;
}

bool TwistedModel::q_holds(Level l, CellId cell, FaceId h_face, std::span<const GElem* const> g_args,
                           const HElem& h) const
{
    bool parity = false;
    for (const GElem* x : g_args)
        parity ^= x->offset.test(h_face);
    return parity == (h.vec.test(l) != twist_bit(cell, h_face, l));
}

bool TwistedModel::Q(Level l, std::span<const Element* const> args) const
{
    const unsigned k = universe_.k();
    const std::size_t nf = universe_.num_faces();
    if (l >= universe_.levels() || args.size() != k + 1)
        return false;
    const auto* h = as<HElem>(*args[k]);
    if (!h || h->face >= nf)
        return false;
    std::uint64_t all = universe_.face_mask(h->face);
    for (unsigned i = 0; i < k; ++i) {
        const auto* g = as<GElem>(*args[i]);
        if (!g || g->level != l || g->face >= nf)
            return false;
        all |= universe_.face_mask(g->face);
    }
    // The k+1 faces are those of one cell iff each leaves out exactly one
    // atom of their union, and no two leave out the same one.
    std::uint64_t missing = 0;
    auto leaves_one = [&](FaceId f) {
        const std::uint64_t m = all & ~universe_.face_mask(f);
        missing |= m;
        return m != 0 && (m & (m - 1)) == 0;
    };
    if (!leaves_one(h->face))
        return false;
    for (unsigned i = 0; i < k; ++i)
        if (!leaves_one(std::get<GElem>(*args[i]).face))
            return false;
    if (missing != all || !valid_h(*h))
        return false;
    bool parity = false;
    for (unsigned i = 0; i < k; ++i) {
        const auto& g = std::get<GElem>(*args[i]);
        if (!valid_ga(g.offset))
            return false;
        parity ^= g.offset.test(h->face);
    }
    const auto cell = universe_.cell_by_mask(all);
    if (!cell)
        return false;
    return parity == (h->vec.test(l) != twist_bit(*cell, h->face, l));
}

std::string TwistedModel::describe(const Element& e) const
{
    std::ostringstream out;
    auto face_str = [this](FaceId f) {
        return f < universe_.num_faces() ? "{" + universe_.face(f).to_string() + "}"
                                         : "face#" + std::to_string(f);
    };
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, AtomElem>)
                out << "atom " << x.id;
            else if constexpr (std::is_same_v<T, FaceElem>)
                out << "face " << face_str(x.id);
            else if constexpr (std::is_same_v<T, LevelElem>)
                out << "level " << x.level;
            else if constexpr (std::is_same_v<T, BitElem>)
                out << "bit " << (x.value ? 1 : 0);
            else if constexpr (std::is_same_v<T, GaElem>)
                out << "Ga " << x.vec.to_string();
            else if constexpr (std::is_same_v<T, HaElem>)
                out << "Ha " << x.vec.to_string();
            else if constexpr (std::is_same_v<T, GElem>)
                out << "G(" << x.level << "," << face_str(x.face) << "," << x.offset.to_string() << ")";
            else
                out << "H(" << face_str(x.face) << "," << x.vec.to_string() << ")";
        },
        e);
    return out.str();
}

TwistedModel standard_model(const Universe& universe)
{
    return TwistedModel(universe, std::vector<CutoffCoset>(universe.num_faces(), universe.zero_coset()));
}

TwistedModel canonical_model(const Universe& universe, const std::map<Face, CutoffCoset>& g)
{
    std::vector<CutoffCoset> twist;
    twist.reserve(universe.num_faces());
    for (const Face& f : universe.faces()) {
        auto it = g.find(f);
        if (it == g.end())
            throw std::invalid_argument("canonical_model: g undefined on face {" + f.to_string() + "}");
        twist.push_back(it->second);
    }
    if (g.size() != universe.num_faces())
        throw std::invalid_argument("canonical_model: g names faces outside the universe");
    return TwistedModel(universe, std::move(twist));
}

TwistedModel canonical_model(const Universe& universe, std::vector<CutoffCoset> g)
{
    return TwistedModel(universe, std::move(g));
}

bool q_holds(const TwistedModel& m, Level l, const Cell& cell, const Face& h_face,
             const std::map<Face, GElem>& g_args, const HElem& h_arg)
{
    const Universe& u = m.universe();
    if (l >= u.levels())
        throw std::invalid_argument("q_holds: level out of range");
    const auto cell_id = u.cell_id(cell);
    if (!cell_id)
        throw std::invalid_argument("q_holds: {" + cell.to_string() + "} is not a cell");
    const FaceId h = u.require_face(h_face);
    const auto& faces = u.cell_faces(*cell_id);
    if (std::find(faces.begin(), faces.end(), h) == faces.end())
        throw std::invalid_argument("q_holds: h-face is not a face of the cell");
    if (h_arg.face != h || !m.valid_h(h_arg))
        throw std::invalid_argument("q_holds: h argument does not lie in H^b of the h-face");
    if (g_args.size() != u.k())
        throw std::invalid_argument("q_holds: expected exactly k g-arguments");
    std::vector<const GElem*> gs;
    for (FaceId f : faces) {
        if (f == h)
            continue;
        auto it = g_args.find(u.face(f));
        if (it == g_args.end())
            throw std::invalid_argument("q_holds: missing g-argument for face {" +
                                        u.face(f).to_string() + "}");
        const GElem& x = it->second;
        if (x.level != l || x.face != f || !m.valid_g(x))
            throw std::invalid_argument("q_holds: g-argument for face {" + u.face(f).to_string() +
                                        "} has the wrong level, face or offset family");
        gs.push_back(&x);
    }
    return m.q_holds(l, *cell_id, h, gs, h_arg);
}

}  // namespace ptor
