#include "ptor/solve.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

namespace ptor {

const GElem* Solution::g(Level l, FaceId u) const
{
    auto it = g_part.find({l, u});
    return it == g_part.end() ? nullptr : &it->second;
}

const HElem* Solution::h(FaceId u) const
{
    auto it = h_part.find(u);
    return it == h_part.end() ? nullptr : &it->second;
}

void Solution::set(GElem x)
{
    const auto key = std::make_pair(x.level, x.face);
    g_part.insert_or_assign(key, std::move(x));
}

void Solution::set(HElem x)
{
    const FaceId key = x.face;
    h_part.insert_or_assign(key, std::move(x));
}

bool extends(const Solution& big, const Solution& small)
{
    for (const auto& [key, x] : small.g_part) {
        auto it = big.g_part.find(key);
        if (it == big.g_part.end() || !(it->second == x))
            return false;
    }
    for (const auto& [key, x] : small.h_part) {
        auto it = big.h_part.find(key);
        if (it == big.h_part.end() || !(it->second == x))
            return false;
    }
    return true;
}

Solution restrict(const Universe& u, const Solution& f, AtomMask mask)
{
    Solution out;
    for (const auto& [key, x] : f.g_part)
        if (u.face_within(key.second, mask))
            out.g_part.emplace(key, x);
    for (const auto& [key, x] : f.h_part)
        if (u.face_within(key, mask))
            out.h_part.emplace(key, x);
    return out;
}

bool is_total_on(const Universe& u, const Solution& f, AtomMask mask)
{
    std::size_t faces = 0;
    for (FaceId w = 0; w < u.num_faces(); ++w) {
        if (!u.face_within(w, mask))
            continue;
        ++faces;
        if (!f.h(w))
            return false;
        for (Level l = 0; l < u.levels(); ++l)
            if (!f.g(l, w))
                return false;
    }
    return f.h_part.size() == faces && f.g_part.size() == faces * u.levels();
}

namespace {

AtomMask all_atoms(const Universe& u)
{
    return u.num_atoms() == 64 ? ~AtomMask{0} : (AtomMask{1} << u.num_atoms()) - 1;
}

void check_domain(const TwistedModel& m, const Solution& f, AtomMask scope)
{
    const Universe& u = m.universe();
    for (const auto& [key, x] : f.g_part) {
        if (key.first != x.level || key.second != x.face || !m.valid_g(x))
            throw PreconditionError("solution entry at level " + std::to_string(key.first) +
                                    " is not an element of the matching G^b");
        if (!u.face_within(x.face, scope))
            throw PreconditionError("solution domain leaves the scope at face {" +
                                    u.face(x.face).to_string() + "}");
    }
    for (const auto& [key, x] : f.h_part) {
        if (key != x.face || !m.valid_h(x))
            throw PreconditionError("solution entry is not an element of the matching H^b");
        if (!u.face_within(x.face, scope))
            throw PreconditionError("solution domain leaves the scope at face {" +
                                    u.face(x.face).to_string() + "}");
    }
}

/// Checks one (level, cell, h-face) instance when all its arguments are in
/// the domain; nullopt when the instance does not apply.
std::optional<bool> check_instance(const TwistedModel& m, const Solution& f, Level l, CellId c,
                                   FaceId w)
{
    const HElem* h = f.h(w);
    if (!h)
        return std::nullopt;
    const auto& faces = m.universe().cell_faces(c);
    const GElem* args[max_atoms];
    std::size_t n = 0;
    for (FaceId u : faces) {
        if (u == w)
            continue;
        const GElem* x = f.g(l, u);
        if (!x)
            return std::nullopt;
        args[n++] = x;
    }
    return m.q_holds(l, c, w, std::span<const GElem* const>(args, n), *h);
}

}  // namespace

SolutionCheck is_solution(const TwistedModel& m, const Solution& f, AtomMask scope)
{
    check_domain(m, f, scope);
    const Universe& u = m.universe();
    for (CellId c = 0; c < u.num_cells(); ++c) {
        if ((u.cell_mask(c) & ~scope) != 0)
            continue;
        for (FaceId w : u.cell_faces(c))
            for (Level l = 0; l < u.levels(); ++l)
                if (auto ok = check_instance(m, f, l, c, w); ok && !*ok)
                    return SolutionCheck{false, Constraint{l, c, w}};
    }
    return SolutionCheck{};
}

SolutionCheck is_solution(const TwistedModel& m, const Solution& f)
{
    return is_solution(m, f, all_atoms(m.universe()));
}

std::string describe(const Universe& u, const Constraint& c)
{
    std::ostringstream out;
    out << "Q_" << c.level << " on cell {" << u.cell(c.cell).to_string() << "} with h-face {"
        << u.face(c.h_face).to_string() << "}";
    return out.str();
}

namespace {

void require_solution_on(const TwistedModel& m, const Solution& f, AtomMask mask, const char* what)
{
    const Universe& u = m.universe();
    if (!is_total_on(u, f, mask))
        throw PreconditionError(std::string(what) + ": not defined exactly on its atom set");
    if (auto chk = is_solution(m, f, mask); !chk.ok)
        throw PreconditionError(std::string(what) + ": violates " + describe(u, *chk.violated));
}

/// Fills every missing domain point over `target`. New faces are those
/// without an h-value; the caller guarantees old faces are fully assigned.
Solution complete(const TwistedModel& m, Solution f, AtomMask target, Rng* rng, FillTrace* trace)
{
    const Universe& u = m.universe();
    FillTrace local;
    FillTrace& tr = trace ? *trace : local;

    std::vector<char> is_new(u.num_faces(), 0);
    std::vector<FaceId> new_faces;
    for (FaceId w = 0; w < u.num_faces(); ++w) {
        if (!u.face_within(w, target) || f.h(w))
            continue;
        is_new[w] = 1;
        new_faces.push_back(w);
        HElem x = m.base_h(w);
        if (rng)
            x.vec ^= random_ha(u, *rng);
        f.set(std::move(x));
        ++tr.h_assigned;
    }

    // With only the h-values added nothing new is constrained: every cell
    // meeting a new face has at least two of them, so one of its g-arguments
    // is still missing whichever face plays the h-role.
    std::set<CellId> touched;
    for (FaceId w : new_faces)
        for (CellId c : u.cells_with_face(w))
            if ((u.cell_mask(c) & ~target) == 0)
                touched.insert(c);
    for (CellId c : touched) {
        std::size_t fresh = 0;
        for (FaceId w : u.cell_faces(c))
            fresh += is_new[w];
        if (fresh < 2)
            throw std::logic_error("cell {" + u.cell(c).to_string() +
                                   "} has a single undetermined face; the extension step cannot proceed");
        ++tr.vacuity_cells;
    }

    for (Level l = 0; l < u.levels(); ++l) {
        for (FaceId w : new_faces) {
            GElem x = m.zero_g(l, w);
            if (rng)
                rng->fill(x.offset);
            std::size_t fixed = 0;
            for (CellId c : u.cells_with_face(w)) {
                if ((u.cell_mask(c) & ~target) != 0)
                    continue;
                const auto& faces = u.cell_faces(c);
                for (FaceId hf : faces) {
                    if (hf == w)
                        continue;
                    const HElem* h = f.h(hf);
                    bool complete_args = h != nullptr;
                    bool rhs = complete_args && (h->vec.test(l) != m.twist_bit(c, hf, l));
                    for (FaceId g : faces) {
                        if (!complete_args)
                            break;
                        if (g == hf || g == w)
                            continue;
                        const GElem* y = f.g(l, g);
                        if (!y)
                            complete_args = false;
                        else
                            rhs ^= y->offset.test(hf);
                    }
                    if (!complete_args)
                        continue;
                    // Distinct h-faces hf give distinct cells w ∪ hf, so each
                    // coordinate is fixed at most once.
                    x.offset.set(hf, rhs);
                    ++fixed;
                }
            }
            tr.constraints_solved += fixed;
            tr.max_constraints_per_step = std::max(tr.max_constraints_per_step, fixed);
            f.set(std::move(x));
            ++tr.g_assigned;
        }
    }

    if (auto chk = is_solution(m, f, target); !chk.ok)
        throw std::logic_error("completion produced an invalid solution at " +
                               describe(u, *chk.violated));
    return f;
}

}  // namespace

Solution greedy_extend(const TwistedModel& m, const Solution& f, AtomMask a, AtomMask b, Rng* rng,
                       FillTrace* trace)
{
    const Universe& u = m.universe();
    if ((a & ~b) != 0)
        throw PreconditionError("greedy_extend: A must be a subset of B");
    if ((b & ~all_atoms(u)) != 0)
        throw PreconditionError("greedy_extend: B must be a set of atoms of the model");
    require_solution_on(m, f, a, "greedy_extend: input");
    return complete(m, f, b, rng, trace);
}

Solution amalgamate(const TwistedModel& m, const SystemOfSolutions& sys, Rng* rng, FillTrace* trace)
{
    const Universe& u = m.universe();
    const std::size_t mp = sys.extras.size();
    if (mp >= u.k())
        throw PreconditionError("amalgamate: the system has " + std::to_string(mp) +
                                " extra atoms; amalgamation needs fewer than k = " +
                                std::to_string(u.k()));
    if ((sys.base & ~all_atoms(u)) != 0)
        throw PreconditionError("amalgamate: base is not a set of atoms of the model");

    std::vector<AtomMask> extra_bits;
    for (AtomId a : sys.extras) {
        if (!u.has_atom(a))
            throw PreconditionError("amalgamate: extra atom " + std::to_string(a) + " is not in the model");
        const AtomMask bit = AtomMask{1} << u.atom_position(a);
        if ((bit & sys.base) != 0)
            throw PreconditionError("amalgamate: extra atom " + std::to_string(a) + " lies in the base");
        for (AtomMask e : extra_bits)
            if (e == bit)
                throw PreconditionError("amalgamate: extra atoms must be distinct");
        extra_bits.push_back(bit);
    }
    auto atoms_of = [&](std::uint32_t s) {
        AtomMask mask = sys.base;
        for (std::size_t t = 0; t < mp; ++t)
            if ((s >> t) & 1U)
                mask |= extra_bits[t];
        return mask;
    };

    if (mp == 0) {
        auto it = sys.parts.find(0);
        if (it == sys.parts.end() || sys.parts.size() != 1)
            throw PreconditionError("amalgamate: with no extra atoms the system is the single part for the empty set");
        require_solution_on(m, it->second, sys.base, "amalgamate: part {}");
        return it->second;
    }

    const std::uint32_t full = (std::uint32_t{1} << mp) - 1;
    if (sys.parts.size() != full)
        throw PreconditionError("amalgamate: expected one part for each of the " + std::to_string(full) +
                                " proper subsets of the extras");
    auto set_name = [&](std::uint32_t s) {
        std::string out = "{";
        bool first = true;
        for (std::size_t t = 0; t < mp; ++t)
            if ((s >> t) & 1U) {
                out += (first ? "" : ",") + std::to_string(sys.extras[t]);
                first = false;
            }
        return out + "}";
    };
    for (const auto& [s, part] : sys.parts) {
        if (s >= full)
            throw PreconditionError("amalgamate: part keyed by a non-proper subset");
        require_solution_on(m, part, atoms_of(s), ("amalgamate: part " + set_name(s)).c_str());
    }
    for (const auto& [s, ps] : sys.parts)
        for (const auto& [t, pt] : sys.parts)
            if (s != t && (s & ~t) == 0 && !extends(pt, ps))
                throw PreconditionError("amalgamate: incompatible parts: " + set_name(s) +
                                        " is not contained in " + set_name(t));

    Solution merged;
    for (const auto& [s, part] : sys.parts) {
        merged.g_part.insert(part.g_part.begin(), part.g_part.end());
        merged.h_part.insert(part.h_part.begin(), part.h_part.end());
    }
    Solution out = complete(m, std::move(merged), atoms_of(full), rng, trace);
    for (const auto& [s, part] : sys.parts)
        if (!extends(out, part))
            throw std::logic_error("amalgamate: result does not extend part " + set_name(s));
    return out;
}

SystemOfSolutions random_compatible_system(const TwistedModel& m, AtomMask base,
                                           std::vector<AtomId> extras, Rng& rng)
{
    const Universe& u = m.universe();
    const std::size_t mp = extras.size();
    if (mp >= u.k())
        throw PreconditionError("random_compatible_system: need fewer than k extra atoms");
    SystemOfSolutions sys;
    sys.base = base;
    sys.extras = extras;
    sys.parts.emplace(0, greedy_extend(m, Solution{}, 0, base, &rng));
    if (mp == 0)
        return sys;
    const std::uint32_t full = (std::uint32_t{1} << mp) - 1;
    std::vector<std::uint32_t> order;
    for (std::uint32_t s = 1; s < full; ++s)
        order.push_back(s);
    std::stable_sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
        return std::popcount(a) < std::popcount(b);
    });
    for (std::uint32_t s : order) {
        // The parts strictly below s form a system over the extras in s.
        SystemOfSolutions sub;
        sub.base = base;
        std::vector<std::size_t> idx;
        for (std::size_t t = 0; t < mp; ++t)
            if ((s >> t) & 1U) {
                idx.push_back(t);
                sub.extras.push_back(extras[t]);
            }
        const std::uint32_t sub_full = (std::uint32_t{1} << idx.size()) - 1;
        for (std::uint32_t r = 0; r < sub_full; ++r) {
            std::uint32_t outer = 0;
            for (std::size_t i = 0; i < idx.size(); ++i)
                if ((r >> i) & 1U)
                    outer |= std::uint32_t{1} << idx[i];
            sub.parts.emplace(r, sys.parts.at(outer));
        }
        sys.parts.emplace(s, amalgamate(m, sub, &rng));
    }
    return sys;
}

Solution extend_solution(const TwistedModel& m, const Solution& f, AtomMask a, AtomId b, Rng* rng)
{
    const Universe& u = m.universe();
    if (!u.has_atom(b))
        throw PreconditionError("extend_solution: atom " + std::to_string(b) + " is not in the model");
    const AtomMask b_bit = AtomMask{1} << u.atom_position(b);
    if ((a & b_bit) != 0)
        throw PreconditionError("extend_solution: the new atom already lies in A");
    if (a == 0 || u.k() < 3)
        return greedy_extend(m, f, a, a | b_bit, rng);

    require_solution_on(m, f, a, "extend_solution: input");
    // g is a solution on prefix ∪ {b}; each step glues the next prefix of f
    // onto it with the two-extra amalgamation.
    Solution g;
    AtomMask prefix = 0;
    for (AtomMask rest = a; rest != 0; rest &= rest - 1) {
        const AtomMask next = rest & (~rest + 1);
        const auto pos = static_cast<std::size_t>(std::countr_zero(next));
        SystemOfSolutions sys;
        sys.base = prefix;
        sys.extras = {u.atoms()[pos], b};
        sys.parts.emplace(0, restrict(u, f, prefix));
        sys.parts.emplace(1, restrict(u, f, prefix | next));
        sys.parts.emplace(2, std::move(g));
        g = amalgamate(m, sys, rng);
        prefix |= next;
    }
    if (!extends(g, f))
        throw std::logic_error("extend_solution: result does not extend the input");
    return g;
}

const char* method_name(SolveMethod method) noexcept
{
    switch (method) {
    case SolveMethod::greedy: return "greedy";
    case SolveMethod::linear: return "linear";
    case SolveMethod::brute: return "brute";
    }
    return "?";
}

std::optional<SolveMethod> parse_method(std::string_view name) noexcept
{
    if (name == "greedy")
        return SolveMethod::greedy;
    if (name == "linear")
        return SolveMethod::linear;
    if (name == "brute")
        return SolveMethod::brute;
    return std::nullopt;
}

CompiledSystem compile_system(const TwistedModel& m)
{
    const Universe& u = m.universe();
    CompiledSystem cs;
    std::map<std::pair<FaceId, Level>, std::size_t> h_index;
    for (FaceId w = 0; w < u.num_faces(); ++w)
        for (Level l = 0; l < u.cutoff(); ++l) {
            h_index.emplace(std::make_pair(w, l), cs.h_vars.size());
            cs.h_vars.push_back({w, l});
        }
    const std::size_t h_count = cs.h_vars.size();
    for (Level l = 0; l < u.levels(); ++l)
        for (CellId c = 0; c < u.num_cells(); ++c)
            for (FaceId w : u.cell_faces(c)) {
                Gf2Row row;
                for (FaceId g : u.cell_faces(c)) {
                    if (g == w)
                        continue;
                    row.vars.push_back(h_count + cs.g_vars.size());
                    cs.g_vars.push_back({l, g, w});
                }
                if (l < u.cutoff())
                    row.vars.push_back(h_index.at({w, l}));
                row.rhs = m.h_twist(w).rep().test(l) != m.twist_bit(c, w, l);
                cs.system.rows.push_back(std::move(row));
            }
    cs.system.num_vars = h_count + cs.g_vars.size();
    return cs;
}

Solution decode_assignment(const TwistedModel& m, const CompiledSystem& cs, const Gf2Vec& x)
{
    const Universe& u = m.universe();
    if (x.size() != cs.system.num_vars)
        throw std::invalid_argument("decode_assignment: assignment has the wrong width");
    Solution f;
    for (FaceId w = 0; w < u.num_faces(); ++w) {
        f.set(m.base_h(w));
        for (Level l = 0; l < u.levels(); ++l)
            f.set(m.zero_g(l, w));
    }
    for (std::size_t i = 0; i < cs.h_vars.size(); ++i)
        if (x.test(i))
            f.h_part.at(cs.h_vars[i].face).vec.flip(cs.h_vars[i].level);
    const std::size_t h_count = cs.h_vars.size();
    for (std::size_t i = 0; i < cs.g_vars.size(); ++i)
        if (x.test(h_count + i)) {
            const auto& v = cs.g_vars[i];
            f.g_part.at({v.level, v.g_face}).offset.flip(v.coord);
        }
    return f;
}

std::optional<Solution> full_solve(const TwistedModel& m, SolveMethod method)
{
    const Universe& u = m.universe();
    const AtomMask all = all_atoms(u);
    std::optional<Solution> out;
    switch (method) {
    case SolveMethod::greedy:
        out = greedy_extend(m, Solution{}, 0, all);
        break;
    case SolveMethod::linear:
    case SolveMethod::brute: {
        const CompiledSystem cs = compile_system(m);
        if (method == SolveMethod::brute && cs.system.num_vars > brute_solve_bound)
            throw PreconditionError("full_solve: brute force is limited to " +
                                    std::to_string(brute_solve_bound) + " unknowns, this model needs " +
                                    std::to_string(cs.system.num_vars));
        const auto x = method == SolveMethod::linear ? solve_linear(cs.system)
                                                     : brute_force_solve(cs.system, brute_solve_bound);
        if (x)
            out = decode_assignment(m, cs, *x);
        break;
    }
    }
    if (out) {
        if (!is_total_on(u, *out, all))
            throw std::logic_error("full_solve: solver returned a partial solution");
        if (auto chk = is_solution(m, *out); !chk.ok)
            throw std::logic_error(std::string("full_solve: ") + method_name(method) +
                                   " returned an invalid solution at " + describe(u, *chk.violated));
    }
    return out;
}

Solution pull_back(const Embedding& e, const Solution& f_target)
{
    const TwistedModel& src = e.source();
    const TwistedModel& tgt = e.target();
    require_solution_on(tgt, f_target, all_atoms(tgt.universe()), "pull_back: target solution");

    // With zero anchors the correction c(l, u) is the target offset itself;
    // its restriction to the old faces is d(l, u), and f'(l, u) = anchor + d.
    const Universe& su = src.universe();
    Solution out;
    for (FaceId w = 0; w < su.num_faces(); ++w) {
        const FaceId tw = e.map_face(w);
        out.set(HElem{w, f_target.h(tw)->vec});
        for (Level l = 0; l < su.levels(); ++l)
            out.set(GElem{l, w, e.restrict_offset(f_target.g(l, tw)->offset)});
    }
    if (auto chk = is_solution(src, out); !chk.ok)
        throw std::logic_error("pull_back: result violates " + describe(su, *chk.violated));
    return out;
}

}  // namespace ptor
