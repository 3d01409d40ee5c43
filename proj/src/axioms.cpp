#include "ptor/axioms.hpp"

#include "ptor/sampling.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace ptor {

namespace {

constexpr std::array<const char*, num_axioms> names{
    "membership",     "sort-partition", "level-constants", "torsor-typing",        "torsor-covering",
    "pi-typing",      "rho-typing",     "g-typing",        "h-typing",             "bit-group",
    "Ga-group",       "Ha-group",       "G-torsors",       "H-torsors",            "Q-symmetry",
    "Q-coherence",    "Q-extension",    "only-level-constants", "Ga-full",         "Ha-cutoff",
};

constexpr std::uint64_t saturated = UINT64_MAX;

std::uint64_t pow2(std::size_t bits)
{
    return bits >= 64 ? saturated : std::uint64_t{1} << bits;
}

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b)
{
    if (a != 0 && b > saturated / a)
        return saturated;
    return a * b;
}

std::uint64_t pow_sat(std::uint64_t base, std::size_t e)
{
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i)
        r = mul_sat(r, base);
    return r;
}

std::uint64_t low_mask(std::size_t bits)
{
    return bits >= 64 ? saturated : (std::uint64_t{1} << bits) - 1;
}

/// base with its low word xored by `low` (only used for widths under 64 free bits).
Gf2Vec with_low(const Gf2Vec& base, std::uint64_t low)
{
    Gf2Vec v = base;
    if (low != 0)
        v.set_word(0, base.word(0) ^ low);
    return v;
}

Gf2Vec sample_low(const Gf2Vec& base, std::size_t bits, Rng& rng)
{
    Gf2Vec v(base.size(), base.family());
    rng.fill(v, bits);
    return v + base;
}

class Tally {
public:
    explicit Tally(unsigned id)
    {
        r_.id = id;
        r_.name = names[id - 1];
    }
    bool ok() const noexcept { return r_.ok; }
    void point(std::uint64_t n = 1) noexcept { r_.points += n; }
    void sampled() noexcept { r_.mode = CheckMode::sampled; }
    void fail(std::string witness)
    {
        if (r_.ok) {
            r_.ok = false;
            r_.witness = std::move(witness);
        }
    }
    /// Records a failure when `cond` is false; returns cond.
    template <class Describe>
    bool expect(bool cond, Describe&& describe)
    {
        if (!cond)
            fail(describe());
        return cond;
    }
    AxiomResult done() { return std::move(r_); }

private:
    AxiomResult r_;
};

class Checker {
public:
    Checker(const TwistedModel& m, const AxiomOptions& opt)
        : m_(m), u_(m.universe()), opt_(opt), k_(u_.k()), levels_(u_.levels()), cutoff_(u_.cutoff()),
          nf_(u_.num_faces()), zero_off_(u_.zero_offset()), zero_lv_(u_.zero_levels())
    {
        Gf2Vec e0 = zero_off_;
        e0.set(0);
        probes_ = {AtomElem{u_.atoms().front()},
                   AtomElem{u_.atoms().back()},
                   FaceElem{0},
                   FaceElem{static_cast<FaceId>(nf_ - 1)},
                   LevelElem{0},
                   LevelElem{levels_ - 1},
                   BitElem{false},
                   BitElem{true},
                   GaElem{zero_off_},
                   GaElem{e0},
                   HaElem{zero_lv_},
                   m_.zero_g(0, 0),
                   GElem{0, 0, e0},
                   m_.base_h(0)};
    }

    AxiomReport run()
    {
        AxiomReport report;
        using Fn = void (Checker::*)(Tally&, Rng&);
        const std::array<Fn, num_axioms> fns{
            &Checker::membership,   &Checker::sort_partition, &Checker::level_constants,
            &Checker::torsor_typing, &Checker::torsor_covering, &Checker::pi_typing,
            &Checker::rho_typing,   &Checker::g_typing,       &Checker::h_typing,
            &Checker::bit_group,    &Checker::ga_group,       &Checker::ha_group,
            &Checker::g_torsors,    &Checker::h_torsors,      &Checker::q_symmetry,
            &Checker::q_coherence,  &Checker::q_extension,    &Checker::only_level_constants,
            &Checker::ga_full,      &Checker::ha_cutoff};
        for (unsigned id = 1; id <= num_axioms; ++id) {
            Tally t(id);
            Rng rng(opt_.seed * 0x9E3779B97F4A7C15ULL + id);
            (this->*fns[id - 1])(t, rng);
            report.results.push_back(t.done());
        }
        return report;
    }

private:
    bool exhaustive(std::uint64_t frames, std::size_t frame_bits) const
    {
        const std::uint64_t per = pow2(frame_bits);
        return per <= opt_.exhaustive_bound && mul_sat(per, frames) <= opt_.total_bound;
    }

    std::string show(const Element& e) const { return m_.describe(e); }

    /// Every vector over the faces, indexed by its bits; only used when the
    /// face count is small enough for exhaustive sweeps.
    const std::vector<Gf2Vec>& offsets()
    {
        if (offsets_.empty())
            for (std::uint64_t x = 0; x < pow2(nf_); ++x)
                offsets_.push_back(with_low(zero_off_, x));
        return offsets_;
    }
    std::string face_str(FaceId f) const { return "{" + u_.face(f).to_string() + "}"; }

    template <class Fn>
    void for_each_tuple(std::size_t radix, std::size_t arity, Tally& t, Fn fn) const
    {
        std::vector<std::size_t> digits(arity, 0);
        while (t.ok()) {
            t.point();
            fn(std::span<const std::size_t>(digits));
            std::size_t i = arity;
            while (i > 0 && ++digits[i - 1] == radix)
                digits[--i] = 0;
            if (i == 0)
                return;
        }
    }

    // Probe tuples for the typing axioms.
    template <class Fn>
    void probe_tuples(std::size_t arity, Tally& t, Fn fn) const
    {
        std::vector<const Element*> args(arity);
        for_each_tuple(probes_.size(), arity, t, [&](std::span<const std::size_t> d) {
            for (std::size_t i = 0; i < arity; ++i)
                args[i] = &probes_[d[i]];
            fn(std::span<const Element* const>(args));
        });
    }

    std::string show_tuple(std::span<const Element* const> args) const
    {
        std::string out = "(";
        for (std::size_t i = 0; i < args.size(); ++i)
            out += (i ? ", " : "") + show(*args[i]);
        return out + ")";
    }

    // The element space: atoms, faces, levels, bits, G^a, H^a, G^b, H^b.
    std::uint64_t element_count() const
    {
        std::uint64_t n = u_.num_atoms() + nf_ + levels_ + 2;
        auto add = [&](std::uint64_t x) { n = x > saturated - n ? saturated : n + x; };
        add(pow2(nf_));
        add(pow2(cutoff_));
        add(mul_sat(levels_ * nf_, pow2(nf_)));
        add(mul_sat(nf_, pow2(cutoff_)));
        return n;
    }

    Element random_element(Rng& rng) const
    {
        switch (rng.uniform_below(8)) {
        case 0:
            return AtomElem{u_.atoms()[rng.uniform_below(u_.num_atoms())]};
        case 1:
            return FaceElem{static_cast<FaceId>(rng.uniform_below(nf_))};
        case 2:
            return LevelElem{static_cast<Level>(rng.uniform_below(levels_))};
        case 3:
            return BitElem{rng.coin()};
        case 4:
            return GaElem{sample_low(zero_off_, nf_, rng)};
        case 5:
            return HaElem{sample_low(zero_lv_, cutoff_, rng)};
        case 6: {
            const auto l = static_cast<Level>(rng.uniform_below(levels_));
            const auto f = static_cast<FaceId>(rng.uniform_below(nf_));
            return GElem{l, f, sample_low(zero_off_, nf_, rng)};
        }
        default: {
            const auto f = static_cast<FaceId>(rng.uniform_below(nf_));
            return HElem{f, sample_low(m_.h_twist(f).rep(), cutoff_, rng)};
        }
        }
    }

    template <class Fn>
    void for_each_element(Tally& t, Rng& rng, Fn fn) const
    {
        if (element_count() > opt_.exhaustive_bound) {
            t.sampled();
            for (std::uint64_t s = 0; s < opt_.samples && t.ok(); ++s) {
                t.point();
                fn(random_element(rng));
            }
            return;
        }
        auto visit = [&](const Element& e) {
            if (!t.ok())
                return false;
            t.point();
            fn(e);
            return true;
        };
        for (AtomId a : u_.atoms())
            visit(AtomElem{a});
        for (FaceId f = 0; f < nf_; ++f)
            visit(FaceElem{f});
        for (Level l = 0; l < levels_; ++l)
            visit(LevelElem{l});
        visit(BitElem{false});
        visit(BitElem{true});
        for (std::uint64_t x = 0; x < pow2(nf_); ++x)
            if (!visit(GaElem{with_low(zero_off_, x)}))
                return;
        for (std::uint64_t x = 0; x < pow2(cutoff_); ++x)
            visit(HaElem{with_low(zero_lv_, x)});
        for (Level l = 0; l < levels_; ++l)
            for (FaceId f = 0; f < nf_; ++f)
                for (std::uint64_t x = 0; x < pow2(nf_); ++x)
                    if (!visit(GElem{l, f, with_low(zero_off_, x)}))
                        return;
        for (FaceId f = 0; f < nf_; ++f)
            for (std::uint64_t x = 0; x < pow2(cutoff_); ++x)
                visit(HElem{f, with_low(m_.h_twist(f).rep(), x)});
    }

    // 1. K is the set of k-subsets of I and membership is set membership.
    void membership(Tally& t, Rng& rng)
    {
        const std::size_t n = u_.num_atoms();
        std::uint64_t binom = 1;
        for (std::size_t i = 0; i < k_; ++i)
            binom = binom * (n - i) / (i + 1);
        t.expect(binom == nf_, [&] {
            return "K has " + std::to_string(nf_) + " elements, expected C(" + std::to_string(n) + "," +
                   std::to_string(k_) + ") = " + std::to_string(binom);
        });
        for (FaceId f = 0; f < nf_ && t.ok(); ++f) {
            const auto& mem = u_.face(f).members;
            const bool shape = mem.size() == k_ && std::adjacent_find(mem.begin(), mem.end(),
                                                                      std::greater_equal<>()) == mem.end() &&
                               std::all_of(mem.begin(), mem.end(), [&](AtomId a) { return u_.has_atom(a); });
            t.expect(shape && m_.is_K(FaceElem{f}), [&] { return face_str(f) + " is not a k-subset of I"; });
        }
        auto check = [&](AtomId a, FaceId f) {
            t.point();
            const auto& mem = u_.face(f).members;
            const bool inside = std::find(mem.begin(), mem.end(), a) != mem.end();
            t.expect(m_.member(AtomElem{a}, FaceElem{f}) == inside, [&] {
                return "in(atom " + std::to_string(a) + ", " + face_str(f) + ") should be " +
                       (inside ? "true" : "false");
            });
        };
        if (mul_sat(n, nf_) <= opt_.exhaustive_bound) {
            for (AtomId a : u_.atoms())
                for (FaceId f = 0; f < nf_ && t.ok(); ++f)
                    check(a, f);
        } else {
            t.sampled();
            for (std::uint64_t s = 0; s < opt_.samples && t.ok(); ++s)
                check(u_.atoms()[rng.uniform_below(n)], static_cast<FaceId>(rng.uniform_below(nf_)));
        }
        probe_tuples(2, t, [&](std::span<const Element* const> a) {
            if (m_.member(*a[0], *a[1]))
                t.expect(m_.is_I(*a[0]) && m_.is_K(*a[1]), [&] { return "in" + show_tuple(a) + " is ill-sorted"; });
        });
    }

    // 2. I, K, R, G^a, H^a are disjoint and with the bit constants make up P.
    void sort_partition(Tally& t, Rng& rng)
    {
        for_each_element(t, rng, [&](const Element& e) {
            const int sorts = m_.is_I(e) + m_.is_K(e) + m_.is_R(e) + m_.is_Ga(e) + m_.is_Ha(e);
            const bool bit = m_.is_bit_constant(e);
            t.expect(sorts + bit <= 1, [&] { return show(e) + " lies in two of I, K, R, Ga, Ha, the bit constants"; });
            t.expect(m_.is_P(e) == (sorts + bit == 1),
                     [&] { return "P(" + show(e) + ") disagrees with the union of the sorts"; });
        });
    }

    // 3. R(c_l) for every level constant.
    void level_constants(Tally& t, Rng&)
    {
        for (Level l = 0; l < levels_ && t.ok(); ++l) {
            t.point();
            t.expect(m_.is_R(LevelElem{l}), [&] { return "R(c_" + std::to_string(l) + ") fails"; });
        }
    }

    // 4. G^b(l, u, x) implies R(l), K(u); H^b(u, x) implies K(u).
    void torsor_typing(Tally& t, Rng&)
    {
        probe_tuples(3, t, [&](std::span<const Element* const> a) {
            if (m_.Gb(*a[0], *a[1], *a[2]))
                t.expect(m_.is_R(*a[0]) && m_.is_K(*a[1]), [&] { return "Gb" + show_tuple(a) + " is ill-sorted"; });
        });
        probe_tuples(2, t, [&](std::span<const Element* const> a) {
            if (m_.Hb(*a[0], *a[1]))
                t.expect(m_.is_K(*a[0]), [&] { return "Hb" + show_tuple(a) + " is ill-sorted"; });
        });
    }

    // 5. Every element is in exactly one of P, the G^b(l, u, -), the H^b(u, -).
    void torsor_covering(Tally& t, Rng& rng)
    {
        for_each_element(t, rng, [&](const Element& e) {
            std::size_t homes = m_.is_P(e);
            for (FaceId f = 0; f < nf_; ++f) {
                homes += m_.Hb(FaceElem{f}, e);
                for (Level l = 0; l < levels_; ++l)
                    homes += m_.Gb(LevelElem{l}, FaceElem{f}, e);
            }
            t.expect(homes == 1, [&] {
                return show(e) + " lies in " + std::to_string(homes) + " of P and the torsors";
            });
        });
    }

    // 6. pi(u, a, z) implies K(u), G^a(a) and z a bit constant.
    void pi_typing(Tally& t, Rng&)
    {
        probe_tuples(3, t, [&](std::span<const Element* const> a) {
            if (m_.pi(*a[0], *a[1], *a[2]))
                t.expect(m_.is_K(*a[0]) && m_.is_Ga(*a[1]) && m_.is_bit_constant(*a[2]),
                         [&] { return "pi" + show_tuple(a) + " is ill-sorted"; });
        });
    }

    // 7. rho(l, b, z) implies R(l), H^a(b) and z a bit constant.
    void rho_typing(Tally& t, Rng&)
    {
        probe_tuples(3, t, [&](std::span<const Element* const> a) {
            if (m_.rho(*a[0], *a[1], *a[2]))
                t.expect(m_.is_R(*a[0]) && m_.is_Ha(*a[1]) && m_.is_bit_constant(*a[2]),
                         [&] { return "rho" + show_tuple(a) + " is ill-sorted"; });
        });
    }

    // 8. g(l, u, a, v, w) implies R(l), K(u), G^a(a), G^b(l, u, v), G^b(l, u, w).
    void g_typing(Tally& t, Rng&)
    {
        probe_tuples(5, t, [&](std::span<const Element* const> a) {
            if (m_.g_rel(*a[0], *a[1], *a[2], *a[3], *a[4]))
                t.expect(m_.is_R(*a[0]) && m_.is_K(*a[1]) && m_.is_Ga(*a[2]) && m_.Gb(*a[0], *a[1], *a[3]) &&
                             m_.Gb(*a[0], *a[1], *a[4]),
                         [&] { return "g" + show_tuple(a) + " is ill-sorted"; });
        });
    }

    // 9. h(u, b, x, y) implies K(u), H^a(b), H^b(u, x), H^b(u, y).
    void h_typing(Tally& t, Rng&)
    {
        probe_tuples(4, t, [&](std::span<const Element* const> a) {
            if (m_.h_rel(*a[0], *a[1], *a[2], *a[3]))
                t.expect(m_.is_K(*a[0]) && m_.is_Ha(*a[1]) && m_.Hb(*a[0], *a[2]) && m_.Hb(*a[0], *a[3]),
                         [&] { return "h" + show_tuple(a) + " is ill-sorted"; });
        });
    }

    // 10. The bit constants under + form Z_2, and + only relates elements of
    // one group.
    void bit_group(Tally& t, Rng&)
    {
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int z = 0; z < 2; ++z) {
                    t.point();
                    t.expect(m_.plus(BitElem{x != 0}, BitElem{y != 0}, BitElem{z != 0}) == ((x ^ y) == z), [&] {
                        return "+(c_" + std::to_string(x) + ", c_" + std::to_string(y) + ", c_" +
                               std::to_string(z) + ") is wrong";
                    });
                }
        probe_tuples(3, t, [&](std::span<const Element* const> a) {
            if (!m_.plus(*a[0], *a[1], *a[2]))
                return;
            auto all = [&](auto pred) { return pred(*a[0]) && pred(*a[1]) && pred(*a[2]); };
            t.expect(all([&](const Element& e) { return m_.is_bit_constant(e); }) ||
                         all([&](const Element& e) { return m_.is_Ga(e); }) ||
                         all([&](const Element& e) { return m_.is_Ha(e); }),
                     [&] { return "+" + show_tuple(a) + " mixes groups"; });
        });
    }

    // 11 and 12 share their shape: a group under + whose projections (pi over
    // faces, rho over levels) embed it into the product of Z_2.
    template <class Wrap, class Proj>
    void projected_group(Tally& t, Rng& rng, const Gf2Vec& zero, std::size_t free_bits, std::size_t coords,
                         Wrap wrap, Proj proj_rel, const char* what)
    {
        // The projection of x read through the relation; fails unless exactly
        // one bit constant is related at every coordinate.
        auto project = [&](const Gf2Vec& x, std::vector<bool>& out) {
            out.assign(coords, false);
            const Element ex = wrap(x);
            for (std::size_t i = 0; i < coords; ++i) {
                const bool zero_rel = proj_rel(i, ex, BitElem{false});
                const bool one_rel = proj_rel(i, ex, BitElem{true});
                if (zero_rel == one_rel) {
                    t.fail(std::string(what) + " projection " + std::to_string(i) + " of " + show(ex) +
                           " is not a function");
                    return false;
                }
                out[i] = one_rel;
            }
            return true;
        };
        auto homomorphic = [&](const std::vector<bool>& px, const std::vector<bool>& py,
                               const std::vector<bool>& pz) {
            for (std::size_t i = 0; i < coords; ++i)
                if ((px[i] != py[i]) != pz[i])
                    return false;
            return true;
        };

        if (pow2(3 * free_bits) <= opt_.exhaustive_bound) {
            const std::uint64_t size = pow2(free_bits);
            std::vector<std::vector<bool>> proj(size);
            std::set<std::vector<bool>> image;
            for (std::uint64_t x = 0; x < size && t.ok(); ++x) {
                t.point();
                const Gf2Vec v = with_low(zero, x);
                if (!project(v, proj[x]))
                    return;
                t.expect(image.insert(proj[x]).second,
                         [&] { return std::string(what) + " projections identify two elements, one is " + show(wrap(v)); });
            }
            // Every finitely supported vector (here: every vector over the
            // free coordinates) is the projection of an element.
            t.expect(image.size() == size,
                     [&] { return std::string(what) + " does not contain every finitely supported vector"; });
            std::vector<Element> elems;
            std::vector<std::vector<std::uint64_t>> packed(size, std::vector<std::uint64_t>((coords + 63) / 64));
            for (std::uint64_t x = 0; x < size; ++x) {
                elems.push_back(wrap(with_low(zero, x)));
                for (std::size_t i = 0; i < coords; ++i)
                    packed[x][i / 64] |= std::uint64_t{proj[x][i]} << (i % 64);
            }
            for (std::uint64_t x = 0; x < size && t.ok(); ++x)
                for (std::uint64_t y = 0; y < size && t.ok(); ++y)
                    for (std::uint64_t z = 0; z < size && t.ok(); ++z) {
                        t.point();
                        bool hom = true;
                        for (std::size_t w = 0; w < packed[x].size(); ++w)
                            hom = hom && (packed[x][w] ^ packed[y][w]) == packed[z][w];
                        t.expect(m_.plus(elems[x], elems[y], elems[z]) == hom, [&] {
                            return "+(" + show(elems[x]) + ", " + show(elems[y]) + ", " + show(elems[z]) +
                                   ") disagrees with the projections";
                        });
                    }
            return;
        }
        t.sampled();
        std::vector<bool> px, py, pz;
        for (std::uint64_t s = 0; s < opt_.samples && t.ok(); ++s) {
            t.point();
            const Gf2Vec x = sample_low(zero, free_bits, rng);
            const Gf2Vec y = sample_low(zero, free_bits, rng);
            Gf2Vec z = x + y;
            if (rng.coin())
                z = sample_low(zero, free_bits, rng);
            if (!project(x, px) || !project(y, py) || !project(z, pz))
                return;
            const bool sum = m_.plus(wrap(x), wrap(y), wrap(z));
            t.expect(sum == homomorphic(px, py, pz), [&] {
                return "+(" + show(wrap(x)) + ", " + show(wrap(y)) + ", " + show(wrap(z)) +
                       ") disagrees with the projections";
            });
            // Projections are injective: x is recovered from them.
            for (std::size_t i = 0; i < free_bits && t.ok(); ++i)
                t.expect(px[i] == x.test(i), [&] { return std::string(what) + " projection misreads " + show(wrap(x)); });
        }
    }

    void ga_group(Tally& t, Rng& rng)
    {
        projected_group(
            t, rng, zero_off_, nf_, nf_, [](const Gf2Vec& v) -> Element { return GaElem{v}; },
            [&](std::size_t i, const Element& x, const Element& b) {
                return m_.pi(FaceElem{static_cast<FaceId>(i)}, x, b);
            },
            "Ga");
    }

    void ha_group(Tally& t, Rng& rng)
    {
        projected_group(
            t, rng, zero_lv_, cutoff_, levels_, [](const Gf2Vec& v) -> Element { return HaElem{v}; },
            [&](std::size_t i, const Element& x, const Element& b) {
                return m_.rho(LevelElem{static_cast<Level>(i)}, x, b);
            },
            "Ha");
    }

    // 13. Each G^b(l, u, -) is a nonempty torsor: g(l, u, -, x, -) is a
    // bijection from G^a, symmetric in its last two places and composing by +.
    void g_torsors(Tally& t, Rng& rng)
    {
        auto gstr = [&](const GElem& x) { return show(x); };
        auto ga = [&](const Gf2Vec& a) { return show(GaElem{a}); };
        auto at = [&](const GElem& x, const Gf2Vec& a, const GElem& y) {
            return "(" + ga(a) + ", " + gstr(x) + ", " + gstr(y) + ")";
        };
        auto nonempty = [&](Level l, FaceId u) {
            t.expect(m_.Gb(LevelElem{l}, FaceElem{u}, m_.zero_g(l, u)), [&] {
                return "G^b(" + std::to_string(l) + ", " + face_str(u) + ") has no element";
            });
        };
        // x, a: the image exists, is in the torsor and g is symmetric on it.
        auto image = [&](const GElem& x, const Gf2Vec& a) {
            const GElem y = m_.g_act(a, x);
            t.expect(m_.valid_g(y) && y.level == x.level && y.face == x.face && m_.g_holds(x.level, x.face, a, x, y) &&
                         m_.g_holds(x.level, x.face, a, y, x),
                     [&] { return "g" + at(x, a, y) + " or its mirror fails"; });
        };
        // x, a, y: g(a, x, y) holds only for the image and is symmetric.
        auto unique = [&](const GElem& x, const Gf2Vec& a, const GElem& y) {
            if (!m_.g_holds(x.level, x.face, a, x, y))
                return;
            t.expect(y == m_.g_act(a, x) && m_.g_holds(x.level, x.face, a, y, x),
                     [&] { return "g" + at(x, a, y) + " holds for a second image or is not symmetric"; });
        };
        // x, a, b: composition and injectivity in a.
        auto compose = [&](const GElem& x, const Gf2Vec& a, const Gf2Vec& b) {
            const GElem y = m_.g_act(a, x);
            const GElem z = m_.g_act(b, y);
            t.expect(m_.g_holds(x.level, x.face, a + b, x, z),
                     [&] { return "g composition fails from " + at(x, a, y) + " with " + ga(b); });
            t.expect(a == b || m_.g_act(b, x) != y,
                     [&] { return "g(-, " + gstr(x) + ", -) is not injective at " + ga(a) + ", " + ga(b); });
        };
        // x, y: some a carries x to y.
        auto onto = [&](const GElem& x, const GElem& y) {
            const Gf2Vec a = m_.g_diff(x, y);
            t.expect(m_.g_holds(x.level, x.face, a, x, y), [&] { return "g" + at(x, a, y) + " fails"; });
        };

        if (exhaustive(levels_ * nf_ * 2, 3 * nf_)) {
            // Same checks as the sampled path, with the action tabulated once
            // per torsor: act[x][a] is the image of x under a, read back as an
            // index after it has been validated.
            const std::uint64_t size = pow2(nf_);
            const auto& offs = offsets();
            std::vector<GElem> elems(size);
            std::vector<std::uint64_t> act(size * size);
            for (Level l = 0; l < levels_; ++l)
                for (FaceId u = 0; u < nf_ && t.ok(); ++u) {
                    nonempty(l, u);
                    for (std::uint64_t xi = 0; xi < size; ++xi)
                        elems[xi] = GElem{l, u, offs[xi]};
                    for (std::uint64_t xi = 0; xi < size && t.ok(); ++xi)
                        for (std::uint64_t ai = 0; ai < size && t.ok(); ++ai) {
                            t.point();
                            image(elems[xi], offs[ai]);
                            onto(elems[xi], elems[ai]);
                            act[xi * size + ai] = m_.g_act(offs[ai], elems[xi]).offset.word(0);
                        }
                    for (std::uint64_t xi = 0; xi < size && t.ok(); ++xi) {
                        const GElem& x = elems[xi];
                        for (std::uint64_t ai = 0; ai < size && t.ok(); ++ai) {
                            const Gf2Vec& a = offs[ai];
                            const std::uint64_t yi = act[xi * size + ai];
                            for (std::uint64_t bi = 0; bi < size; ++bi) {
                                // bi as a candidate image of x under a.
                                if (m_.g_holds(l, u, a, x, elems[bi]) &&
                                    !(bi == yi && m_.g_holds(l, u, a, elems[bi], x))) {
                                    t.fail("g" + at(x, a, elems[bi]) + " holds for a second image or is not symmetric");
                                    break;
                                }
                                // bi as a second group element.
                                const GElem& z = elems[act[yi * size + bi]];
                                if (!m_.g_holds(l, u, offs[ai ^ bi], x, z)) {
                                    t.fail("g composition fails from " + at(x, a, elems[yi]) + " with " + ga(offs[bi]));
                                    break;
                                }
                                if (bi != ai && act[xi * size + bi] == yi) {
                                    t.fail("g(-, " + gstr(x) + ", -) is not injective at " + ga(a) + ", " + ga(offs[bi]));
                                    break;
                                }
                            }
                            t.point(2 * size);
                        }
                    }
                }
            return;
        }
        t.sampled();
        for (std::uint64_t s = 0; s < opt_.samples && t.ok(); ++s) {
            t.point();
            const auto l = static_cast<Level>(rng.uniform_below(levels_));
            const auto u = static_cast<FaceId>(rng.uniform_below(nf_));
            nonempty(l, u);
            const GElem x{l, u, sample_low(zero_off_, nf_, rng)};
            const Gf2Vec a = sample_low(zero_off_, nf_, rng);
            const Gf2Vec b = sample_low(zero_off_, nf_, rng);
            GElem y = m_.g_act(a, x);
            if (rng.coin())
                y.offset.flip(rng.uniform_below(nf_));
            image(x, a);
            unique(x, a, y);
            compose(x, a, b);
            onto(x, y);
        }
    }

    // 14. Each H^b(u, -) is a nonempty torsor for H^a under h.
    void h_torsors(Tally& t, Rng& rng)
    {
        auto at = [&](const HElem& x, const Gf2Vec& a, const HElem& y) {
            return "(" + show(HaElem{a}) + ", " + show(x) + ", " + show(y) + ")";
        };
        auto check = [&](const HElem& x, const Gf2Vec& a, const Gf2Vec& b, const HElem& y) {
            const FaceId u = x.face;
            const HElem ax = m_.h_act(a, x);
            t.expect(m_.Hb(FaceElem{u}, ax) && m_.h_holds(u, a, x, ax) && m_.h_holds(u, a, ax, x),
                     [&] { return "h" + at(x, a, ax) + " or its mirror fails"; });
            if (m_.h_holds(u, a, x, y))
                t.expect(y == ax && m_.h_holds(u, a, y, x),
                         [&] { return "h" + at(x, a, y) + " holds for a second image or is not symmetric"; });
            t.expect(m_.h_holds(u, a + b, x, m_.h_act(b, ax)),
                     [&] { return "h composition fails from " + at(x, a, ax) + " with " + show(HaElem{b}); });
            t.expect(a == b || m_.h_act(b, x) != ax,
                     [&] { return "h(-, " + show(x) + ", -) is not injective"; });
            t.expect(m_.h_holds(u, m_.h_diff(x, y), x, y), [&] { return "no a carries " + show(x) + " to " + show(y); });
        };
        auto nonempty = [&](FaceId u) {
            t.expect(m_.Hb(FaceElem{u}, m_.base_h(u)), [&] { return "H^b(" + face_str(u) + ") has no element"; });
        };

        if (exhaustive(nf_, 4 * cutoff_)) {
            const std::uint64_t size = pow2(cutoff_);
            for (FaceId u = 0; u < nf_ && t.ok(); ++u) {
                nonempty(u);
                const Gf2Vec& rep = m_.h_twist(u).rep();
                for (std::uint64_t xi = 0; xi < size; ++xi)
                    for (std::uint64_t ai = 0; ai < size; ++ai)
                        for (std::uint64_t bi = 0; bi < size; ++bi)
                            for (std::uint64_t yi = 0; yi < size && t.ok(); ++yi) {
                                t.point();
                                check(HElem{u, with_low(rep, xi)}, with_low(zero_lv_, ai), with_low(zero_lv_, bi),
                                      HElem{u, with_low(rep, yi)});
                            }
            }
            return;
        }
        t.sampled();
        for (std::uint64_t s = 0; s < opt_.samples && t.ok(); ++s) {
            t.point();
            const auto u = static_cast<FaceId>(rng.uniform_below(nf_));
            nonempty(u);
            const Gf2Vec& rep = m_.h_twist(u).rep();
            check(HElem{u, sample_low(rep, cutoff_, rng)}, sample_low(zero_lv_, cutoff_, rng),
                  sample_low(zero_lv_, cutoff_, rng), HElem{u, sample_low(rep, cutoff_, rng)});
        }
    }

    // Faces of the k+1 arguments form all faces of one cell.
    bool structural(std::span<const FaceId> faces) const
    {
        std::uint64_t all = 0;
        for (std::size_t i = 0; i < faces.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j)
                if (faces[i] == faces[j])
                    return false;
            all |= u_.face_mask(faces[i]);
        }
        return static_cast<std::size_t>(std::popcount(all)) == k_ + 1;
    }

    // Level-l torsor elements as Elements, g[u * 2^|K| + x] and
    // h[u * 2^c + y]; only built for exhaustive sweeps.
    struct LevelElems {
        std::vector<Element> g;
        std::vector<Element> h;
    };

    LevelElems level_elems(Level l)
    {
        LevelElems e;
        const auto& offs = offsets();
        e.g.reserve(nf_ * offs.size());
        for (FaceId u = 0; u < nf_; ++u)
            for (const auto& v : offs)
                e.g.push_back(GElem{l, u, v});
        for (FaceId u = 0; u < nf_; ++u)
            for (std::uint64_t y = 0; y < pow2(cutoff_); ++y)
                e.h.push_back(HElem{u, with_low(m_.h_twist(u).rep(), y)});
        return e;
    }

    std::string q_text(Level l, std::span<const Element* const> a) const
    {
        return "Q_" + std::to_string(l) + show_tuple(a);
    }

    static void point_at(std::vector<const Element*>& ptrs, const std::vector<Element>& store)
    {
        for (std::size_t i = 0; i < store.size(); ++i)
            ptrs[i] = &store[i];
    }

    // 15. Q_l only holds of level-l torsor elements over all faces of one
    // cell, and is symmetric in its first k places.
    void q_symmetry(Tally& t, Rng& rng)
    {
        for (const auto& [key, vec] : m_.q_twist()) {
            t.point();
            const auto [cell, face] = key;
            const bool in_cell = cell < u_.num_cells() && face < nf_ &&
                                 std::ranges::count(u_.cell_faces(cell), face) == 1;
            t.expect(in_cell, [&] {
                const std::string cs =
                    cell < u_.num_cells() ? "{" + u_.cell(cell).to_string() + "}" : "#" + std::to_string(cell);
                const std::string fs = face < nf_ ? face_str(face) : "#" + std::to_string(face);
                return "the Q_l parity of cell " + cs + " is keyed by face " + fs +
                       ", which is not a face of it, so the designated face of an instance is not well defined";
            });
        }
        if (!t.ok())
            return;

        for (Level l : {Level{0}, levels_ - 1})
            probe_tuples(k_ + 1, t, [&](std::span<const Element* const> a) {
                if (!m_.Q(l, a))
                    return;
                const auto* h = std::get_if<HElem>(a[k_]);
                bool typed = h && m_.Hb(FaceElem{h->face}, *a[k_]);
                for (unsigned i = 0; i < k_; ++i) {
                    const auto* g = std::get_if<GElem>(a[i]);
                    typed = typed && g && m_.Gb(LevelElem{l}, FaceElem{g->face}, *a[i]);
                }
                t.expect(typed, [&] { return q_text(l, a) + " is ill-sorted"; });
            });

        std::vector<const Element*> args(k_ + 1);
        std::vector<const Element*> perm(k_ + 1);
        std::vector<FaceId> faces(k_ + 1);
        std::vector<std::size_t> order(k_);
        auto check = [&](Level l) {
            if (!m_.Q(l, args))
                return;
            if (!t.expect(structural(faces),
                          [&] { return q_text(l, args) + " holds but its faces are not those of one cell"; }))
                return;
            std::iota(order.begin(), order.end(), 0);
            while (std::next_permutation(order.begin(), order.end())) {
                for (unsigned i = 0; i < k_; ++i)
                    perm[i] = args[order[i]];
                perm[k_] = args[k_];
                if (!t.expect(m_.Q(l, perm), [&] {
                        return q_text(l, args) + " holds but its permutation " + q_text(l, perm) + " fails";
                    }))
                    return;
            }
        };

        const std::size_t frame_bits = k_ * nf_ + cutoff_;
        const std::uint64_t frames = mul_sat(levels_, pow_sat(nf_, k_ + 1));
        if (exhaustive(frames, frame_bits)) {
            const std::uint64_t size = pow2(frame_bits);
            const std::uint64_t g_size = pow2(nf_);
            const std::uint64_t h_size = pow2(cutoff_);
            for (Level l = 0; l < levels_ && t.ok(); ++l) {
                const LevelElems le = level_elems(l);
                for_each_tuple(nf_, k_ + 1, t, [&](std::span<const std::size_t> d) {
                    for (unsigned i = 0; i <= k_; ++i)
                        faces[i] = static_cast<FaceId>(d[i]);
                    for (std::uint64_t x = 0; x < size && t.ok(); ++x) {
                        for (unsigned i = 0; i < k_; ++i)
                            args[i] = &le.g[faces[i] * g_size + ((x >> (i * nf_)) & low_mask(nf_))];
                        args[k_] = &le.h[faces[k_] * h_size + (x >> (k_ * nf_))];
                        check(l);
                    }
                    t.point(size - 1);
                });
            }
            return;
        }
        t.sampled();
        std::vector<Element> store(k_ + 1);
        for (std::uint64_t s = 0; s < opt_.samples && t.ok(); ++s) {
            t.point();
            const auto l = static_cast<Level>(rng.uniform_below(levels_));
            if (rng.coin()) {
                const auto cell = static_cast<CellId>(rng.uniform_below(u_.num_cells()));
                faces = u_.cell_faces(cell);
                rng.shuffle(faces);
            } else {
                for (auto& f : faces)
                    f = static_cast<FaceId>(rng.uniform_below(nf_));
            }
            for (unsigned i = 0; i < k_; ++i)
                store[i] = GElem{l, faces[i], sample_low(zero_off_, nf_, rng)};
            store[k_] = HElem{faces[k_], sample_low(m_.h_twist(faces[k_]).rep(), cutoff_, rng)};
            point_at(args, store);
            check(l);
        }
    }

    // A Q2 frame: level, cell, designated h-face w and the face p of the
    // replaced g-argument. Arguments are ordered p first, then the other
    // g-faces in lexicographic order.
    struct Q2Frame {
        Level l;
        CellId cell;
        FaceId w;
        std::vector<FaceId> g_faces;
    };

    Q2Frame q2_frame(Level l, CellId cell, std::size_t wi, std::size_t pi) const
    {
        const auto& cf = u_.cell_faces(cell);
        Q2Frame f{l, cell, cf[wi], {}};
        std::vector<FaceId> rest;
        for (std::size_t i = 0; i < cf.size(); ++i)
            if (i != wi)
                rest.push_back(cf[i]);
        f.g_faces.push_back(rest[pi]);
        for (std::size_t i = 0; i < rest.size(); ++i)
            if (i != pi)
                f.g_faces.push_back(rest[i]);
        return f;
    }

    // 16. Replacing x_0 in a true instance keeps it true iff the difference
    // projects to 0 at the h-face; replacing x_k keeps it true iff the
    // difference has bit 0 at the level.
    void q_coherence(Tally& t, Rng& rng)
    {
        const std::size_t frame_bits = (k_ + 1) * nf_ + cutoff_;
        const std::uint64_t frames = mul_sat(levels_ * u_.num_cells(), (k_ + 1) * k_);
        std::vector<const Element*> args(k_ + 1);
        // The bit "pi_w of the unique a with g(c_l, u, a, x, x') is 0".
        auto g_side = [&](const Q2Frame& f, const GElem& x, const GElem& xp, bool& ok) {
            const Gf2Vec a = m_.g_diff(x, xp);
            ok = m_.g_holds(f.l, x.face, a, x, xp);
            return m_.pi(FaceElem{f.w}, GaElem{a}, BitElem{false});
        };
        auto h_side = [&](const Q2Frame& f, const HElem& y, const HElem& yp, bool& ok) {
            const Gf2Vec a = m_.h_diff(y, yp);
            ok = m_.h_holds(f.w, a, y, yp);
            return m_.rho(LevelElem{f.l}, HaElem{a}, BitElem{false});
        };

        if (exhaustive(frames, frame_bits)) {
            // Q_l is tabulated over the frame's argument tuples, and the two
            // projection bits over pairs of arguments; the axiom is then
            // checked on every (true instance, replacement) pair.
            const std::size_t t_bits = k_ * nf_ + cutoff_;
            const std::uint64_t g_size = pow2(nf_);
            const std::uint64_t h_size = pow2(cutoff_);
            std::vector<std::uint8_t> table(pow2(t_bits));
            std::vector<std::uint8_t> g_zero(g_size * g_size);
            std::vector<std::uint8_t> h_zero(h_size * h_size);
            std::vector<const Element*> other(k_ + 1);
            for (Level l = 0; l < levels_ && t.ok(); ++l) {
                const LevelElems le = level_elems(l);
                for (CellId cell = 0; cell < u_.num_cells(); ++cell)
                    for (std::size_t wi = 0; wi <= k_; ++wi)
                        for (std::size_t pi = 0; pi < k_ && t.ok(); ++pi) {
                            const Q2Frame f = q2_frame(l, cell, wi, pi);
                            auto make = [&](std::uint64_t idx, std::vector<const Element*>& out) {
                                for (unsigned i = 0; i < k_; ++i)
                                    out[i] = &le.g[f.g_faces[i] * g_size + ((idx >> (i * nf_)) & low_mask(nf_))];
                                out[k_] = &le.h[f.w * h_size + (idx >> (k_ * nf_))];
                            };
                            for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
                                make(idx, args);
                                table[idx] = m_.Q(l, args);
                            }
                            const Element* g0 = &le.g[f.g_faces[0] * g_size];
                            for (std::uint64_t x = 0; x < g_size && t.ok(); ++x)
                                for (std::uint64_t xp = 0; xp < g_size && t.ok(); ++xp) {
                                    bool ok = true;
                                    const auto& gx = std::get<GElem>(g0[x]);
                                    const auto& gxp = std::get<GElem>(g0[xp]);
                                    g_zero[x * g_size + xp] = g_side(f, gx, gxp, ok);
                                    t.expect(ok, [&] {
                                        return "g has no difference element for " + show(gx) + ", " + show(gxp);
                                    });
                                }
                            const Element* h0 = &le.h[f.w * h_size];
                            for (std::uint64_t y = 0; y < h_size && t.ok(); ++y)
                                for (std::uint64_t yp = 0; yp < h_size && t.ok(); ++yp) {
                                    bool ok = true;
                                    const auto& hy = std::get<HElem>(h0[y]);
                                    const auto& hyp = std::get<HElem>(h0[yp]);
                                    h_zero[y * h_size + yp] = h_side(f, hy, hyp, ok);
                                    t.expect(ok, [&] {
                                        return "h has no difference element for " + show(hy) + ", " + show(hyp);
                                    });
                                }
                            auto report = [&](std::uint64_t before, std::uint64_t after, const char* which) {
                                make(before, args);
                                make(after, other);
                                t.fail(q_text(l, args) + " holds, but replacing " + which + " gives " +
                                       q_text(l, other) + (table[after] ? ", which holds" : ", which fails") +
                                       " against the projection of the difference");
                            };
                            const std::uint64_t g_mask = low_mask(nf_);
                            const std::uint64_t rest_mask = low_mask(k_ * nf_);
                            for (std::uint64_t idx = 0; idx < table.size() && t.ok(); ++idx) {
                                if (!table[idx])
                                    continue;
                                const std::uint64_t x0 = idx & g_mask;
                                for (std::uint64_t xp = 0; xp < g_size; ++xp) {
                                    const std::uint64_t j = (idx & ~g_mask) | xp;
                                    if (table[j] != g_zero[x0 * g_size + xp]) {
                                        report(idx, j, "x_0");
                                        break;
                                    }
                                }
                                const std::uint64_t y0 = idx >> (k_ * nf_);
                                for (std::uint64_t yp = 0; yp < h_size && t.ok(); ++yp) {
                                    const std::uint64_t j = (idx & rest_mask) | (yp << (k_ * nf_));
                                    if (table[j] != h_zero[y0 * h_size + yp])
                                        report(idx, j, "x_k");
                                }
                                t.point(g_size + h_size);
                            }
                        }
            }
            return;
        }
        t.sampled();
        std::vector<Element> store(k_ + 1);
        std::vector<Element> alt_store;
        std::vector<const Element*> alt(k_ + 1);
        for (std::uint64_t s = 0; s < opt_.samples && t.ok(); ++s) {
            t.point();
            const auto l = static_cast<Level>(rng.uniform_below(levels_));
            const auto cell = static_cast<CellId>(rng.uniform_below(u_.num_cells()));
            const Q2Frame f = q2_frame(l, cell, rng.uniform_below(k_ + 1), rng.uniform_below(k_));
            const Gf2Vec& rep = m_.h_twist(f.w).rep();
            for (unsigned i = 0; i < k_; ++i)
                store[i] = GElem{l, f.g_faces[i], sample_low(zero_off_, nf_, rng)};
            store[k_] = HElem{f.w, sample_low(rep, cutoff_, rng)};
            point_at(args, store);
            if (!m_.Q(l, args)) {
                // Most false instances become true by toggling x_0 at the
                // h-face; if not, the sample is vacuous.
                std::get<GElem>(store[0]).offset.flip(f.w);
                if (!m_.Q(l, args))
                    continue;
            }
            bool ok = true;
            alt_store = store;
            GElem xp = std::get<GElem>(store[0]);
            xp.offset = sample_low(zero_off_, nf_, rng);
            alt_store[0] = xp;
            point_at(alt, alt_store);
            const bool expect_g = g_side(f, std::get<GElem>(store[0]), xp, ok);
            t.expect(ok, [&] { return "g has no difference element in " + q_text(l, args); });
            t.expect(m_.Q(l, alt) == expect_g, [&] {
                return q_text(l, args) + " holds, but replacing x_0 gives " + q_text(l, alt) + " with the wrong verdict";
            });
            alt_store = store;
            const HElem yp{f.w, sample_low(rep, cutoff_, rng)};
            alt_store[k_] = yp;
            point_at(alt, alt_store);
            const bool expect_h = h_side(f, std::get<HElem>(store[k_]), yp, ok);
            t.expect(ok, [&] { return "h has no difference element in " + q_text(l, args); });
            t.expect(m_.Q(l, alt) == expect_h, [&] {
                return q_text(l, args) + " holds, but replacing x_k gives " + q_text(l, alt) + " with the wrong verdict";
            });
        }
    }

    // 17. For u and atoms i_0..i_{n-1} outside u, with arguments on the other
    // faces of each u + i_j, some x in G^b(c_l, u) satisfies all n instances.
    // Taking every atom outside u covers the smaller lists too. The witness
    // is built one coordinate at a time: instance j is fixed by toggling x at
    // its h-face, which no other instance reads.
    struct Q3Arm {
        FaceId h_face;
        std::vector<FaceId> g_faces;  // besides u, lexicographic
    };

    std::vector<Q3Arm> q3_arms(FaceId u, std::span<const std::size_t> choice,
                               std::span<const AtomId> outside) const
    {
        std::vector<Q3Arm> arms;
        for (std::size_t j = 0; j < outside.size(); ++j) {
            const CellId cell =
                *u_.cell_by_mask(u_.face_mask(u) | (std::uint64_t{1} << u_.atom_position(outside[j])));
            std::vector<FaceId> others;
            for (FaceId f : u_.cell_faces(cell))
                if (f != u)
                    others.push_back(f);
            Q3Arm arm{others[choice[j]], {}};
            for (FaceId f : others)
                if (f != arm.h_face)
                    arm.g_faces.push_back(f);
            arms.push_back(std::move(arm));
        }
        return arms;
    }

    // Exhaustive in x as well: for every arm (outside atom, h-face choice)
    // and every assignment of its other arguments, the set of offsets x
    // making the instance true is tabulated as a bitset over all x, then
    // intersected across arms and with G^b(l, u).
    template <class Outside>
    void q_extension_tabulated(Tally& t, Outside&& outside_of)
    {
        const std::size_t n_out = u_.num_atoms() - k_;
        const std::size_t arm_bits = (k_ - 1) * nf_ + cutoff_;
        const std::uint64_t arm_size = pow2(arm_bits);
        const std::uint64_t g_size = pow2(nf_);
        const std::uint64_t h_size = pow2(cutoff_);
        const std::size_t words = (g_size + 63) / 64;
        const std::size_t per_arm = arm_size * words;
        std::vector<std::uint64_t> table(n_out * k_ * per_arm);
        std::vector<std::uint64_t> in_torsor(words);
        std::vector<std::uint64_t> acc(words);
        std::vector<const Element*> args(k_ + 1);
        std::vector<std::size_t> single(n_out);

        for (Level l = 0; l < levels_ && t.ok(); ++l) {
            const LevelElems le = level_elems(l);
            auto arm_args = [&](const Q3Arm& arm, std::uint64_t bits) {
                for (unsigned i = 0; i + 1 < k_; ++i)
                    args[i + 1] = &le.g[arm.g_faces[i] * g_size + ((bits >> (i * nf_)) & low_mask(nf_))];
                args[k_] = &le.h[arm.h_face * h_size + (bits >> ((k_ - 1) * nf_))];
            };
            for (FaceId u = 0; u < nf_ && t.ok(); ++u) {
                const auto outside = outside_of(u);
                const Element* xs = &le.g[u * g_size];
                std::ranges::fill(in_torsor, 0);
                for (std::uint64_t xo = 0; xo < g_size; ++xo)
                    if (m_.Gb(LevelElem{l}, FaceElem{u}, xs[xo]))
                        in_torsor[xo / 64] |= std::uint64_t{1} << (xo % 64);

                std::vector<std::vector<Q3Arm>> arms(k_);
                for (std::size_t c = 0; c < k_; ++c) {
                    std::ranges::fill(single, c);
                    arms[c] = q3_arms(u, single, outside);
                }
                std::ranges::fill(table, 0);
                for (std::size_t j = 0; j < n_out; ++j)
                    for (std::size_t c = 0; c < k_; ++c) {
                        std::uint64_t* tab = &table[(j * k_ + c) * per_arm];
                        for (std::uint64_t bits = 0; bits < arm_size; ++bits) {
                            arm_args(arms[c][j], bits);
                            for (std::uint64_t xo = 0; xo < g_size; ++xo) {
                                args[0] = &xs[xo];
                                if (m_.Q(l, args))
                                    tab[bits * words + xo / 64] |= std::uint64_t{1} << (xo % 64);
                            }
                        }
                    }

                for_each_tuple(k_, n_out, t, [&](std::span<const std::size_t> choice) {
                    for (std::uint64_t idx = 0; idx < pow2(n_out * arm_bits) && t.ok(); ++idx) {
                        acc = in_torsor;
                        bool any = false;
                        for (std::size_t j = 0; j < n_out; ++j) {
                            const std::uint64_t bits = (idx >> (j * arm_bits)) & low_mask(arm_bits);
                            const std::uint64_t* row = &table[(j * k_ + choice[j]) * per_arm + bits * words];
                            any = false;
                            for (std::size_t w = 0; w < words; ++w)
                                any |= (acc[w] &= row[w]) != 0;
                        }
                        if (n_out == 0)
                            any = std::ranges::any_of(acc, [](std::uint64_t w) { return w != 0; });
                        if (any)
                            continue;
                        std::string text;
                        for (std::size_t j = 0; j < n_out; ++j) {
                            arm_args(arms[choice[j]][j], (idx >> (j * arm_bits)) & low_mask(arm_bits));
                            args[0] = &xs[0];
                            text += (j ? ", " : "") + q_text(l, args);
                        }
                        t.fail("no x in G^b(" + std::to_string(l) + ", " + face_str(u) +
                               ") satisfies all of " + text + " (x shown as its zero offset)");
                    }
                    t.point(pow2(n_out * arm_bits) - 1);
                });
            }
        }
    }

    void q_extension(Tally& t, Rng& rng)
    {
        const std::size_t n_out = u_.num_atoms() - k_;
        const std::size_t arm_bits = (k_ - 1) * nf_ + cutoff_;
        const std::size_t frame_bits = n_out * arm_bits;
        const std::uint64_t frames = mul_sat(levels_ * nf_, pow_sat(k_, n_out));

        // args[j] = (x, g-arguments of arm j, h-argument of arm j).
        std::vector<std::vector<const Element*>> args(n_out, std::vector<const Element*>(k_ + 1));
        Element x_elem;
        auto solve = [&](Level l, FaceId u, const std::vector<Q3Arm>& arms) {
            GElem* xp = std::get_if<GElem>(&x_elem);
            if (!xp || xp->level != l || xp->face != u)
                x_elem = m_.zero_g(l, u);
            GElem& x = std::get<GElem>(x_elem);
            x.offset.reset();
            for (std::size_t j = 0; j < arms.size(); ++j) {
                args[j][0] = &x_elem;
                if (!m_.Q(l, args[j]))
                    x.offset.flip(arms[j].h_face);
            }
            for (std::size_t j = 0; j < arms.size(); ++j)
                if (!m_.Q(l, args[j])) {
                    t.fail("no x in G^b(" + std::to_string(l) + ", " + face_str(u) + ") found: candidate " +
                           show(x) + " fails " + q_text(l, args[j]));
                    return;
                }
            t.expect(m_.Gb(LevelElem{l}, FaceElem{u}, x_elem),
                     [&] { return "witness " + show(x) + " is not in its torsor"; });
        };
        auto outside_of = [&](FaceId u) {
            std::vector<AtomId> out;
            for (AtomId a : u_.atoms())
                if ((u_.face_mask(u) >> u_.atom_position(a) & 1U) == 0)
                    out.push_back(a);
            return out;
        };

        if (exhaustive(frames, frame_bits) && nf_ + arm_bits <= std::bit_width(opt_.exhaustive_bound) - 1) {
            q_extension_tabulated(t, outside_of);
            return;
        }
        if (exhaustive(frames, frame_bits)) {
            const std::uint64_t size = pow2(frame_bits);
            const std::uint64_t g_size = pow2(nf_);
            const std::uint64_t h_size = pow2(cutoff_);
            for (Level l = 0; l < levels_ && t.ok(); ++l) {
                const LevelElems le = level_elems(l);
                for (FaceId u = 0; u < nf_ && t.ok(); ++u) {
                    const auto outside = outside_of(u);
                    for_each_tuple(k_, n_out, t, [&](std::span<const std::size_t> choice) {
                        const auto arms = q3_arms(u, choice, outside);
                        for (std::uint64_t idx = 0; idx < size && t.ok(); ++idx) {
                            for (std::size_t j = 0; j < n_out; ++j) {
                                const std::uint64_t bits = (idx >> (j * arm_bits)) & low_mask(arm_bits);
                                for (unsigned i = 0; i + 1 < k_; ++i)
                                    args[j][i + 1] = &le.g[arms[j].g_faces[i] * g_size + ((bits >> (i * nf_)) & low_mask(nf_))];
                                args[j][k_] = &le.h[arms[j].h_face * h_size + (bits >> ((k_ - 1) * nf_))];
                            }
                            solve(l, u, arms);
                        }
                        t.point(size - 1);
                    });
                }
            }
            return;
        }
        t.sampled();
        std::vector<std::vector<Element>> store;
        for (std::uint64_t s = 0; s < opt_.samples && t.ok(); ++s) {
            t.point();
            const auto l = static_cast<Level>(rng.uniform_below(levels_));
            const auto u = static_cast<FaceId>(rng.uniform_below(nf_));
            const auto outside = outside_of(u);
            std::vector<std::size_t> choice(outside.size());
            for (auto& c : choice)
                c = rng.uniform_below(k_);
            const auto arms = q3_arms(u, choice, outside);
            store.assign(arms.size(), std::vector<Element>(k_ + 1));
            for (std::size_t j = 0; j < arms.size(); ++j) {
                for (unsigned i = 0; i + 1 < k_; ++i)
                    store[j][i + 1] = GElem{l, arms[j].g_faces[i], sample_low(zero_off_, nf_, rng)};
                store[j][k_] = HElem{arms[j].h_face, sample_low(m_.h_twist(arms[j].h_face).rep(), cutoff_, rng)};
                point_at(args[j], store[j]);
            }
            solve(l, u, arms);
        }
    }

    // 18. R holds only of the level constants.
    void only_level_constants(Tally& t, Rng& rng)
    {
        for (Level l = 0; l < levels_ + 2 && t.ok(); ++l) {
            t.point();
            t.expect(m_.is_R(LevelElem{l}) == (l < levels_),
                     [&] { return "R(" + std::to_string(l) + ") disagrees with the level range"; });
        }
        for_each_element(t, rng, [&](const Element& e) {
            if (m_.is_R(e))
                t.expect(std::holds_alternative<LevelElem>(e), [&] { return show(e) + " is in R"; });
        });
    }

    // 19. G^a is all of the direct sum over K.
    void ga_full(Tally& t, Rng& rng)
    {
        auto check = [&](const Gf2Vec& v) {
            t.point();
            t.expect(m_.is_Ga(GaElem{v}), [&] { return show(GaElem{v}) + " is missing from Ga"; });
        };
        if (pow2(nf_) <= opt_.exhaustive_bound) {
            for (std::uint64_t x = 0; x < pow2(nf_) && t.ok(); ++x)
                check(with_low(zero_off_, x));
            return;
        }
        t.sampled();
        for (std::uint64_t s = 0; s < opt_.samples && t.ok(); ++s)
            check(sample_low(zero_off_, nf_, rng));
    }

    // 20. H^a is exactly the cutoff subgroup (the surrogate of the finitely
    // supported sequences).
    void ha_cutoff(Tally& t, Rng& rng)
    {
        auto check = [&](const Gf2Vec& v) {
            t.point();
            const bool below = in_cutoff_subgroup(v, cutoff_);
            t.expect(m_.is_Ha(HaElem{v}) == below, [&] {
                return "Ha(" + v.to_string() + ") should be " + (below ? "true" : "false");
            });
        };
        if (pow2(levels_) <= opt_.exhaustive_bound) {
            for (std::uint64_t x = 0; x < pow2(levels_) && t.ok(); ++x)
                check(with_low(zero_lv_, x));
            return;
        }
        t.sampled();
        for (std::uint64_t s = 0; s < opt_.samples && t.ok(); ++s)
            check(sample_low(zero_lv_, levels_, rng));
    }

    const TwistedModel& m_;
    const Universe& u_;
    AxiomOptions opt_;
    unsigned k_;
    unsigned levels_;
    unsigned cutoff_;
    std::size_t nf_;
    Gf2Vec zero_off_;
    Gf2Vec zero_lv_;
    std::vector<Element> probes_;
    std::vector<Gf2Vec> offsets_;
};

}  // namespace

const char* mode_name(CheckMode mode) noexcept
{
    return mode == CheckMode::exhaustive ? "exhaustive" : "sampled";
}

const char* axiom_name(unsigned id)
{
    if (id == 0 || id > num_axioms)
        throw std::out_of_range("axiom_name: no axiom " + std::to_string(id));
    return names[id - 1];
}

bool AxiomReport::ok() const noexcept
{
    return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.ok; });
}

bool AxiomReport::exhaustive() const noexcept
{
    return std::all_of(results.begin(), results.end(),
                       [](const AxiomResult& r) { return r.mode == CheckMode::exhaustive; });
}

const AxiomResult* AxiomReport::first_failure() const noexcept
{
    for (const auto& r : results)
        if (!r.ok)
            return &r;
    return nullptr;
}

AxiomReport check_axioms(const TwistedModel& m, const AxiomOptions& options)
{
    return Checker(m, options).run();
}

}  // namespace ptor
