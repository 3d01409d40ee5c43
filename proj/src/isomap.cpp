#include "ptor/isomap.hpp"

#include "ptor/sampling.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace ptor {

PIdentification identify(TwistedModel source, TwistedModel target)
{
    if (!(source.universe() == target.universe()))
        throw PreconditionError("identify: the two models are over different universes");
    return PIdentification{std::move(source), std::move(target)};
}

IsoMap::IsoMap(PIdentification pid, Solution f_source, Solution f_target)
    : pid_(std::move(pid)), f_m_(std::move(f_source)), f_n_(std::move(f_target))
{
}

Element IsoMap::operator()(const Element& x) const
{
    if (!overrides_.empty())
        if (auto it = overrides_.find(x); it != overrides_.end())
            return it->second;
    if (const auto* g = std::get_if<GElem>(&x)) {
        const GElem* a = f_m_.g(g->level, g->face);
        const GElem* b = f_n_.g(g->level, g->face);
        if (!a || !b)
            return x;
        return GElem{g->level, g->face, g->offset + a->offset + b->offset};
    }
    if (const auto* h = std::get_if<HElem>(&x)) {
        const HElem* a = f_m_.h(h->face);
        const HElem* b = f_n_.h(h->face);
        if (!a || !b)
            return x;
        return HElem{h->face, h->vec + a->vec + b->vec};
    }
    return x;
}

Element IsoMap::inverse(const Element& y) const
{
    // Over GF(2) the offset shift is its own inverse.
    if (const auto* g = std::get_if<GElem>(&y)) {
        const GElem* a = f_m_.g(g->level, g->face);
        const GElem* b = f_n_.g(g->level, g->face);
        if (a && b)
            return GElem{g->level, g->face, g->offset + a->offset + b->offset};
    }
    if (const auto* h = std::get_if<HElem>(&y)) {
        const HElem* a = f_m_.h(h->face);
        const HElem* b = f_n_.h(h->face);
        if (a && b)
            return HElem{h->face, h->vec + a->vec + b->vec};
    }
    return y;
}

IsoMap build_iso(PIdentification pid, const Solution& f_source, const Solution& f_target)
{
    const Universe& u = pid.source.universe();
    const AtomMask all = u.num_atoms() == 64 ? ~AtomMask{0} : (AtomMask{1} << u.num_atoms()) - 1;
    auto require = [&](const TwistedModel& m, const Solution& f, const char* which) {
        if (!is_total_on(u, f, all))
            throw PreconditionError(std::string("build_iso: the ") + which + " solution is not total");
        const SolutionCheck c = is_solution(m, f);
        if (!c.ok)
            throw PreconditionError(std::string("build_iso: the ") + which + " solution violates " +
                                    describe(u, *c.violated));
    };
    require(pid.source, f_source, "source");
    require(pid.target, f_target, "target");
    return IsoMap(std::move(pid), f_source, f_target);
}

bool IsoReport::ok() const noexcept
{
    return std::ranges::all_of(checks, [](const IsoCheck& c) { return c.ok; });
}

bool IsoReport::exhaustive() const noexcept
{
    return std::ranges::all_of(checks, [](const IsoCheck& c) { return c.mode == CheckMode::exhaustive; });
}

const IsoCheck* IsoReport::first_failure() const noexcept
{
    for (const auto& c : checks)
        if (!c.ok)
            return &c;
    return nullptr;
}

namespace {

std::uint64_t pow2_sat(std::size_t bits)
{
    return bits >= 64 ? UINT64_MAX : std::uint64_t{1} << bits;
}

Gf2Vec with_low(const Gf2Vec& base, std::uint64_t low, std::size_t bits)
{
    Gf2Vec v = base;
    if (bits > 0)
        v.set_word(0, (v.word(0) & ~(pow2_sat(bits) - 1)) | low);
    return v;
}

Gf2Vec random_low(const Gf2Vec& base, std::size_t bits, Rng& rng)
{
    Gf2Vec noise(base.size(), base.family());
    rng.fill(noise, bits);
    return base + noise;
}

class Verifier {
public:
    Verifier(const IsoMap& j, const IsoOptions& opt)
        : j_(j), m_(j.source()), n_(j.target()), u_(m_.universe()), opt_(opt), rng_(opt.seed),
          nf_(u_.num_faces()), k_(u_.k()), levels_(u_.levels()), cutoff_(u_.cutoff())
    {
    }

    IsoReport run()
    {
        run_check("P-identity", [this] { p_identity(); });
        run_check("unary", [this] { unary(); });
        run_check("membership", [this] { membership(); });
        run_check("pi", [this] { pi(); });
        run_check("rho", [this] { rho(); });
        run_check("plus", [this] { plus(); });
        run_check("G^b", [this] { g_torsor(); });
        run_check("H^b", [this] { h_torsor(); });
        run_check("g", [this] { g_action(); });
        run_check("h", [this] { h_action(); });
        run_check("Q", [this] { q(); });
        return std::move(report_);
    }

private:
    void run_check(const char* name, const std::function<void()>& body)
    {
        cur_ = IsoCheck{};
        cur_.predicate = name;
        body();
        report_.checks.push_back(std::move(cur_));
    }

    bool ok() const { return cur_.ok; }
    void point(std::uint64_t n = 1) { cur_.points += n; }
    void sampled() { cur_.mode = CheckMode::sampled; }
    template <class Text>
    bool expect(bool cond, Text&& text)
    {
        if (!cond && cur_.ok) {
            cur_.ok = false;
            cur_.witness = text();
        }
        return cond;
    }
    bool exhaustive(std::size_t bits) const { return pow2_sat(bits) <= opt_.exhaustive_bound; }

    std::string show(const Element& e) const { return m_.describe(e); }
    std::string show_t(const Element& e) const { return n_.describe(e); }

    // Runs fn on every vector with the given free low bits, or on samples.
    template <class Fn>
    void for_each_low(const Gf2Vec& base, std::size_t bits, Fn&& fn)
    {
        if (exhaustive(bits)) {
            for (std::uint64_t x = 0; x < pow2_sat(bits) && ok(); ++x)
                fn(with_low(base, x, bits));
            return;
        }
        sampled();
        for (std::uint64_t s = 0; s < opt_.samples && ok(); ++s)
            fn(random_low(base, bits, rng_));
    }

    std::vector<Element> p_elements(bool with_groups)
    {
        std::vector<Element> out;
        for (AtomId a : u_.atoms())
            out.push_back(AtomElem{a});
        for (FaceId f = 0; f < nf_; ++f)
            out.push_back(FaceElem{f});
        for (Level l = 0; l < levels_; ++l)
            out.push_back(LevelElem{l});
        out.push_back(BitElem{false});
        out.push_back(BitElem{true});
        if (with_groups) {
            for_each_low(u_.zero_offset(), nf_, [&](const Gf2Vec& v) { out.push_back(GaElem{v}); });
            for_each_low(u_.zero_levels(), cutoff_, [&](const Gf2Vec& v) { out.push_back(HaElem{v}); });
        }
        return out;
    }

    void p_identity()
    {
        for (const Element& e : p_elements(true)) {
            point();
            const Element je = j_(e);
            if (!expect(je == e, [&] { return "j moves " + show(e) + " to " + show_t(je); }))
                return;
        }
    }

    void unary()
    {
        auto same = [&](const Element& e) {
            point();
            const Element je = j_(e);
            using Pred = bool (TwistedModel::*)(const Element&) const noexcept;
            static constexpr std::pair<const char*, Pred> preds[] = {
                {"I", &TwistedModel::is_I},   {"K", &TwistedModel::is_K},   {"R", &TwistedModel::is_R},
                {"Ga", &TwistedModel::is_Ga}, {"Ha", &TwistedModel::is_Ha}, {"P", &TwistedModel::is_P},
                {"bit", &TwistedModel::is_bit_constant},
            };
            for (const auto& [name, p] : preds)
                if (!expect((m_.*p)(e) == (n_.*p)(je),
                            [&] { return std::string(name) + " disagrees on " + show(e) + " and its image"; }))
                    return;
        };
        for (const Element& e : p_elements(true))
            same(e);
        for (Level l = 0; l < levels_ && ok(); ++l)
            for (FaceId f = 0; f < nf_ && ok(); ++f)
                for_each_low(u_.zero_offset(), nf_, [&](const Gf2Vec& v) { same(GElem{l, f, v}); });
        for (FaceId f = 0; f < nf_ && ok(); ++f)
            for_each_low(m_.h_twist(f).rep(), cutoff_, [&](const Gf2Vec& v) { same(HElem{f, v}); });
    }

    void membership()
    {
        for (AtomId a : u_.atoms())
            for (FaceId f = 0; f < nf_ && ok(); ++f) {
                point();
                const Element x = AtomElem{a}, y = FaceElem{f};
                expect(m_.member(x, y) == n_.member(j_(x), j_(y)),
                       [&] { return "membership of " + show(x) + " in " + show(y) + " is not preserved"; });
            }
    }

    template <class Rel>
    void projection(std::size_t coords, std::function<Element(std::size_t)> coord, const Gf2Vec& zero,
                    std::size_t bits, std::function<Element(const Gf2Vec&)> wrap, Rel rel, const char* name)
    {
        for (std::size_t i = 0; i < coords && ok(); ++i)
            for_each_low(zero, bits, [&](const Gf2Vec& v) {
                for (bool b : {false, true}) {
                    point();
                    const Element c = coord(i), x = wrap(v), bit = BitElem{b};
                    expect(rel(m_, c, x, bit) == rel(n_, j_(c), j_(x), j_(bit)), [&] {
                        return std::string(name) + "(" + show(c) + ", " + show(x) + ", " + show(bit) +
                               ") is not preserved";
                    });
                }
            });
    }

    void pi()
    {
        projection(
            nf_, [](std::size_t i) -> Element { return FaceElem{static_cast<FaceId>(i)}; }, u_.zero_offset(), nf_,
            [](const Gf2Vec& v) -> Element { return GaElem{v}; },
            [](const TwistedModel& m, const Element& a, const Element& b, const Element& c) { return m.pi(a, b, c); },
            "pi");
    }

    void rho()
    {
        projection(
            levels_, [](std::size_t i) -> Element { return LevelElem{static_cast<Level>(i)}; }, u_.zero_levels(),
            cutoff_, [](const Gf2Vec& v) -> Element { return HaElem{v}; },
            [](const TwistedModel& m, const Element& a, const Element& b, const Element& c) { return m.rho(a, b, c); },
            "rho");
    }

    void plus()
    {
        auto triple = [&](const Element& x, const Element& y, const Element& z) {
            point();
            expect(m_.plus(x, y, z) == n_.plus(j_(x), j_(y), j_(z)), [&] {
                return "+(" + show(x) + ", " + show(y) + ", " + show(z) + ") is not preserved";
            });
        };
        for (bool a : {false, true})
            for (bool b : {false, true})
                for (bool c : {false, true})
                    triple(BitElem{a}, BitElem{b}, BitElem{c});
        auto group = [&](const Gf2Vec& zero, std::size_t bits, auto wrap) {
            if (exhaustive(3 * bits)) {
                std::vector<Element> xs;
                for (std::uint64_t x = 0; x < pow2_sat(bits); ++x)
                    xs.push_back(wrap(with_low(zero, x, bits)));
                for (const auto& x : xs)
                    for (const auto& y : xs)
                        for (const auto& z : xs) {
                            if (!ok())
                                return;
                            triple(x, y, z);
                        }
                return;
            }
            sampled();
            for (std::uint64_t s = 0; s < opt_.samples && ok(); ++s) {
                const Gf2Vec x = random_low(zero, bits, rng_), y = random_low(zero, bits, rng_);
                const Gf2Vec z = rng_.coin() ? x + y : random_low(zero, bits, rng_);
                triple(wrap(x), wrap(y), wrap(z));
            }
        };
        group(u_.zero_offset(), nf_, [](const Gf2Vec& v) -> Element { return GaElem{v}; });
        group(u_.zero_levels(), cutoff_, [](const Gf2Vec& v) -> Element { return HaElem{v}; });
    }

    // Membership of x and j(x) in every torsor, then bijectivity of j on
    // the torsor `home`.
    void torsor(std::size_t bits, const Gf2Vec& base, auto make, auto member_in, const std::string& home)
    {
        std::set<Element> images;
        bool all = exhaustive(bits);
        for_each_low(base, bits, [&](const Gf2Vec& v) {
            point();
            const Element x = make(v);
            const Element jx = j_(x);
            if (!member_in(x, jx))
                return;
            if (all) {
                expect(images.insert(jx).second,
                       [&] { return "j is not injective on " + home + ": it sends " + show(x) + " to a repeated image"; });
            } else {
                // The inverse computed from the solutions must undo j.
                const Element back = j_.inverse(jx);
                expect(back == x, [&] { return "j^-1(j(" + show(x) + ")) is " + show(back); });
                const Element y = make(random_low(base, bits, rng_));
                expect(j_(j_.inverse(y)) == y, [&] { return show_t(y) + " in " + home + " has no preimage"; });
            }
        });
        if (all && ok())
            expect(images.size() == pow2_sat(bits), [&] { return "j does not map onto " + home; });
    }

    void g_torsor()
    {
        for (Level l = 0; l < levels_ && ok(); ++l)
            for (FaceId f = 0; f < nf_ && ok(); ++f) {
                const std::string home = "G^b(" + std::to_string(l) + ", {" + u_.face(f).to_string() + "})";
                torsor(
                    nf_, u_.zero_offset(), [&](const Gf2Vec& v) -> Element { return GElem{l, f, v}; },
                    [&](const Element& x, const Element& jx) {
                        for (Level l2 = 0; l2 < levels_; ++l2)
                            for (FaceId f2 = 0; f2 < nf_; ++f2) {
                                const Element lv = LevelElem{l2}, fe = FaceElem{f2};
                                if (!expect(m_.Gb(lv, fe, x) == n_.Gb(j_(lv), j_(fe), jx), [&] {
                                        return "G^b(" + std::to_string(l2) + ", " + show(fe) + ", -) disagrees on " +
                                               show(x) + " and its image " + show_t(jx);
                                    }))
                                    return false;
                            }
                        return true;
                    },
                    home);
            }
    }

    void h_torsor()
    {
        for (FaceId f = 0; f < nf_ && ok(); ++f) {
            const std::string home = "H^b({" + u_.face(f).to_string() + "})";
            torsor(
                cutoff_, m_.h_twist(f).rep(), [&](const Gf2Vec& v) -> Element { return HElem{f, v}; },
                [&](const Element& x, const Element& jx) {
                    for (FaceId f2 = 0; f2 < nf_; ++f2) {
                        const Element fe = FaceElem{f2};
                        if (!expect(m_.Hb(fe, x) == n_.Hb(j_(fe), jx), [&] {
                                return "H^b(" + show(fe) + ", -) disagrees on " + show(x) + " and its image " +
                                       show_t(jx);
                            }))
                            return false;
                    }
                    return true;
                },
                home);
        }
    }

    // rel(a, x, y) on one torsor, with a drawn from the acting group.
    template <class Wrap, class Make, class Rel>
    void action(std::size_t group_bits, const Gf2Vec& group_zero, Wrap wrap, std::size_t bits, const Gf2Vec& base,
                Make make, Rel rel, const char* name)
    {
        if (exhaustive(group_bits + 2 * bits)) {
            std::vector<Element> xs, jxs, as;
            for (std::uint64_t x = 0; x < pow2_sat(bits); ++x) {
                xs.push_back(make(with_low(base, x, bits)));
                jxs.push_back(j_(xs.back()));
            }
            for (std::uint64_t a = 0; a < pow2_sat(group_bits); ++a)
                as.push_back(wrap(with_low(group_zero, a, group_bits)));
            for (std::size_t a = 0; a < as.size() && ok(); ++a) {
                const Element ja = j_(as[a]);
                for (std::size_t x = 0; x < xs.size() && ok(); ++x)
                    for (std::size_t y = 0; y < xs.size() && ok(); ++y) {
                        point();
                        expect(rel(m_, as[a], xs[x], xs[y]) == rel(n_, ja, jxs[x], jxs[y]), [&] {
                            return std::string(name) + "(" + show(as[a]) + ", " + show(xs[x]) + ", " + show(xs[y]) +
                                   ") is not preserved";
                        });
                    }
            }
            return;
        }
        sampled();
        for (std::uint64_t s = 0; s < opt_.samples && ok(); ++s) {
            point();
            const Element a = wrap(random_low(group_zero, group_bits, rng_));
            const Element x = make(random_low(base, bits, rng_));
            // Half the samples use the true image so positive instances occur.
            Element y = make(random_low(base, bits, rng_));
            if (rng_.coin())
                y = act(a, x);
            expect(rel(m_, a, x, y) == rel(n_, j_(a), j_(x), j_(y)), [&] {
                return std::string(name) + "(" + show(a) + ", " + show(x) + ", " + show(y) + ") is not preserved";
            });
        }
    }

    Element act(const Element& a, const Element& x) const
    {
        if (const auto* g = std::get_if<GElem>(&x))
            return m_.g_act(std::get<GaElem>(a).vec, *g);
        return m_.h_act(std::get<HaElem>(a).vec, std::get<HElem>(x));
    }

    void g_action()
    {
        for (Level l = 0; l < levels_ && ok(); ++l)
            for (FaceId f = 0; f < nf_ && ok(); ++f) {
                const Element lv = LevelElem{l}, fe = FaceElem{f};
                const Element jl = j_(lv), jf = j_(fe);
                action(
                    nf_, u_.zero_offset(), [](const Gf2Vec& v) -> Element { return GaElem{v}; }, nf_,
                    u_.zero_offset(),
                    [&](const Gf2Vec& v) -> Element { return GElem{l, f, v}; },
                    [&](const TwistedModel& m, const Element& a, const Element& x, const Element& y) {
                        return &m == &m_ ? m.g_rel(lv, fe, a, x, y) : m.g_rel(jl, jf, a, x, y);
                    },
                    ("g at level " + std::to_string(l)).c_str());
            }
    }

    void h_action()
    {
        for (FaceId f = 0; f < nf_ && ok(); ++f) {
            const Element fe = FaceElem{f};
            const Element jf = j_(fe);
            action(
                cutoff_, u_.zero_levels(), [](const Gf2Vec& v) -> Element { return HaElem{v}; }, cutoff_,
                m_.h_twist(f).rep(),
                [&](const Gf2Vec& v) -> Element { return HElem{f, v}; },
                [&](const TwistedModel& m, const Element& a, const Element& x, const Element& y) {
                    return m.h_rel(&m == &m_ ? fe : jf, a, x, y);
                },
                "h");
        }
    }

    // Offsets of the arguments from the base points of a solution, read at
    // the h-face and the level.
    static bool parity_identity(const TwistedModel& m, const Solution& f, Level l, FaceId w,
                                std::span<const Element* const> args, unsigned k)
    {
        bool sum = false;
        for (unsigned i = 0; i < k; ++i) {
            const auto* x = std::get_if<GElem>(args[i]);
            const GElem* base = x ? f.g(l, x->face) : nullptr;
            if (!x || !base || !m.valid_g(*x))
                return false;
            sum ^= x->offset.test(w) != base->offset.test(w);
        }
        const auto* y = std::get_if<HElem>(args[k]);
        const HElem* base = y ? f.h(w) : nullptr;
        if (!y || !base || y->face != w || !m.valid_h(*y))
            return false;
        return sum == (y->vec.test(l) != base->vec.test(l));
    }

    void q()
    {
        std::vector<const Element*> args(k_ + 1), jargs(k_ + 1);
        auto check = [&](Level l, FaceId w) {
            point();
            const bool src = m_.Q(l, args);
            const bool tgt = n_.Q(l, jargs);
            if (!expect(src == tgt, [&] {
                    return "Q_" + std::to_string(l) + " " + (src ? "holds" : "fails") + " on " + show_args(args) +
                           " but " + (tgt ? "holds" : "fails") + " on the images";
                }))
                return;
            expect(src == parity_identity(m_, j_.source_solution(), l, w, args, k_) &&
                       tgt == parity_identity(n_, j_.target_solution(), l, w, jargs, k_),
                   [&] {
                       return "the offsets of " + show_args(args) + " from the base points do not match Q_" +
                              std::to_string(l);
                   });
        };

        const std::size_t bits = k_ * nf_ + cutoff_;
        std::vector<std::size_t> order(k_);
        for (Level l = 0; l < levels_ && ok(); ++l)
            for (CellId cell = 0; cell < u_.num_cells() && ok(); ++cell) {
                const auto& cf = u_.cell_faces(cell);
                for (std::size_t wi = 0; wi <= k_ && ok(); ++wi) {
                    const FaceId w = cf[wi];
                    std::vector<FaceId> g_faces;
                    for (std::size_t i = 0; i <= k_; ++i)
                        if (i != wi)
                            g_faces.push_back(cf[i]);
                    std::iota(order.begin(), order.end(), 0);
                    do {
                        if (exhaustive(bits)) {
                            // Elements and images per argument slot.
                            std::vector<std::vector<Element>> xs(k_ + 1), jxs(k_ + 1);
                            for (unsigned i = 0; i < k_; ++i)
                                for (std::uint64_t v = 0; v < pow2_sat(nf_); ++v) {
                                    xs[i].push_back(GElem{l, g_faces[order[i]], with_low(u_.zero_offset(), v, nf_)});
                                    jxs[i].push_back(j_(xs[i].back()));
                                }
                            for (std::uint64_t v = 0; v < pow2_sat(cutoff_); ++v) {
                                xs[k_].push_back(HElem{w, with_low(m_.h_twist(w).rep(), v, cutoff_)});
                                jxs[k_].push_back(j_(xs[k_].back()));
                            }
                            for (std::uint64_t idx = 0; idx < pow2_sat(bits) && ok(); ++idx) {
                                for (unsigned i = 0; i < k_; ++i) {
                                    const std::uint64_t v = (idx >> (i * nf_)) & (pow2_sat(nf_) - 1);
                                    args[i] = &xs[i][v];
                                    jargs[i] = &jxs[i][v];
                                }
                                args[k_] = &xs[k_][idx >> (k_ * nf_)];
                                jargs[k_] = &jxs[k_][idx >> (k_ * nf_)];
                                check(l, w);
                            }
                        } else {
                            sampled();
                            std::vector<Element> store(k_ + 1), jstore(k_ + 1);
                            for (std::uint64_t s = 0; s < opt_.samples && ok(); ++s) {
                                for (unsigned i = 0; i < k_; ++i)
                                    store[i] = GElem{l, g_faces[order[i]], random_low(u_.zero_offset(), nf_, rng_)};
                                store[k_] = HElem{w, random_low(m_.h_twist(w).rep(), cutoff_, rng_)};
                                // Fix the h-argument's level bit so half the samples satisfy Q_l.
                                if (rng_.coin() != m_.Q(l, pointers(store, args)))
                                    std::get<HElem>(store[k_]).vec.flip(l);
                                if (!m_.valid_h(std::get<HElem>(store[k_])))
                                    std::get<HElem>(store[k_]).vec.flip(l);
                                for (unsigned i = 0; i <= k_; ++i)
                                    jstore[i] = j_(store[i]);
                                pointers(store, args);
                                pointers(jstore, jargs);
                                check(l, w);
                            }
                        }
                    } while (ok() && std::next_permutation(order.begin(), order.end()));
                }
            }
    }

    static std::vector<const Element*>& pointers(const std::vector<Element>& store, std::vector<const Element*>& out)
    {
        for (std::size_t i = 0; i < store.size(); ++i)
            out[i] = &store[i];
        return out;
    }

    std::string show_args(std::span<const Element* const> args) const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < args.size(); ++i)
            s += (i ? ", " : "") + show(*args[i]);
        return s + ")";
    }

    const IsoMap& j_;
    const TwistedModel& m_;
    const TwistedModel& n_;
    const Universe& u_;
    IsoOptions opt_;
    Rng rng_;
    std::size_t nf_;
    unsigned k_;
    unsigned levels_;
    unsigned cutoff_;
    IsoReport report_;
    IsoCheck cur_;
};

}  // namespace

IsoReport verify_iso(const IsoMap& iso, const IsoOptions& options)
{
    return Verifier(iso, options).run();
}

}  // namespace ptor
