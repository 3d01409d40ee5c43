#include "ptor/model.hpp"
#include "ptor/sampling.hpp"

#include <doctest.h>

#include <algorithm>

using namespace ptor;

namespace {

GElem g_with_bit(const TwistedModel& m, Level l, const Face& u, const Face& bit_at)
{
    const Universe& U = m.universe();
    GElem x = m.zero_g(l, U.require_face(u));
    x.offset.set(U.require_face(bit_at));
    return x;
}

}  // namespace

TEST_CASE("standard model has zero twists")
{
    const TwistedModel m = standard_model(Universe({1, 2, 3}, 2, 4, 2));
    CHECK(m.universe().num_faces() == 3);
    for (FaceId f = 0; f < 3; ++f)
        CHECK(m.h_twist(f).is_zero());
    CHECK(m.q_twist().empty());
}

TEST_CASE("q_holds reads the parity of the h-face coordinates")
{
    const Universe U({1, 2, 3}, 2, 4, 2);
    const TwistedModel m = standard_model(U);
    const Cell v = Cell::of({1, 2, 3});
    const Face h_face = Face::of({2, 3});
    const FaceId hf = U.require_face(h_face);

    std::map<Face, GElem> args;
    args.emplace(Face::of({1, 2}), g_with_bit(m, 0, Face::of({1, 2}), h_face));
    args.emplace(Face::of({1, 3}), m.zero_g(0, U.require_face(Face::of({1, 3}))));
    HElem z = m.base_h(hf);
    z.vec.set(0);
    CHECK(q_holds(m, 0, v, h_face, args, z));

    // All-zero offsets against z(l) = 1.
    args.at(Face::of({1, 2})) = m.zero_g(0, U.require_face(Face::of({1, 2})));
    CHECK_FALSE(q_holds(m, 0, v, h_face, args, z));

    // Flipping a single g-offset bit at the h-face flips the verdict.
    args.at(Face::of({1, 3})).offset.flip(hf);
    CHECK(q_holds(m, 0, v, h_face, args, z));
    // A bit elsewhere does not.
    args.at(Face::of({1, 3})).offset.flip(U.require_face(Face::of({1, 2})));
    CHECK(q_holds(m, 0, v, h_face, args, z));
}

TEST_CASE("q_holds on all-zero arguments in the standard model")
{
    const Universe U = Universe::range(4, 3, 3, 1);
    const TwistedModel m = standard_model(U);
    for (CellId c = 0; c < U.num_cells(); ++c)
        for (FaceId w : U.cell_faces(c))
            for (Level l = 0; l < U.levels(); ++l) {
                std::map<Face, GElem> args;
                for (FaceId u : U.cell_faces(c))
                    if (u != w)
                        args.emplace(U.face(u), m.zero_g(l, u));
                CHECK(q_holds(m, l, U.cell(c), U.face(w), args, m.base_h(w)));
            }
}

TEST_CASE("q_holds rejects mismatched arguments")
{
    const Universe U({1, 2, 3, 4}, 2, 2, 1);
    const TwistedModel m = standard_model(U);
    const Cell v = Cell::of({1, 2, 3});
    const Face hf = Face::of({2, 3});
    std::map<Face, GElem> args;
    args.emplace(Face::of({1, 2}), m.zero_g(0, U.require_face(Face::of({1, 2}))));
    args.emplace(Face::of({1, 3}), m.zero_g(0, U.require_face(Face::of({1, 3}))));
    const HElem h = m.base_h(U.require_face(hf));
    CHECK_NOTHROW(q_holds(m, 0, v, hf, args, h));
    CHECK_THROWS_AS(q_holds(m, 5, v, hf, args, h), std::invalid_argument);
    CHECK_THROWS_AS(q_holds(m, 0, v, Face::of({1, 4}), args, h), std::invalid_argument);
    CHECK_THROWS_AS(q_holds(m, 0, v, hf, args, m.base_h(U.require_face(Face::of({1, 2})))),
                    std::invalid_argument);
    auto wrong_level = args;
    wrong_level.at(Face::of({1, 2})).level = 1;
    CHECK_THROWS_AS(q_holds(m, 0, v, hf, wrong_level, h), std::invalid_argument);
    auto missing = args;
    missing.erase(Face::of({1, 3}));
    CHECK_THROWS_AS(q_holds(m, 0, v, hf, missing, h), std::invalid_argument);
    auto extra = args;
    extra.emplace(Face::of({2, 3}), m.zero_g(0, U.require_face(Face::of({2, 3}))));
    CHECK_THROWS_AS(q_holds(m, 0, v, hf, extra, h), std::invalid_argument);
}

TEST_CASE("canonical model")
{
    const Universe U = Universe::range(4, 2, 4, 2);
    std::map<Face, CutoffCoset> zero;
    for (const Face& f : U.faces())
        zero.emplace(f, U.zero_coset());
    CHECK(canonical_model(U, zero) == standard_model(U));

    auto partial = zero;
    partial.erase(partial.begin());
    CHECK_THROWS_AS(canonical_model(U, partial), std::invalid_argument);

    Rng rng(5);
    const TwistedModel m = random_canonical_model(U, rng);
    for (FaceId f = 0; f < U.num_faces(); ++f)
        for (unsigned bits = 0; bits < 16; ++bits) {
            Gf2Vec v = U.zero_levels();
            v.set_word(0, bits);
            CHECK(m.valid_h(HElem{f, v}) == (coset_of(v, U.cutoff()) == m.h_twist(f)));
        }
}

TEST_CASE("twist table validation")
{
    const Universe U = Universe::range(4, 2, 3, 1);
    std::vector<CutoffCoset> zero(U.num_faces(), U.zero_coset());
    const CellId c = *U.cell_id(Cell::of({0, 1, 2}));
    const FaceId inside = U.require_face(Face::of({1, 2}));
    const FaceId outside = U.require_face(Face::of({0, 3}));
    const Gf2Vec t = Gf2Vec::from_string("011", U.level_family());

    CHECK_NOTHROW(TwistedModel(U, zero, {{{c, inside}, t}}));
    CHECK_THROWS_AS(TwistedModel(U, zero, {{{c, outside}, t}}), std::invalid_argument);
    CHECK_THROWS_AS(TwistedModel(U, zero, {{{c, inside}, Gf2Vec::from_string("01")}}),
                    std::invalid_argument);
    const TwistedModel bad = TwistedModel::unchecked(U, zero, {{{c, outside}, t}});
    CHECK(bad.twist(c, outside) == t);

    // Zero entries are dropped so equal models compare equal.
    const TwistedModel with_zero(U, zero, {{{c, inside}, U.zero_levels()}});
    CHECK(with_zero == standard_model(U));
    CHECK_THROWS_AS(TwistedModel(U, std::vector<CutoffCoset>(2, U.zero_coset())), std::invalid_argument);
}

TEST_CASE("twist lookups survive copies")
{
    const Universe U = Universe::range(4, 2, 3, 1);
    const CellId c = *U.cell_id(Cell::of({0, 1, 2}));
    const FaceId w = U.require_face(Face::of({0, 2}));
    const Gf2Vec t = Gf2Vec::from_string("101", U.level_family());
    std::vector<TwistedModel> models;
    {
        TwistedModel m(U, std::vector<CutoffCoset>(U.num_faces(), U.zero_coset()), {{{c, w}, t}});
        models.push_back(m);
        models.push_back(std::move(m));
    }
    for (const auto& m : models) {
        CHECK(m.twist(c, w) == t);
        CHECK(m.twist_bit(c, w, 2));
        CHECK(m.twist(c, U.require_face(Face::of({0, 1}))).none());
    }
}

TEST_CASE("element predicates")
{
    const Universe U({0, 1, 2, 3}, 2, 3, 1);
    Rng rng(2);
    const TwistedModel m = random_canonical_model(U, rng);
    const FaceId u01 = U.require_face(Face::of({0, 1}));

    CHECK(m.member(AtomElem{0}, FaceElem{u01}));
    CHECK_FALSE(m.member(AtomElem{2}, FaceElem{u01}));
    CHECK_FALSE(m.member(AtomElem{7}, FaceElem{u01}));
    CHECK_FALSE(m.member(FaceElem{u01}, AtomElem{0}));

    CHECK(m.is_I(AtomElem{3}));
    CHECK_FALSE(m.is_I(AtomElem{4}));
    CHECK(m.is_K(FaceElem{5}));
    CHECK_FALSE(m.is_K(FaceElem{6}));
    CHECK(m.is_R(LevelElem{2}));
    CHECK_FALSE(m.is_R(LevelElem{3}));
    CHECK(m.is_P(BitElem{true}));
    CHECK(m.is_P(m.zero_ga()));
    CHECK_FALSE(m.is_P(m.zero_g(0, u01)));
    CHECK_FALSE(m.is_P(m.base_h(u01)));

    // H^a is the cutoff subgroup.
    HaElem inside{Gf2Vec::from_string("100", U.level_family())};
    HaElem outside{Gf2Vec::from_string("010", U.level_family())};
    CHECK(m.is_Ha(inside));
    CHECK_FALSE(m.is_Ha(outside));

    GaElem a = m.zero_ga();
    a.vec.set(u01);
    CHECK(m.pi(FaceElem{u01}, a, BitElem{true}));
    CHECK_FALSE(m.pi(FaceElem{u01}, a, BitElem{false}));
    CHECK(m.pi(FaceElem{u01 + 1}, a, BitElem{false}));
    CHECK(m.rho(LevelElem{0}, inside, BitElem{true}));
    CHECK(m.rho(LevelElem{1}, inside, BitElem{false}));
    CHECK_FALSE(m.rho(LevelElem{1}, outside, BitElem{true}));

    CHECK(m.plus(BitElem{true}, BitElem{true}, BitElem{false}));
    CHECK_FALSE(m.plus(BitElem{true}, BitElem{false}, BitElem{false}));
    CHECK(m.plus(a, a, m.zero_ga()));
    CHECK(m.plus(inside, m.zero_ha(), inside));
    CHECK_FALSE(m.plus(a, inside, a));

    const GElem x = random_g(m, 1, u01, rng);
    const GElem y = m.g_act(a.vec, x);
    CHECK(m.Gb(LevelElem{1}, FaceElem{u01}, x));
    CHECK_FALSE(m.Gb(LevelElem{0}, FaceElem{u01}, x));
    CHECK(m.g_rel(LevelElem{1}, FaceElem{u01}, a, x, y));
    CHECK(m.g_rel(LevelElem{1}, FaceElem{u01}, a, y, x));
    CHECK_FALSE(m.g_rel(LevelElem{1}, FaceElem{u01}, m.zero_ga(), x, y));
    CHECK(m.g_diff(x, y) == a.vec);

    const HElem hx = random_h(m, u01, rng);
    const HElem hy = m.h_act(inside.vec, hx);
    CHECK(m.Hb(FaceElem{u01}, hx));
    CHECK(m.Hb(FaceElem{u01}, hy));
    CHECK(m.h_rel(FaceElem{u01}, inside, hx, hy));
    CHECK_FALSE(m.h_rel(FaceElem{u01}, outside, hx, m.h_act(outside.vec, hx)));
    HElem off_coset = hx;
    off_coset.vec.flip(2);
    CHECK_FALSE(m.Hb(FaceElem{u01}, off_coset));
}

TEST_CASE("Q on raw elements is invariant under permuting the g-arguments")
{
    const Universe U = Universe::range(5, 3, 3, 1);
    Rng rng(9);
    const TwistedModel m = random_canonical_model(U, rng);
    for (int trial = 0; trial < 200; ++trial) {
        const CellId c = static_cast<CellId>(rng.uniform_below(U.num_cells()));
        const auto& fs = U.cell_faces(c);
        const FaceId w = fs[rng.uniform_below(fs.size())];
        const Level l = static_cast<Level>(rng.uniform_below(U.levels()));
        std::vector<Element> gs;
        for (FaceId u : fs)
            if (u != w)
                gs.push_back(random_g(m, l, u, rng));
        const Element h = random_h(m, w, rng);
        std::vector<std::size_t> perm{0, 1, 2};
        std::vector<const Element*> first{&gs[0], &gs[1], &gs[2], &h};
        const bool verdict = m.Q(l, first);
        do {
            std::vector<const Element*> args{&gs[perm[0]], &gs[perm[1]], &gs[perm[2]], &h};
            CHECK(m.Q(l, args) == verdict);
        } while (std::next_permutation(perm.begin(), perm.end()));
        // Wrong level, wrong arity and a repeated face are all false.
        std::vector<const Element*> repeated{&gs[0], &gs[0], &gs[2], &h};
        CHECK_FALSE(m.Q(l, repeated));
        std::vector<const Element*> short_args{&gs[0], &gs[1], &h};
        CHECK_FALSE(m.Q(l, short_args));
        CHECK_FALSE(m.Q((l + 1) % U.levels(), first));
    }
}

TEST_CASE("replacing one argument changes Q by the relevant projection")
{
    const Universe U = Universe::range(5, 2, 4, 2);
    Rng rng(13);
    const TwistedModel m = random_canonical_model(U, rng);
    for (int trial = 0; trial < 300; ++trial) {
        const CellId c = static_cast<CellId>(rng.uniform_below(U.num_cells()));
        const auto& fs = U.cell_faces(c);
        const FaceId w = fs[rng.uniform_below(fs.size())];
        const Level l = static_cast<Level>(rng.uniform_below(U.levels()));
        std::vector<GElem> gs;
        for (FaceId u : fs)
            if (u != w)
                gs.push_back(random_g(m, l, u, rng));
        const HElem h = random_h(m, w, rng);
        auto eval = [&](const std::vector<GElem>& g, const HElem& hh) {
            std::vector<const GElem*> p;
            for (const auto& x : g)
                p.push_back(&x);
            return m.q_holds(l, c, w, p, hh);
        };
        const bool before = eval(gs, h);

        auto swapped = gs;
        swapped[0] = random_g(m, l, gs[0].face, rng);
        const bool diff_bit = m.g_diff(gs[0], swapped[0]).test(w);
        CHECK((eval(swapped, h) == before) == !diff_bit);

        const HElem h2 = random_h(m, w, rng);
        CHECK((eval(gs, h2) == before) == !m.h_diff(h, h2).test(l));
    }
}

TEST_CASE("describe names elements")
{
    const Universe U = Universe::range(3, 2, 2, 1);
    const TwistedModel m = standard_model(U);
    CHECK(m.describe(AtomElem{2}) == "atom 2");
    CHECK(m.describe(FaceElem{0}) == "face {0,1}");
    CHECK(m.describe(m.zero_g(1, 2)) == "G(1,{1,2},000)");
    CHECK(m.describe(m.base_h(0)) == "H({0,1},00)");
    CHECK(std::string(sort_name(sort_of(m.zero_ga()))) == "Ga");
}
