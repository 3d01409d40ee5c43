#include "ptor/extension.hpp"
#include "ptor/sampling.hpp"

#include <doctest.h>

using namespace ptor;

namespace {

std::vector<HElem> random_anchor(const TwistedModel& m, Rng& rng)
{
    std::vector<HElem> out;
    for (FaceId f = 0; f < m.universe().num_faces(); ++f)
        out.push_back(random_h(m, f, rng));
    return out;
}

bool eval_q(const TwistedModel& m, Level l, CellId c, FaceId w, const std::vector<GElem>& gs,
            const HElem& h)
{
    std::vector<const GElem*> p;
    for (const auto& x : gs)
        p.push_back(&x);
    return m.q_holds(l, c, w, p, h);
}

}  // namespace

TEST_CASE("extending by no atoms gives the same model")
{
    Rng rng(1);
    const TwistedModel m = random_canonical_model(Universe::range(4, 2, 3, 1), rng);
    const auto [n, e] = extend_model(m, {}, random_anchor(m, rng));
    CHECK(n == m);
    for (FaceId f = 0; f < m.universe().num_faces(); ++f)
        CHECK(e.map_face(f) == f);
}

TEST_CASE("standard model plus one atom with zero anchors is the larger standard model")
{
    const TwistedModel m = standard_model(Universe::range(3, 2, 4, 2));
    const auto [n, e] = extend_model(m, {3}, base_anchor(m));
    CHECK(n == standard_model(Universe::range(4, 2, 4, 2)));
}

TEST_CASE("old cells keep their parity relation under offset restriction")
{
    Rng rng(2);
    for (int seed = 0; seed < 20; ++seed) {
        const TwistedModel m = random_canonical_model(Universe::range(3, 2, 3, 1), rng);
        const auto [n, e] = extend_model(m, {3}, random_anchor(m, rng));
        const Universe& su = m.universe();
        const Universe& tu = n.universe();
        for (CellId c = 0; c < su.num_cells(); ++c)
            for (FaceId w : su.cell_faces(c))
                for (Level l = 0; l < su.levels(); ++l) {
                    std::vector<GElem> src, tgt;
                    for (FaceId u : su.cell_faces(c)) {
                        if (u == w)
                            continue;
                        GElem y = random_g(n, l, e.map_face(u), rng);
                        tgt.push_back(y);
                        src.push_back(GElem{l, u, e.restrict_offset(y.offset)});
                    }
                    const HElem h = random_h(m, w, rng);
                    CHECK(eval_q(m, l, c, w, src, h) ==
                          eval_q(n, l, e.map_cell(c), e.map_face(w), tgt, e.embed(h)));
                }
        CHECK(tu.num_atoms() == 4);
    }
}

TEST_CASE("cells meeting a new atom use the anchor on their old face")
{
    Rng rng(3);
    const TwistedModel m = random_canonical_model(Universe::range(3, 2, 4, 2), rng);
    const auto anchor = random_anchor(m, rng);
    const auto [n, e] = extend_model(m, {3}, anchor);
    const Universe& tu = n.universe();
    for (CellId c = 0; c < tu.num_cells(); ++c) {
        if (tu.cell(c).members.back() != 3)
            continue;
        for (FaceId w : tu.cell_faces(c)) {
            const bool old_face = tu.face(w).members.back() != 3;
            for (Level l = 0; l < 4; ++l) {
                std::vector<GElem> gs;
                int sum = 0;
                for (FaceId u : tu.cell_faces(c))
                    if (u != w) {
                        gs.push_back(random_g(n, l, u, rng));
                        sum ^= gs.back().offset.test(w);
                    }
                const HElem h = random_h(n, w, rng);
                // The difference c between the argument and the anchor.
                const bool expected_rhs =
                    old_face ? (h.vec + e.embed(anchor[m.universe().require_face(tu.face(w))]).vec).test(l)
                             : h.vec.test(l);
                CHECK(eval_q(n, l, c, w, gs, h) == (static_cast<bool>(sum) == expected_rhs));
            }
        }
    }
}

TEST_CASE("new faces get the cutoff subgroup and old faces keep their coset")
{
    Rng rng(4);
    const TwistedModel m = random_canonical_model(Universe::range(4, 3, 4, 1), rng);
    const auto [n, e] = extend_model(m, {10, 11}, random_anchor(m, rng));
    const Universe& tu = n.universe();
    for (FaceId f = 0; f < tu.num_faces(); ++f) {
        const bool old = tu.face(f).members.back() < 10;
        if (old)
            CHECK(n.h_twist(f) == m.h_twist(m.universe().require_face(tu.face(f))));
        else
            CHECK(n.h_twist(f).is_zero());
    }
}

TEST_CASE("extending twice matches extending once when the anchors agree")
{
    Rng rng(5);
    for (int seed = 0; seed < 20; ++seed) {
        const TwistedModel m = random_canonical_model(Universe::range(3, 2, 3, 1), rng);
        const auto anchor = random_anchor(m, rng);
        const auto [n1, e1] = extend_model(m, {3}, anchor);
        // Second anchor: the original anchor on old faces, base points on N1's new faces.
        std::vector<HElem> anchor2;
        for (FaceId f = 0; f < n1.universe().num_faces(); ++f) {
            const auto old = m.universe().face_id(n1.universe().face(f));
            anchor2.push_back(old ? e1.embed(anchor[*old]) : n1.base_h(f));
        }
        const auto [n2, e2] = extend_model(n1, {4}, anchor2);
        const auto [direct, ed] = extend_model(m, {3, 4}, anchor);
        CHECK(n2 == direct);
    }
}

TEST_CASE("extend_model input validation")
{
    const TwistedModel m = standard_model(Universe::range(3, 2, 2, 1));
    auto anchor = base_anchor(m);
    CHECK_THROWS_AS(extend_model(m, {2}, anchor), std::invalid_argument);
    auto short_anchor = anchor;
    short_anchor.pop_back();
    CHECK_THROWS_AS(extend_model(m, {3}, short_anchor), std::invalid_argument);
    auto off_coset = anchor;
    off_coset[0].vec.flip(1);
    CHECK_THROWS_AS(extend_model(m, {3}, off_coset), std::invalid_argument);

    std::map<Face, HElem> by_face;
    for (FaceId f = 0; f < 3; ++f)
        by_face.emplace(m.universe().face(f), anchor[f]);
    CHECK_NOTHROW(extend_model(m, {3}, by_face));
    by_face.erase(by_face.begin());
    CHECK_THROWS_AS(extend_model(m, {3}, by_face), std::invalid_argument);
}

TEST_CASE("embedding validation and offset transport")
{
    Rng rng(6);
    const TwistedModel m = random_canonical_model(Universe::range(3, 2, 3, 1), rng);
    const auto [n, e] = extend_model(m, {3, 4}, random_anchor(m, rng));
    for (int trial = 0; trial < 20; ++trial) {
        Gf2Vec v = m.universe().zero_offset();
        rng.fill(v);
        CHECK(e.restrict_offset(e.embed_offset(v)) == v);
        CHECK(e.embed_offset(v).count() == v.count());
    }
    CHECK_THROWS_AS(e.embed_offset(n.universe().zero_offset()), std::invalid_argument);

    // A target disagreeing on an old face's coset is not an extension.
    std::vector<CutoffCoset> g = n.h_twists();
    g[0] = CutoffCoset(g[0].rep() + Gf2Vec::from_string("001", n.universe().level_family()), 1);
    const TwistedModel other(n.universe(), g, n.q_twist());
    CHECK_THROWS_AS(Embedding::inclusion(m, other), std::invalid_argument);
    CHECK_THROWS_AS(Embedding(m, n, {{0, 0}, {1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(Embedding(m, n, {{0, 0}, {1, 0}, {2, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(Embedding::inclusion(m, standard_model(Universe::range(5, 2, 2, 1))),
                    std::invalid_argument);
}
