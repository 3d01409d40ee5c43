#include "ptor/isomap.hpp"
#include "ptor/sampling.hpp"

#include <doctest.h>

using namespace ptor;

namespace {

AtomMask all_atoms(const Universe& u)
{
    return (AtomMask{1} << u.num_atoms()) - 1;
}

Solution random_solution(const TwistedModel& m, Rng& rng)
{
    return greedy_extend(m, Solution{}, 0, all_atoms(m.universe()), &rng);
}

void require_pass(const IsoReport& r)
{
    for (const auto& c : r.checks) {
        INFO(c.predicate << ": " << c.witness);
        CHECK(c.ok);
    }
    CHECK(r.ok());
}

}  // namespace

TEST_CASE("identify requires the same universe")
{
    const TwistedModel a = standard_model(Universe::range(4, 2, 3, 1));
    const TwistedModel b = standard_model(Universe::range(4, 2, 2, 1));
    CHECK_THROWS_AS(identify(a, b), PreconditionError);
    CHECK_NOTHROW(identify(a, a));
}

TEST_CASE("one solution on both sides gives the identity")
{
    Rng rng(1);
    const TwistedModel m = random_canonical_model(Universe::range(4, 2, 3, 1), rng);
    const Solution f = random_solution(m, rng);
    const IsoMap j = build_iso(identify(m, m), f, f);
    for (int s = 0; s < 50; ++s) {
        const auto u = static_cast<FaceId>(rng.uniform_below(m.universe().num_faces()));
        const Element x = GElem{static_cast<Level>(s % 3), u, random_ga(m.universe(), rng)};
        CHECK(j(x) == x);
        const Element y = random_h(m, u, rng);
        CHECK(j(y) == y);
    }
    const IsoReport r = verify_iso(j);
    require_pass(r);
    CHECK(r.exhaustive());
}

TEST_CASE("shifting one base point translates that torsor only")
{
    Rng rng(2);
    const TwistedModel m = random_canonical_model(Universe::range(4, 2, 3, 1), rng);
    const Universe& U = m.universe();
    const Solution f = random_solution(m, rng);
    // Q_l never reads a g-argument at its own face, so flipping that bit of
    // one base point keeps the solution valid.
    const FaceId u = 2;
    Solution shifted = f;
    shifted.g_part.at({1, u}).offset.flip(u);
    REQUIRE(is_solution(m, shifted).ok);

    const IsoMap j = build_iso(identify(m, m), f, shifted);
    Gf2Vec d = U.zero_offset();
    d.set(u);
    for (int s = 0; s < 30; ++s) {
        const Gf2Vec a = random_ga(U, rng);
        CHECK(j(GElem{1, u, a}) == Element{GElem{1, u, a + d}});
        CHECK(j(GElem{0, u, a}) == Element{GElem{0, u, a}});
        CHECK(j(GElem{1, 0, a}) == Element{GElem{1, 0, a}});
    }
    require_pass(verify_iso(j));
}

TEST_CASE("independent solutions of the same canonical model")
{
    Rng rng(3);
    for (int trial = 0; trial < 3; ++trial) {
        const TwistedModel m = random_canonical_model(Universe::range(4, 2, 3, 1), rng);
        const Solution a = random_solution(m, rng);
        const Solution b = *full_solve(m, SolveMethod::linear);
        const IsoReport r = verify_iso(build_iso(identify(m, m), a, b));
        require_pass(r);
        CHECK(r.exhaustive());
    }
}

TEST_CASE("canonical models with different g over the same P-part")
{
    Rng rng(4);
    const Universe U = Universe::range(4, 2, 2, 1);
    const TwistedModel m = random_canonical_model(U, rng);
    const TwistedModel n = random_canonical_model(U, rng);
    REQUIRE_FALSE(m == n);
    const IsoMap j = build_iso(identify(m, n), random_solution(m, rng), random_solution(n, rng));
    const Element y = random_h(m, 0, rng);
    CHECK(n.valid(j(y)));
    require_pass(verify_iso(j));
}

TEST_CASE("sweep over the smallest models")
{
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const TwistedModel m = random_canonical_model(Universe::range(3, 2, 2, 1), rng);
        const TwistedModel n = random_canonical_model(m.universe(), rng);
        const IsoReport r = verify_iso(build_iso(identify(m, n), random_solution(m, rng), random_solution(n, rng)));
        CHECK(r.ok());
        CHECK(r.exhaustive());
    }
}

TEST_CASE("larger models are verified by sampling")
{
    Rng rng(6);
    const TwistedModel m = random_canonical_model(Universe::range(5, 3, 3, 1), rng);
    const IsoReport r =
        verify_iso(build_iso(identify(m, m), random_solution(m, rng), random_solution(m, rng)), {.samples = 300});
    require_pass(r);
    CHECK_FALSE(r.exhaustive());
}

TEST_CASE("build_iso rejects partial or invalid solutions")
{
    const TwistedModel m = standard_model(Universe::range(4, 2, 2, 1));
    Rng rng(7);
    const Solution f = random_solution(m, rng);
    Solution partial = f;
    partial.h_part.erase(partial.h_part.begin());
    CHECK_THROWS_AS(build_iso(identify(m, m), f, partial), PreconditionError);

    Solution broken = f;
    broken.g_part.at({0, 0}).offset.flip(1);
    CHECK_THROWS_AS(build_iso(identify(m, m), broken, f), PreconditionError);
}

TEST_CASE("fault injection names the broken predicate")
{
    Rng rng(8);
    const TwistedModel m = random_canonical_model(Universe::range(4, 2, 2, 1), rng);
    const Universe& U = m.universe();
    const Solution f = random_solution(m, rng);

    SUBCASE("swapping two images inside one torsor breaks the action")
    {
        IsoMap j = build_iso(identify(m, m), f, f);
        Gf2Vec a = U.zero_offset();
        Gf2Vec b = a;
        b.set(0);
        const Element x1 = GElem{0, 1, a};
        const Element x2 = GElem{0, 1, b};
        j.set_image(x1, x2);
        j.set_image(x2, x1);
        const IsoReport r = verify_iso(j);
        const IsoCheck* c = r.first_failure();
        REQUIRE(c != nullptr);
        CHECK(c->predicate == "g");
        CHECK(c->witness.find("not preserved") != std::string::npos);
    }
    SUBCASE("moving one image across a parity bit breaks Q")
    {
        IsoMap j = build_iso(identify(m, m), f, f);
        // Translating G^b(1, u) by e_0 commutes with the action, but flips
        // every Q_1 instance with h-face 0 that has a g-argument at u.
        const FaceId u = 1;
        Gf2Vec b = U.zero_offset();
        b.set(0);
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << U.num_faces()); ++v) {
            Gf2Vec w = U.zero_offset();
            w.set_word(0, v);
            j.set_image(GElem{1, u, w}, GElem{1, u, w + b});
        }
        const IsoReport r = verify_iso(j);
        const IsoCheck* fail = r.first_failure();
        REQUIRE(fail != nullptr);
        CHECK(fail->predicate == "Q");
        CHECK(fail->witness.find("Q_1") != std::string::npos);
    }
    SUBCASE("moving a P element breaks the identity on P")
    {
        IsoMap j = build_iso(identify(m, m), f, f);
        j.set_image(AtomElem{0}, AtomElem{1});
        const IsoReport r = verify_iso(j);
        REQUIRE(r.first_failure() != nullptr);
        CHECK(r.first_failure()->predicate == "P-identity");
    }
    SUBCASE("an H image outside its torsor")
    {
        IsoMap j = build_iso(identify(m, m), f, f);
        const HElem y = m.base_h(3);
        HElem bad = y;
        bad.face = 4;
        j.set_image(y, bad);
        const IsoReport r = verify_iso(j);
        REQUIRE(r.first_failure() != nullptr);
        CHECK(r.first_failure()->predicate == "H^b");
    }
}
