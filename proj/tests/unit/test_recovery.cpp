#include "ptor/axioms.hpp"
#include "ptor/model_io.hpp"
#include "ptor/recovery.hpp"

#include <doctest.h>

using namespace ptor;

namespace {

const char* const small_codes = "# two codes, k = 2\n"
                                "levels 3\n"
                                "cutoff 1\n"
                                "code x 001 011 010\n"
                                "code y 000 001 011\n";

CodeTree leaf(std::string_view bits)
{
    return CodeTree{Gf2Vec::from_string(bits), {}};
}

}  // namespace

TEST_CASE("codes files round-trip")
{
    const CodeSet c = parse_codes(small_codes);
    CHECK(c.levels == 3);
    CHECK(c.cutoff == 1);
    REQUIRE(c.codes.size() == 2);
    CHECK(c.codes[1].columns[2] == leaf("011"));
    const std::string printed = print_codes(c);
    CHECK(printed == "levels 3\ncutoff 1\ncode x 001 011 010\ncode y 000 001 011\n");
    CHECK(parse_codes(printed) == c);

    const CodeSet nested = parse_codes("levels 2\ncutoff 1\ncode a [10 01 11][00 00 01]\n");
    REQUIRE(nested.codes[0].columns.size() == 2);
    CHECK(nested.codes[0].columns[0].depth() == 1);
    CHECK(print_codes(nested) == "levels 2\ncutoff 1\ncode a [10 01 11] [00 00 01]\n");
    CHECK(parse_codes(print_codes(nested)) == nested);
}

TEST_CASE("codes parser errors carry line numbers")
{
    auto line_of = [](std::string_view text) {
        try {
            parse_codes(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("levels 3\ncode x 001\n") == 2);
    CHECK(line_of("levels 3\ncutoff 1\ncode x 01\n") == 3);
    CHECK(line_of("levels 3\ncutoff 1\ncode x [001\n") == 3);
    CHECK(line_of("levels 3\ncutoff 1\ncode x []\n") == 3);
    CHECK(line_of("levels 3\ncutoff 1\ncode x 001\ncode x 010\n") == 4);
    CHECK(line_of("levels 3\ncutoff 1\ncode x 001 [001]\n") == 3);
    CHECK(line_of("levels 3\ncutoff 1\nsize 4\n") == 3);
    CHECK(line_of("levels 3\nlevels 3\n") == 2);
    CHECK(line_of("levels 3\ncutoff 1\ncode x: 001\n") == 3);
    CHECK(line_of("levels 3\n") == 1);
    CHECK(line_of("levels 3\ncutoff 0\ncode x 001\n") == 3);
}

TEST_CASE("build_MA writes each code column onto its faces")
{
    CodeSet one = parse_codes("levels 3\ncutoff 1\ncode a 011 110 101\n");
    const MAInstance inst = build_MA(2, Thresholds({4}), 3, one);
    const Universe& U = inst.model.universe();
    CHECK(U.num_atoms() == 4 + 9 + 1);
    CHECK(U.labels().at(inst.code_atoms[0]) == "a");
    CHECK(U.labels().at(inst.pair_atom(1, 2)) == "p1_2");
    const AtomId a = 13;
    for (std::size_t alpha = 0; alpha < 3; ++alpha)
        for (std::size_t beta = 0; beta < 3; ++beta) {
            const FaceId face = U.require_face(Face::of({a, static_cast<AtomId>(4 + 3 * alpha + beta)}));
            Gf2Vec want = U.zero_levels();
            for (std::size_t l = 1; l < 3; ++l)
                if (one.codes[0].columns[alpha].bits.test(l))
                    want.set(l);
            CHECK(inst.model.h_twist(face).rep() == want);
        }
    std::size_t nonzero = 0;
    for (FaceId f = 0; f < U.num_faces(); ++f)
        nonzero += inst.model.h_twist(f).is_zero() ? 0 : 1;
    CHECK(nonzero == 9);
}

TEST_CASE("build_MA rejects malformed or indistinguishable codes")
{
    const Thresholds th({4});
    CHECK_THROWS_AS(build_MA(2, th, 2, parse_codes(small_codes)), PreconditionError);
    CHECK_THROWS_AS(build_MA(2, th, 3, parse_codes("levels 3\ncutoff 1\ncode x 001 011 0101\n")),
                    ParseError);
    CHECK_THROWS_AS(build_MA(2, th, 3, parse_codes("levels 3\ncutoff 1\ncode x [001] [011] [010]\n")),
                    PreconditionError);
    // Equal above the cutoff in every column.
    CHECK_THROWS_AS(build_MA(2, th, 3, parse_codes("levels 3\ncutoff 1\ncode x 001 011 010\ncode y 101 111 110\n")),
                    PreconditionError);
    Rng rng(1);
    // 4 band atoms, 64 pair atoms and 2 code atoms.
    CHECK_THROWS_AS(build_MA(2, th, 8, random_codes(2, th, 8, 2, 3, 1, rng)), PreconditionError);
    CHECK_THROWS_AS(build_MA(3, th, 3, parse_codes(small_codes)), PreconditionError);
    const CodeSet nested = parse_codes("levels 2\ncutoff 1\ncode a [10 01] [00 01]\n");
    CHECK_THROWS_AS(build_MA(3, Thresholds({2, 3}), 2, nested), PreconditionError);
    CHECK_NOTHROW(build_MA(3, Thresholds({1, 2}), 2, nested));
}

TEST_CASE("random codes have the requested shape")
{
    Rng rng(3);
    const Thresholds th({2, 3});
    const CodeSet c = random_codes(3, th, 3, 3, 4, 2, rng);
    REQUIRE(c.codes.size() == 3);
    for (const Code& code : c.codes) {
        REQUIRE(code.columns.size() == 3);
        for (const CodeTree& t : code.columns) {
            REQUIRE(t.items.size() == 3);
            for (const CodeTree& x : t.items) {
                CHECK(x.bits.size() == 4);
                CHECK_FALSE(x.bits.test(0));
                CHECK_FALSE(x.bits.test(1));
            }
        }
    }
    CHECK_NOTHROW(build_MA(3, th, 3, c));
}

TEST_CASE("the reference anchors read back every code exactly")
{
    Rng rng(4);
    SUBCASE("k = 2")
    {
        const Thresholds th({4});
        const MAInstance inst = build_MA(2, th, 6, random_codes(2, th, 6, 4, 4, 2, rng));
        const ClaimReport r = check_claim(inst);
        INFO(r.witness);
        CHECK(r.ok);
        CHECK(r.checked == 4 * 36);
    }
    SUBCASE("k = 3")
    {
        const Thresholds th({2, 3});
        const MAInstance inst = build_MA(3, th, 2, random_codes(3, th, 2, 2, 3, 1, rng));
        const ClaimReport r = check_claim(inst);
        INFO(r.witness);
        CHECK(r.ok);
        // Depth 0: one check per band-1 atom; depth 1: one per column.
        CHECK(r.checked == 2 * 4 * 3 + 2 * 4);
    }
}

TEST_CASE("a damaged twist breaks the claim")
{
    Rng rng(5);
    const Thresholds th({4});
    const MAInstance inst = build_MA(2, th, 3, random_codes(2, th, 3, 2, 3, 1, rng));
    const Universe& U = inst.model.universe();
    std::vector<CutoffCoset> g = inst.model.h_twists();
    const FaceId face = U.require_face(Face::of({inst.code_atoms[1], inst.pair_atom(2, 0)}));
    Gf2Vec v = g[face].rep();
    v.flip(2);
    g[face] = CutoffCoset(v, U.cutoff());
    MAInstance broken = inst;
    broken.model = TwistedModel(U, g);
    const ClaimReport r = check_claim(broken);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("p2_0") != std::string::npos);
}

TEST_CASE("the coded model satisfies the axioms")
{
    Rng rng(6);
    const Thresholds th({2});
    const MAInstance inst = build_MA(2, th, 2, random_codes(2, th, 2, 2, 3, 1, rng));
    const AxiomReport r = check_axioms(inst.model, {.samples = 100, .seed = 1});
    for (const auto& a : r.results) {
        INFO(a.name << ": " << a.witness);
        CHECK(a.ok);
    }
}

TEST_CASE("recovery under adversaries")
{
    Rng rng(7);
    const Thresholds th({4});
    const MAInstance inst = build_MA(2, th, 6, random_codes(2, th, 6, 4, 4, 2, rng));

    SUBCASE("no moves")
    {
        const RecoveryReport r = recover_codes(inst, Adversary{});
        CHECK(r.exact);
        CHECK(r.within_budget);
        for (std::size_t c = 0; c < 4; ++c)
            CHECK(r.matched[c] == c);
        for (const ColumnVote& v : r.votes)
            CHECK(v.votes == 6);
    }
    SUBCASE("random moves within budget")
    {
        for (int trial = 0; trial < 40; ++trial) {
            const Adversary adv = random_adversary(inst, 1, 2, rng);
            CHECK(within_budget(adv, 6));
            const RecoveryReport r = recover_codes(inst, adv);
            INFO(r.failure);
            CHECK(r.exact);
        }
    }
    SUBCASE("a move is felt only in the columns it supports")
    {
        Adversary adv;
        const Universe& U = inst.model.universe();
        Gf2Vec offset = U.zero_offset();
        offset.set(U.require_face(Face::of({inst.pair_atom(3, 1), inst.code_atoms[2]})));
        adv.moves.set(3, U.require_face(Face::of({0, inst.code_atoms[2]})), offset);
        adv.pairs = adv.max_support = 1;
        const RecoveryReport r = recover_codes(inst, adv);
        CHECK(r.exact);
        for (const ColumnVote& v : r.votes)
            CHECK(v.votes == (v.code == 2 && v.alpha == 3 ? 5u : 6u));
    }
    SUBCASE("the boundary adversary ties the vote")
    {
        const Adversary adv = boundary_adversary(inst);
        CHECK_FALSE(within_budget(adv, 6));
        const RecoveryReport r = recover_codes(inst, adv);
        CHECK_FALSE(r.exact);
        CHECK(r.failure.find("tie") != std::string::npos);
    }
    SUBCASE("moves must stay on the code side")
    {
        Adversary adv;
        const Universe& U = inst.model.universe();
        adv.moves.set(3, U.require_face(Face::of({0, inst.pair_atom(0, 0)})), U.zero_offset());
        CHECK_THROWS_AS(recover_codes(inst, adv), PreconditionError);
    }
}

TEST_CASE("recovery at k = 3")
{
    Rng rng(8);
    const Thresholds th({2, 3});
    const MAInstance inst = build_MA(3, th, 3, random_codes(3, th, 3, 2, 3, 1, rng));
    CHECK(recover_codes(inst, Adversary{}).exact);
    for (int trial = 0; trial < 5; ++trial) {
        const RecoveryReport r = recover_codes(inst, random_adversary(inst, 1, 1, rng));
        INFO(r.failure);
        CHECK(r.exact);
    }
}
