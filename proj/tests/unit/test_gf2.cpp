#include "ptor/gf2.hpp"
#include "ptor/sampling.hpp"

#include <doctest.h>

using namespace ptor;

namespace {

Gf2Vec bits(const char* s)
{
    return Gf2Vec::from_string(s);
}

Gf2System random_system(Rng& rng, std::size_t vars, std::size_t rows)
{
    Gf2System sys;
    sys.num_vars = vars;
    for (std::size_t r = 0; r < rows; ++r) {
        Gf2Row row;
        for (std::size_t v = 0; v < vars; ++v)
            if (rng.uniform_below(3) == 0)
                row.vars.push_back(v);
        row.rhs = rng.coin();
        sys.rows.push_back(std::move(row));
    }
    return sys;
}

}  // namespace

TEST_CASE("vec_add is xor")
{
    CHECK(vec_add(bits("101"), bits("001")) == bits("100"));
    CHECK(vec_add(bits("101"), bits("000")) == bits("101"));
    CHECK(vec_add(bits("101"), bits("101")).none());
}

TEST_CASE("vec_add rejects mismatched families")
{
    const Gf2Vec a(3, FamilyTag{1});
    const Gf2Vec b(3, FamilyTag{2});
    CHECK_THROWS_AS(vec_add(a, b), std::invalid_argument);
    CHECK_THROWS_AS(vec_add(Gf2Vec(3), Gf2Vec(4)), std::invalid_argument);
}

TEST_CASE("vec_add group laws on all 4-bit vectors")
{
    std::vector<Gf2Vec> all;
    for (unsigned x = 0; x < 16; ++x) {
        Gf2Vec v(4);
        v.set_word(0, x);
        all.push_back(v);
    }
    for (const auto& a : all)
        for (const auto& b : all) {
            CHECK(a + b == b + a);
            CHECK((a + b) + b == a);
            for (const auto& c : all)
                CHECK((a + b) + c == a + (b + c));
        }
}

TEST_CASE("vectors wider than one word")
{
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        Gf2Vec a(150), b(150), c(150);
        rng.fill(a);
        rng.fill(b);
        rng.fill(c);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a + a).none());
        CHECK(Gf2Vec::from_string(a.to_string()) == a);
        CHECK((a + b).count() == a.count() + b.count() - 2 * [&] {
                  std::size_t both = 0;
                  for (std::size_t i = 0; i < 150; ++i)
                      both += a.test(i) && b.test(i);
                  return both;
              }());
    }
}

TEST_CASE("set_word drops bits past the width")
{
    Gf2Vec v(3);
    v.set_word(0, 0xff);
    CHECK(v.to_string() == "111");
    CHECK(v.count() == 3);
}

TEST_CASE("from_string rejects other characters")
{
    CHECK_THROWS_AS(Gf2Vec::from_string("10x"), std::invalid_argument);
}

TEST_CASE("solve_linear on small systems")
{
    Gf2System one{2, {{{0, 1}, true}}};
    auto x = solve_linear(one);
    REQUIRE(x);
    CHECK(one.satisfied_by(*x));
    // Free variable x1 is set to zero.
    CHECK(x->to_string() == "10");

    Gf2System contradiction{1, {{{0}, false}, {{0}, true}}};
    CHECK_FALSE(solve_linear(contradiction));
    CHECK_FALSE(brute_force_solve(contradiction));
}

TEST_CASE("brute force small cases")
{
    auto empty = brute_force_solve(Gf2System{});
    REQUIRE(empty);
    CHECK(empty->size() == 0);

    Gf2System triangle{3, {{{0, 1}, true}, {{1, 2}, true}, {{0, 2}, true}}};
    CHECK_FALSE(brute_force_solve(triangle));
    CHECK_FALSE(solve_linear(triangle));
}

TEST_CASE("brute force refuses large systems")
{
    Gf2System big;
    big.num_vars = 25;
    CHECK_THROWS_AS(brute_force_solve(big), std::invalid_argument);
    big.num_vars = 10;
    CHECK_THROWS_AS(brute_force_solve(big, 8), std::invalid_argument);
}

TEST_CASE("malformed systems are rejected")
{
    CHECK_THROWS_AS(solve_linear(Gf2System{2, {{{2}, true}}}), std::invalid_argument);
    CHECK_THROWS_AS(solve_linear(Gf2System{2, {{{1, 1}, true}}}), std::invalid_argument);
}

TEST_CASE("solve_linear agrees with brute force on random systems up to 12 variables")
{
    Rng rng(11);
    int solvable = 0, unsolvable = 0;
    for (int trial = 0; trial < 600; ++trial) {
        const std::size_t vars = rng.uniform_below(13);
        const std::size_t rows = rng.uniform_below(vars + 4);
        const Gf2System sys = random_system(rng, vars, rows);
        const auto lin = solve_linear(sys);
        const auto brute = brute_force_solve(sys);
        REQUIRE(lin.has_value() == brute.has_value());
        if (lin) {
            CHECK(sys.satisfied_by(*lin));
            CHECK(sys.satisfied_by(*brute));
            ++solvable;
        } else {
            ++unsolvable;
        }
    }
    // Both branches are exercised.
    CHECK(solvable > 50);
    CHECK(unsolvable > 50);
}

TEST_CASE("random 8-variable 6-row systems match exhaustive enumeration")
{
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const Gf2System sys = random_system(rng, 8, 6);
        bool any = false;
        for (unsigned x = 0; x < 256 && !any; ++x) {
            Gf2Vec v(8);
            v.set_word(0, x);
            any = sys.satisfied_by(v);
        }
        CHECK(solve_linear(sys).has_value() == any);
    }
}

TEST_CASE("coset_of clears coordinates below the cutoff")
{
    CHECK(coset_of(bits("1101"), 2).rep() == bits("0001"));
    CHECK(coset_of(bits("0000"), 3).is_zero());
    CHECK(coset_of(bits("1111"), 4).is_zero());
}

TEST_CASE("coset_of is constant on cutoff-subgroup orbits and separates reps")
{
    for (unsigned v = 0; v < 32; ++v) {
        Gf2Vec x(5);
        x.set_word(0, v);
        for (unsigned e = 0; e < 4; ++e) {
            Gf2Vec y(5);
            y.set_word(0, e);
            CHECK(in_cutoff_subgroup(y, 2));
            CHECK(coset_of(x, 2) == coset_of(x + y, 2));
        }
        for (unsigned w = 0; w < 32; ++w) {
            Gf2Vec z(5);
            z.set_word(0, w);
            const bool same_tail = (v >> 2) == (w >> 2);
            CHECK((coset_of(x, 2) == coset_of(z, 2)) == same_tail);
        }
    }
}

TEST_CASE("coset membership")
{
    const CutoffCoset c(bits("0110"), 2);
    CHECK(c.contains(bits("1110")));
    CHECK(c.contains(bits("0010")));
    CHECK_FALSE(c.contains(bits("0011")));
    CHECK_FALSE(c.contains(bits("001")));
}

TEST_CASE("IndexFamily positions")
{
    IndexFamily<int> fam({5, 2, 9}, FamilyTag{7});
    CHECK(fam.position(2) == 1);
    CHECK_FALSE(fam.position(3));
    CHECK(fam.zero().size() == 3);
    CHECK(fam.zero().family() == FamilyTag{7});
    CHECK_THROWS_AS(IndexFamily<int>({1, 1}, FamilyTag{}), std::invalid_argument);
}

TEST_CASE("uniform_below stays in range and hits every value")
{
    Rng rng(1);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 700; ++i)
        ++seen[rng.uniform_below(7)];
    for (int n : seen)
        CHECK(n > 50);
    CHECK_THROWS_AS(rng.uniform_below(0), std::invalid_argument);
}
