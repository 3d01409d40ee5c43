// Acceptance run: one PASS/FAIL line per criterion. Each criterion also
// produces a machine report (counts and verdicts, no timings); the last
// criterion reruns the others and compares those reports byte for byte.

#include "ptor/axioms.hpp"
#include "ptor/extension.hpp"
#include "ptor/invar.hpp"
#include "ptor/isomap.hpp"
#include "ptor/recovery.hpp"
#include "ptor/sampling.hpp"
#include "ptor/solve.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace ptor;

namespace {

constexpr double axiom_time_limit = 60.0;
constexpr double recovery_time_limit = 120.0;

struct Outcome {
    bool ok = true;
    std::string detail;
    std::string machine;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

AtomMask all_atoms(const Universe& u)
{
    return u.mask_of(u.atoms());
}

std::string fixed(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

// A failure note, kept to the first one seen.
void fail(Outcome& o, const std::string& why)
{
    if (o.ok)
        o.detail = why;
    o.ok = false;
}

Outcome axioms_hold()
{
    Outcome o;
    const auto t0 = Clock::now();
    std::size_t exhaustive = 0, sampled = 0;
    auto run = [&](const TwistedModel& m, const AxiomOptions& opts, bool need_exhaustive, const std::string& what) {
        const AxiomReport r = check_axioms(m, opts);
        if (!r.ok())
            fail(o, what + ": " + r.first_failure()->name + " fails: " + r.first_failure()->witness);
        else if (need_exhaustive && !r.exhaustive())
            fail(o, what + ": not checked exhaustively");
        (need_exhaustive ? exhaustive : sampled) += 1;
    };

    const Universe small = Universe::range(4, 2, 3, 1);
    run(standard_model(small), {}, true, "standard (4,2,3,1)");
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        run(random_canonical_model(small, rng), {}, true, "canonical (4,2,3,1) seed " + std::to_string(seed));
    }
    const Universe big = Universe::range(5, 3, 3, 1);
    run(standard_model(big), {.samples = 1000, .seed = 0}, false, "standard (5,3,3,1)");
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(1000 + seed);
        run(random_canonical_model(big, rng), {.samples = 1000, .seed = seed}, false,
            "canonical (5,3,3,1) seed " + std::to_string(seed));
    }
    const double t = seconds_since(t0);
    if (t >= axiom_time_limit)
        fail(o, "took " + fixed(t) + " s");
    if (o.ok)
        o.detail = std::to_string(exhaustive) + " models exhaustive at k=2, " + std::to_string(sampled) +
                   " sampled at k=3, " + fixed(t) + " s (limit 60 s)";
    o.machine = "exhaustive=" + std::to_string(exhaustive) + " sampled=" + std::to_string(sampled) +
                " ok=" + std::to_string(o.ok);
    return o;
}

Outcome greedy_from_empty()
{
    Outcome o;
    std::size_t solved = 0;
    std::ostringstream trace;
    auto run = [&](const Universe& u, std::uint64_t seed) {
        Rng rng(seed);
        const TwistedModel m = random_canonical_model(u, rng);
        FillTrace ft;
        const Solution f = greedy_extend(m, Solution{}, 0, all_atoms(u), &rng, &ft);
        const SolutionCheck c = is_solution(m, f);
        if (!c.ok)
            fail(o, "seed " + std::to_string(seed) + ": violates " + describe(u, *c.violated));
        else if (!is_total_on(u, f, all_atoms(u)))
            fail(o, "seed " + std::to_string(seed) + ": not total");
        else
            ++solved;
        trace << ft.g_assigned << ',' << ft.h_assigned << ';';
    };
    const Universe k2 = Universe::range(6, 2, 4, 2);
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        run(k2, seed);
    const Universe k3 = Universe::range(5, 3, 4, 2);
    for (std::uint64_t seed = 0; seed < 25; ++seed)
        run(k3, 500 + seed);
    if (o.ok)
        o.detail = std::to_string(solved) + "/125 total valid solutions (100 at (6,2,4,2), 25 at (5,3,4,2))";
    o.machine = "solved=" + std::to_string(solved) + " trace=" + trace.str();
    return o;
}

Outcome solvers_agree()
{
    Outcome o;
    const Universe u = Universe::range(3, 2, 2, 1);
    const std::size_t faces = u.num_faces(), width = faces * u.levels();
    std::size_t exhaustive = 0, random = 0, solvable = 0;
    auto agree = [&](const TwistedModel& m, bool with_brute, const std::string& what) {
        std::vector<SolveMethod> methods{SolveMethod::greedy, SolveMethod::linear};
        if (with_brute)
            methods.push_back(SolveMethod::brute);
        std::vector<bool> verdicts;
        for (SolveMethod method : methods) {
            const std::optional<Solution> f = full_solve(m, method);
            verdicts.push_back(f.has_value());
            if (f && (!is_solution(m, *f).ok || !is_total_on(m.universe(), *f, all_atoms(m.universe()))))
                fail(o, what + ": " + method_name(method) + " returned an invalid solution");
        }
        for (bool v : verdicts)
            if (v != verdicts.front())
                fail(o, what + ": verdicts differ");
        solvable += verdicts.front() ? 1 : 0;
    };

    // Every twist with at most two set bits among faces x levels.
    for (std::size_t i = 0; i <= width; ++i)
        for (std::size_t j = i; j <= width; ++j) {
            if (j == i && i != width)
                continue;
            std::vector<Gf2Vec> reps(faces, u.zero_levels());
            for (std::size_t b : {i, j})
                if (b < width)
                    reps[b / u.levels()].set(b % u.levels());
            std::vector<CutoffCoset> g;
            for (const Gf2Vec& r : reps)
                g.emplace_back(r, u.cutoff());
            agree(canonical_model(u, g), true, "twist bits " + std::to_string(i) + "," + std::to_string(j));
            ++exhaustive;
        }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(2000 + seed);
        const Universe big = seed % 2 == 0 ? Universe::range(5, 2, 3, 1) : Universe::range(5, 3, 3, 1);
        agree(random_canonical_model(big, rng), false, "random seed " + std::to_string(seed));
        ++random;
    }
    if (o.ok)
        o.detail = std::to_string(exhaustive) + " small twists (greedy, linear, brute) and " +
                   std::to_string(random) + " larger models (greedy, linear) agree; " + std::to_string(solvable) +
                   " solvable";
    o.machine = "exhaustive=" + std::to_string(exhaustive) + " random=" + std::to_string(random) +
                " solvable=" + std::to_string(solvable) + " ok=" + std::to_string(o.ok);
    return o;
}

Outcome iso_verified()
{
    Outcome o;
    const Universe u = Universe::range(4, 2, 3, 1);
    std::size_t verified = 0;
    std::uint64_t points = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(3000 + seed);
        const TwistedModel m = random_canonical_model(u, rng);
        const Solution a = greedy_extend(m, Solution{}, 0, all_atoms(u), &rng);
        const Solution b = greedy_extend(m, Solution{}, 0, all_atoms(u), &rng);
        const IsoReport r = verify_iso(build_iso(identify(m, m), a, b));
        for (const IsoCheck& c : r.checks)
            points += c.points;
        if (!r.ok())
            fail(o, "seed " + std::to_string(seed) + ": " + r.first_failure()->predicate + ": " +
                        r.first_failure()->witness);
        else if (!r.exhaustive())
            fail(o, "seed " + std::to_string(seed) + ": not exhaustive");
        else
            ++verified;
    }
    if (o.ok)
        o.detail = std::to_string(verified) + "/50 pairs verified exhaustively (" + std::to_string(points) +
                   " points)";
    o.machine = "verified=" + std::to_string(verified) + " points=" + std::to_string(points);
    return o;
}

Outcome amalgamation()
{
    Outcome o;
    std::size_t built = 0, refused = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(4000 + seed);
        const unsigned k = seed % 2 == 0 ? 2 : 3;
        const std::size_t extras_count = 1 + rng.uniform_below(k - 1);
        const Universe u = Universe::range(2 + extras_count, k, 3, 1);
        const TwistedModel m = random_canonical_model(u, rng);
        std::vector<AtomId> extras;
        for (std::size_t t = 0; t < extras_count; ++t)
            extras.push_back(static_cast<AtomId>(2 + t));
        const SystemOfSolutions sys = random_compatible_system(m, 0b11, extras, rng);
        const Solution f = amalgamate(m, sys, &rng);
        bool ok = is_solution(m, f).ok && is_total_on(u, f, all_atoms(u));
        for (const auto& [s, part] : sys.parts)
            ok = ok && extends(f, part);
        if (ok)
            ++built;
        else
            fail(o, "seed " + std::to_string(seed) + " (k=" + std::to_string(k) + ", m'=" +
                        std::to_string(extras_count) + "): amalgam invalid or not extending");
    }
    for (unsigned k : {2u, 3u}) {
        const Universe u = Universe::range(2 + k, k, 3, 1);
        Rng rng(4100 + k);
        const TwistedModel m = random_canonical_model(u, rng);
        const Solution full = greedy_extend(m, Solution{}, 0, all_atoms(u), &rng);
        SystemOfSolutions sys;
        sys.base = 0b11;
        for (unsigned t = 0; t < k; ++t)
            sys.extras.push_back(static_cast<AtomId>(2 + t));
        for (std::uint32_t s = 0; s + 1 < (1u << k); ++s)
            sys.parts[s] = restrict(u, full, sys.base | (AtomMask{s} << 2));
        try {
            amalgamate(m, sys);
            fail(o, "m'=k accepted at k=" + std::to_string(k));
        } catch (const PreconditionError&) {
            ++refused;
        }
    }
    if (o.ok)
        o.detail = std::to_string(built) + "/100 amalgams valid and extending every part; m'=k refused at k=2,3";
    o.machine = "built=" + std::to_string(built) + " refused=" + std::to_string(refused);
    return o;
}

Outcome extension_and_pull_back()
{
    Outcome o;
    std::size_t passed = 0, sampled_axioms = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(5000 + seed);
        const TwistedModel m = random_canonical_model(Universe::range(3, 2, 3, 1), rng);
        std::vector<HElem> anchor;
        for (FaceId face = 0; face < m.universe().num_faces(); ++face)
            anchor.push_back(random_h(m, face, rng));
        const auto [n, e] = extend_model(m, {3, 4}, anchor);
        // Default bounds: the largest families are sampled at 5 atoms.
        const AxiomReport ax = check_axioms(n, {.seed = seed});
        for (const AxiomResult& r : ax.results)
            sampled_axioms += r.mode == CheckMode::sampled ? 1 : 0;
        if (!ax.ok()) {
            fail(o, "seed " + std::to_string(seed) + ": extension fails the axioms");
            continue;
        }
        const std::optional<Solution> fn = full_solve(n, SolveMethod::linear);
        if (!fn) {
            fail(o, "seed " + std::to_string(seed) + ": extension unsolvable");
            continue;
        }
        const Solution fm = pull_back(e, *fn);
        if (!is_solution(m, fm).ok || !is_total_on(m.universe(), fm, all_atoms(m.universe())))
            fail(o, "seed " + std::to_string(seed) + ": pull-back invalid");
        else
            ++passed;
    }
    if (o.ok)
        o.detail = std::to_string(passed) + "/50 extensions 3 -> 5 atoms satisfy the axioms (" +
                   std::to_string(sampled_axioms) + " axiom checks sampled) with valid pull-backs";
    o.machine = "passed=" + std::to_string(passed) + " sampled=" + std::to_string(sampled_axioms);
    return o;
}

Outcome k_invariant_ignores_y()
{
    Outcome o;
    std::size_t chains = 0, readings = 0;
    std::ostringstream values;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(6000 + seed);
        const unsigned k = seed % 2 == 0 ? 2 : 3;
        const Universe u = Universe::range(k + 2, k, 4, 2);
        const TwistedModel m = random_canonical_model(u, rng);
        AnchorFamily f;
        for (FaceId face = 0; face < u.num_faces(); ++face)
            for (Level l = 0; l < u.levels(); ++l)
                f.set(l, face, random_ga(u, rng));
        std::vector<AtomId> chain = u.atoms();
        rng.shuffle(chain);
        chain.resize(k + 1);
        AtomMask h_mask = u.mask_of(chain) & ~u.mask_of(std::vector<AtomId>{chain[0]});
        const FaceId h_face = *u.face_by_mask(h_mask);
        const HElem base = m.base_h(h_face);
        const CutoffCoset first = invariant_k(m, chain, f, base);
        // Every y in H^b(h_face): the base point plus an element of E_c.
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << u.cutoff()); ++x) {
            HElem y = base;
            for (Level l = 0; l < u.cutoff(); ++l)
                if ((x >> l) & 1)
                    y.vec.flip(l);
            if (!(invariant_k(m, chain, f, y) == first))
                fail(o, "seed " + std::to_string(seed) + ": y = " + y.vec.to_string() + " changes the invariant");
            ++readings;
        }
        values << first.rep().to_string() << ';';
        ++chains;
    }
    if (o.ok)
        o.detail = std::to_string(chains) + " chains, " + std::to_string(readings) +
                   " readings over all of H^b, one value per chain";
    o.machine = "readings=" + std::to_string(readings) + " values=" + values.str();
    return o;
}

Outcome budgeted_perturbations()
{
    Outcome o;
    const Universe u = Universe::range(7, 3, 3, 1);
    const Thresholds th({2, 3});
    const std::vector<AtomId> base{0, 1, 2, 3, 4}, tail{5, 6};
    const AtomMask tail_mask = u.mask_of(tail);
    std::size_t equal = 0, moved = 0, max_points = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(7000 + seed);
        const TwistedModel m = random_canonical_model(u, rng);
        AnchorFamily f;
        for (FaceId face = 0; face < u.num_faces(); ++face)
            if ((u.face_mask(face) & tail_mask) != tail_mask)
                for (Level l = 0; l < u.levels(); ++l)
                    f.set(l, face, random_ga(u, rng));
        const InvariantClass ref = invariant_m(m, 1, base, tail, f, th);

        // d moved (level, {b, 5, 6}) pairs, b in the prefix, each with s
        // bits on the h-faces {a, 5, 6} of the atoms past the prefix.
        static const std::pair<std::size_t, std::size_t> shapes[] = {{1, 1}, {1, 2}, {2, 1}};
        const auto [d, s] = shapes[rng.uniform_below(3)];
        std::vector<std::pair<Level, FaceId>> pairs;
        for (Level l = u.cutoff(); l < u.levels(); ++l)
            for (AtomId b : {0u, 1u})
                pairs.emplace_back(l, u.require_face(Face::of({b, 5, 6})));
        AnchorFamily fp;
        for (std::size_t i : rng.choose(pairs.size(), d)) {
            Gf2Vec v = u.zero_offset();
            for (std::size_t a : rng.choose(3, s))
                v.set(u.require_face(Face::of({static_cast<AtomId>(2 + a), 5, 6})));
            fp.set(pairs[i].first, pairs[i].second, v);
        }
        const InvariantClass c = invariant_m(m, 1, base, tail, f, th, &fp);
        const std::size_t points = differing_points(ref, c, th);
        max_points = std::max(max_points, points);
        moved += (c == ref) ? 0 : 1;
        if (equivalent(ref, c, th))
            ++equal;
        else
            fail(o, "seed " + std::to_string(seed) + ": d=" + std::to_string(d) + " s=" + std::to_string(s) +
                        " breaks equivalence");
    }

    // Over budget: both prefix faces moved on every atom past the prefix.
    Rng rng(7100);
    const TwistedModel m = random_canonical_model(u, rng);
    const AnchorFamily zero = AnchorFamily::zero(u);
    AnchorFamily f;
    for (FaceId face = 0; face < u.num_faces(); ++face)
        if ((u.face_mask(face) & tail_mask) != tail_mask)
            for (Level l = 0; l < u.levels(); ++l)
                f.set(l, face, u.zero_offset());
    AnchorFamily fp;
    for (AtomId b : {0u, 1u}) {
        Gf2Vec v = u.zero_offset();
        for (AtomId a = 2; a < 5; ++a)
            v.set(u.require_face(Face::of({a, 5, 6})));
        fp.set(2, u.require_face(Face::of({b, 5, 6})), v);
    }
    const InvariantClass ref = invariant_m(m, 1, base, tail, zero, th);
    const InvariantClass over = invariant_m(m, 1, base, tail, f, th, &fp);
    const std::size_t over_points = differing_points(ref, over, th);
    const bool over_separates = !equivalent(ref, over, th);
    if (!over_separates)
        fail(o, "the over-budget construction stays equivalent");
    if (moved == 0)
        fail(o, "no perturbation changed the class");
    if (o.ok)
        o.detail = std::to_string(equal) + "/50 in-budget perturbations equivalent (" + std::to_string(moved) +
                   " changed the class, at most " + std::to_string(max_points) +
                   " differing points < t_1 = 3); over budget: " + std::to_string(over_points) +
                   " differing points, not equivalent";
    o.machine = "equal=" + std::to_string(equal) + " moved=" + std::to_string(moved) +
                " max=" + std::to_string(max_points) + " over=" + std::to_string(over_points) +
                " separated=" + std::to_string(over_separates);
    return o;
}

Outcome code_recovery()
{
    Outcome o;
    const auto t0 = Clock::now();
    Rng rng(8000);
    const Thresholds th({4});
    const MAInstance inst = build_MA(2, th, 6, random_codes(2, th, 6, 4, 4, 2, rng));
    const ClaimReport claim = check_claim(inst);
    if (!claim.ok)
        fail(o, "claim fails: " + claim.witness);
    std::size_t exact = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Adversary adv = random_adversary(inst, 1, 2, rng);
        if (!within_budget(adv, inst.grid)) {
            fail(o, "trial " + std::to_string(trial) + " exceeds the budget");
            continue;
        }
        const RecoveryReport r = recover_codes(inst, adv);
        if (r.exact)
            ++exact;
        else
            fail(o, "trial " + std::to_string(trial) + ": " + r.failure);
    }
    const double t = seconds_since(t0);
    if (t >= recovery_time_limit)
        fail(o, "took " + fixed(t) + " s");
    if (o.ok)
        o.detail = "claim exact on " + std::to_string(claim.checked) + " readings; " + std::to_string(exact) +
                   "/200 adversaries (1 pair, support <= 2, S = 6) recovered exactly, " + fixed(t) +
                   " s (limit 120 s)";
    o.machine = "claim=" + std::to_string(claim.ok) + " checked=" + std::to_string(claim.checked) +
                " exact=" + std::to_string(exact) + " codes=" + print_codes(inst.codes);
    return o;
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria()
{
    static const std::vector<Criterion> all{
        {"axioms hold on standard and canonical models", axioms_hold},
        {"greedy completion from the empty solution", greedy_from_empty},
        {"greedy, linear and brute solvers agree", solvers_agree},
        {"isomorphisms between independent solutions", iso_verified},
        {"amalgamation of compatible systems", amalgamation},
        {"extensions satisfy the axioms and pull back", extension_and_pull_back},
        {"k-invariant independent of y", k_invariant_ignores_y},
        {"invariants stable under budgeted perturbations", budgeted_perturbations},
        {"codes recovered against budgeted adversaries", code_recovery},
    };
    return all;
}

void print(std::size_t index, const char* name, const Outcome& o)
{
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << index << "  " << name << ": " << o.detail << std::endl;
}

}  // namespace

int main()
{
    bool all_ok = true;
    std::vector<std::string> first;
    for (std::size_t i = 0; i < criteria().size(); ++i) {
        Outcome o;
        try {
            o = criteria()[i].run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        print(i + 1, criteria()[i].name, o);
        all_ok = all_ok && o.ok;
        first.push_back(o.machine);
    }

    Outcome det;
    std::size_t same = 0;
    for (std::size_t i = 0; i < criteria().size(); ++i) {
        std::string again;
        try {
            again = criteria()[i].run().machine;
        } catch (const std::exception& e) {
            again = std::string("exception: ") + e.what();
        }
        if (again == first[i])
            ++same;
        else
            fail(det, "criterion " + std::to_string(i + 1) + " report differs on rerun");
    }
    if (det.ok)
        det.detail = std::to_string(same) + "/" + std::to_string(criteria().size()) +
                     " machine reports byte-identical on rerun";
    print(criteria().size() + 1, "deterministic reports", det);
    all_ok = all_ok && det.ok;
    return all_ok ? 0 : 1;
}
