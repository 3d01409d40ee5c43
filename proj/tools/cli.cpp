#include "cli.hpp"

#include "ptor/axioms.hpp"
#include "ptor/extension.hpp"
#include "ptor/invar.hpp"
#include "ptor/isomap.hpp"
#include "ptor/model_io.hpp"
#include "ptor/recovery.hpp"
#include "ptor/sampling.hpp"
#include "ptor/solution_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <sstream>

namespace ptor::cli {

namespace {

using json = nlohmann::json;

struct Report {
    json data = json::object();
    std::ostringstream text;
};

struct Global {
    std::uint64_t seed = 0;
    std::string format = "text";
};

TwistedModel load_model(const std::string& path, bool check_twist_keys = true)
{
    return parse_model(read_text_file(path), {.check_twist_keys = check_twist_keys});
}

Solution load_solution(const TwistedModel& m, const std::string& path)
{
    return parse_solution(m, read_text_file(path));
}

AtomMask all_atoms(const Universe& u)
{
    return u.mask_of(u.atoms());
}

json universe_json(const Universe& u)
{
    return {{"k", u.k()},         {"atoms", u.num_atoms()}, {"levels", u.levels()},
            {"cutoff", u.cutoff()}, {"faces", u.num_faces()}, {"cells", u.num_cells()}};
}

std::string universe_line(const Universe& u)
{
    std::ostringstream s;
    s << "k=" << u.k() << " atoms=" << u.num_atoms() << " L=" << u.levels() << " c=" << u.cutoff()
      << " faces=" << u.num_faces() << " cells=" << u.num_cells();
    return s.str();
}

// Writes `text` to `path`, or returns it inline in the report when no path is given.
void emit(Report& r, const std::string& key, const std::string& path, const std::string& text)
{
    if (path.empty()) {
        r.data[key] = text;
        r.text << text;
    } else {
        write_text_file(path, text);
        r.data[key + "_file"] = path;
        r.text << "wrote " << path << '\n';
    }
}

int finish_model(Report& r, const TwistedModel& m, const std::string& out)
{
    r.data["universe"] = universe_json(m.universe());
    r.text << "model: " << universe_line(m.universe()) << '\n';
    emit(r, "model", out, print_model(m));
    r.data["ok"] = true;
    return 0;
}

AxiomOptions axiom_options(std::uint64_t samples, std::uint64_t bound, std::uint64_t seed)
{
    AxiomOptions o;
    o.samples = samples;
    o.exhaustive_bound = bound;
    o.seed = seed;
    return o;
}

int report_axioms(Report& r, const AxiomReport& ax)
{
    json list = json::array();
    for (const AxiomResult& a : ax.results) {
        list.push_back({{"id", a.id},
                        {"name", a.name},
                        {"ok", a.ok},
                        {"mode", mode_name(a.mode)},
                        {"points", a.points},
                        {"witness", a.witness}});
        r.text << (a.ok ? "  pass " : "  FAIL ") << a.id << ' ' << a.name << " (" << mode_name(a.mode) << ", "
               << a.points << " points)";
        if (!a.ok)
            r.text << ": " << a.witness;
        r.text << '\n';
    }
    r.data["axioms"] = std::move(list);
    r.data["ok"] = ax.ok();
    r.data["exhaustive"] = ax.exhaustive();
    r.text << (ax.ok() ? "all axioms hold" : "axioms fail") << (ax.exhaustive() ? " (exhaustive)" : " (sampled)")
           << '\n';
    return ax.ok() ? 0 : 1;
}

// Validity of a total solution on `mask`; fills the report and returns the exit code.
int report_solution(Report& r, const TwistedModel& m, const Solution& f, AtomMask mask, const std::string& what)
{
    const SolutionCheck check = is_solution(m, f, mask);
    const bool total = is_total_on(m.universe(), f, mask);
    r.data["valid"] = check.ok;
    r.data["total"] = total;
    r.data["g_points"] = f.g_part.size();
    r.data["h_points"] = f.h_part.size();
    r.text << what << ": " << f.h_part.size() << " h-points, " << f.g_part.size() << " g-points, "
           << (total ? "total" : "NOT total") << ", " << (check.ok ? "valid" : "INVALID");
    if (check.violated) {
        const std::string v = describe(m.universe(), *check.violated);
        r.data["violated"] = v;
        r.text << " (violates " << v << ")";
    }
    r.text << '\n';
    r.data["ok"] = check.ok && total;
    return check.ok && total ? 0 : 1;
}

AnchorFamily anchors_from(const TwistedModel& m, const std::string& path)
{
    if (path.empty())
        return AnchorFamily::zero(m.universe());
    AnchorFamily f;
    for (const auto& [key, x] : load_solution(m, path).g_part)
        f.set(key.first, key.second, x.offset);
    return f;
}

json class_json(const InvariantClass& c)
{
    return c.to_string();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Finite models of twisted parity structures: build, check, solve, compare and read invariants.",
                 "ptor"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--seed", g.seed, "Seed for every randomized step")->capture_default_str();
    app.add_option("--format", g.format, "Report style")
        ->check(CLI::IsMember({"text", "machine"}))
        ->capture_default_str();

    struct Shape {
        unsigned k = 2, atoms = 4, levels = 3, cutoff = 1;
    };
    auto add_shape = [](CLI::App* s, Shape& sh) {
        s->add_option("--k", sh.k, "Face size")->check(CLI::Range(2u, 8u))->capture_default_str();
        s->add_option("--atoms", sh.atoms, "Number of atoms (ids 0..n-1)")
            ->check(CLI::Range(1u, 64u))
            ->capture_default_str();
        s->add_option("--levels", sh.levels, "Number of levels L")->check(CLI::Range(1u, 64u))->capture_default_str();
        s->add_option("--cutoff", sh.cutoff, "Cutoff c, 0 < c <= L")->capture_default_str();
    };

    std::uint64_t samples = 1000, bound = std::uint64_t{1} << 20;
    auto add_sampling = [&](CLI::App* s) {
        s->add_option("--samples", samples, "Samples per predicate when not exhaustive")->capture_default_str();
        s->add_option("--bound", bound, "Largest per-frame tuple count checked exhaustively")
            ->capture_default_str();
    };

    Shape std_shape;
    std::string std_out;
    auto* build_std = app.add_subcommand("build-standard", "Write the standard model");
    add_shape(build_std, std_shape);
    build_std->add_option("--out", std_out, "Output model file (default: print)");

    Shape can_shape;
    std::string can_out;
    auto* build_can = app.add_subcommand("build-canonical", "Write a canonical model with random twists (--seed)");
    add_shape(build_can, can_shape);
    build_can->add_option("--out", can_out, "Output model file (default: print)");

    std::string ax_model;
    auto* check_ax = app.add_subcommand("check-axioms", "Check every axiom on a model");
    check_ax->add_option("model", ax_model, "Model file")->required()->check(CLI::ExistingFile);
    add_sampling(check_ax);

    std::string solve_model, solve_method = "linear", solve_out;
    auto* solve = app.add_subcommand("solve", "Find a total solution");
    solve->add_option("model", solve_model, "Model file")->required()->check(CLI::ExistingFile);
    solve->add_option("--method", solve_method, "Solver")
        ->check(CLI::IsMember({"greedy", "linear", "brute"}))
        ->capture_default_str();
    solve->add_option("--out", solve_out, "Output solution file (default: print)");

    std::string es_model, es_solution, es_out;
    AtomId es_atom = 0;
    std::vector<AtomId> es_on;
    auto* ext_sol = app.add_subcommand("extend-solution", "Extend a solution on A to A plus one atom");
    ext_sol->add_option("model", es_model, "Model file")->required()->check(CLI::ExistingFile);
    ext_sol->add_option("solution", es_solution, "Solution file on A")->required()->check(CLI::ExistingFile);
    ext_sol->add_option("--atom", es_atom, "The new atom b")->required();
    ext_sol->add_option("--on", es_on, "The atoms of A (default: atoms of the solution's faces)")->delimiter(',');
    ext_sol->add_option("--out", es_out, "Output solution file (default: print)");

    std::string am_model;
    std::vector<AtomId> am_base, am_extras;
    std::size_t am_trials = 1;
    auto* amal = app.add_subcommand("amalgamate", "Amalgamate random compatible systems of partial solutions");
    amal->add_option("model", am_model, "Model file")->required()->check(CLI::ExistingFile);
    amal->add_option("--base", am_base, "Base atoms")->delimiter(',')->required();
    amal->add_option("--extras", am_extras, "The m' extra atoms")->delimiter(',')->required();
    amal->add_option("--trials", am_trials, "Number of random systems")->capture_default_str();

    std::string iso_a, iso_b, iso_fa, iso_fb;
    auto* iso = app.add_subcommand("iso", "Build and verify the isomorphism induced by two solutions");
    iso->add_option("source", iso_a, "Source model file")->required()->check(CLI::ExistingFile);
    iso->add_option("target", iso_b, "Target model file")->required()->check(CLI::ExistingFile);
    iso->add_option("--solution-source", iso_fa, "Source solution (default: random greedy)")
        ->check(CLI::ExistingFile);
    iso->add_option("--solution-target", iso_fb, "Target solution (default: random greedy)")
        ->check(CLI::ExistingFile);
    add_sampling(iso);

    std::string pb_source, pb_target, pb_solution, pb_out;
    auto* pull = app.add_subcommand("pull-back", "Pull a target solution back along the inclusion");
    pull->add_option("source", pb_source, "Source model file")->required()->check(CLI::ExistingFile);
    pull->add_option("target", pb_target, "Target model file")->required()->check(CLI::ExistingFile);
    pull->add_option("solution", pb_solution, "Total target solution")->required()->check(CLI::ExistingFile);
    pull->add_option("--out", pb_out, "Output solution file (default: print)");

    std::string em_model, em_anchor = "canonical", em_out;
    std::vector<AtomId> em_new;
    bool em_check = false;
    auto* ext_model = app.add_subcommand("extend-model", "Build a larger model containing a given one");
    ext_model->add_option("model", em_model, "Model file")->required()->check(CLI::ExistingFile);
    ext_model->add_option("--new", em_new, "New atom ids")->delimiter(',')->required();
    ext_model->add_option("--anchor", em_anchor, "Anchor in each H^b(u)")
        ->check(CLI::IsMember({"canonical", "random"}))
        ->capture_default_str();
    ext_model->add_flag("--check", em_check, "Check the axioms on the result");
    ext_model->add_option("--out", em_out, "Output model file (default: print)");
    add_sampling(ext_model);

    std::string inv_model, inv_anchors, inv_y;
    std::vector<AtomId> inv_chain, inv_base, inv_tail;
    std::vector<std::size_t> inv_th;
    std::size_t inv_depth = 0;
    auto* inv = app.add_subcommand("invariant", "Compute a k-invariant (--chain) or an m-invariant (--depth)");
    inv->add_option("model", inv_model, "Model file")->required()->check(CLI::ExistingFile);
    inv->add_option("--anchors", inv_anchors, "Solution file whose g-points are the anchors (default: zero)")
        ->check(CLI::ExistingFile);
    auto* chain_opt = inv->add_option("--chain", inv_chain, "Atoms i_0, ..., i_k")->delimiter(',');
    inv->add_option("--y", inv_y, "Bitstring of the H^b element (default: canonical)")->needs(chain_opt);
    auto* depth_opt = inv->add_option("--depth", inv_depth, "Depth m")->excludes(chain_opt);
    inv->add_option("--base", inv_base, "Base atoms, nested prefixes first")->delimiter(',')->needs(depth_opt);
    inv->add_option("--tail", inv_tail, "Tail atoms i_1, ..., i_{k-m}")->delimiter(',')->needs(depth_opt);
    inv->add_option("--thresholds", inv_th, "t_0, t_1, ...")->delimiter(',')->needs(depth_opt);

    unsigned dr_k = 2;
    std::vector<std::size_t> dr_th;
    std::size_t dr_grid = 6, dr_budget = 1, dr_support = 0, dr_trials = 1;
    std::string dr_codes;
    bool dr_boundary = false;
    auto* demo = app.add_subcommand("demo-recovery", "Store codes in a model and read them back under an adversary");
    demo->add_option("--k", dr_k, "Face size")->check(CLI::Range(2u, 4u))->capture_default_str();
    demo->add_option("--thresholds", dr_th, "t_0, ..., t_{k-2}")->delimiter(',')->required();
    demo->add_option("--grid", dr_grid, "Grid side S")->capture_default_str();
    demo->add_option("--codes", dr_codes, "Codes file")->required()->check(CLI::ExistingFile);
    demo->add_option("--budget", dr_budget, "Moved anchor pairs per adversary")->capture_default_str();
    demo->add_option("--support", dr_support, "Largest support per move (default: the most the budget allows)");
    demo->add_option("--trials", dr_trials, "Number of random adversaries")->capture_default_str();
    demo->add_flag("--boundary", dr_boundary, "Also run the adversary that ties the vote");

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.push_back("ptor");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\nrun 'ptor --help' for usage\n";
        return 2;
    }

    Report r;
    int code = 0;
    try {
        Rng rng(g.seed);
        if (build_std->parsed()) {
            r.data["command"] = "build-standard";
            code = finish_model(
                r, standard_model(Universe::range(std_shape.atoms, std_shape.k, std_shape.levels, std_shape.cutoff)),
                std_out);
        } else if (build_can->parsed()) {
            r.data["command"] = "build-canonical";
            r.data["seed"] = g.seed;
            code = finish_model(r,
                                random_canonical_model(
                                    Universe::range(can_shape.atoms, can_shape.k, can_shape.levels, can_shape.cutoff),
                                    rng),
                                can_out);
        } else if (check_ax->parsed()) {
            r.data["command"] = "check-axioms";
            const TwistedModel m = load_model(ax_model, false);
            r.data["universe"] = universe_json(m.universe());
            r.text << "model: " << universe_line(m.universe()) << '\n';
            code = report_axioms(r, check_axioms(m, axiom_options(samples, bound, g.seed)));
        } else if (solve->parsed()) {
            r.data["command"] = "solve";
            r.data["method"] = solve_method;
            const TwistedModel m = load_model(solve_model);
            const auto f = full_solve(m, *parse_method(solve_method));
            if (!f) {
                r.data["ok"] = false;
                r.data["solved"] = false;
                r.text << "no solution (" << solve_method << ")\n";
                code = 1;
            } else {
                r.data["solved"] = true;
                code = report_solution(r, m, *f, all_atoms(m.universe()), "solution (" + solve_method + ")");
                if (code == 0)
                    emit(r, "solution", solve_out, print_solution(m, *f));
            }
        } else if (ext_sol->parsed()) {
            r.data["command"] = "extend-solution";
            const TwistedModel m = load_model(es_model);
            const Universe& u = m.universe();
            const Solution f = load_solution(m, es_solution);
            AtomMask a = u.mask_of(es_on);
            if (es_on.empty())
                for (const auto& [face, x] : f.h_part)
                    a |= u.face_mask(face);
            if (!u.has_atom(es_atom))
                throw PreconditionError("atom " + std::to_string(es_atom) + " is not in the model");
            const Solution ext = extend_solution(m, f, a, es_atom, &rng);
            const AtomMask b = a | (AtomMask{1} << u.atom_position(es_atom));
            code = report_solution(r, m, ext, b, "extended solution");
            r.data["extends_input"] = extends(ext, f);
            if (!extends(ext, f)) {
                r.text << "the result does not extend the input\n";
                r.data["ok"] = false;
                code = 1;
            }
            if (code == 0)
                emit(r, "solution", es_out, print_solution(m, ext));
        } else if (amal->parsed()) {
            r.data["command"] = "amalgamate";
            const TwistedModel m = load_model(am_model);
            const Universe& u = m.universe();
            const AtomMask base = u.mask_of(am_base);
            AtomMask all = base | u.mask_of(am_extras);
            json trials = json::array();
            std::size_t failures = 0;
            for (std::size_t t = 0; t < am_trials; ++t) {
                const SystemOfSolutions sys = random_compatible_system(m, base, am_extras, rng);
                const Solution f = amalgamate(m, sys, &rng);
                bool extends_all = true;
                for (const auto& [s, part] : sys.parts)
                    extends_all = extends_all && extends(f, part);
                const bool valid = is_solution(m, f, all).ok && is_total_on(u, f, all);
                trials.push_back({{"parts", sys.parts.size()}, {"valid", valid}, {"extends_parts", extends_all}});
                r.text << "system " << t << ": " << sys.parts.size() << " parts, "
                       << (valid ? "valid" : "INVALID") << ", " << (extends_all ? "extends every part" : "MISSES a part")
                       << '\n';
                failures += valid && extends_all ? 0 : 1;
            }
            r.data["m_prime"] = am_extras.size();
            r.data["trials"] = std::move(trials);
            r.data["ok"] = failures == 0;
            code = failures == 0 ? 0 : 1;
        } else if (iso->parsed()) {
            r.data["command"] = "iso";
            const PIdentification pid = identify(load_model(iso_a), load_model(iso_b));
            auto solution_for = [&](const TwistedModel& m, const std::string& path) {
                return path.empty() ? greedy_extend(m, Solution{}, 0, all_atoms(m.universe()), &rng)
                                    : load_solution(m, path);
            };
            const Solution fa = solution_for(pid.source, iso_fa);
            const Solution fb = solution_for(pid.target, iso_fb);
            IsoOptions o;
            o.samples = samples;
            o.exhaustive_bound = bound;
            o.seed = g.seed;
            const IsoReport rep = verify_iso(build_iso(pid, fa, fb), o);
            json checks = json::array();
            for (const IsoCheck& c : rep.checks) {
                checks.push_back({{"predicate", c.predicate},
                                  {"ok", c.ok},
                                  {"mode", mode_name(c.mode)},
                                  {"points", c.points},
                                  {"witness", c.witness}});
                r.text << (c.ok ? "  pass " : "  FAIL ") << c.predicate << " (" << mode_name(c.mode) << ", "
                       << c.points << " points)";
                if (!c.ok)
                    r.text << ": " << c.witness;
                r.text << '\n';
            }
            r.data["checks"] = std::move(checks);
            r.data["ok"] = rep.ok();
            r.data["exhaustive"] = rep.exhaustive();
            r.text << (rep.ok() ? "the map is an isomorphism over P" : "the map is NOT an isomorphism") << '\n';
            code = rep.ok() ? 0 : 1;
        } else if (pull->parsed()) {
            r.data["command"] = "pull-back";
            const TwistedModel source = load_model(pb_source);
            const TwistedModel target = load_model(pb_target);
            const Solution ft = load_solution(target, pb_solution);
            const Embedding e = Embedding::inclusion(source, target);
            const Solution fs = pull_back(e, ft);
            code = report_solution(r, source, fs, all_atoms(source.universe()), "pulled-back solution");
            if (code == 0)
                emit(r, "solution", pb_out, print_solution(source, fs));
        } else if (ext_model->parsed()) {
            r.data["command"] = "extend-model";
            const TwistedModel m = load_model(em_model);
            std::vector<HElem> anchor = base_anchor(m);
            if (em_anchor == "random")
                for (FaceId u = 0; u < anchor.size(); ++u)
                    anchor[u] = random_h(m, u, rng);
            const auto [n, e] = extend_model(m, em_new, anchor);
            r.data["anchor"] = em_anchor;
            code = finish_model(r, n, em_out);
            if (em_check)
                code = report_axioms(r, check_axioms(n, axiom_options(samples, bound, g.seed)));
        } else if (inv->parsed()) {
            r.data["command"] = "invariant";
            const TwistedModel m = load_model(inv_model);
            const Universe& u = m.universe();
            const AnchorFamily f = anchors_from(m, inv_anchors);
            if (!inv_chain.empty()) {
                if (inv_chain.size() < 2)
                    throw PreconditionError("--chain needs k + 1 atoms");
                std::vector<AtomId> tail(inv_chain.begin() + 1, inv_chain.end());
                for (AtomId a : inv_chain)
                    if (!u.has_atom(a))
                        throw PreconditionError("atom " + std::to_string(a) + " is not in the model");
                const auto h_face = u.face_by_mask(u.mask_of(tail));
                if (!h_face)
                    throw PreconditionError("--chain needs k + 1 distinct atoms");
                HElem y = m.base_h(*h_face);
                if (!inv_y.empty()) {
                    if (inv_y.size() != u.levels())
                        throw PreconditionError("--y needs a bitstring of length L = " + std::to_string(u.levels()));
                    y.vec = Gf2Vec::from_string(inv_y, u.level_family());
                }
                const CutoffCoset c = invariant_k(m, inv_chain, f, y);
                r.data["coset"] = c.rep().to_string();
                r.text << "invariant: " << c.rep().to_string() << " + E_" << u.cutoff() << '\n';
            } else if (depth_opt->count() > 0) {
                const InvariantClass c = invariant_m(m, inv_depth, inv_base, inv_tail, f, Thresholds(inv_th));
                r.data["class"] = class_json(c);
                r.text << inv_depth << "-invariant: " << c.to_string() << '\n';
            } else {
                throw PreconditionError("give --chain or --depth");
            }
            r.data["ok"] = true;
        } else if (demo->parsed()) {
            r.data["command"] = "demo-recovery";
            const Thresholds th(dr_th);
            const MAInstance inst = build_MA(dr_k, th, dr_grid, parse_codes(read_text_file(dr_codes)));
            const Universe& u = inst.model.universe();
            r.text << "model: " << universe_line(u) << '\n';
            r.data["universe"] = universe_json(u);
            const ClaimReport claim = check_claim(inst);
            r.data["claim"] = {{"ok", claim.ok}, {"checked", claim.checked}, {"witness", claim.witness}};
            r.text << "claim: " << (claim.ok ? "holds" : "FAILS") << " on " << claim.checked << " chains";
            if (!claim.ok)
                r.text << ": " << claim.witness;
            r.text << '\n';

            std::size_t support = dr_support;
            if (support == 0)
                support = std::max<std::size_t>(1, (dr_grid - 1) / (2 * std::max<std::size_t>(dr_budget, 1)));
            auto run_one = [&](const Adversary& adv, const std::string& label, bool detail) {
                const RecoveryReport rep = recover_codes(inst, adv);
                json votes = json::array();
                for (const ColumnVote& v : rep.votes) {
                    votes.push_back({{"code", u.labels().at(inst.code_atoms[v.code])},
                                     {"alpha", v.alpha},
                                     {"winner", v.winner ? v.winner->to_string() : std::string{}},
                                     {"votes", v.votes},
                                     {"agreeing", v.agreeing},
                                     {"tie", v.tie}});
                    if (detail)
                        r.text << "    " << u.labels().at(inst.code_atoms[v.code]) << " alpha " << v.alpha << ": "
                               << v.votes << "/" << inst.grid << " votes, " << v.agreeing << " agreeing"
                               << (v.tie ? ", tie" : "") << '\n';
                }
                json recovered = json::array();
                for (const auto& m : rep.matched)
                    recovered.push_back(m ? inst.codes.codes[*m].name : std::string{});
                r.text << label << ": " << adv.pairs << " moved pairs, support " << adv.max_support << ", "
                       << (rep.within_budget ? "within budget" : "budget exceeded (recovery not guaranteed)") << ", "
                       << (rep.exact ? "recovered exactly" : "recovery failed: " + rep.failure) << '\n';
                return std::pair{rep, json{{"pairs", adv.pairs},
                                           {"support", adv.max_support},
                                           {"within_budget", rep.within_budget},
                                           {"exact", rep.exact},
                                           {"failure", rep.failure},
                                           {"recovered", std::move(recovered)},
                                           {"votes", std::move(votes)}}};
            };
            json trials = json::array();
            bool ok = claim.ok;
            for (std::size_t t = 0; t < dr_trials; ++t) {
                const Adversary adv = dr_budget == 0 ? Adversary{} : random_adversary(inst, dr_budget, support, rng);
                auto [rep, j] = run_one(adv, "adversary " + std::to_string(t), t == 0);
                if (rep.within_budget && !rep.exact)
                    ok = false;
                trials.push_back(std::move(j));
            }
            r.data["trials"] = std::move(trials);
            if (dr_boundary)
                r.data["boundary"] = run_one(boundary_adversary(inst), "boundary adversary", false).second;
            r.data["ok"] = ok;
            r.text << (ok ? "recovery demo passed" : "recovery demo FAILED") << '\n';
            code = ok ? 0 : 1;
        }
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    if (g.format == "machine")
        out << r.data.dump() << '\n';
    else
        out << r.text.str();
    return code;
}

}  // namespace ptor::cli
