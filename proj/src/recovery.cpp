#include "ptor/recovery.hpp"

#include "ptor/model_io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ptor {

namespace {

// Whitespace separates tokens; brackets are tokens of their own.
std::vector<std::string_view> code_tokens(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char ch = line[i];
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            ++i;
        } else if (ch == '[' || ch == ']') {
            out.push_back(line.substr(i, 1));
            ++i;
        } else {
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '[' &&
                   line[j] != ']')
                ++j;
            out.push_back(line.substr(i, j - i));
            i = j;
        }
    }
    return out;
}

CodeTree parse_tree(const std::vector<std::string_view>& tok, std::size_t& pos, unsigned levels, std::size_t line)
{
    if (pos >= tok.size())
        throw ParseError(line, "unexpected end of code literal");
    if (tok[pos] == "]")
        throw ParseError(line, "unexpected ']'");
    if (tok[pos] != "[")
        return CodeTree{parse_bits(tok[pos++], levels, {}, line), {}};
    ++pos;
    CodeTree t;
    while (pos < tok.size() && tok[pos] != "]")
        t.items.push_back(parse_tree(tok, pos, levels, line));
    if (pos >= tok.size())
        throw ParseError(line, "missing ']'");
    ++pos;
    if (t.items.empty())
        throw ParseError(line, "empty list literal");
    for (const CodeTree& item : t.items)
        if (item.depth() != t.items.front().depth())
            throw ParseError(line, "list literal mixes depths");
    return t;
}

bool valid_name(std::string_view name)
{
    return !name.empty() && name.find_first_of(",:[]# \t") == std::string_view::npos;
}

Gf2Vec level_bits(const Universe& u, const Gf2Vec& bits)
{
    Gf2Vec v = u.zero_levels();
    for (std::size_t l = 0; l < bits.size(); ++l)
        if (bits.test(l))
            v.set(l);
    return v;
}

InvariantClass tree_class(const Universe& u, const std::vector<std::vector<AtomId>>& bands, const CodeTree& t,
                          std::size_t m)
{
    std::map<AtomId, InvariantClass> children;
    if (m == 0) {
        const InvariantClass leaf = InvariantClass::leaf(CutoffCoset(level_bits(u, t.bits), u.cutoff()));
        for (AtomId a : bands[0])
            children.emplace(a, leaf);
    } else {
        for (std::size_t i = 0; i < bands[m].size(); ++i)
            children.emplace(bands[m][i], tree_class(u, bands, t.items[i], m - 1));
    }
    return InvariantClass::node(m, std::move(children));
}

void check_tree(const CodeTree& t, std::size_t m, const Thresholds& th, unsigned levels, const std::string& where)
{
    if (m == 0) {
        if (!t.is_leaf() || t.bits.size() != levels)
            throw PreconditionError(where + ": expected a bitstring of length " + std::to_string(levels));
        return;
    }
    if (t.items.size() != th[m])
        throw PreconditionError(where + ": expected a list of t_" + std::to_string(m) + " = " +
                                std::to_string(th[m]) + " entries");
    for (const CodeTree& item : t.items)
        check_tree(item, m - 1, th, levels, where);
}

std::vector<std::vector<AtomId>> band_layout(unsigned k, const Thresholds& th)
{
    std::vector<std::vector<AtomId>> bands(k - 1);
    AtomId next = 0;
    for (std::size_t j = 0; j + 1 < k; ++j)
        for (std::size_t i = 0; i < th[j]; ++i)
            bands[j].push_back(next++);
    return bands;
}

// Calls fn(indices) for every tuple with indices[j] < sizes[j].
template <class Fn>
void for_each_tuple(const std::vector<std::size_t>& sizes, Fn&& fn)
{
    std::vector<std::size_t> idx(sizes.size(), 0);
    for (std::size_t s : sizes)
        if (s == 0)
            return;
    while (true) {
        fn(idx);
        std::size_t j = 0;
        while (j < idx.size() && ++idx[j] == sizes[j])
            idx[j++] = 0;
        if (j == idx.size())
            return;
    }
}

const CodeTree& subtree(const CodeTree& column, const std::vector<std::size_t>& idx, std::size_t first)
{
    // idx[j] indexes band j + 1; descend from band k - 2 down to band first + 1.
    const CodeTree* t = &column;
    for (std::size_t j = idx.size(); j-- > first;)
        t = &t->items[idx[j]];
    return *t;
}

bool codes_equivalent(const Universe& u, const std::vector<std::vector<AtomId>>& bands, const Thresholds& th,
                      const Code& a, const Code& b)
{
    const std::size_t top = bands.size() - 1;
    for (std::size_t alpha = 0; alpha < a.columns.size(); ++alpha)
        if (!equivalent(tree_class(u, bands, a.columns[alpha], top), tree_class(u, bands, b.columns[alpha], top), th))
            return false;
    return true;
}

CodeTree random_tree(std::size_t m, const Thresholds& th, unsigned levels, unsigned cutoff, Rng& rng)
{
    CodeTree t;
    if (m == 0) {
        t.bits = Gf2Vec(levels);
        for (unsigned l = cutoff; l < levels; ++l)
            if (rng.coin())
                t.bits.set(l);
        return t;
    }
    for (std::size_t i = 0; i < th[m]; ++i)
        t.items.push_back(random_tree(m - 1, th, levels, cutoff, rng));
    return t;
}

}  // namespace

CodeSet parse_codes(std::string_view text)
{
    CodeSet out;
    bool have_levels = false, have_cutoff = false;
    std::set<std::string> names;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const std::size_t nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        const auto tok = code_tokens(line);
        if (tok.empty() || tok[0].front() == '#')
            continue;
        if (tok[0] == "levels" || tok[0] == "cutoff") {
            if (tok.size() != 2)
                throw ParseError(line_no, std::string(tok[0]) + " takes one value");
            if (!out.codes.empty())
                throw ParseError(line_no, std::string(tok[0]) + " must precede the codes");
            const auto v = static_cast<unsigned>(parse_count(tok[1], line_no, tok[0] == "levels" ? "levels" : "cutoff"));
            bool& seen = tok[0] == "levels" ? have_levels : have_cutoff;
            if (seen)
                throw ParseError(line_no, "repeated " + std::string(tok[0]));
            seen = true;
            (tok[0] == "levels" ? out.levels : out.cutoff) = v;
            continue;
        }
        if (tok[0] != "code")
            throw ParseError(line_no, "unknown directive '" + std::string(tok[0]) + "'");
        if (!have_levels || !have_cutoff)
            throw ParseError(line_no, "levels and cutoff must precede the codes");
        if (out.cutoff == 0 || out.cutoff > out.levels)
            throw ParseError(line_no, "need 0 < cutoff <= levels");
        if (tok.size() < 3)
            throw ParseError(line_no, "code needs a name and at least one literal");
        if (!valid_name(tok[1]))
            throw ParseError(line_no, "bad code name '" + std::string(tok[1]) + "'");
        if (!names.insert(std::string(tok[1])).second)
            throw ParseError(line_no, "repeated code name '" + std::string(tok[1]) + "'");
        Code code{std::string(tok[1]), {}};
        std::size_t pos = 2;
        while (pos < tok.size())
            code.columns.push_back(parse_tree(tok, pos, out.levels, line_no));
        for (const CodeTree& c : code.columns)
            if (c.depth() != code.columns.front().depth())
                throw ParseError(line_no, "columns of code '" + code.name + "' have different depths");
        out.codes.push_back(std::move(code));
    }
    if (!have_levels || !have_cutoff)
        throw ParseError(line_no, "missing levels or cutoff");
    return out;
}

std::string print_code_tree(const CodeTree& t)
{
    if (t.is_leaf())
        return t.bits.to_string();
    std::string s = "[";
    for (std::size_t i = 0; i < t.items.size(); ++i) {
        if (i)
            s += ' ';
        s += print_code_tree(t.items[i]);
    }
    return s + "]";
}

std::string print_codes(const CodeSet& codes)
{
    std::ostringstream out;
    out << "levels " << codes.levels << "\ncutoff " << codes.cutoff << '\n';
    for (const Code& c : codes.codes) {
        out << "code " << c.name;
        for (const CodeTree& t : c.columns)
            out << ' ' << print_code_tree(t);
        out << '\n';
    }
    return out.str();
}

AtomId MAInstance::pair_atom(std::size_t alpha, std::size_t beta) const
{
    if (alpha >= grid || beta >= grid)
        throw std::out_of_range("pair_atom: outside the grid");
    return static_cast<AtomId>(nested_size(th, k() - 2) + alpha * grid + beta);
}

AtomMask MAInstance::band_mask() const
{
    return (AtomMask{1} << nested_size(th, k() - 2)) - 1;
}

AtomMask MAInstance::pair_mask() const
{
    const std::size_t n = grid * grid;
    return ((n >= 64 ? ~AtomMask{0} : (AtomMask{1} << n) - 1)) << nested_size(th, k() - 2);
}

AtomMask MAInstance::code_mask() const
{
    return model.universe().mask_of(code_atoms);
}

std::vector<AtomId> MAInstance::prefix(std::size_t m) const
{
    std::vector<AtomId> out;
    for (std::size_t j = 0; j <= m; ++j)
        out.insert(out.end(), bands[j].begin(), bands[j].end());
    return out;
}

InvariantClass MAInstance::expected_class(const CodeTree& t) const
{
    return expected_class(t, k() - 2);
}

InvariantClass MAInstance::expected_class(const CodeTree& t, std::size_t m) const
{
    return tree_class(model.universe(), bands, t, m);
}

MAInstance build_MA(unsigned k, const Thresholds& th, std::size_t grid, const CodeSet& codes)
{
    if (k < 2)
        throw PreconditionError("build_MA: k must be at least 2");
    if (th.size() + 1 < k)
        throw PreconditionError("build_MA: need at least k - 1 = " + std::to_string(k - 1) + " thresholds");
    if (grid == 0)
        throw PreconditionError("build_MA: the grid must be non-empty");
    if (codes.codes.empty())
        throw PreconditionError("build_MA: no codes");
    if (codes.cutoff == 0 || codes.cutoff > codes.levels)
        throw PreconditionError("build_MA: need 0 < cutoff <= levels");
    const std::size_t n_bands = nested_size(th, k - 2);
    const std::size_t n = n_bands + grid * grid + codes.codes.size();
    if (n > max_atoms)
        throw PreconditionError("build_MA: " + std::to_string(n) + " atoms exceed the limit of " +
                                std::to_string(max_atoms));
    for (const Code& c : codes.codes) {
        if (!valid_name(c.name))
            throw PreconditionError("build_MA: bad code name '" + c.name + "'");
        if (c.columns.size() != grid)
            throw PreconditionError("build_MA: code '" + c.name + "' has " + std::to_string(c.columns.size()) +
                                    " columns, expected " + std::to_string(grid));
        for (std::size_t alpha = 0; alpha < grid; ++alpha)
            check_tree(c.columns[alpha], k - 2, th, codes.levels,
                       "build_MA: code '" + c.name + "' column " + std::to_string(alpha));
    }

    const auto bands = band_layout(k, th);
    std::vector<AtomId> atoms(n);
    std::map<AtomId, std::string> labels;
    for (AtomId a = 0; a < n; ++a)
        atoms[a] = a;
    for (std::size_t j = 0; j < bands.size(); ++j)
        for (std::size_t i = 0; i < bands[j].size(); ++i)
            labels[bands[j][i]] = "b" + std::to_string(j) + "_" + std::to_string(i);
    for (std::size_t alpha = 0; alpha < grid; ++alpha)
        for (std::size_t beta = 0; beta < grid; ++beta)
            labels[static_cast<AtomId>(n_bands + alpha * grid + beta)] =
                "p" + std::to_string(alpha) + "_" + std::to_string(beta);
    std::vector<AtomId> code_atoms;
    for (std::size_t c = 0; c < codes.codes.size(); ++c) {
        code_atoms.push_back(static_cast<AtomId>(n_bands + grid * grid + c));
        labels[code_atoms.back()] = codes.codes[c].name;
    }
    const Universe u(atoms, k, codes.levels, codes.cutoff, labels);

    for (std::size_t a = 0; a < codes.codes.size(); ++a)
        for (std::size_t b = a + 1; b < codes.codes.size(); ++b)
            if (codes_equivalent(u, bands, th, codes.codes[a], codes.codes[b]))
                throw PreconditionError("build_MA: codes '" + codes.codes[a].name + "' and '" +
                                        codes.codes[b].name + "' are equivalent in every column");

    std::vector<CutoffCoset> g(u.num_faces(), u.zero_coset());
    std::vector<std::size_t> sizes;
    for (std::size_t j = 1; j < bands.size(); ++j)
        sizes.push_back(bands[j].size());
    for (std::size_t c = 0; c < codes.codes.size(); ++c)
        for (std::size_t alpha = 0; alpha < grid; ++alpha)
            for (std::size_t beta = 0; beta < grid; ++beta)
                for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
                    AtomMask face = (AtomMask{1} << code_atoms[c]) |
                                    (AtomMask{1} << (n_bands + alpha * grid + beta));
                    for (std::size_t j = 0; j < idx.size(); ++j)
                        face |= AtomMask{1} << bands[j + 1][idx[j]];
                    const CodeTree& leaf = subtree(codes.codes[c].columns[alpha], idx, 0);
                    g[*u.face_by_mask(face)] = CutoffCoset(level_bits(u, leaf.bits), u.cutoff());
                });

    MAInstance inst{canonical_model(u, std::move(g)), th, grid, codes, bands, code_atoms, AnchorFamily::zero(u)};
    return inst;
}

CodeSet random_codes(unsigned k, const Thresholds& th, std::size_t grid, std::size_t count, unsigned levels,
                     unsigned cutoff, Rng& rng)
{
    if (k < 2 || th.size() + 1 < k)
        throw PreconditionError("random_codes: need k >= 2 and k - 1 thresholds");
    const auto bands = band_layout(k, th);
    const Universe u = Universe::range(std::max<std::size_t>(nested_size(th, k - 2), k + 1), k, levels, cutoff);
    CodeSet out{levels, cutoff, {}};
    for (std::size_t c = 0; c < count; ++c) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == 1000)
                throw PreconditionError("random_codes: could not draw " + std::to_string(count) +
                                        " pairwise non-equivalent codes");
            Code code{"c" + std::to_string(c), {}};
            for (std::size_t alpha = 0; alpha < grid; ++alpha)
                code.columns.push_back(random_tree(k - 2, th, levels, cutoff, rng));
            if (std::ranges::none_of(out.codes,
                                     [&](const Code& other) { return codes_equivalent(u, bands, th, code, other); })) {
                out.codes.push_back(std::move(code));
                break;
            }
        }
    }
    return out;
}

ClaimReport check_claim(const MAInstance& inst)
{
    ClaimReport report;
    const unsigned k = inst.k();
    const Universe& u = inst.model.universe();
    for (std::size_t m = 0; m + 2 <= k; ++m) {
        const std::vector<AtomId> base = inst.prefix(m);
        // Tuples over bands m+1..k-2; idx[j] indexes band m + 1 + j.
        std::vector<std::size_t> sizes;
        for (std::size_t j = m + 1; j + 2 <= k; ++j)
            sizes.push_back(inst.bands[j].size());
        for (std::size_t c = 0; c < inst.code_atoms.size(); ++c)
            for (std::size_t alpha = 0; alpha < inst.grid; ++alpha)
                for (std::size_t beta = 0; beta < inst.grid; ++beta)
                    for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
                        if (!report.ok)
                            return;
                        std::vector<AtomId> tail;
                        for (std::size_t j = 0; j < idx.size(); ++j)
                            tail.push_back(inst.bands[m + 1 + j][idx[j]]);
                        tail.push_back(inst.pair_atom(alpha, beta));
                        tail.push_back(inst.code_atoms[c]);
                        const CodeTree* t = &inst.codes.codes[c].columns[alpha];
                        for (std::size_t j = idx.size(); j-- > 0;)
                            t = &t->items[idx[j]];
                        const InvariantClass got = invariant_m(inst.model, m, base, tail, inst.reference, inst.th);
                        const InvariantClass want = inst.expected_class(*t, m);
                        ++report.checked;
                        if (!(got == want)) {
                            std::string where;
                            for (AtomId a : tail)
                                where += (where.empty() ? "" : ",") + u.atom_name(a);
                            report.ok = false;
                            report.witness = "depth " + std::to_string(m) + ", tail (" + where + "): got " +
                                             got.to_string() + ", expected " + want.to_string();
                        }
                    });
    }
    return report;
}

bool within_budget(const Adversary& adv, std::size_t grid) noexcept
{
    return 2 * adv.pairs * adv.max_support < grid;
}

namespace {

Level attack_level(const Universe& u, Rng* rng)
{
    const Level lo = u.cutoff() < u.levels() ? u.cutoff() : 0;
    return rng ? static_cast<Level>(lo + rng->uniform_below(u.levels() - lo)) : lo;
}

// The face {i_0, ..., i_{k-2}, a} and the h-faces {i_1, ..., i_{k-2}, (alpha, beta), a}
// it is read against.
AtomMask moved_face(const MAInstance& inst, const std::vector<std::size_t>& tuple, std::size_t code)
{
    AtomMask face = AtomMask{1} << inst.code_atoms[code];
    for (std::size_t j = 0; j < tuple.size(); ++j)
        face |= AtomMask{1} << inst.bands[j][tuple[j]];
    return face;
}

FaceId read_face(const MAInstance& inst, const std::vector<std::size_t>& tuple, std::size_t code, std::size_t alpha,
                 std::size_t beta)
{
    AtomMask face = (AtomMask{1} << inst.code_atoms[code]) | (AtomMask{1} << inst.pair_atom(alpha, beta));
    for (std::size_t j = 1; j < tuple.size(); ++j)
        face |= AtomMask{1} << inst.bands[j][tuple[j]];
    return *inst.model.universe().face_by_mask(face);
}

std::vector<std::size_t> band_sizes(const MAInstance& inst)
{
    std::vector<std::size_t> sizes;
    for (const auto& b : inst.bands)
        sizes.push_back(b.size());
    return sizes;
}

}  // namespace

Adversary random_adversary(const MAInstance& inst, std::size_t pairs, std::size_t max_support, Rng& rng)
{
    const Universe& u = inst.model.universe();
    if (max_support == 0 || max_support > inst.grid * inst.grid)
        throw PreconditionError("random_adversary: support must be in 1 .. S^2");
    Adversary adv;
    std::set<std::pair<Level, FaceId>> used;
    const std::vector<std::size_t> sizes = band_sizes(inst);
    while (adv.pairs < pairs) {
        std::vector<std::size_t> tuple;
        for (std::size_t s : sizes)
            tuple.push_back(rng.uniform_below(s));
        const std::size_t code = rng.uniform_below(inst.code_atoms.size());
        const Level l = attack_level(u, &rng);
        const FaceId face = *u.face_by_mask(moved_face(inst, tuple, code));
        if (!used.insert({l, face}).second)
            continue;
        const std::size_t support = 1 + rng.uniform_below(max_support);
        Gf2Vec offset = u.zero_offset();
        for (std::size_t cell : rng.choose(inst.grid * inst.grid, support))
            offset.set(read_face(inst, tuple, code, cell / inst.grid, cell % inst.grid));
        adv.moves.set(l, face, std::move(offset));
        ++adv.pairs;
        adv.max_support = std::max(adv.max_support, support);
    }
    return adv;
}

Adversary boundary_adversary(const MAInstance& inst)
{
    const Universe& u = inst.model.universe();
    Adversary adv;
    const Level l = attack_level(u, nullptr);
    const std::size_t half = (inst.grid + 1) / 2;
    for (std::size_t code = 0; code < inst.code_atoms.size(); ++code)
        for_each_tuple(band_sizes(inst), [&](const std::vector<std::size_t>& tuple) {
            Gf2Vec offset = u.zero_offset();
            for (std::size_t beta = 0; beta < half; ++beta)
                offset.set(read_face(inst, tuple, code, 0, beta));
            adv.moves.set(l, *u.face_by_mask(moved_face(inst, tuple, code)), std::move(offset));
            ++adv.pairs;
        });
    adv.max_support = half;
    return adv;
}

RecoveryReport recover_codes(const MAInstance& inst, const Adversary& adv)
{
    const Universe& u = inst.model.universe();
    const unsigned k = inst.k();
    const AtomMask code_side = inst.band_mask() | inst.code_mask();
    for (const auto& [key, offset] : adv.moves.entries()) {
        const AtomMask face = key.second < u.num_faces() ? u.face_mask(key.second) : 0;
        if (key.first >= u.levels() || face == 0 || (face & ~code_side) != 0 || (face & inst.code_mask()) == 0 ||
            !inst.model.valid_ga(offset))
            throw PreconditionError("recover_codes: adversary moves a pair outside the code-side anchors");
    }
    if (!adv.moves.zero_regions().empty())
        throw PreconditionError("recover_codes: adversary may only hold explicit moves");

    AnchorFamily f;
    f.add_zero_region(inst.band_mask() | inst.pair_mask());
    AnchorFamily h = adv.moves;
    h.add_zero_region(code_side);
    const AnchorFamily anchors = f.united_with(u, h);

    RecoveryReport report;
    report.within_budget = within_budget(adv, inst.grid);
    const std::vector<AtomId> base = inst.prefix(k - 2);
    const std::size_t n_codes = inst.code_atoms.size();
    std::vector<std::vector<const InvariantClass*>> recovered(n_codes);
    for (std::size_t c = 0; c < n_codes; ++c) {
        for (std::size_t alpha = 0; alpha < inst.grid; ++alpha) {
            std::vector<InvariantClass> columns;
            for (std::size_t beta = 0; beta < inst.grid; ++beta)
                columns.push_back(invariant_m(inst.model, k - 2, base,
                                              {inst.pair_atom(alpha, beta), inst.code_atoms[c]}, anchors, inst.th));
            std::vector<std::pair<std::size_t, std::size_t>> tally;  // (first column, votes)
            for (std::size_t b = 0; b < columns.size(); ++b) {
                auto it = std::ranges::find_if(tally, [&](const auto& t) { return columns[t.first] == columns[b]; });
                if (it == tally.end())
                    tally.emplace_back(b, 1);
                else
                    ++it->second;
            }
            std::ranges::stable_sort(tally, std::greater<>{}, &std::pair<std::size_t, std::size_t>::second);
            ColumnVote vote{c, alpha, std::nullopt, tally.front().second, 0, false};
            vote.tie = tally.size() > 1 && tally[1].second == tally[0].second;
            if (2 * vote.votes > inst.grid)
                vote.winner = columns[tally.front().first];
            const InvariantClass& ref = vote.winner ? *vote.winner : columns.front();
            vote.agreeing = static_cast<std::size_t>(
                std::ranges::count_if(columns, [&](const InvariantClass& x) { return equivalent(x, ref, inst.th); }));
            if (!vote.winner && report.failure.empty())
                report.failure = std::string(vote.tie ? "tie" : "no majority") + " for code atom " +
                                 u.atom_name(inst.code_atoms[c]) + ", alpha " + std::to_string(alpha) + " (" +
                                 std::to_string(vote.votes) + " of " + std::to_string(inst.grid) + " votes)";
            report.votes.push_back(std::move(vote));
        }
    }
    for (std::size_t c = 0; c < n_codes; ++c)
        for (std::size_t alpha = 0; alpha < inst.grid; ++alpha) {
            const auto& w = report.votes[c * inst.grid + alpha].winner;
            recovered[c].push_back(w ? &*w : nullptr);
        }

    report.matched.assign(n_codes, std::nullopt);
    if (!report.failure.empty())
        return report;
    std::vector<std::vector<InvariantClass>> expected(n_codes);
    for (std::size_t d = 0; d < n_codes; ++d)
        for (const CodeTree& t : inst.codes.codes[d].columns)
            expected[d].push_back(inst.expected_class(t));
    std::vector<bool> taken(n_codes, false);
    for (std::size_t c = 0; c < n_codes; ++c) {
        std::vector<std::size_t> hits;
        for (std::size_t d = 0; d < n_codes; ++d) {
            bool all = true;
            for (std::size_t alpha = 0; alpha < inst.grid && all; ++alpha)
                all = equivalent(*recovered[c][alpha], expected[d][alpha], inst.th);
            if (all)
                hits.push_back(d);
        }
        const std::string name = u.atom_name(inst.code_atoms[c]);
        if (hits.size() != 1) {
            if (report.failure.empty())
                report.failure = "code atom " + name + " matches " + std::to_string(hits.size()) + " codes";
            continue;
        }
        report.matched[c] = hits.front();
        if (taken[hits.front()] && report.failure.empty())
            report.failure = "code '" + inst.codes.codes[hits.front()].name + "' is recovered twice";
        taken[hits.front()] = true;
    }
    report.exact = report.failure.empty();
    return report;
}

}  // namespace ptor
