#include "ptor/model_io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace ptor {

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::size_t parse_count(std::string_view token, std::size_t line, const char* what)
{
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || end != token.data() + token.size())
        throw ParseError(line, std::string("expected a non-negative integer for ") + what + ", got '" +
                                   std::string(token) + "'");
    return value;
}

std::vector<AtomId> parse_atom_list(std::string_view token, std::size_t line)
{
    std::vector<AtomId> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = token.find(',', start);
        const auto piece = token.substr(start, comma == std::string_view::npos ? comma : comma - start);
        const std::size_t v = parse_count(piece, line, "atom id");
        if (v > UINT32_MAX)
            throw ParseError(line, "atom id out of range");
        out.push_back(static_cast<AtomId>(v));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

Gf2Vec parse_bits(std::string_view token, std::size_t width, FamilyTag family, std::size_t line)
{
    if (token.size() != width)
        throw ParseError(line, "bitstring '" + std::string(token) + "' should have length " +
                                   std::to_string(width));
    try {
        return Gf2Vec::from_string(token, family);
    } catch (const std::invalid_argument& e) {
        throw ParseError(line, e.what());
    }
}

std::string print_model(const TwistedModel& m)
{
    const Universe& u = m.universe();
    std::ostringstream out;
    out << "HSMODEL " << u.k() << ' ' << u.levels() << ' ' << u.cutoff() << '\n';
    out << "ATOMS";
    for (AtomId a : u.atoms()) {
        out << ' ' << a;
        if (auto it = u.labels().find(a); it != u.labels().end())
            out << ':' << it->second;
    }
    out << '\n';
    for (FaceId f = 0; f < u.num_faces(); ++f)
        out << "G " << u.face(f).to_string() << ' ' << m.h_twist(f).rep().to_string() << '\n';
    // Cell ids and face ids follow lexicographic order, so map order is
    // lexicographic on (cell, face).
    for (const auto& [key, vec] : m.q_twist())
        out << "T " << u.cell(key.first).to_string() << ' ' << u.face(key.second).to_string() << ' '
            << vec.to_string() << '\n';
    return out.str();
}

TwistedModel parse_model(std::string_view text, ModelParseOptions opts)
{
    std::optional<Universe> universe;
    unsigned k = 0, levels = 0, cutoff = 0;
    bool have_header = false;
    std::vector<std::optional<CutoffCoset>> h_twist;
    TwistTable tau;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto tok = split_ws(line);
        if (tok.empty() || tok[0].front() == '#')
            continue;

        if (!have_header) {
            if (tok[0] != "HSMODEL" || tok.size() != 4)
                throw ParseError(line_no, "expected header 'HSMODEL k L c'");
            k = static_cast<unsigned>(parse_count(tok[1], line_no, "k"));
            levels = static_cast<unsigned>(parse_count(tok[2], line_no, "L"));
            cutoff = static_cast<unsigned>(parse_count(tok[3], line_no, "c"));
            have_header = true;
            continue;
        }
        if (!universe) {
            if (tok[0] != "ATOMS")
                throw ParseError(line_no, "expected 'ATOMS' line after the header");
            std::vector<AtomId> atoms;
            std::map<AtomId, std::string> labels;
            for (std::size_t i = 1; i < tok.size(); ++i) {
                const auto colon = tok[i].find(':');
                const auto id = parse_count(tok[i].substr(0, colon), line_no, "atom id");
                atoms.push_back(static_cast<AtomId>(id));
                if (colon != std::string_view::npos)
                    labels.emplace(static_cast<AtomId>(id), std::string(tok[i].substr(colon + 1)));
            }
            try {
                universe.emplace(std::move(atoms), k, levels, cutoff, std::move(labels));
            } catch (const std::invalid_argument& e) {
                throw ParseError(line_no, e.what());
            }
            h_twist.assign(universe->num_faces(), std::nullopt);
            continue;
        }

        const Universe& u = *universe;
        if (tok[0] == "G") {
            if (tok.size() != 3)
                throw ParseError(line_no, "expected 'G <face> <bits>'");
            const auto f = u.face_id(Face{parse_atom_list(tok[1], line_no)});
            if (!f || u.face(*f).to_string() != tok[1])
                throw ParseError(line_no, "'" + std::string(tok[1]) + "' is not a sorted face of the universe");
            if (h_twist[*f])
                throw ParseError(line_no, "face {" + std::string(tok[1]) + "} assigned twice");
            const Gf2Vec rep = parse_bits(tok[2], u.levels(), u.level_family(), line_no);
            CutoffCoset coset(rep, u.cutoff());
            if (!(coset.rep() == rep))
                throw ParseError(line_no, "coset representative must be zero below the cutoff");
            h_twist[*f] = std::move(coset);
        } else if (tok[0] == "T") {
            if (tok.size() != 4)
                throw ParseError(line_no, "expected 'T <cell> <face> <bits>'");
            const auto c = u.cell_id(Cell{parse_atom_list(tok[1], line_no)});
            if (!c || u.cell(*c).to_string() != tok[1])
                throw ParseError(line_no, "'" + std::string(tok[1]) + "' is not a sorted cell of the universe");
            const auto f = u.face_id(Face{parse_atom_list(tok[2], line_no)});
            if (!f || u.face(*f).to_string() != tok[2])
                throw ParseError(line_no, "'" + std::string(tok[2]) + "' is not a sorted face of the universe");
            Gf2Vec vec = parse_bits(tok[3], u.levels(), u.level_family(), line_no);
            if (vec.none())
                throw ParseError(line_no, "zero twist entries are omitted from the format");
            if (!tau.emplace(TwistKey{*c, *f}, std::move(vec)).second)
                throw ParseError(line_no, "twist entry given twice");
        } else {
            throw ParseError(line_no, "unknown record '" + std::string(tok[0]) + "'");
        }
    }
    if (!have_header)
        throw ParseError(line_no, "missing 'HSMODEL' header");
    if (!universe)
        throw ParseError(line_no, "missing 'ATOMS' line");

    std::vector<CutoffCoset> cosets;
    cosets.reserve(h_twist.size());
    for (FaceId f = 0; f < h_twist.size(); ++f) {
        if (!h_twist[f])
            throw ParseError(line_no, "no 'G' line for face {" + universe->face(f).to_string() + "}");
        cosets.push_back(std::move(*h_twist[f]));
    }
    try {
        if (opts.check_twist_keys)
            return TwistedModel(std::move(*universe), std::move(cosets), std::move(tau));
        return TwistedModel::unchecked(std::move(*universe), std::move(cosets), std::move(tau));
    } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out)
        throw std::runtime_error("error writing " + path.string());
}

}  // namespace ptor
