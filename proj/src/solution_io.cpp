#include "ptor/solution_io.hpp"

#include <sstream>

namespace ptor {

std::string print_solution(const TwistedModel& m, const Solution& f)
{
    const Universe& u = m.universe();
    std::ostringstream out;
    for (const auto& [w, x] : f.h_part)
        out << "H " << u.face(w).to_string() << ' ' << x.vec.to_string() << '\n';
    for (const auto& [key, x] : f.g_part)
        out << "G " << key.first << ' ' << u.face(key.second).to_string() << ' '
            << x.offset.to_string() << '\n';
    return out.str();
}

Solution parse_solution(const TwistedModel& m, std::string_view text)
{
    const Universe& u = m.universe();
    auto face_of = [&u](std::string_view token, std::size_t line) {
        const auto f = u.face_id(Face{parse_atom_list(token, line)});
        if (!f || u.face(*f).to_string() != token)
            throw ParseError(line, "'" + std::string(token) + "' is not a sorted face of the model");
        return *f;
    };

    Solution f;
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
        if (tok[0] == "H") {
            if (tok.size() != 3)
                throw ParseError(line_no, "expected 'H <face> <bits>'");
            HElem x{face_of(tok[1], line_no), parse_bits(tok[2], u.levels(), u.level_family(), line_no)};
            if (!m.valid_h(x))
                throw ParseError(line_no, "vector is not in the coset assigned to face {" +
                                              std::string(tok[1]) + "}");
            if (f.h(x.face))
                throw ParseError(line_no, "face {" + std::string(tok[1]) + "} given twice");
            f.set(std::move(x));
        } else if (tok[0] == "G") {
            if (tok.size() != 4)
                throw ParseError(line_no, "expected 'G <level> <face> <bits>'");
            const std::size_t l = parse_count(tok[1], line_no, "level");
            if (l >= u.levels())
                throw ParseError(line_no, "level out of range");
            GElem x{static_cast<Level>(l), face_of(tok[2], line_no),
                    parse_bits(tok[3], u.num_faces(), u.face_family(), line_no)};
            if (f.g(x.level, x.face))
                throw ParseError(line_no, "entry given twice");
            f.set(std::move(x));
        } else {
            throw ParseError(line_no, "unknown record '" + std::string(tok[0]) + "'");
        }
    }
    return f;
}

}  // namespace ptor
