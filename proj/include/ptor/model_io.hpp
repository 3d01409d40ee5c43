#pragma once

// Line-based text format for twisted models:
//
//   HSMODEL <k> <L> <c>
//   ATOMS <id>[:<label>] ...
//   G <face> <bitstring of length L>      one per face, canonical coset rep
//   T <cell> <face> <bitstring of length L>   nonzero parity twists only
//
// Faces and cells are comma-separated atom ids ("0,2"). Blank lines and
// lines starting with '#' are ignored. print_model emits faces and twist
// entries in lexicographic order, so parse followed by print is the identity
// on printed text.

#include "ptor/model.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ptor {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct ModelParseOptions {
    /// When false, twist keys whose face is not a face of the cell are kept
    /// (the model is built unchecked) so the axiom checker can report them.
    bool check_twist_keys = true;
};

std::string print_model(const TwistedModel& m);
TwistedModel parse_model(std::string_view text, ModelParseOptions opts = {});

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Helpers shared with the other text formats.
std::vector<std::string_view> split_ws(std::string_view line);
std::vector<AtomId> parse_atom_list(std::string_view token, std::size_t line);
std::size_t parse_count(std::string_view token, std::size_t line, const char* what);
Gf2Vec parse_bits(std::string_view token, std::size_t width, FamilyTag family, std::size_t line);

}  // namespace ptor
