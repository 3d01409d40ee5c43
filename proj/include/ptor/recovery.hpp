#pragma once

// A model that stores a set of codes in its h-twists, and the experiment
// that reads them back through (k-2)-invariants by majority over a grid of
// pair atoms, against an adversary that moves some code-side anchors.
//
// Atom layout for k, thresholds t and grid side S:
//   band j (j = 0..k-2): t_j atoms, consecutive, starting at t_0 + ... + t_{j-1}
//   pair (alpha, beta):  one atom each, numbered alpha * S + beta after the bands
//   code atoms:          one per code, in file order
// The face {a, (alpha, beta), i_{k-2}, ..., i_1} with i_j in band j carries
// the coset a(alpha)(i_{k-2})...(i_1); every other face carries the zero coset.

#include "ptor/invar.hpp"
#include "ptor/sampling.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ptor {

/// An element of B_m: a bitstring over the levels (m = 0) or one entry per
/// atom of band m (m > 0).
struct CodeTree {
    Gf2Vec bits;
    std::vector<CodeTree> items;

    bool is_leaf() const noexcept { return items.empty(); }
    std::size_t depth() const noexcept { return items.empty() ? 0 : 1 + items.front().depth(); }

    friend bool operator==(const CodeTree&, const CodeTree&) = default;
};

/// A function alpha -> B_{k-2}, one column per alpha.
struct Code {
    std::string name;
    std::vector<CodeTree> columns;

    friend bool operator==(const Code&, const Code&) = default;
};

// Codes file:
//
//   # comment
//   levels <L>
//   cutoff <c>
//   code <name> <literal> ...      one literal per alpha
//
// A B_0 literal is a bitstring of length L (character l is level l); a B_m
// literal is "[" followed by one B_{m-1} literal per band atom and "]".
// Names are non-empty and free of whitespace, brackets, ',' and ':'.
struct CodeSet {
    unsigned levels = 0;
    unsigned cutoff = 0;
    std::vector<Code> codes;

    friend bool operator==(const CodeSet&, const CodeSet&) = default;
};

CodeSet parse_codes(std::string_view text);
std::string print_codes(const CodeSet& codes);
std::string print_code_tree(const CodeTree& t);

struct MAInstance {
    TwistedModel model;
    Thresholds th;
    std::size_t grid = 0;
    CodeSet codes;
    std::vector<std::vector<AtomId>> bands;
    std::vector<AtomId> code_atoms;
    /// The all-zero anchor family.
    AnchorFamily reference;

    unsigned k() const noexcept { return model.universe().k(); }
    AtomId pair_atom(std::size_t alpha, std::size_t beta) const;
    AtomMask band_mask() const;
    AtomMask pair_mask() const;
    AtomMask code_mask() const;
    /// The prefix I_m: bands 0..m.
    std::vector<AtomId> prefix(std::size_t m) const;
    /// The class the (k-2)-invariant of a column should have: B_0 becomes a
    /// constant node over band 0, B_m a node over band m.
    InvariantClass expected_class(const CodeTree& t) const;
    /// expected_class of a subtree at depth m.
    InvariantClass expected_class(const CodeTree& t, std::size_t m) const;
};

/// Checks the shapes (k - 1 thresholds at least, S columns per code, list
/// lengths t_m, bitstrings of length L, at most 64 atoms) and that no two
/// codes have equivalent classes in every column. Throws PreconditionError.
MAInstance build_MA(unsigned k, const Thresholds& th, std::size_t grid, const CodeSet& codes);

/// Random codes with the given shape, pairwise non-equivalent.
CodeSet random_codes(unsigned k, const Thresholds& th, std::size_t grid, std::size_t count, unsigned levels,
                     unsigned cutoff, Rng& rng);

struct ClaimReport {
    bool ok = true;
    std::size_t checked = 0;
    std::string witness;
};

/// For every depth m <= k - 2, code, alpha, beta and tuple i_{m+1..k-2} in
/// bands m+1..k-2: the m-invariant for base I_m and tail
/// (i_{m+1}, ..., i_{k-2}, (alpha, beta), a) via the reference anchors equals
/// the expected class of a(alpha)(i_{k-2})...(i_{m+1}) exactly.
ClaimReport check_claim(const MAInstance& inst);

/// Moves of code-side anchors: (level, face) -> offset at faces inside the
/// bands and code atoms that hold a code atom.
struct Adversary {
    AnchorFamily moves;
    /// Number of moved (level, face) pairs.
    std::size_t pairs = 0;
    /// Largest number of set bits in a moved offset.
    std::size_t max_support = 0;
};

/// Recovery is guaranteed when 2 * pairs * max_support < S.
bool within_budget(const Adversary& adv, std::size_t grid) noexcept;

/// One moved pair (pairs = 1 .. budget) per draw at a level at or above the
/// cutoff, each with support 1 .. max_support on the h-faces the pair is read
/// against.
Adversary random_adversary(const MAInstance& inst, std::size_t pairs, std::size_t max_support, Rng& rng);

/// Moves every band tuple of every code atom with support on the first
/// ceil(S / 2) columns of alpha = 0, which ties the vote.
Adversary boundary_adversary(const MAInstance& inst);

struct ColumnVote {
    std::size_t code = 0;
    std::size_t alpha = 0;
    /// The winning class, when one class has more than S / 2 votes.
    std::optional<InvariantClass> winner;
    std::size_t votes = 0;
    /// Columns equivalent to the winner, or to the first column with no winner.
    std::size_t agreeing = 0;
    bool tie = false;
};

struct RecoveryReport {
    bool within_budget = true;
    std::vector<ColumnVote> votes;
    /// For each code atom, the index of the code its recovered columns match,
    /// when exactly one code does.
    std::vector<std::optional<std::size_t>> matched;
    /// The recovered code set equals the input set.
    bool exact = false;
    std::string failure;
};

/// Votes on identical computed classes; the winner of each (code atom, alpha)
/// is then compared with the codes by threshold equality.
RecoveryReport recover_codes(const MAInstance& inst, const Adversary& adv);

}  // namespace ptor
