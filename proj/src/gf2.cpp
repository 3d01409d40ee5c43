#include "ptor/gf2.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace ptor {

FamilyTag make_family_tag(std::string_view kind, std::span<const std::uint64_t> data)
{
    // FNV-1a over the kind string and the data words.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t byte) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    };
    for (char ch : kind)
        mix(static_cast<unsigned char>(ch));
    for (std::uint64_t w : data)
        for (int i = 0; i < 8; ++i)
            mix((w >> (8 * i)) & 0xffU);
    return FamilyTag{h == 0 ? 1 : h};
}

Gf2Vec::Gf2Vec(std::size_t width, FamilyTag family)
    : words_((width + word_bits - 1) / word_bits, Word{0}), width_(width), family_(family)
{
}

Gf2Vec Gf2Vec::from_string(std::string_view bits, FamilyTag family)
{
    Gf2Vec v(bits.size(), family);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            v.set(i);
        else if (bits[i] != '0')
            throw std::invalid_argument("bitstring may only contain '0' and '1'");
    }
    return v;
}

void Gf2Vec::reset() noexcept
{
    std::fill(words_.begin(), words_.end(), Word{0});
}

void Gf2Vec::set_word(std::size_t w, Word bits) noexcept
{
    words_[w] = bits;
    if (w + 1 == words_.size())
        clear_tail();
}

void Gf2Vec::clear_tail() noexcept
{
    const std::size_t used = width_ % word_bits;
    if (used != 0 && !words_.empty())
        words_.back() &= (Word{1} << used) - 1;
}

bool Gf2Vec::none() const noexcept
{
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
}

std::size_t Gf2Vec::count() const noexcept
{
    std::size_t n = 0;
    for (Word w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::size_t Gf2Vec::count_below(std::size_t limit) const noexcept
{
    limit = std::min(limit, width_);
    std::size_t n = 0;
    for (std::size_t w = 0; w * word_bits < limit; ++w) {
        Word bits = words_[w];
        const std::size_t hi = limit - w * word_bits;
        if (hi < word_bits)
            bits &= (Word{1} << hi) - 1;
        n += static_cast<std::size_t>(std::popcount(bits));
    }
    return n;
}

std::vector<std::size_t> Gf2Vec::support() const
{
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        Word bits = words_[w];
        while (bits != 0) {
            out.push_back(w * word_bits + static_cast<std::size_t>(std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

Gf2Vec& Gf2Vec::operator^=(const Gf2Vec& other)
{
    if (!compatible(other))
        throw std::invalid_argument("Gf2Vec: adding vectors over different index families");
    for (std::size_t w = 0; w < words_.size(); ++w)
        words_[w] ^= other.words_[w];
    return *this;
}

std::string Gf2Vec::to_string() const
{
    std::string s(width_, '0');
    for (std::size_t i = 0; i < width_; ++i)
        if (test(i))
            s[i] = '1';
    return s;
}

std::strong_ordering operator<=>(const Gf2Vec& a, const Gf2Vec& b) noexcept
{
    if (auto c = a.width_ <=> b.width_; c != 0)
        return c;
    if (auto c = a.family_ <=> b.family_; c != 0)
        return c;
    return std::lexicographical_compare_three_way(a.words_.begin(), a.words_.end(),
                                                  b.words_.begin(), b.words_.end());
}

Gf2Vec vec_add(const Gf2Vec& a, const Gf2Vec& b)
{
    return a + b;
}

namespace {

Gf2Vec clear_below(Gf2Vec v, std::size_t cutoff)
{
    for (std::size_t i = 0; i < cutoff && i < v.size(); ++i)
        v.set(i, false);
    return v;
}

}  // namespace

CutoffCoset::CutoffCoset(const Gf2Vec& member, std::size_t cutoff)
    : rep_(clear_below(member, cutoff)), cutoff_(cutoff)
{
    if (cutoff > member.size())
        throw std::invalid_argument("CutoffCoset: cutoff exceeds vector length");
}

CutoffCoset CutoffCoset::zero(std::size_t length, std::size_t cutoff, FamilyTag family)
{
    return CutoffCoset(Gf2Vec(length, family), cutoff);
}

bool CutoffCoset::contains(const Gf2Vec& v) const
{
    if (!v.compatible(rep_))
        return false;
    for (std::size_t w = 0; w < v.num_words(); ++w) {
        Gf2Vec::Word diff = v.word(w) ^ rep_.word(w);
        const std::size_t first = w * Gf2Vec::word_bits;
        if (cutoff_ >= first + Gf2Vec::word_bits)
            continue;
        if (cutoff_ > first)
            diff &= ~((Gf2Vec::Word{1} << (cutoff_ - first)) - 1);
        if (diff != 0)
            return false;
    }
    return true;
}

CutoffCoset coset_of(const Gf2Vec& v, std::size_t cutoff)
{
    return CutoffCoset(v, cutoff);
}

bool in_cutoff_subgroup(const Gf2Vec& v, std::size_t cutoff) noexcept
{
    return v.count_below(cutoff) == v.count();
}

void Gf2System::validate() const
{
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::set<std::size_t> seen;
        for (std::size_t var : rows[r].vars) {
            if (var >= num_vars)
                throw std::invalid_argument("Gf2System: row " + std::to_string(r) +
                                            " references variable " + std::to_string(var) +
                                            " >= num_vars");
            if (!seen.insert(var).second)
                throw std::invalid_argument("Gf2System: row " + std::to_string(r) +
                                            " repeats variable " + std::to_string(var));
        }
    }
}

bool Gf2System::satisfied_by(const Gf2Vec& assignment) const
{
    if (assignment.size() != num_vars)
        return false;
    for (const Gf2Row& row : rows) {
        bool parity = false;
        for (std::size_t var : row.vars)
            parity ^= assignment.test(var);
        if (parity != row.rhs)
            return false;
    }
    return true;
}

std::optional<Gf2Vec> solve_linear(const Gf2System& sys)
{
    sys.validate();
    const std::size_t n = sys.num_vars;
    // Augmented rows: bit n holds the right-hand side.
    std::vector<Gf2Vec> m;
    m.reserve(sys.rows.size());
    for (const Gf2Row& row : sys.rows) {
        Gf2Vec v(n + 1);
        for (std::size_t var : row.vars)
            v.set(var);
        v.set(n, row.rhs);
        m.push_back(std::move(v));
    }

    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < m.size(); ++col) {
        std::size_t pick = rank;
        while (pick < m.size() && !m[pick].test(col))
            ++pick;
        if (pick == m.size())
            continue;
        std::swap(m[rank], m[pick]);
        for (std::size_t r = 0; r < m.size(); ++r)
            if (r != rank && m[r].test(col))
                m[r] ^= m[rank];
        pivot_col.push_back(col);
        ++rank;
    }

    for (std::size_t r = rank; r < m.size(); ++r)
        if (m[r].test(n))
            return std::nullopt;

    // Reduced echelon form: each pivot variable equals its rhs once the
    // free variables are zero.
    Gf2Vec solution(n);
    for (std::size_t r = 0; r < rank; ++r)
        solution.set(pivot_col[r], m[r].test(n));
    return solution;
}

std::optional<Gf2Vec> brute_force_solve(const Gf2System& sys, std::size_t max_vars)
{
    sys.validate();
    if (sys.num_vars > max_vars || sys.num_vars >= 63)
        throw std::invalid_argument("brute_force_solve: " + std::to_string(sys.num_vars) +
                                    " variables exceeds the bound of " + std::to_string(max_vars));
    std::vector<std::uint64_t> masks;
    std::vector<bool> rhs;
    for (const Gf2Row& row : sys.rows) {
        std::uint64_t mask = 0;
        for (std::size_t var : row.vars)
            mask |= std::uint64_t{1} << var;
        masks.push_back(mask);
        rhs.push_back(row.rhs);
    }
    const std::uint64_t limit = std::uint64_t{1} << sys.num_vars;
    for (std::uint64_t x = 0; x < limit; ++x) {
        bool ok = true;
        for (std::size_t r = 0; r < masks.size() && ok; ++r)
            ok = ((std::popcount(masks[r] & x) & 1) != 0) == rhs[r];
        if (ok) {
            Gf2Vec out(sys.num_vars);
            if (sys.num_vars > 0)
                out.set_word(0, x);
            return out;
        }
    }
    return std::nullopt;
}

}  // namespace ptor
