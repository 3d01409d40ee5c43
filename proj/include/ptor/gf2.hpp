#pragma once

// Exact linear algebra over GF(2): bit vectors tied to an index family,
// cosets of the "support below the cutoff" subgroup, and linear systems.

#include <boost/container/small_vector.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ptor {

/// Fingerprint of the index family a vector is laid out over. Two vectors
/// can only be combined when their tags and widths agree.
struct FamilyTag {
    std::uint64_t value = 0;

    friend bool operator==(FamilyTag, FamilyTag) = default;
    friend auto operator<=>(FamilyTag, FamilyTag) = default;
};

FamilyTag make_family_tag(std::string_view kind, std::span<const std::uint64_t> data);

class Gf2Vec {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t word_bits = 64;

    Gf2Vec() = default;
    explicit Gf2Vec(std::size_t width, FamilyTag family = {});

    /// Parses a string of '0'/'1' characters; character i is bit i.
    static Gf2Vec from_string(std::string_view bits, FamilyTag family = {});

    std::size_t size() const noexcept { return width_; }
    FamilyTag family() const noexcept { return family_; }

    bool test(std::size_t i) const noexcept {
        return (words_[i / word_bits] >> (i % word_bits)) & 1U;
    }
    void set(std::size_t i, bool value = true) noexcept {
        const Word mask = Word{1} << (i % word_bits);
        if (value)
            words_[i / word_bits] |= mask;
        else
            words_[i / word_bits] &= ~mask;
    }
    void flip(std::size_t i) noexcept { words_[i / word_bits] ^= Word{1} << (i % word_bits); }
    void reset() noexcept;

    std::size_t num_words() const noexcept { return words_.size(); }
    Word word(std::size_t w) const noexcept { return words_[w]; }
    /// Overwrites word w; bits past the width are dropped.
    void set_word(std::size_t w, Word bits) noexcept;

    bool none() const noexcept;
    std::size_t count() const noexcept;
    std::vector<std::size_t> support() const;
    /// Number of set bits at positions < limit.
    std::size_t count_below(std::size_t limit) const noexcept;

    bool compatible(const Gf2Vec& other) const noexcept {
        return width_ == other.width_ && family_ == other.family_;
    }

    /// Componentwise XOR. Throws std::invalid_argument on mismatched families.
    Gf2Vec& operator^=(const Gf2Vec& other);
    friend Gf2Vec operator+(Gf2Vec a, const Gf2Vec& b) {
        a ^= b;
        return a;
    }

    std::string to_string() const;

    friend bool operator==(const Gf2Vec& a, const Gf2Vec& b) noexcept {
        return a.width_ == b.width_ && a.family_ == b.family_ && a.words_ == b.words_;
    }
    friend std::strong_ordering operator<=>(const Gf2Vec& a, const Gf2Vec& b) noexcept;

private:
    void clear_tail() noexcept;

    boost::container::small_vector<Word, 2> words_;
    std::size_t width_ = 0;
    FamilyTag family_{};
};

Gf2Vec vec_add(const Gf2Vec& a, const Gf2Vec& b);

/// An ordered finite set of keys; position i is bit i of vectors over it.
template <class Key>
class IndexFamily {
public:
    IndexFamily() = default;
    IndexFamily(std::vector<Key> keys, FamilyTag tag) : keys_(std::move(keys)), tag_(tag)
    {
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            if (!positions_.emplace(keys_[i], i).second)
                throw std::invalid_argument("IndexFamily: duplicate key");
        }
    }

    std::size_t size() const noexcept { return keys_.size(); }
    FamilyTag tag() const noexcept { return tag_; }
    const std::vector<Key>& keys() const noexcept { return keys_; }
    const Key& key(std::size_t i) const { return keys_.at(i); }

    std::optional<std::size_t> position(const Key& key) const
    {
        auto it = positions_.find(key);
        if (it == positions_.end())
            return std::nullopt;
        return it->second;
    }

    Gf2Vec zero() const { return Gf2Vec(keys_.size(), tag_); }

private:
    std::vector<Key> keys_;
    std::map<Key, std::size_t> positions_;
    FamilyTag tag_{};
};

/// A coset of E_c = {x : supp(x) below c} inside GF(2)^L, stored by its
/// canonical representative (coordinates below the cutoff cleared).
class CutoffCoset {
public:
    CutoffCoset() = default;
    CutoffCoset(const Gf2Vec& member, std::size_t cutoff);

    static CutoffCoset zero(std::size_t length, std::size_t cutoff, FamilyTag family = {});

    const Gf2Vec& rep() const noexcept { return rep_; }
    std::size_t length() const noexcept { return rep_.size(); }
    std::size_t cutoff() const noexcept { return cutoff_; }

    bool contains(const Gf2Vec& v) const;
    bool is_zero() const noexcept { return rep_.none(); }

    friend bool operator==(const CutoffCoset&, const CutoffCoset&) = default;
    friend auto operator<=>(const CutoffCoset&, const CutoffCoset&) = default;

private:
    Gf2Vec rep_;
    std::size_t cutoff_ = 0;
};

CutoffCoset coset_of(const Gf2Vec& v, std::size_t cutoff);

/// True iff every set bit of v lies below the cutoff.
bool in_cutoff_subgroup(const Gf2Vec& v, std::size_t cutoff) noexcept;

struct Gf2Row {
    std::vector<std::size_t> vars;  // distinct indices < num_vars
    bool rhs = false;
};

struct Gf2System {
    std::size_t num_vars = 0;
    std::vector<Gf2Row> rows;

    /// Throws std::invalid_argument for out-of-range or repeated indices.
    void validate() const;
    bool satisfied_by(const Gf2Vec& assignment) const;
};

/// Gaussian elimination. Free variables are set to zero. Returns nullopt
/// when the system is inconsistent.
std::optional<Gf2Vec> solve_linear(const Gf2System& sys);

inline constexpr std::size_t default_brute_force_bound = 24;

/// Exhaustive enumeration in increasing integer order (bit i = variable i);
/// returns the first satisfying assignment. Refuses systems with more than
/// max_vars variables.
std::optional<Gf2Vec> brute_force_solve(const Gf2System& sys,
                                        std::size_t max_vars = default_brute_force_bound);

}  // namespace ptor
