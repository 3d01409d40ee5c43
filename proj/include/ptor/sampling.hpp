#pragma once

// Seeded randomness for sweeps and adversaries. Draws are made with our own
// rejection sampler on top of mt19937_64 so results are identical across
// standard library implementations.

#include "ptor/model.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace ptor {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, n); n must be positive.
    std::uint64_t uniform_below(std::uint64_t n);
    bool coin() { return (engine_() >> 63) != 0; }
    /// Fills the first `count` coordinates of v uniformly (all when count
    /// exceeds the width).
    void fill(Gf2Vec& v, std::size_t count = SIZE_MAX);

    template <class T>
    void shuffle(std::vector<T>& xs)
    {
        for (std::size_t i = xs.size(); i > 1; --i)
            std::swap(xs[i - 1], xs[uniform_below(i)]);
    }

    /// `count` distinct values from [0, n) in increasing order.
    std::vector<std::size_t> choose(std::size_t n, std::size_t count);

private:
    std::mt19937_64 engine_;
};

/// Uniform coset of the cutoff subgroup over the universe's levels.
CutoffCoset random_coset(const Universe& u, Rng& rng);
std::vector<CutoffCoset> random_twist(const Universe& u, Rng& rng);
TwistedModel random_canonical_model(const Universe& u, Rng& rng);

/// Uniform element of G^b(l, u) / H^b(u).
GElem random_g(const TwistedModel& m, Level l, FaceId u, Rng& rng);
HElem random_h(const TwistedModel& m, FaceId u, Rng& rng);
/// Uniform element of the cutoff subgroup.
Gf2Vec random_ha(const Universe& u, Rng& rng);
/// Uniform vector over the faces.
Gf2Vec random_ga(const Universe& u, Rng& rng);

}  // namespace ptor
