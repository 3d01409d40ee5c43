#include "ptor/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace ptor {

std::uint64_t Rng::uniform_below(std::uint64_t n)
{
    if (n == 0)
        throw std::invalid_argument("uniform_below: empty range");
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do
        x = engine_();
    while (x >= limit);
    return x % n;
}

void Rng::fill(Gf2Vec& v, std::size_t count)
{
    count = std::min(count, v.size());
    for (std::size_t i = 0; i < count; ++i)
        v.set(i, coin());
}

std::vector<std::size_t> Rng::choose(std::size_t n, std::size_t count)
{
    if (count > n)
        throw std::invalid_argument("choose: sample larger than population");
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i)
        pool[i] = i;
    // Partial Fisher-Yates over the first `count` slots.
    for (std::size_t i = 0; i < count; ++i)
        std::swap(pool[i], pool[i + uniform_below(n - i)]);
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
}

CutoffCoset random_coset(const Universe& u, Rng& rng)
{
    Gf2Vec v = u.zero_levels();
    rng.fill(v);
    return CutoffCoset(v, u.cutoff());
}

std::vector<CutoffCoset> random_twist(const Universe& u, Rng& rng)
{
    std::vector<CutoffCoset> out;
    out.reserve(u.num_faces());
    for (std::size_t f = 0; f < u.num_faces(); ++f)
        out.push_back(random_coset(u, rng));
    return out;
}

TwistedModel random_canonical_model(const Universe& u, Rng& rng)
{
    return canonical_model(u, random_twist(u, rng));
}

GElem random_g(const TwistedModel& m, Level l, FaceId u, Rng& rng)
{
    GElem x = m.zero_g(l, u);
    rng.fill(x.offset);
    return x;
}

Gf2Vec random_ha(const Universe& u, Rng& rng)
{
    Gf2Vec v = u.zero_levels();
    rng.fill(v, u.cutoff());
    return v;
}

Gf2Vec random_ga(const Universe& u, Rng& rng)
{
    Gf2Vec v = u.zero_offset();
    rng.fill(v);
    return v;
}

HElem random_h(const TwistedModel& m, FaceId u, Rng& rng)
{
    HElem x = m.base_h(u);
    x.vec ^= random_ha(m.universe(), rng);
    return x;
}

}  // namespace ptor
