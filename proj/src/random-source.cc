/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "mcastsim/random-source.h"

#include "mcastsim/simulator.h"

#include <cmath>
#include <numeric>
#include <sstream>

namespace mcast
{

uint64_t
SplitMix64(uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomSource::RandomSource(uint64_t seed)
    : m_seed(seed),
      m_engine(seed)
{
}

RandomSource
RandomSource::Derive(uint64_t masterSeed, RandomStream stream, uint64_t index)
{
    uint64_t h = SplitMix64(masterSeed);
    h = SplitMix64(h ^ static_cast<uint64_t>(stream));
    h = SplitMix64(h ^ index);
    return RandomSource(h);
}

uint64_t
RandomSource::NextU64()
{
    return m_engine();
}

double
RandomSource::Uniform()
{
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
}

double
RandomSource::Uniform(double a, double b)
{
    if (!std::isfinite(a) || !std::isfinite(b) || b < a)
    {
        std::ostringstream os;
        os << "empty or invalid uniform range [" << a << ", " << b << ")";
        throw SimulationFault(os.str());
    }
    if (a == b)
    {
        return a;
    }
    double v = a + (b - a) * Uniform();
    // rounding can land exactly on b for wide ranges
    return v < b ? v : a;
}

uint64_t
RandomSource::UniformInt(uint64_t n)
{
    if (n == 0)
    {
        throw SimulationFault("empty integer range [0, 0)");
    }
    // rejection sampling removes modulo bias
    const uint64_t threshold = (0 - n) % n;
    for (;;)
    {
        uint64_t r = m_engine();
        if (r >= threshold)
        {
            return r % n;
        }
    }
}

bool
RandomSource::Bernoulli(double p)
{
    if (!(p >= 0.0 && p <= 1.0))
    {
        throw SimulationFault("probability outside [0, 1]");
    }
    if (p == 0.0)
    {
        return false;
    }
    if (p == 1.0)
    {
        return true;
    }
    return Uniform() < p;
}

std::vector<uint32_t>
RandomSource::Permutation(uint32_t n)
{
    std::vector<uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    for (uint32_t i = n; i > 1; --i)
    {
        uint64_t j = UniformInt(i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

} // namespace mcast
