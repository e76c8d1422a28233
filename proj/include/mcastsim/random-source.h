/*
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef MCASTSIM_RANDOM_SOURCE_H
#define MCASTSIM_RANDOM_SOURCE_H

#include <cstdint>
#include <random>
#include <vector>

namespace mcast
{

/// Identifiers of the independent substreams carved out of a run's master seed.
enum class RandomStream : uint64_t
{
    Placement = 1,
    Roles = 2,
    AttackerSelection = 3,
    Mobility = 4,
    RadioChannel = 5,
    AttackerPolicy = 6,
};

/**
 * Portable seeded pseudo-random source.
 *
 * Backed by std::mt19937_64, whose output sequence is fixed by the C++
 * standard. The value mappings (reals, bounded integers, permutations) are
 * implemented here rather than with the std distributions, whose algorithms
 * are implementation-defined.
 */
class RandomSource
{
  public:
    explicit RandomSource(uint64_t seed);

    /// Independent generator for (stream, index) derived from a master seed.
    static RandomSource Derive(uint64_t masterSeed, RandomStream stream, uint64_t index = 0);

    uint64_t NextU64();

    /// Uniform real in [0, 1) with 53 bits of resolution.
    double Uniform();
    /// Uniform real in [a, b). a == b returns a; b < a is a fault.
    double Uniform(double a, double b);
    /// Uniform integer in [0, n). n == 0 is a fault.
    uint64_t UniformInt(uint64_t n);
    /// True with probability p, p in [0, 1].
    bool Bernoulli(double p);
    /// Uniform random permutation of 0..n-1 (Fisher-Yates).
    std::vector<uint32_t> Permutation(uint32_t n);

    uint64_t GetSeed() const
    {
        return m_seed;
    }

  private:
    uint64_t m_seed;
    std::mt19937_64 m_engine;
};

/// SplitMix64 finalizer; used for seed derivation and hashing.
uint64_t SplitMix64(uint64_t x);

} // namespace mcast

#endif // MCASTSIM_RANDOM_SOURCE_H
