#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace msre {

//---------------------------------------------------------------------------//
/*!
 * Stream tags keep draws for different purposes on disjoint Philox keys, so
 * e.g. a Green's-function walk never consumes numbers that a disorder field
 * would have used.
 */
enum class Stream : std::uint32_t
{
    white = 1,
    poisson_count,
    poisson_position,
    linear,
    brownian,
    periodic,
    rpsg,
    walk,
    init,
    sampling,
};

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Combine a running hash with another word.
constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t x) noexcept
{
    return mix64(h ^ (x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

/// Key for an integer coordinate tuple. One-dimensional tuples map
/// injectively (the coordinate itself), higher dimensions are hashed.
std::uint64_t coordinate_key(std::span<const std::int64_t> coords) noexcept;

/// Derive an independent seed from a master seed and two indices.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0) noexcept;

/// The bare Philox4x32-10 bijection (counter words low to high).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 as a pure function: block(counter) depends only on the key
 * and the counter, so any draw can be recomputed in any order from any
 * thread.
 */
class CounterRng
{
  public:
    using Block = std::array<std::uint32_t, 4>;

    CounterRng(std::uint64_t seed, Stream stream) noexcept;

    /// Raw 128-bit block for the counter (hi, lo).
    Block block(std::uint64_t hi, std::uint64_t lo) const noexcept;

    /// Uniform in (0, 1] with 53 random bits, from lanes (0,1) of the block.
    double uniform(std::uint64_t hi, std::uint64_t lo) const noexcept;

    /// Pair of uniforms in (0, 1] from one block.
    std::array<double, 2>
    uniform_pair(std::uint64_t hi, std::uint64_t lo) const noexcept;

    /*!
     * Standard Gaussian indexed by (cell, key). Cells 2j and 2j+1 share
     * one Box-Muller block (cosine and sine branch), which keeps each draw
     * a pure function of its own index.
     */
    double gaussian(std::int64_t cell, std::uint64_t key) const noexcept;

  private:
    std::array<std::uint32_t, 2> key_;
};

/// Unit-rate-scaled Poisson variate from a uniform by inversion.
std::uint32_t poisson_from_uniform(double mean, double u) noexcept;

/*!
 * Small sequential generator for places where a stream is consumed in
 * order (random instance generation in checks). Backed by the same counter
 * function so it is reproducible from (seed, stream).
 */
class SequentialRng
{
  public:
    SequentialRng(std::uint64_t seed, Stream stream = Stream::sampling,
                  std::uint64_t substream = 0) noexcept;

    double uniform() noexcept;  // (0, 1]
    double uniform(double lo, double hi) noexcept;
    double gaussian() noexcept;
    std::uint64_t next_u64() noexcept;
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) noexcept;

  private:
    CounterRng rng_;
    std::uint64_t substream_;
    std::uint64_t counter_ = 0;
    std::int64_t gauss_counter_ = 0;
};

}  // namespace msre
