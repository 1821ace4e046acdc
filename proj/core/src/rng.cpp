#include "msre/rng.hpp"

#include <cmath>
#include <numbers>

namespace msre {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept
{
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t a, std::uint32_t b) noexcept
{
    std::uint64_t bits = (static_cast<std::uint64_t>(a) << 32) | b;
    // (0, 1]
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::uint64_t coordinate_key(std::span<const std::int64_t> coords) noexcept
{
    if (coords.size() == 1)
    {
        return static_cast<std::uint64_t>(coords[0]);
    }
    std::uint64_t h = 0x243F6A8885A308D3ull ^ coords.size();
    for (auto c : coords)
    {
        h = hash_combine(h, static_cast<std::uint64_t>(c));
    }
    return h;
}

std::uint64_t
derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept
{
    return hash_combine(hash_combine(mix64(master + 0x632BE59BD9B4E019ull), a),
                        b);
}

CounterRng::CounterRng(std::uint64_t seed, Stream stream) noexcept
{
    std::uint64_t k = hash_combine(mix64(seed),
                                   static_cast<std::uint64_t>(stream));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::array<std::uint32_t, 2> key) noexcept
{
    std::uint32_t k0 = key[0];
    std::uint32_t k1 = key[1];
    for (int round = 0; round < 10; ++round)
    {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c[0], hi0, lo0);
        mulhilo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return c;
}

CounterRng::Block
CounterRng::block(std::uint64_t hi, std::uint64_t lo) const noexcept
{
    return philox4x32_10({static_cast<std::uint32_t>(lo),
                          static_cast<std::uint32_t>(lo >> 32),
                          static_cast<std::uint32_t>(hi),
                          static_cast<std::uint32_t>(hi >> 32)},
                         key_);
}

double CounterRng::uniform(std::uint64_t hi, std::uint64_t lo) const noexcept
{
    auto b = block(hi, lo);
    return to_unit(b[0], b[1]);
}

std::array<double, 2>
CounterRng::uniform_pair(std::uint64_t hi, std::uint64_t lo) const noexcept
{
    auto b = block(hi, lo);
    return {to_unit(b[0], b[1]), to_unit(b[2], b[3])};
}

double CounterRng::gaussian(std::int64_t cell, std::uint64_t key) const noexcept
{
    // Arithmetic shift keeps negative cells paired with their neighbour.
    std::int64_t pair = cell >> 1;
    auto b = block(key, static_cast<std::uint64_t>(pair));
    double u1 = to_unit(b[0], b[1]);
    double u2 = to_unit(b[2], b[3]);
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    return (cell & 1) ? r * std::sin(theta) : r * std::cos(theta);
}

std::uint32_t poisson_from_uniform(double mean, double u) noexcept
{
    // Inversion by sequential search; means used here are O(10).
    double p = std::exp(-mean);
    double cdf = p;
    std::uint32_t k = 0;
    double target = 1.0 - u;  // u in (0,1] -> target in [0,1)
    while (target > cdf && k < 100000)
    {
        ++k;
        p *= mean / k;
        cdf += p;
        if (p == 0.0 && cdf < target)
        {
            break;
        }
    }
    return k;
}

SequentialRng::SequentialRng(std::uint64_t seed, Stream stream,
                             std::uint64_t substream) noexcept
    : rng_(seed, stream), substream_(mix64(substream + 0x51ED2701ull))
{
}

double SequentialRng::uniform() noexcept
{
    return rng_.uniform(substream_, counter_++);
}

double SequentialRng::uniform(double lo, double hi) noexcept
{
    return lo + (hi - lo) * (1.0 - uniform());
}

double SequentialRng::gaussian() noexcept
{
    return rng_.gaussian(gauss_counter_++, substream_ ^ 0xA5A5A5A5A5A5A5A5ull);
}

std::uint64_t SequentialRng::next_u64() noexcept
{
    auto b = rng_.block(substream_, counter_++);
    return (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
}

std::uint64_t SequentialRng::below(std::uint64_t n) noexcept
{
    if (n <= 1)
    {
        return 0;
    }
    // Lemire-style rejection keeps the result unbiased.
    std::uint64_t threshold = (0 - n) % n;
    for (;;)
    {
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        if (static_cast<std::uint64_t>(m) >= threshold)
        {
            return static_cast<std::uint64_t>(m >> 64);
        }
    }
}

}  // namespace msre
