#include <algorithm>
#include <cmath>

#include "msre/errors.hpp"
#include "msre/greens.hpp"
#include "msre/parallel.hpp"
#include "msre/rng.hpp"

namespace msre {
namespace {

constexpr std::uint64_t kRuinTag = 1;
constexpr std::uint64_t kTailTag = 2;

/// Simple +-1 steps from a bit pool, 64 steps per draw.
class Steps
{
  public:
    Steps(std::uint64_t seed, std::uint64_t trial) : rng_(seed, Stream::walk, trial) {}

    int next()
    {
        if (left_ == 0)
        {
            bits_ = rng_.next_u64();
            left_ = 64;
        }
        const int s = (bits_ & 1) ? 1 : -1;
        bits_ >>= 1;
        --left_;
        return s;
    }

  private:
    SequentialRng rng_;
    std::uint64_t bits_ = 0;
    int left_ = 0;
};

}  // namespace

GamblerRuinReport gambler_ruin_check(std::int64_t n, std::int64_t m, std::size_t trials,
                                     std::uint64_t seed, unsigned threads)
{
    if (n < 1 || m < 1)
        throw ParameterError("gambler's ruin needs n, m >= 1");
    if (trials < 10'000)
        throw ParameterError("gambler's ruin needs at least 10^4 trials");

    const std::uint64_t stream_seed = derive_seed(seed, kRuinTag);
    std::vector<unsigned char> hit(trials);
    parallel_for(trials, threads, [&](std::size_t k) {
        Steps steps(stream_seed, k);
        std::int64_t pos = 0;
        while (pos < n && pos > -m)
            pos += steps.next();
        hit[k] = pos == n ? 1 : 0;
    });

    std::size_t count = 0;
    for (auto h : hit)
        count += h;
    GamblerRuinReport r;
    r.n = n;
    r.m = m;
    r.trials = trials;
    const double T = static_cast<double>(trials);
    r.estimate = static_cast<double>(count) / T;
    r.expected = static_cast<double>(m) / static_cast<double>(n + m);
    // binomial standard error at the hypothesised value, which stays positive
    // even when every trial lands on the same side
    r.standard_error = std::sqrt(r.expected * (1.0 - r.expected) / T);
    r.deviation = std::abs(r.estimate - r.expected);
    return r;
}

ExitTailReport exit_time_tail_check(std::int64_t n, std::vector<std::int64_t> times,
                                    std::size_t trials, std::uint64_t seed, unsigned threads)
{
    if (n < 1)
        throw ParameterError("exit-time tail needs n >= 1");
    if (trials < 10'000)
        throw ParameterError("exit-time tail needs at least 10^4 trials");
    if (times.empty())
        throw ParameterError("exit-time tail needs a time ladder");
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    if (times.front() < 1)
        throw ParameterError("ladder times must be positive");

    // tau >= t iff n is not reached within the first t - 1 steps
    const std::int64_t horizon = times.back() - 1;
    const std::uint64_t stream_seed = derive_seed(seed, kTailTag);
    std::vector<std::int64_t> tau(trials);
    parallel_for(trials, threads, [&](std::size_t k) {
        Steps steps(stream_seed, k);
        std::int64_t pos = 0, t = 0;
        while (t < horizon && pos < n)
        {
            pos += steps.next();
            ++t;
        }
        tau[k] = pos == n ? t : horizon + 1;
    });
    std::sort(tau.begin(), tau.end());

    ExitTailReport r;
    r.n = n;
    r.trials = trials;
    r.times = times;
    const double T = static_cast<double>(trials);
    double num = 0.0, den = 0.0;
    for (std::int64_t t : times)
    {
        const auto below = std::lower_bound(tau.begin(), tau.end(), t) - tau.begin();
        const double p = static_cast<double>(static_cast<std::int64_t>(trials) - below) / T;
        const double q = static_cast<double>(n) / std::sqrt(static_cast<double>(t));
        r.probability.push_back(p);
        r.standard_error.push_back(std::sqrt(p * (1.0 - p) / T));
        r.scaled.push_back(p / q);
        num += p * q;
        den += q * q;
    }
    r.constant = num / den;
    r.monotone = std::is_sorted(r.probability.rbegin(), r.probability.rend());
    return r;
}

}  // namespace msre
