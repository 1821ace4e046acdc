#include <cmath>
#include <cstdlib>

#include "msre/errors.hpp"
#include "msre/greens.hpp"

namespace msre {
namespace {

/*!
 * P(S_m = u) for a one-dimensional simple walk, stepped in m by two:
 * p_m(u) = p_{m-2}(u) (m-1) m / ((m+u)(m-u)), started from p_|u|(u) = 2^-|u|.
 */
class Binomial
{
  public:
    explicit Binomial(std::int64_t u) : u_(std::abs(u)) {}

    /// Advance to time m (same parity as u, m increasing by 2 per call).
    double at(std::int64_t m)
    {
        if (m < u_)
            return 0.0;
        if (m == u_)
        {
            p_ = std::ldexp(1.0, -static_cast<int>(u_));
            return p_;
        }
        const double md = static_cast<double>(m), ud = static_cast<double>(u_);
        p_ *= (md - 1.0) * md / ((md + ud) * (md - ud));
        return p_;
    }

  private:
    std::int64_t u_;
    double p_ = 0.0;
};

/*!
 * Sum over even n < 2 * pairs of p_n(0)^2 - P(X_m = x), m = n or n + 1 by
 * parity, for the rotated coordinates (u, w). After each pair k the
 * partial sum is reported through `visit(k, sum, term_k)`.
 */
template<class F>
void pair_sums(std::int64_t u, std::int64_t w, std::int64_t max_pairs, F&& visit)
{
    const bool odd = (std::abs(u) % 2) == 1;
    Binomial bu(u), bw(w);
    double p0 = 1.0;  // p_n(0), n even
    double sum = 0.0;
    for (std::int64_t k = 0; k < max_pairs; ++k)
    {
        const std::int64_t n = 2 * k;
        if (n > 0)
            p0 *= (static_cast<double>(n) - 1.0) / static_cast<double>(n);
        const std::int64_t m = odd ? n + 1 : n;
        const double term = p0 * p0 - bu.at(m) * bw.at(m);
        sum += term;
        if (!visit(k, sum, term))
            return;
    }
}

}  // namespace

PotentialKernel::PotentialKernel(int d, double accuracy) : d_(d), accuracy_(accuracy)
{
    if (d < 1)
        throw ParameterError("dimension must be positive");
    if (d > 2)
        throw UnsupportedError("potential kernel values are implemented for d <= 2");
    if (!(accuracy > 0.0))
        throw ParameterError("accuracy must be positive");
}

double PotentialKernel::operator()(std::span<const std::int64_t> x)
{
    if (static_cast<int>(x.size()) != d_)
        throw ContractError("point dimension does not match the kernel");
    if (d_ == 1)
    {
        last_horizon_ = 0;
        return static_cast<double>(std::abs(x[0]));
    }
    // a is invariant under the lattice symmetries
    std::int64_t a = std::abs(x[0]), b = std::abs(x[1]);
    if (a < b)
        std::swap(a, b);
    if (auto it = cache_.find({a, b}); it != cache_.end())
        return it->second;
    if (a == 0)
        return 0.0;

    const std::int64_t u = a + b, w = a - b;
    // Pair k (n = 2k) behaves like c / k^2, so the tail beyond it is about
    // term k^2 / (k + 1/2); the corrected partial sums converge like 1 / k^2,
    // which one Richardson step removes.
    std::int64_t checkpoint = 64 * (u * u + 1);
    double prev_corrected = 0.0, prev_richardson = 0.0;
    bool have_prev = false, have_rich = false;
    double result = 0.0;
    std::int64_t horizon = 0;
    pair_sums(u, w, std::int64_t{1} << 40, [&](std::int64_t k, double sum, double term) {
        if (k < checkpoint)
            return true;
        const double kd = static_cast<double>(k);
        const double corrected = sum + term * kd * kd / (kd + 0.5);
        checkpoint *= 2;
        if (have_prev)
        {
            const double rich = (4.0 * corrected - prev_corrected) / 3.0;
            if (have_rich && std::abs(rich - prev_richardson) < accuracy_)
            {
                result = rich;
                horizon = k;
                return false;
            }
            prev_richardson = rich;
            have_rich = true;
        }
        prev_corrected = corrected;
        have_prev = true;
        return true;
    });
    last_horizon_ = horizon;
    cache_[{a, b}] = result;
    return result;
}

double potential_kernel(int d, std::span<const std::int64_t> x)
{
    PotentialKernel a(d);
    return a(x);
}

}  // namespace msre
