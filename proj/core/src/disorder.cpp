#include "msre/disorder.hpp"

#include <algorithm>
#include <cmath>

#include "msre/errors.hpp"

namespace msre {

DisorderKind parse_disorder_kind(const std::string& name)
{
    if (name == "white")
        return DisorderKind::white;
    if (name == "poisson")
        return DisorderKind::poisson;
    if (name == "brownian")
        return DisorderKind::brownian;
    if (name == "linear")
        return DisorderKind::linear;
    if (name == "periodic_white")
        return DisorderKind::periodic_white;
    if (name == "rpsg")
        return DisorderKind::rpsg;
    throw ParameterError("unknown disorder kind '" + name + "'");
}

std::string to_string(DisorderKind kind)
{
    switch (kind)
    {
        case DisorderKind::white: return "white";
        case DisorderKind::poisson: return "poisson";
        case DisorderKind::brownian: return "brownian";
        case DisorderKind::linear: return "linear";
        case DisorderKind::periodic_white: return "periodic_white";
        case DisorderKind::rpsg: return "rpsg";
    }
    return "?";
}

struct DisorderField::Node
{
    enum class Type
    {
        base,
        shift,
        rescale,
        resample
    };

    Type type = Type::base;
    std::shared_ptr<const Node> parent;

    // base only
    DisorderParams params;
    std::shared_ptr<const BumpFunction> bump;

    std::optional<Surface> surface;
    double factor = 1.0;
    std::vector<Vertex> set;
    std::uint64_t fresh_seed = 0;

    const Node& root() const noexcept
    {
        const Node* p = this;
        while (p->parent)
            p = p->parent.get();
        return *p;
    }
};

namespace {

constexpr std::size_t kMaxCells = 20'000'000;

// Grid spacing actually used by the periodic kind: an integer number of
// cells per unit period.
double periodic_spacing(double delta)
{
    double m = std::max(3.0, std::round(1.0 / delta));
    return 1.0 / m;
}

std::int64_t floor_i(double x) { return static_cast<std::int64_t>(std::floor(x)); }
std::int64_t ceil_i(double x) { return static_cast<std::int64_t>(std::ceil(x)); }

std::int64_t positive_mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// Cells k with |k * h - u| < 1 possibly, per axis.
void cell_range(std::span<const double> u, double h, std::span<std::int64_t> lo,
                std::span<std::int64_t> hi)
{
    for (std::size_t a = 0; a < u.size(); ++a)
    {
        lo[a] = ceil_i((u[a] - 1.0) / h) - 1;
        hi[a] = floor_i((u[a] + 1.0) / h) + 1;
    }
}

}  // namespace

//---------------------------------------------------------------------------//
// DisorderField
//---------------------------------------------------------------------------//

DisorderField::DisorderField(DisorderParams params)
{
    if (params.n < 1)
        throw ParameterError("disorder needs n >= 1");
    if (!(params.delta > 0.0) || !std::isfinite(params.delta))
        throw ParameterError("disorder grid spacing must be positive");
    if (!(params.intensity > 0.0) || !std::isfinite(params.intensity))
        throw ParameterError("poisson intensity must be positive");
    if (params.kind == DisorderKind::brownian && params.n != 1)
        throw UnsupportedError("brownian disorder is only defined for n = 1");

    auto node = std::make_shared<Node>();
    node->params = params;
    node->bump = std::make_shared<BumpFunction>(params.bump, params.n);
    node_ = std::move(node);
}

DisorderField::DisorderField(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

const DisorderParams& DisorderField::params() const noexcept
{
    return node_->root().params;
}

const BumpFunction& DisorderField::bump() const noexcept
{
    return *node_->root().bump;
}

bool DisorderField::is_point_set() const noexcept
{
    return kind() == DisorderKind::poisson || kind() == DisorderKind::rpsg;
}

bool DisorderField::has_continuous_paths() const noexcept
{
    return !is_point_set();
}

DisorderField DisorderField::shift(const Surface& s) const
{
    if (s.components() != components())
        throw ContractError("shift surface has the wrong number of components");
    if (!s.all_finite())
        throw ContractError("shift surface must be finite");
    auto node = std::make_shared<Node>();
    node->type = Node::Type::shift;
    if (node_->type == Node::Type::shift && node_->surface->domain() == s.domain())
    {
        // consecutive shifts compose additively
        node->surface = *node_->surface + s;
        node->parent = node_->parent;
    }
    else
    {
        node->surface = s;
        node->parent = node_;
    }
    return DisorderField(std::shared_ptr<const Node>(std::move(node)));
}

DisorderField DisorderField::rescale(double lambda) const
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ParameterError("rescaling requires lambda > 0");
    if (lambda == 1.0)
        return *this;
    auto node = std::make_shared<Node>();
    node->type = Node::Type::rescale;
    node->factor = std::sqrt(lambda);
    node->parent = node_;
    return DisorderField(std::shared_ptr<const Node>(std::move(node)));
}

DisorderField DisorderField::resample(std::vector<Vertex> set,
                                      std::uint64_t fresh_seed) const
{
    if (set.empty())
        return *this;
    auto node = std::make_shared<Node>();
    node->type = Node::Type::resample;
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    node->set = std::move(set);
    node->fresh_seed = fresh_seed;
    node->parent = node_;
    return DisorderField(std::shared_ptr<const Node>(std::move(node)));
}

VertexDisorder DisorderField::at(std::span<const std::int64_t> v) const
{
    const Node& root = node_->root();
    const int n = root.params.n;

    VertexDisorder view;
    view.keep_alive_ = node_;
    view.params_ = &root.params;
    view.bump_ = root.bump.get();
    view.n_ = n;
    view.vkey_ = coordinate_key(v);
    view.offset_.assign(n, 0.0);

    std::optional<std::uint64_t> seed;
    Vertex vv(v.begin(), v.end());
    for (const Node* p = node_.get(); p->parent; p = p->parent.get())
    {
        switch (p->type)
        {
            case Node::Type::shift:
            {
                Point s = p->surface->value(v);
                for (int a = 0; a < n; ++a)
                    view.offset_[a] -= s[a];
                break;
            }
            case Node::Type::rescale:
                view.scale_ *= p->factor;
                for (int a = 0; a < n; ++a)
                    view.offset_[a] *= p->factor;
                break;
            case Node::Type::resample:
                if (!seed && std::binary_search(p->set.begin(), p->set.end(), vv))
                    seed = p->fresh_seed;
                break;
            case Node::Type::base:
                break;
        }
    }
    view.seed_ = seed.value_or(root.params.seed);

    if (root.params.kind == DisorderKind::linear)
    {
        view.zeta_.assign(n, 0.0);
        if (!root.params.zero_linear)
        {
            CounterRng rng(view.seed_, Stream::linear);
            for (int a = 0; a < n; ++a)
                view.zeta_[a] = rng.gaussian(a, view.vkey_);
        }
    }
    else if (root.params.kind == DisorderKind::rpsg)
    {
        CounterRng rng(view.seed_, Stream::rpsg);
        view.phase_.resize(n);
        for (int a = 0; a < n; a += 2)
        {
            auto u = rng.uniform_pair(view.vkey_, static_cast<std::uint64_t>(a / 2));
            view.phase_[a] = 1.0 - u[0];
            if (a + 1 < n)
                view.phase_[a + 1] = 1.0 - u[1];
        }
    }
    return view;
}

//---------------------------------------------------------------------------//
// VertexDisorder
//---------------------------------------------------------------------------//

void VertexDisorder::to_base(std::span<const double> t,
                             std::span<double> u) const noexcept
{
    for (int a = 0; a < n_; ++a)
        u[a] = scale_ * t[a] + offset_[a];
}

double VertexDisorder::gaussian_cell(std::span<const std::int64_t> cell) const
{
    const bool periodic = params_->kind == DisorderKind::periodic_white;
    CounterRng rng(seed_, periodic ? Stream::periodic : Stream::white);
    std::uint64_t key = vkey_;
    for (int a = 0; a + 1 < n_; ++a)
        key = hash_combine(key, static_cast<std::uint64_t>(cell[a]));
    return rng.gaussian(cell[n_ - 1], key);
}

namespace {

// Shared kernel of the white and periodic kinds: sum over grid cells near u
// of g(cell) * b(x_cell - u) in odometer order, times the grid weight.
template<class G>
double smoothed_sum(std::span<const double> u, double h, double weight,
                    const BumpFunction& bump, G&& gauss)
{
    const std::size_t n = u.size();
    std::int64_t lo[8], hi[8], k[8];
    cell_range(u, h, {lo, n}, {hi, n});
    for (std::size_t a = 0; a < n; ++a)
        k[a] = lo[a];
    double sum = 0.0;
    for (;;)
    {
        double r2 = 0.0;
        for (std::size_t a = 0; a < n; ++a)
        {
            double x = static_cast<double>(k[a]) * h - u[a];
            r2 += x * x;
        }
        if (r2 < 1.0)
            sum += gauss(std::span<const std::int64_t>(k, n)) * bump.of_squared(r2);
        std::size_t a = n;
        while (a > 0)
        {
            --a;
            if (++k[a] <= hi[a])
                break;
            k[a] = lo[a];
            if (a == 0)
                return weight * sum;
        }
    }
}

}  // namespace

double VertexDisorder::base_eval(std::span<const double> u) const
{
    const auto& p = *params_;
    switch (p.kind)
    {
        case DisorderKind::white:
        {
            if (n_ > 8)
                throw UnsupportedError("white disorder supports n <= 8");
            return smoothed_sum(u, p.delta, std::sqrt(std::pow(p.delta, n_)), *bump_,
                                [&](std::span<const std::int64_t> k) {
                                    return gaussian_cell(k);
                                });
        }
        case DisorderKind::periodic_white:
        {
            if (n_ > 8)
                throw UnsupportedError("periodic disorder supports n <= 8");
            const double h = periodic_spacing(p.delta);
            const auto m = static_cast<std::int64_t>(std::llround(1.0 / h));
            double r[8];
            for (int a = 0; a < n_; ++a)
                r[a] = u[a] - std::floor(u[a]);
            std::int64_t wrapped[8];
            return smoothed_sum({r, static_cast<std::size_t>(n_)}, h,
                                std::sqrt(std::pow(h, n_)), *bump_,
                                [&](std::span<const std::int64_t> k) {
                                    for (int a = 0; a < n_; ++a)
                                        wrapped[a] = positive_mod(k[a], m);
                                    return gaussian_cell({wrapped, k.size()});
                                });
        }
        case DisorderKind::linear:
        {
            double s = 0.0;
            for (int a = 0; a < n_; ++a)
                s += zeta_[a] * u[a];
            return s;
        }
        case DisorderKind::brownian:
        {
            CounterRng rng(seed_, Stream::brownian);
            const double sd = std::sqrt(p.delta);
            const bool neg = u[0] < 0.0;
            const double x = (neg ? -u[0] : u[0]) / p.delta;
            const std::int64_t J = floor_i(x);
            const double frac = x - static_cast<double>(J);
            auto cell = [&](std::int64_t j) { return neg ? -1 - j : j; };
            double s = 0.0;
            for (std::int64_t j = 0; j < J; ++j)
                s += sd * rng.gaussian(cell(j), vkey_);
            if (frac > 0.0)
                s += frac * (sd * rng.gaussian(cell(J), vkey_));
            return s;
        }
        case DisorderKind::poisson:
        {
            double scale = 0.0;
            for (int a = 0; a < n_; ++a)
                scale = std::max(scale, std::abs(u[a]));
            const double tol = point_tolerance(scale);
            std::vector<double> lo(n_), hi(n_);
            for (int a = 0; a < n_; ++a)
            {
                lo[a] = u[a] - tol;
                hi[a] = u[a] + tol;
            }
            VertexDisorder base = *this;
            base.scale_ = 1.0;
            std::fill(base.offset_.begin(), base.offset_.end(), 0.0);
            auto pts = base.candidates(lo, hi);
            return pts.empty() ? kInfinity : 0.0;
        }
        case DisorderKind::rpsg:
        {
            for (int a = 0; a < n_; ++a)
            {
                double d = u[a] - phase_[a];
                if (std::abs(d - std::round(d)) > point_tolerance(std::abs(u[a])))
                    return kInfinity;
            }
            return 0.0;
        }
    }
    return kInfinity;
}

double VertexDisorder::eval(std::span<const double> t) const
{
    if (static_cast<int>(t.size()) != n_)
        throw ContractError("height has the wrong number of components");
    double u[8];
    std::vector<double> big;
    std::span<double> us;
    if (n_ <= 8)
        us = {u, static_cast<std::size_t>(n_)};
    else
    {
        big.resize(n_);
        us = big;
    }
    to_base(t, us);
    return base_eval(us);
}

void VertexDisorder::eval_many(std::span<const double> points,
                               std::span<double> out) const
{
    const std::size_t n = static_cast<std::size_t>(n_);
    const std::size_t count = points.size() / n;
    if (points.size() != count * n || out.size() != count)
        throw ContractError("batch evaluation buffers have inconsistent sizes");
    if (count == 0)
        return;
    const auto& p = *params_;

    std::vector<double> base(points.size());
    for (std::size_t i = 0; i < count; ++i)
        to_base(points.subspan(i * n, n), std::span<double>(base).subspan(i * n, n));

    if (p.kind == DisorderKind::white && n <= 8)
    {
        // Materialize every grid value the batch touches once, then run the
        // same kernel against the table.
        std::int64_t lo[8], hi[8], clo[8], chi[8];
        for (std::size_t a = 0; a < n; ++a)
        {
            lo[a] = std::numeric_limits<std::int64_t>::max();
            hi[a] = std::numeric_limits<std::int64_t>::min();
        }
        for (std::size_t i = 0; i < count; ++i)
        {
            cell_range(std::span<const double>(base).subspan(i * n, n), p.delta,
                       {clo, n}, {chi, n});
            for (std::size_t a = 0; a < n; ++a)
            {
                lo[a] = std::min(lo[a], clo[a]);
                hi[a] = std::max(hi[a], chi[a]);
            }
        }
        std::size_t cells = 1;
        std::size_t ext[8];
        for (std::size_t a = 0; a < n; ++a)
        {
            ext[a] = static_cast<std::size_t>(hi[a] - lo[a] + 1);
            cells *= ext[a];
        }
        // only worth it when the table is not much larger than the work
        std::size_t per_point = 1;
        for (std::size_t a = 0; a < n; ++a)
            per_point *= static_cast<std::size_t>(2.0 / p.delta + 3.0);
        if (cells <= kMaxCells && cells <= 4 * count * per_point)
        {
            std::vector<double> table(cells);
            std::int64_t k[8];
            for (std::size_t c = 0; c < cells; ++c)
            {
                std::size_t rem = c;
                for (std::size_t a = n; a-- > 0;)
                {
                    k[a] = lo[a] + static_cast<std::int64_t>(rem % ext[a]);
                    rem /= ext[a];
                }
                table[c] = gaussian_cell({k, n});
            }
            const double weight = std::sqrt(std::pow(p.delta, n_));
            for (std::size_t i = 0; i < count; ++i)
            {
                out[i] = smoothed_sum(
                    std::span<const double>(base).subspan(i * n, n), p.delta, weight,
                    *bump_, [&](std::span<const std::int64_t> kk) {
                        std::size_t idx = 0;
                        for (std::size_t a = 0; a < n; ++a)
                            idx = idx * ext[a] + static_cast<std::size_t>(kk[a] - lo[a]);
                        return table[idx];
                    });
            }
            return;
        }
    }
    else if (p.kind == DisorderKind::brownian)
    {
        // Prefix sums in the same order as single evaluation.
        CounterRng rng(seed_, Stream::brownian);
        const double sd = std::sqrt(p.delta);
        std::int64_t jmax_pos = 0, jmax_neg = 0;
        for (std::size_t i = 0; i < count; ++i)
        {
            double x = std::abs(base[i]) / p.delta;
            auto J = floor_i(x);
            if (base[i] < 0.0)
                jmax_neg = std::max(jmax_neg, J + 1);
            else
                jmax_pos = std::max(jmax_pos, J + 1);
        }
        if (static_cast<std::size_t>(jmax_pos + jmax_neg) <= kMaxCells)
        {
            std::vector<double> inc_pos(jmax_pos + 1), inc_neg(jmax_neg + 1);
            std::vector<double> pre_pos(jmax_pos + 1, 0.0), pre_neg(jmax_neg + 1, 0.0);
            for (std::int64_t j = 0; j < jmax_pos; ++j)
            {
                inc_pos[j] = sd * rng.gaussian(j, vkey_);
                pre_pos[j + 1] = pre_pos[j] + inc_pos[j];
            }
            for (std::int64_t j = 0; j < jmax_neg; ++j)
            {
                inc_neg[j] = sd * rng.gaussian(-1 - j, vkey_);
                pre_neg[j + 1] = pre_neg[j] + inc_neg[j];
            }
            for (std::size_t i = 0; i < count; ++i)
            {
                const bool neg = base[i] < 0.0;
                const double x = (neg ? -base[i] : base[i]) / p.delta;
                const std::int64_t J = floor_i(x);
                const double frac = x - static_cast<double>(J);
                const auto& pre = neg ? pre_neg : pre_pos;
                const auto& inc = neg ? inc_neg : inc_pos;
                double s = pre[J];
                if (frac > 0.0)
                    s += frac * inc[J];
                out[i] = s;
            }
            return;
        }
    }

    for (std::size_t i = 0; i < count; ++i)
        out[i] = base_eval(std::span<const double>(base).subspan(i * n, n));
}

double VertexDisorder::eval_diff(std::span<const double> t_new,
                                 std::span<const double> t_old) const
{
    if (params_->kind == DisorderKind::linear)
    {
        double s = 0.0;
        for (int a = 0; a < n_; ++a)
            s += zeta_[a] * (scale_ * (t_new[a] - t_old[a]));
        return s;
    }
    double a = eval(t_new);
    if (a == kInfinity)
        return kInfinity;
    double b = eval(t_old);
    if (b == kInfinity)
        return -kInfinity;
    return a - b;
}

std::vector<double> VertexDisorder::candidates(std::span<const double> lo,
                                               std::span<const double> hi) const
{
    const auto& p = *params_;
    if (p.kind != DisorderKind::poisson && p.kind != DisorderKind::rpsg)
        throw UnsupportedError("candidate sets exist only for point-set disorders");
    if (static_cast<int>(lo.size()) != n_ || static_cast<int>(hi.size()) != n_)
        throw ContractError("window has the wrong number of components");

    const std::size_t n = static_cast<std::size_t>(n_);
    std::vector<double> blo(n), bhi(n);
    for (std::size_t a = 0; a < n; ++a)
    {
        if (lo[a] > hi[a])
            return {};
        blo[a] = scale_ * lo[a] + offset_[a];
        bhi[a] = scale_ * hi[a] + offset_[a];
    }

    std::vector<Point> pts;
    if (p.kind == DisorderKind::rpsg)
    {
        std::vector<std::int64_t> klo(n), khi(n), k(n);
        std::size_t total = 1;
        for (std::size_t a = 0; a < n; ++a)
        {
            klo[a] = ceil_i(blo[a] - phase_[a]);
            khi[a] = floor_i(bhi[a] - phase_[a]);
            if (khi[a] < klo[a])
                return {};
            total *= static_cast<std::size_t>(khi[a] - klo[a] + 1);
        }
        if (total > kMaxCells)
            throw ResourceError("candidate window too large");
        k = klo;
        for (;;)
        {
            Point q(n);
            for (std::size_t a = 0; a < n; ++a)
                q[a] = static_cast<double>(k[a]) + phase_[a];
            pts.push_back(std::move(q));
            std::size_t a = n;
            bool done = false;
            while (a > 0)
            {
                --a;
                if (++k[a] <= khi[a])
                    break;
                k[a] = klo[a];
                if (a == 0)
                    done = true;
            }
            if (done)
                break;
        }
    }
    else
    {
        CounterRng count_rng(seed_, Stream::poisson_count);
        CounterRng pos_rng(seed_, Stream::poisson_position);
        std::vector<std::int64_t> clo(n), chi(n), c(n);
        std::size_t total = 1;
        for (std::size_t a = 0; a < n; ++a)
        {
            clo[a] = floor_i(blo[a]);
            chi[a] = floor_i(bhi[a]);
            total *= static_cast<std::size_t>(chi[a] - clo[a] + 1);
        }
        if (total > kMaxCells)
            throw ResourceError("candidate window too large");
        c = clo;
        const std::size_t blocks = (n + 1) / 2;
        for (;;)
        {
            std::uint64_t ckey = coordinate_key(c);
            auto count = poisson_from_uniform(p.intensity, count_rng.uniform(vkey_, ckey));
            std::uint64_t pkey = hash_combine(vkey_, ckey);
            for (std::uint32_t i = 0; i < count; ++i)
            {
                Point q(n);
                for (std::size_t b = 0; b < blocks; ++b)
                {
                    auto u = pos_rng.uniform_pair(pkey, i * blocks + b);
                    q[2 * b] = static_cast<double>(c[2 * b]) + (1.0 - u[0]);
                    if (2 * b + 1 < n)
                        q[2 * b + 1] = static_cast<double>(c[2 * b + 1]) + (1.0 - u[1]);
                }
                bool inside = true;
                for (std::size_t a = 0; a < n; ++a)
                    inside = inside && q[a] >= blo[a] && q[a] <= bhi[a];
                if (inside)
                    pts.push_back(std::move(q));
            }
            std::size_t a = n;
            bool done = false;
            while (a > 0)
            {
                --a;
                if (++c[a] <= chi[a])
                    break;
                c[a] = clo[a];
                if (a == 0)
                    done = true;
            }
            if (done)
                break;
        }
    }

    // back to caller coordinates
    std::vector<Point> mapped;
    mapped.reserve(pts.size());
    for (auto& q : pts)
    {
        Point t(n);
        bool inside = true;
        for (std::size_t a = 0; a < n; ++a)
        {
            t[a] = scale_ == 1.0 && offset_[a] == 0.0 ? q[a] : (q[a] - offset_[a]) / scale_;
            double tol = point_tolerance(std::abs(t[a]));
            if (t[a] < lo[a] - tol || t[a] > hi[a] + tol)
                inside = false;
        }
        if (inside)
            mapped.push_back(std::move(t));
    }
    std::sort(mapped.begin(), mapped.end());
    std::vector<double> flat;
    flat.reserve(mapped.size() * n);
    for (auto& q : mapped)
        flat.insert(flat.end(), q.begin(), q.end());
    return flat;
}

std::optional<VertexDisorder::Affine> VertexDisorder::linear_coefficients() const
{
    if (params_->kind != DisorderKind::linear)
        return std::nullopt;
    Affine out;
    out.slope.resize(n_);
    for (int a = 0; a < n_; ++a)
    {
        out.slope[a] = scale_ * zeta_[a];
        out.constant += zeta_[a] * offset_[a];
    }
    return out;
}

}  // namespace msre
