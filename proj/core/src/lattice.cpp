#include "msre/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msre/errors.hpp"
#include "msre/linear_solve.hpp"

namespace msre {

//---------------------------------------------------------------------------//
// BoxDomain
//---------------------------------------------------------------------------//

BoxDomain::BoxDomain(Vertex lo, Vertex hi) : lo_(std::move(lo)), hi_(std::move(hi))
{
    if (lo_.empty() || lo_.size() != hi_.size())
    {
        throw ContractError("box corners must have the same positive dimension");
    }
    const int d = dim();
    extent_.resize(d);
    stride_.resize(d);
    for (int a = 0; a < d; ++a)
    {
        if (lo_[a] > hi_[a])
        {
            throw ContractError("box requires lo <= hi on axis "
                                + std::to_string(a));
        }
        extent_[a] = hi_[a] - lo_[a] + 1;
    }
    size_ = 1;
    for (int a = d - 1; a >= 0; --a)
    {
        stride_[a] = size_;
        size_ *= static_cast<std::size_t>(extent_[a]);
    }
    face_size_.resize(d);
    face_offset_.resize(2 * d);
    shell_size_ = 0;
    for (int a = 0; a < d; ++a)
    {
        face_size_[a] = size_ / static_cast<std::size_t>(extent_[a]);
        face_offset_[2 * a] = shell_size_;
        shell_size_ += face_size_[a];
        face_offset_[2 * a + 1] = shell_size_;
        shell_size_ += face_size_[a];
    }
}

BoxDomain BoxDomain::cube(int d, std::int64_t L)
{
    if (d < 1 || L < 0)
    {
        throw ParameterError("cube requires d >= 1 and L >= 0");
    }
    return BoxDomain(Vertex(d, -L), Vertex(d, L));
}

bool BoxDomain::contains(std::span<const std::int64_t> v) const noexcept
{
    if (v.size() != lo_.size())
        return false;
    for (std::size_t a = 0; a < v.size(); ++a)
    {
        if (v[a] < lo_[a] || v[a] > hi_[a])
            return false;
    }
    return true;
}

std::size_t BoxDomain::index(std::span<const std::int64_t> v) const
{
    if (!contains(v))
    {
        throw DomainError("vertex outside the box");
    }
    std::size_t idx = 0;
    for (int a = 0; a < dim(); ++a)
    {
        idx += static_cast<std::size_t>(v[a] - lo_[a]) * stride_[a];
    }
    return idx;
}

void BoxDomain::vertex(std::size_t index, std::span<std::int64_t> out) const
{
    for (int a = 0; a < dim(); ++a)
    {
        out[a] = lo_[a] + static_cast<std::int64_t>(index / stride_[a]);
        index %= stride_[a];
    }
}

Vertex BoxDomain::vertex(std::size_t index) const
{
    if (index >= size_)
    {
        throw DomainError("vertex index out of range");
    }
    Vertex v(dim());
    vertex(index, v);
    return v;
}

std::optional<std::size_t>
BoxDomain::shell_index(std::span<const std::int64_t> v) const noexcept
{
    if (v.size() != lo_.size())
        return std::nullopt;
    int out_axis = -1;
    int side = 0;
    for (int a = 0; a < dim(); ++a)
    {
        if (v[a] >= lo_[a] && v[a] <= hi_[a])
            continue;
        if (out_axis >= 0)
            return std::nullopt;  // two coordinates out of range
        if (v[a] == lo_[a] - 1)
            side = 0;
        else if (v[a] == hi_[a] + 1)
            side = 1;
        else
            return std::nullopt;
        out_axis = a;
    }
    if (out_axis < 0)
        return std::nullopt;
    std::size_t idx = 0;
    for (int a = 0; a < dim(); ++a)
    {
        if (a == out_axis)
            continue;
        idx = idx * static_cast<std::size_t>(extent_[a])
              + static_cast<std::size_t>(v[a] - lo_[a]);
    }
    return face_offset_[2 * out_axis + side] + idx;
}

Vertex BoxDomain::shell_vertex(std::size_t s) const
{
    if (s >= shell_size_)
    {
        throw DomainError("shell index out of range");
    }
    int face = 0;
    while (face + 1 < 2 * dim() && face_offset_[face + 1] <= s)
        ++face;
    const int axis = face / 2;
    const int side = face % 2;
    std::size_t rem = s - face_offset_[face];
    Vertex v(dim());
    for (int a = dim() - 1; a >= 0; --a)
    {
        if (a == axis)
            continue;
        v[a] = lo_[a] + static_cast<std::int64_t>(rem % extent_[a]);
        rem /= static_cast<std::size_t>(extent_[a]);
    }
    v[axis] = side == 0 ? lo_[axis] - 1 : hi_[axis] + 1;
    return v;
}

std::size_t BoxDomain::shell_neighbor(std::size_t s) const
{
    Vertex v = shell_vertex(s);
    for (int a = 0; a < dim(); ++a)
    {
        if (v[a] < lo_[a])
            v[a] = lo_[a];
        else if (v[a] > hi_[a])
            v[a] = hi_[a];
    }
    return index(v);
}

std::int64_t
BoxDomain::boundary_distance(std::span<const std::int64_t> v) const
{
    if (!contains(v))
    {
        throw DomainError("boundary distance requires a vertex in the box");
    }
    std::int64_t r = std::numeric_limits<std::int64_t>::max();
    for (int a = 0; a < dim(); ++a)
    {
        r = std::min({r, v[a] - lo_[a] + 1, hi_[a] - v[a] + 1});
    }
    return r;
}

std::int64_t BoxDomain::boundary_distance(std::size_t index) const
{
    return boundary_distance(vertex(index));
}

Vertex BoxDomain::center() const
{
    Vertex c(dim());
    for (int a = 0; a < dim(); ++a)
    {
        // floor of the midpoint
        std::int64_t sum = lo_[a] + hi_[a];
        c[a] = sum >= 0 ? sum / 2 : -((-sum + 1) / 2);
    }
    return c;
}

//---------------------------------------------------------------------------//
// Surface
//---------------------------------------------------------------------------//

Surface::Surface(BoxDomain domain, int components)
    : domain_(std::move(domain)), n_(components)
{
    if (n_ < 1)
    {
        throw ParameterError("surfaces need at least one component");
    }
    interior_.assign(domain_.size() * n_, 0.0);
    shell_.assign(domain_.shell_size() * n_, 0.0);
}

Point Surface::value(std::span<const std::int64_t> v) const
{
    Point out(n_, 0.0);
    if (domain_.contains(v))
    {
        auto src = at(domain_.index(v));
        std::copy(src.begin(), src.end(), out.begin());
    }
    else if (auto s = domain_.shell_index(v))
    {
        auto src = shell_at(*s);
        std::copy(src.begin(), src.end(), out.begin());
    }
    return out;
}

void Surface::set(std::span<const std::int64_t> v, std::span<const double> value)
{
    if (value.size() != static_cast<std::size_t>(n_))
    {
        throw ContractError("value has the wrong number of components");
    }
    std::span<double> dst;
    if (domain_.contains(v))
        dst = at(domain_.index(v));
    else if (auto s = domain_.shell_index(v))
        dst = shell_at(*s);
    else
        throw DomainError("surface values can only be set on the box and its shell");
    std::copy(value.begin(), value.end(), dst.begin());
}

Surface Surface::with_zero_interior() const
{
    Surface s = *this;
    std::fill(s.interior_.begin(), s.interior_.end(), 0.0);
    return s;
}

Surface Surface::with_zero_shell() const
{
    Surface s = *this;
    std::fill(s.shell_.begin(), s.shell_.end(), 0.0);
    return s;
}

bool Surface::all_finite() const noexcept
{
    auto finite = [](double x) { return std::isfinite(x); };
    return std::all_of(interior_.begin(), interior_.end(), finite)
           && std::all_of(shell_.begin(), shell_.end(), finite);
}

namespace {
void require_compatible(const Surface& a, const Surface& b)
{
    if (!(a.domain() == b.domain()) || a.components() != b.components())
    {
        throw ContractError("surfaces must share domain and component count");
    }
}
}  // namespace

Surface& Surface::operator+=(const Surface& other)
{
    require_compatible(*this, other);
    for (std::size_t i = 0; i < interior_.size(); ++i)
        interior_[i] += other.interior_[i];
    for (std::size_t i = 0; i < shell_.size(); ++i)
        shell_[i] += other.shell_[i];
    return *this;
}

Surface& Surface::operator-=(const Surface& other)
{
    require_compatible(*this, other);
    for (std::size_t i = 0; i < interior_.size(); ++i)
        interior_[i] -= other.interior_[i];
    for (std::size_t i = 0; i < shell_.size(); ++i)
        shell_[i] -= other.shell_[i];
    return *this;
}

Surface& Surface::operator*=(double factor)
{
    for (auto& x : interior_)
        x *= factor;
    for (auto& x : shell_)
        x *= factor;
    return *this;
}

double max_abs_difference(const Surface& a, const Surface& b)
{
    require_compatible(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.interior().size(); ++i)
        m = std::max(m, std::abs(a.interior()[i] - b.interior()[i]));
    for (std::size_t i = 0; i < a.shell().size(); ++i)
        m = std::max(m, std::abs(a.shell()[i] - b.shell()[i]));
    return m;
}

//---------------------------------------------------------------------------//
// Operators
//---------------------------------------------------------------------------//

Surface laplacian(const Surface& phi)
{
    const auto& dom = phi.domain();
    const int n = phi.components();
    Surface out(dom, n);
    for_each_edge(dom, [&](std::size_t i, bool shell, std::size_t j) {
        auto pi = phi.at(i);
        auto pj = shell ? phi.shell_at(j) : phi.at(j);
        auto oi = out.at(i);
        auto oj = shell ? out.shell_at(j) : out.at(j);
        for (int c = 0; c < n; ++c)
        {
            double diff = pj[c] - pi[c];
            oi[c] += diff;
            oj[c] -= diff;
        }
    });
    return out;
}

double dirichlet_inner(const Surface& phi, const Surface& psi)
{
    require_compatible(phi, psi);
    const int n = phi.components();
    double total = 0.0;
    for_each_edge(phi.domain(), [&](std::size_t i, bool shell, std::size_t j) {
        auto a_i = phi.at(i);
        auto a_j = shell ? phi.shell_at(j) : phi.at(j);
        auto b_i = psi.at(i);
        auto b_j = shell ? psi.shell_at(j) : psi.at(j);
        for (int c = 0; c < n; ++c)
            total += (a_i[c] - a_j[c]) * (b_i[c] - b_j[c]);
    });
    return total;
}

double dirichlet_norm2(const Surface& phi) { return dirichlet_inner(phi, phi); }

double l2_inner(const Surface& phi, const Surface& psi)
{
    require_compatible(phi, psi);
    double total = 0.0;
    for (std::size_t i = 0; i < phi.interior().size(); ++i)
        total += phi.interior()[i] * psi.interior()[i];
    for (std::size_t i = 0; i < phi.shell().size(); ++i)
        total += phi.shell()[i] * psi.shell()[i];
    return total;
}

Surface harmonic_extension(const Surface& tau, double tolerance)
{
    const auto& dom = tau.domain();
    const int n = tau.components();
    Surface out = tau.with_zero_interior();

    std::vector<double> rhs(dom.size());
    for (int c = 0; c < n; ++c)
    {
        std::fill(rhs.begin(), rhs.end(), 0.0);
        for (std::size_t s = 0; s < dom.shell_size(); ++s)
        {
            rhs[dom.shell_neighbor(s)] += tau.shell_at(s)[c];
        }
        CgOptions opt;
        opt.tolerance = tolerance;
        auto result = solve_dirichlet(dom, rhs, opt);
        for (std::size_t i = 0; i < dom.size(); ++i)
            out.at(i)[c] = result.x[i];
    }
    return out;
}

double dirichlet_energy_of_bc(const Surface& tau)
{
    return dirichlet_norm2(harmonic_extension(tau));
}

double max_laplacian_on_box(const Surface& phi)
{
    Surface lap = laplacian(phi);
    double m = 0.0;
    for (double x : lap.interior())
        m = std::max(m, std::abs(x));
    return m;
}

}  // namespace msre
