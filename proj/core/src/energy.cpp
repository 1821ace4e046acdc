#include "msre/energy.hpp"

#include <cmath>

#include "msre/errors.hpp"

namespace msre {

EnergyModel::EnergyModel(DisorderField disorder, double lambda, Surface tau)
    : disorder_(std::move(disorder)), lambda_(lambda), tau_(tau.with_zero_interior())
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ParameterError("lambda must be positive and finite");
    if (disorder_.components() != tau_.components())
        throw ContractError("disorder and boundary data disagree on n");
    if (!tau_.all_finite())
        throw ContractError("boundary data must be finite");
}

EnergyModel::EnergyModel(BoxDomain domain, DisorderField disorder, double lambda)
    : EnergyModel(disorder, lambda, Surface(std::move(domain), disorder.components()))
{
}

bool EnergyModel::zero_boundary() const noexcept
{
    for (double x : tau_.shell())
        if (x != 0.0)
            return false;
    return true;
}

Surface EnergyModel::admissible(std::span<const double> interior) const
{
    if (interior.size() != tau_.interior().size())
        throw ContractError("interior values have the wrong size");
    Surface s = tau_;
    std::copy(interior.begin(), interior.end(), s.interior().begin());
    return s;
}

double hamiltonian(const DisorderField& eta, double lambda, const Surface& phi)
{
    if (eta.components() != phi.components())
        throw ContractError("disorder and surface disagree on n");
    const auto& dom = phi.domain();
    double site = 0.0;
    Vertex v(dom.dim());
    for (std::size_t i = 0; i < dom.size(); ++i)
    {
        dom.vertex(i, v);
        double e = eta.eval(v, phi.at(i));
        if (e == kInfinity)
            return kInfinity;
        site += e;
    }
    return 0.5 * dirichlet_norm2(phi) + lambda * site;
}

double energy(const EnergyModel& model, const Surface& phi)
{
    if (!(phi.domain() == model.domain()) || phi.components() != model.components())
        throw ContractError("surface does not live on the model's box");
    const auto& tau = model.tau();
    for (std::size_t s = 0; s < phi.shell().size(); ++s)
    {
        if (phi.shell()[s] != tau.shell()[s])
        {
            auto w = model.domain().shell_vertex(s / phi.components());
            std::string where;
            for (auto c : w)
                where += (where.empty() ? "" : ",") + std::to_string(c);
            throw ContractError("surface violates the boundary condition at (" + where + ")");
        }
    }
    return hamiltonian(model.disorder(), model.lambda(), phi);
}

std::vector<double> site_energies(const EnergyModel& model, const Surface& phi)
{
    const auto& dom = model.domain();
    std::vector<double> out(dom.size());
    Vertex v(dom.dim());
    for (std::size_t i = 0; i < dom.size(); ++i)
    {
        dom.vertex(i, v);
        out[i] = model.lambda() * model.disorder().eval(v, phi.at(i));
    }
    return out;
}

}  // namespace msre
