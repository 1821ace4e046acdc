#pragma once

#include <vector>

#include "msre/disorder.hpp"
#include "msre/lattice.hpp"

namespace msre {

//---------------------------------------------------------------------------//
/*!
 * Finite-volume model: box, disorder, coupling lambda and boundary data.
 * Boundary data are the shell values of `tau`; its interior is ignored.
 */
class EnergyModel
{
  public:
    EnergyModel(DisorderField disorder, double lambda, Surface tau);
    /// Zero boundary data.
    EnergyModel(BoxDomain domain, DisorderField disorder, double lambda);

    const BoxDomain& domain() const noexcept { return tau_.domain(); }
    const DisorderField& disorder() const noexcept { return disorder_; }
    double lambda() const noexcept { return lambda_; }
    const Surface& tau() const noexcept { return tau_; }
    int components() const noexcept { return tau_.components(); }
    bool zero_boundary() const noexcept;

    /// Surface with the model's boundary values and the given interior.
    Surface admissible(std::span<const double> interior) const;
    /// Admissible surface with zero interior.
    Surface zero_surface() const { return tau_.with_zero_interior(); }

  private:
    DisorderField disorder_;
    double lambda_;
    Surface tau_;
};

/*!
 * 1/2 ||grad phi||^2 + lambda sum_v eta_{v, phi_v}, reading the boundary
 * values from phi itself. +inf as soon as one site term is +inf.
 */
double hamiltonian(const DisorderField& eta, double lambda, const Surface& phi);

/// Hamiltonian of an admissible surface; ContractError if phi's shell
/// values differ from the model's boundary data.
double energy(const EnergyModel& model, const Surface& phi);

/// lambda eta_{v, phi_v} per interior vertex.
std::vector<double> site_energies(const EnergyModel& model, const Surface& phi);

}  // namespace msre
