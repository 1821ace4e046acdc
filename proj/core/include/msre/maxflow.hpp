#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace msre {

//---------------------------------------------------------------------------//
/*!
 * Max-flow / min-cut on a directed graph with real capacities.
 *
 * Arcs are added first, then max_flow() runs once (Boykov-Kolmogorov).
 * Capacities may be +inf as long as no s-t path consists of infinite arcs
 * only. Residual capacities below `eps` count as saturated.
 */
class MaxFlow
{
  public:
    explicit MaxFlow(std::size_t nodes);

    std::size_t add_node();
    /// Arc u -> v with capacity cap and reverse capacity rev_cap.
    void add_arc(std::size_t u, std::size_t v, double cap, double rev_cap = 0.0);

    double max_flow(std::size_t s, std::size_t t, double eps);

    /// After max_flow: nodes reachable from s in the residual graph (the
    /// source side of the minimal minimum cut).
    const std::vector<char>& source_side() const noexcept { return reach_; }

    std::size_t node_count() const noexcept { return nodes_; }
    std::size_t arc_count() const noexcept { return from_.size(); }

  private:
    std::size_t nodes_;
    // arc list, paired: arc 2k is forward, 2k+1 its reverse
    std::vector<std::uint32_t> from_;
    std::vector<std::uint32_t> to_;
    std::vector<double> cap_;
    std::vector<char> reach_;
};

}  // namespace msre
