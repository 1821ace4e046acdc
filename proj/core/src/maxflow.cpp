#include "msre/maxflow.hpp"

#include <cmath>
#include <limits>

#include <boost/graph/boykov_kolmogorov_max_flow.hpp>
#include <boost/graph/compressed_sparse_row_graph.hpp>
#include <boost/property_map/property_map.hpp>
#include <boost/range/iterator_range.hpp>

#include "msre/errors.hpp"

namespace msre {
namespace {

struct ArcId
{
    std::uint32_t id = 0;
};

using Graph = boost::compressed_sparse_row_graph<boost::directedS, boost::no_property, ArcId,
                                                 boost::no_property, std::uint32_t, std::uint32_t>;
using Edge = boost::graph_traits<Graph>::edge_descriptor;

}  // namespace

MaxFlow::MaxFlow(std::size_t nodes) : nodes_(nodes) {}

std::size_t MaxFlow::add_node() { return nodes_++; }

void MaxFlow::add_arc(std::size_t u, std::size_t v, double cap, double rev_cap)
{
    if (u >= nodes_ || v >= nodes_)
        throw ContractError("arc endpoint out of range");
    if (cap < 0.0 || rev_cap < 0.0)
        throw ContractError("capacities must be non-negative");
    if (from_.size() + 2 > std::numeric_limits<std::uint32_t>::max())
        throw ResourceError("too many arcs");
    from_.push_back(static_cast<std::uint32_t>(u));
    to_.push_back(static_cast<std::uint32_t>(v));
    cap_.push_back(cap);
    from_.push_back(static_cast<std::uint32_t>(v));
    to_.push_back(static_cast<std::uint32_t>(u));
    cap_.push_back(rev_cap);
}

double MaxFlow::max_flow(std::size_t s, std::size_t t, double eps)
{
    if (s >= nodes_ || t >= nodes_ || s == t)
        throw ContractError("invalid terminals");

    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs(from_.size());
    std::vector<ArcId> ids(from_.size());
    for (std::size_t e = 0; e < from_.size(); ++e)
    {
        pairs[e] = {from_[e], to_[e]};
        ids[e].id = static_cast<std::uint32_t>(e);
    }
    const Graph g(boost::edges_are_unsorted_multi_pass, pairs.begin(), pairs.end(), ids.begin(),
                  nodes_);
    pairs = {};

    const auto eidx = boost::get(boost::edge_index, g);
    const auto vidx = boost::get(boost::vertex_index, g);
    const std::size_t E = from_.size();
    std::vector<std::uint32_t> slot(E);
    std::vector<Edge> by_slot(E);
    for (auto e : boost::make_iterator_range(boost::edges(g)))
    {
        slot[g[e].id] = e.idx;
        by_slot[e.idx] = e;
    }
    std::vector<double> capacity(E), residual(E);
    std::vector<Edge> reverse(E);
    for (std::size_t a = 0; a < E; ++a)
    {
        capacity[slot[a]] = cap_[a];
        reverse[slot[a]] = by_slot[slot[a ^ 1u]];
    }
    std::vector<Edge> pred(nodes_);
    std::vector<boost::default_color_type> color(nodes_);
    std::vector<std::uint32_t> dist(nodes_);

    const double flow = boost::boykov_kolmogorov_max_flow(
        g, boost::make_iterator_property_map(capacity.begin(), eidx),
        boost::make_iterator_property_map(residual.begin(), eidx),
        boost::make_iterator_property_map(reverse.begin(), eidx),
        boost::make_iterator_property_map(pred.begin(), vidx),
        boost::make_iterator_property_map(color.begin(), vidx),
        boost::make_iterator_property_map(dist.begin(), vidx), vidx,
        static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t));
    if (std::isinf(flow))
        throw InfeasibleError("an s-t path of infinite capacity exists");
    for (std::size_t a = 0; a < E; ++a)
        cap_[a] = residual[slot[a]];

    // residual reachability from s over the stored arc list
    std::vector<std::size_t> first(nodes_ + 1, 0);
    for (auto u : from_)
        ++first[u + 1];
    for (std::size_t i = 0; i < nodes_; ++i)
        first[i + 1] += first[i];
    std::vector<std::uint32_t> adj(from_.size());
    std::vector<std::size_t> pos(first.begin(), first.end() - 1);
    for (std::size_t e = 0; e < from_.size(); ++e)
        adj[pos[from_[e]]++] = static_cast<std::uint32_t>(e);

    reach_.assign(nodes_, 0);
    std::vector<std::uint32_t> stack{static_cast<std::uint32_t>(s)};
    reach_[s] = 1;
    while (!stack.empty())
    {
        auto u = stack.back();
        stack.pop_back();
        for (std::size_t p = first[u]; p < first[u + 1]; ++p)
        {
            auto e = adj[p];
            auto v = to_[e];
            if (!reach_[v] && cap_[e] > eps)
            {
                reach_[v] = 1;
                stack.push_back(v);
            }
        }
    }
    return flow;
}

}  // namespace msre
