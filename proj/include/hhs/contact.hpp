#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hhs/cube_complex.hpp"
#include "hhs/space.hpp"

namespace hhs {

class ContactGraph {
public:
    struct Node {
        bool cone = false;
        int id = 0;  // wall id, or domain id for a cone
        std::string name;
    };

    int add_wall(int w, const std::string& name);
    int add_cone(int domain, const std::string& name);
    void add_edge(int a, int b);

    int size() const { return static_cast<int>(nodes_.size()); }
    int num_edges() const { return static_cast<int>(edge_keys_.size()); }
    const Node& node(int i) const { return nodes_[i]; }
    const std::vector<int>& neighbors(int i) const { return adj_[i]; }
    bool adjacent(int a, int b) const;
    int wall_node(int w) const;
    int cone_node(int domain) const;
    int num_cones() const;

    // Distances from the nearest source; -1 when unreachable.
    std::vector<int> bfs(const std::vector<int>& sources) const;
    bool connected() const;
    // -1 for a disconnected graph.
    int diameter() const;
    // Adjacency lists; cone vertices are tagged cone:<class-id>.
    std::string export_text() const;

private:
    std::vector<Node> nodes_;
    std::vector<std::vector<int>> adj_;
    std::unordered_map<int, int> wall_nodes_, cone_nodes_;
    std::unordered_set<long long> edge_keys_;
};

// Walls crossing the region, adjacent iff no third wall of the region
// separates them. The region defaults to the whole complex.
ContactGraph contact_graph(const CubeComplex& x, const ConvexSubcomplex* restrict_to = nullptr);

// Contact graph of F_u over the given window of points of F_u, with each
// proper nested class that crosses a window wall coned off. If carriers is
// given, carriers[node] lists the window points at which the node is local.
ContactGraph factored_contact_graph(Space& s, int u, const std::vector<int>& window,
                                    std::vector<std::vector<int>>* carriers = nullptr);

struct DeltaReport {
    double delta = 0.0;
    long long samples = 0;
    std::array<int, 4> max_witness{0, 0, 0, 0};
};

// Four-point defect: for the three pair sums S1 >= S2 >= S3 of a quadruple,
// delta = (S1 - S2) / 4. Exhaustive when the graph has at most 40 vertices.
DeltaReport delta_probe(const ContactGraph& g, std::uint64_t seed, long long samples);

} // namespace hhs
