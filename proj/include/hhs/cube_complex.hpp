#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hhs/bits.hpp"
#include "hhs/raag.hpp"

namespace hhs {

struct ConvexSubcomplex {
    std::vector<int> vertices;  // sorted vertex ids
    Bits crossing;              // walls with an edge inside the subcomplex

    bool contains(int v) const;
    bool operator==(const ConvexSubcomplex& o) const { return vertices == o.vertices; }
};

struct PeriodicPresentation {
    Raag raag;
    int realized_radius = 0;
    int margin = 0;
};

struct ExplicitDescription {
    std::vector<std::string> vertices;
    std::vector<std::pair<std::string, std::string>> edges;
    bool operator==(const ExplicitDescription&) const = default;
};

// Median graph together with its hyperplanes. Halfspace bit w of a vertex is
// set iff the vertex lies on the side of wall w away from the basepoint.
class CubeComplex {
public:
    static CubeComplex build_explicit(const ExplicitDescription& d);
    static CubeComplex build_raag_ball(const Raag& raag, int radius, int margin);

    int num_vertices() const { return static_cast<int>(adj_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_walls() const { return static_cast<int>(wall_edges_.size()); }

    const std::string& label(int v) const { return labels_[v]; }
    int find(const std::string& label) const;
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    int edge_wall(int e) const { return edge_wall_[e]; }
    int wall_between(int u, int v) const;
    const std::vector<int>& wall_edges(int w) const { return wall_edges_[w]; }
    const Bits& signs(int v) const { return sign_[v]; }
    bool sign(int v, int w) const { return sign_[v].test(static_cast<std::size_t>(w)); }
    const Bits& crossing_walls_of(int w) const { return cross_[w]; }
    bool walls_cross(int w1, int w2) const { return cross_[w1].test(static_cast<std::size_t>(w2)); }

    int basepoint() const { return basepoint_; }
    int trusted_radius() const { return trusted_radius_; }
    int depth(int v) const { return depth_[v]; }
    bool trusted(int v) const { return depth_[v] <= trusted_radius_; }
    std::vector<int> trusted_vertices() const;
    const std::optional<PeriodicPresentation>& periodic() const { return periodic_; }
    const Word& word(int v) const { return words_[v]; }
    int vertex_of(const Word& w) const;

    int dist(int x, int y) const { return static_cast<int>(Bits::xor_count(sign_[x], sign_[y])); }
    int vertex_with_signs(const Bits& s) const;
    // Majority-vote median; -1 when it falls outside the realized complex.
    int median(int x, int y, int z) const;

    ConvexSubcomplex subcomplex(std::vector<int> vertices) const;
    ConvexSubcomplex whole() const;
    int gate(const ConvexSubcomplex& f, int x) const;
    ConvexSubcomplex convex_hull(const std::vector<int>& s) const;
    ConvexSubcomplex median_closure(const std::vector<int>& s) const;
    static bool parallel(const ConvexSubcomplex& a, const ConvexSubcomplex& b) { return a.crossing == b.crossing; }

    // Vertices with an incident edge in wall w, on the given side.
    ConvexSubcomplex hyperplane_side(int w, bool far_side) const;
    ConvexSubcomplex carrier(int w) const;
    std::vector<int> walls_at(int v) const;
    // A geodesic edge path from x to y, greedy by least neighbour id.
    std::vector<int> geodesic(int x, int y) const;
    std::vector<int> bfs_distances(int src) const;

private:
    void finish(int basepoint);

    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> by_label_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::pair<int, int>> edges_;
    std::unordered_map<long long, int> edge_index_;
    std::vector<int> edge_wall_;
    std::vector<std::vector<int>> wall_edges_;
    std::vector<Bits> sign_;
    std::vector<Bits> cross_;
    std::unordered_map<Bits, int, BitsHash> by_sign_;
    std::vector<int> depth_;
    int basepoint_ = 0;
    int trusted_radius_ = 0;
    std::optional<PeriodicPresentation> periodic_;
    std::vector<Word> words_;
    std::unordered_map<Word, int, WordHash> by_word_;
};

} // namespace hhs
