#include "hhs/contact.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "hhs/errors.hpp"

namespace hhs {

int ContactGraph::add_wall(int w, const std::string& name) {
    auto it = wall_nodes_.find(w);
    if (it != wall_nodes_.end()) return it->second;
    int id = size();
    nodes_.push_back({false, w, name});
    adj_.emplace_back();
    wall_nodes_.emplace(w, id);
    return id;
}

int ContactGraph::add_cone(int domain, const std::string& name) {
    auto it = cone_nodes_.find(domain);
    if (it != cone_nodes_.end()) return it->second;
    int id = size();
    nodes_.push_back({true, domain, name});
    adj_.emplace_back();
    cone_nodes_.emplace(domain, id);
    return id;
}

void ContactGraph::add_edge(int a, int b) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    if (!edge_keys_.insert((static_cast<long long>(a) << 32) | static_cast<unsigned>(b)).second) return;
    adj_[a].push_back(b);
    adj_[b].push_back(a);
}

bool ContactGraph::adjacent(int a, int b) const {
    if (a > b) std::swap(a, b);
    return edge_keys_.count((static_cast<long long>(a) << 32) | static_cast<unsigned>(b)) > 0;
}

int ContactGraph::wall_node(int w) const {
    auto it = wall_nodes_.find(w);
    return it == wall_nodes_.end() ? -1 : it->second;
}

int ContactGraph::cone_node(int domain) const {
    auto it = cone_nodes_.find(domain);
    return it == cone_nodes_.end() ? -1 : it->second;
}

int ContactGraph::num_cones() const { return static_cast<int>(cone_nodes_.size()); }

std::vector<int> ContactGraph::bfs(const std::vector<int>& sources) const {
    std::vector<int> d(nodes_.size(), -1);
    std::deque<int> q;
    for (int s : sources)
        if (d[s] < 0) {
            d[s] = 0;
            q.push_back(s);
        }
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int n : adj_[v])
            if (d[n] < 0) {
                d[n] = d[v] + 1;
                q.push_back(n);
            }
    }
    return d;
}

bool ContactGraph::connected() const {
    if (nodes_.empty()) return true;
    auto d = bfs({0});
    return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

int ContactGraph::diameter() const {
    int best = 0;
    for (int s = 0; s < size(); ++s) {
        auto d = bfs({s});
        for (int x : d) {
            if (x < 0) return -1;
            best = std::max(best, x);
        }
    }
    return best;
}

std::string ContactGraph::export_text() const {
    std::ostringstream os;
    os << "contact-graph\n";
    os << "vertices: " << size() << "\n";
    for (int i = 0; i < size(); ++i) {
        os << i << " " << (nodes_[i].cone ? "cone:" : "wall:") << nodes_[i].name << " |";
        auto ns = adj_[i];
        std::sort(ns.begin(), ns.end());
        for (int n : ns) os << " " << n;
        os << "\n";
    }
    return os.str();
}

ContactGraph contact_graph(const CubeComplex& x, const ConvexSubcomplex* restrict_to) {
    ContactGraph g;
    std::vector<int> region;
    if (restrict_to) {
        region = restrict_to->vertices;
    } else {
        region.resize(static_cast<std::size_t>(x.num_vertices()));
        std::iota(region.begin(), region.end(), 0);
    }
    std::vector<char> inside(static_cast<std::size_t>(x.num_vertices()), restrict_to ? 0 : 1);
    for (int v : region) inside[v] = 1;
    Bits crossing(static_cast<std::size_t>(x.num_walls()));
    for (int v : region)
        for (int n : x.neighbors(v))
            if (inside[n]) crossing.set(static_cast<std::size_t>(x.wall_between(v, n)));
    for (int w : crossing.ones()) g.add_wall(w, "w" + std::to_string(w));
    // Two walls of a convex region contact iff dual edges share a vertex.
    std::vector<int> local;
    for (int v : region) {
        local.clear();
        for (int n : x.neighbors(v))
            if (inside[n]) local.push_back(g.wall_node(x.wall_between(v, n)));
        for (std::size_t i = 0; i < local.size(); ++i)
            for (std::size_t j = i + 1; j < local.size(); ++j) g.add_edge(local[i], local[j]);
    }
    return g;
}

ContactGraph factored_contact_graph(Space& s, int u, const std::vector<int>& window,
                                    std::vector<std::vector<int>>* carriers) {
    ContactGraph g;
    LocalView lv;
    std::vector<int> local;
    auto mark = [&](int node, int p) {
        if (!carriers) return;
        if (static_cast<int>(carriers->size()) <= node) carriers->resize(static_cast<std::size_t>(node) + 1);
        auto& c = (*carriers)[node];
        if (c.empty() || c.back() != p) c.push_back(p);
    };
    for (int p : window) {
        s.local_view(u, p, lv);
        local.clear();
        for (int w : lv.walls) {
            local.push_back(g.add_wall(w, s.wall_name(w)));
            mark(local.back(), p);
        }
        for (std::size_t i = 0; i < local.size(); ++i)
            for (std::size_t j = i + 1; j < local.size(); ++j) g.add_edge(local[i], local[j]);
        for (const auto& [c, ws] : lv.cones) {
            int cn = g.add_cone(c, s.domain(c).key);
            mark(cn, p);
            for (int w : ws) g.add_edge(cn, g.add_wall(w, s.wall_name(w)));
        }
    }
    if (carriers) carriers->resize(static_cast<std::size_t>(g.size()));
    return g;
}

namespace {

double defect(int dxy, int dzw, int dxz, int dyw, int dxw, int dyz) {
    std::array<int, 3> sums{dxy + dzw, dxz + dyw, dxw + dyz};
    std::sort(sums.begin(), sums.end(), std::greater<>());
    return (sums[0] - sums[1]) / 4.0;
}

} // namespace

DeltaReport delta_probe(const ContactGraph& g, std::uint64_t seed, long long samples) {
    DeltaReport rep;
    const int n = g.size();
    if (n == 0) return rep;
    if (!g.connected()) fail("DisconnectedGraph", "four-point probe needs a connected graph");
    auto consider = [&](double d, std::array<int, 4> q) {
        ++rep.samples;
        if (d > rep.delta) {
            rep.delta = d;
            rep.max_witness = q;
        }
    };
    if (n <= 40) {
        std::vector<std::vector<int>> dist(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) dist[i] = g.bfs({i});
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                for (int c = b; c < n; ++c)
                    for (int d = c; d < n; ++d)
                        consider(defect(dist[a][b], dist[c][d], dist[a][c], dist[b][d], dist[a][d], dist[b][c]),
                                 {a, b, c, d});
        return rep;
    }
    std::mt19937_64 rng(seed);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int pool = std::min(n, 64);
    order.resize(static_cast<std::size_t>(pool));
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(pool));
    for (int i = 0; i < pool; ++i) rows[i] = g.bfs({order[i]});
    std::uniform_int_distribution<int> pick(0, pool - 1);
    for (long long k = 0; k < samples; ++k) {
        int a = pick(rng), b = pick(rng), c = pick(rng), d = pick(rng);
        int va = order[a], vb = order[b], vc = order[c], vd = order[d];
        consider(defect(rows[a][vb], rows[c][vd], rows[a][vc], rows[b][vd], rows[a][vd], rows[b][vc]),
                 {va, vb, vc, vd});
    }
    return rep;
}

} // namespace hhs
