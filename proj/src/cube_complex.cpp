#include "hhs/cube_complex.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "hhs/errors.hpp"

namespace hhs {

namespace {

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(static_cast<std::size_t>(n)) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) p[std::max(a, b)] = std::min(a, b);
    }
};

constexpr int kExhaustiveMedianCheck = 400;

} // namespace

bool ConvexSubcomplex::contains(int v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
}

int CubeComplex::find(const std::string& label) const {
    auto it = by_label_.find(label);
    return it == by_label_.end() ? -1 : it->second;
}

int CubeComplex::wall_between(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = edge_index_.find(static_cast<long long>(u) * num_vertices() + v);
    return it == edge_index_.end() ? -1 : edge_wall_[it->second];
}

std::vector<int> CubeComplex::trusted_vertices() const {
    std::vector<int> out;
    for (int v = 0; v < num_vertices(); ++v)
        if (trusted(v)) out.push_back(v);
    return out;
}

int CubeComplex::vertex_of(const Word& w) const {
    auto it = by_word_.find(w);
    return it == by_word_.end() ? -1 : it->second;
}

int CubeComplex::vertex_with_signs(const Bits& s) const {
    auto it = by_sign_.find(s);
    return it == by_sign_.end() ? -1 : it->second;
}

int CubeComplex::median(int x, int y, int z) const {
    const Bits& a = sign_[x];
    const Bits& b = sign_[y];
    const Bits& c = sign_[z];
    Bits m = (a & b) | (a & c) | (b & c);
    return vertex_with_signs(m);
}

std::vector<int> CubeComplex::bfs_distances(int src) const {
    std::vector<int> d(adj_.size(), -1);
    std::deque<int> q{src};
    d[src] = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : adj_[u])
            if (d[v] < 0) {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
    }
    return d;
}

void CubeComplex::finish(int basepoint) {
    const int n = num_vertices();
    basepoint_ = basepoint;
    depth_ = bfs_distances(basepoint);
    for (int v = 0; v < n; ++v)
        if (depth_[v] < 0) fail("Disconnected", "vertex " + labels_[v] + " is unreachable");

    for (auto& a : adj_) std::sort(a.begin(), a.end());
    Dsu dsu(num_edges());
    auto eid = [&](int u, int v) {
        if (u > v) std::swap(u, v);
        return edge_index_.at(static_cast<long long>(u) * n + v);
    };
    std::vector<std::pair<int, int>> square_walls;
    for (int u = 0; u < n; ++u) {
        const auto& nu = adj_[u];
        for (std::size_t i = 0; i < nu.size(); ++i)
            for (std::size_t j = i + 1; j < nu.size(); ++j) {
                int v = nu[i], w = nu[j];
                const auto& a = adj_[v];
                const auto& b = adj_[w];
                std::size_t p = 0, q = 0;
                while (p < a.size() && q < b.size()) {
                    if (a[p] < b[q]) {
                        ++p;
                    } else if (b[q] < a[p]) {
                        ++q;
                    } else {
                        int x = a[p];
                        if (x != u) {
                            dsu.unite(eid(u, v), eid(w, x));
                            dsu.unite(eid(u, w), eid(v, x));
                            square_walls.emplace_back(eid(u, v), eid(u, w));
                        }
                        ++p;
                        ++q;
                    }
                }
            }
    }
    std::vector<int> root_to_wall(static_cast<std::size_t>(num_edges()), -1);
    edge_wall_.assign(static_cast<std::size_t>(num_edges()), -1);
    wall_edges_.clear();
    for (int e = 0; e < num_edges(); ++e) {
        int r = dsu.find(e);
        if (root_to_wall[r] < 0) {
            root_to_wall[r] = static_cast<int>(wall_edges_.size());
            wall_edges_.emplace_back();
        }
        edge_wall_[e] = root_to_wall[r];
        wall_edges_[root_to_wall[r]].push_back(e);
    }
    const auto nw = static_cast<std::size_t>(num_walls());

    sign_.assign(static_cast<std::size_t>(n), Bits(nw));
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::deque<int> q{basepoint};
    seen[basepoint] = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : adj_[u])
            if (!seen[v]) {
                seen[v] = 1;
                sign_[v] = sign_[u];
                sign_[v].flip(static_cast<std::size_t>(wall_between(u, v)));
                q.push_back(v);
            }
    }
    for (int e = 0; e < num_edges(); ++e) {
        auto [u, v] = edges_[e];
        Bits d = sign_[u] ^ sign_[v];
        if (d.count() != 1 || !d.test(static_cast<std::size_t>(edge_wall_[e])))
            fail("NotMedian", "square-closure class of edge " + labels_[u] + "-" + labels_[v] + " does not separate");
    }
    by_sign_.clear();
    for (int v = 0; v < n; ++v)
        if (!by_sign_.emplace(sign_[v], v).second) fail("NotMedian", "two vertices share all halfspaces");

    cross_.assign(nw, Bits(nw));
    for (auto [e1, e2] : square_walls) {
        auto w1 = static_cast<std::size_t>(edge_wall_[e1]);
        auto w2 = static_cast<std::size_t>(edge_wall_[e2]);
        cross_[w1].set(w2);
        cross_[w2].set(w1);
    }
}

CubeComplex CubeComplex::build_explicit(const ExplicitDescription& d) {
    CubeComplex x;
    if (d.vertices.empty()) fail("InvalidInput", "no vertices");
    for (const auto& name : d.vertices) {
        if (!x.by_label_.emplace(name, static_cast<int>(x.labels_.size())).second)
            fail("InvalidInput", "duplicate vertex " + name);
        x.labels_.push_back(name);
    }
    const int n = static_cast<int>(d.vertices.size());
    x.adj_.assign(static_cast<std::size_t>(n), {});
    std::set<std::pair<int, int>> es;
    for (const auto& [a, b] : d.edges) {
        int u = x.find(a), v = x.find(b);
        if (u < 0 || v < 0) fail("InvalidInput", "edge references unknown vertex " + (u < 0 ? a : b));
        if (u == v) fail("InvalidInput", "loop at " + a);
        es.emplace(std::min(u, v), std::max(u, v));
    }
    for (auto [u, v] : es) {
        x.edge_index_[static_cast<long long>(u) * n + v] = static_cast<int>(x.edges_.size());
        x.edges_.emplace_back(u, v);
        x.adj_[u].push_back(v);
        x.adj_[v].push_back(u);
    }
    x.finish(0);

    int diam = 0;
    std::vector<std::vector<int>> dist;
    for (int v = 0; v < n; ++v) {
        dist.push_back(x.bfs_distances(v));
        diam = std::max(diam, *std::max_element(dist.back().begin(), dist.back().end()));
    }
    x.trusted_radius_ = diam;
    if (n <= kExhaustiveMedianCheck) {
        std::vector<Bits> interval(static_cast<std::size_t>(n) * n, Bits(static_cast<std::size_t>(n)));
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                Bits& iv = interval[static_cast<std::size_t>(a) * n + b];
                for (int m = 0; m < n; ++m)
                    if (dist[a][m] + dist[m][b] == dist[a][b]) iv.set(static_cast<std::size_t>(m));
                interval[static_cast<std::size_t>(b) * n + a] = iv;
            }
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                for (int c = b; c < n; ++c) {
                    Bits m = interval[static_cast<std::size_t>(a) * n + b] & interval[static_cast<std::size_t>(b) * n + c] &
                             interval[static_cast<std::size_t>(a) * n + c];
                    if (m.count() != 1)
                        fail("NotMedian", "triple (" + x.labels_[a] + "," + x.labels_[b] + "," + x.labels_[c] + ") has " +
                                              std::to_string(m.count()) + " medians");
                }
    }
    return x;
}

CubeComplex CubeComplex::build_raag_ball(const Raag& raag, int radius, int margin) {
    if (radius <= margin) fail("RadiusTooSmall", "radius must exceed margin");
    if (margin < 2) fail("RadiusTooSmall", "margin must be at least 2");
    CubeComplex x;
    std::vector<Word> level{Word{}};
    std::unordered_map<Word, int, WordHash> seen;
    auto add = [&](const Word& w) {
        int id = static_cast<int>(x.words_.size());
        seen.emplace(w, id);
        x.words_.push_back(w);
    };
    add(Word{});
    for (int k = 1; k <= radius; ++k) {
        std::vector<Word> next;
        std::unordered_map<Word, char, WordHash> fresh;
        for (const auto& w : level)
            for (int g = 0; g < raag.rank(); ++g)
                for (int e : {1, -1}) {
                    Word y = raag.mul(w, raag.letter(g, e));
                    if (Raag::length(y) == k && !seen.count(y) && fresh.emplace(y, 1).second) next.push_back(y);
                }
        std::sort(next.begin(), next.end(), shortlex_less);
        for (const auto& w : next) add(w);
        level = std::move(next);
    }
    const int n = static_cast<int>(x.words_.size());
    x.by_word_ = std::move(seen);
    x.adj_.assign(static_cast<std::size_t>(n), {});
    for (int v = 0; v < n; ++v) {
        x.labels_.push_back(raag.str(x.words_[v]));
        x.by_label_.emplace(x.labels_.back(), v);
    }
    std::vector<std::pair<int, int>> es;
    for (int v = 0; v < n; ++v)
        for (int g = 0; g < raag.rank(); ++g) {
            int u = x.vertex_of(raag.mul(x.words_[v], raag.letter(g, 1)));
            if (u >= 0) es.emplace_back(std::min(u, v), std::max(u, v));
        }
    std::sort(es.begin(), es.end());
    for (auto [u, v] : es) {
        x.edge_index_[static_cast<long long>(u) * n + v] = static_cast<int>(x.edges_.size());
        x.edges_.emplace_back(u, v);
        x.adj_[u].push_back(v);
        x.adj_[v].push_back(u);
    }
    x.finish(0);
    x.trusted_radius_ = radius - margin;
    x.periodic_ = PeriodicPresentation{raag, radius, margin};
    return x;
}

ConvexSubcomplex CubeComplex::subcomplex(std::vector<int> vertices) const {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    ConvexSubcomplex f;
    f.crossing = Bits(static_cast<std::size_t>(num_walls()));
    if (!vertices.empty()) {
        const Bits& s0 = sign_[vertices[0]];
        for (int v : vertices) f.crossing |= sign_[v] ^ s0;
    }
    f.vertices = std::move(vertices);
    return f;
}

ConvexSubcomplex CubeComplex::whole() const {
    std::vector<int> all(adj_.size());
    std::iota(all.begin(), all.end(), 0);
    return subcomplex(std::move(all));
}

int CubeComplex::gate(const ConvexSubcomplex& f, int x) const {
    if (f.vertices.empty()) fail("EmptySubcomplex", "gate onto an empty subcomplex");
    Bits s = (sign_[x] & f.crossing) | (sign_[f.vertices[0]] & ~f.crossing);
    int g = vertex_with_signs(s);
    if (g < 0 || !f.contains(g)) fail("Untrusted", "gate of " + labels_[x] + " leaves the realized complex");
    return g;
}

ConvexSubcomplex CubeComplex::convex_hull(const std::vector<int>& s) const {
    if (s.empty()) return subcomplex({});
    Bits varying(static_cast<std::size_t>(num_walls()));
    const Bits& s0 = sign_[s[0]];
    for (int v : s) varying |= sign_[v] ^ s0;
    Bits fixed = ~varying;
    std::vector<int> out;
    for (int v = 0; v < num_vertices(); ++v)
        if (!((sign_[v] ^ s0) & fixed).any()) {
            if (periodic_ && depth_[v] >= periodic_->realized_radius)
                fail("Untrusted", "hull reaches the edge of the realized ball");
            out.push_back(v);
        }
    return subcomplex(std::move(out));
}

ConvexSubcomplex CubeComplex::median_closure(const std::vector<int>& s) const {
    std::vector<char> in(adj_.size(), 0);
    std::vector<int> cur;
    for (int v : s)
        if (!in[v]) {
            in[v] = 1;
            cur.push_back(v);
        }
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> snapshot = cur;
        for (std::size_t i = 0; i < snapshot.size(); ++i)
            for (std::size_t j = i + 1; j < snapshot.size(); ++j)
                for (int z = 0; z < num_vertices(); ++z) {
                    int m = median(snapshot[i], snapshot[j], z);
                    if (m >= 0 && !in[m]) {
                        in[m] = 1;
                        cur.push_back(m);
                        grew = true;
                    }
                }
    }
    return subcomplex(std::move(cur));
}

ConvexSubcomplex CubeComplex::hyperplane_side(int w, bool far_side) const {
    std::vector<int> vs;
    for (int e : wall_edges_[w])
        for (int v : {edges_[e].first, edges_[e].second})
            if (sign(v, w) == far_side) vs.push_back(v);
    return subcomplex(std::move(vs));
}

ConvexSubcomplex CubeComplex::carrier(int w) const {
    std::vector<int> vs;
    for (int e : wall_edges_[w]) {
        vs.push_back(edges_[e].first);
        vs.push_back(edges_[e].second);
    }
    return subcomplex(std::move(vs));
}

std::vector<int> CubeComplex::walls_at(int v) const {
    std::vector<int> out;
    for (int u : adj_[v]) out.push_back(wall_between(u, v));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> CubeComplex::geodesic(int x, int y) const {
    std::vector<int> path{x};
    int cur = x;
    while (cur != y) {
        int d = dist(cur, y);
        int next = -1;
        for (int u : adj_[cur])
            if (dist(u, y) < d) {
                next = u;
                break;
            }
        if (next < 0) fail("Untrusted", "no geodesic step inside the realized complex");
        cur = next;
        path.push_back(cur);
    }
    return path;
}

} // namespace hhs
