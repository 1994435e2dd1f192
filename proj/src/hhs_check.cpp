#include "hhs/hhs_check.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

namespace hhs {

namespace {

constexpr int kFar = 1 << 28;
constexpr long long kRowBudget = 80'000'000;
constexpr std::uint16_t kNoPath = 0xFFFF;

int at(const std::vector<std::uint16_t>& r, int q) { return r[q] == kNoPath ? kFar : r[q]; }

void merge_into(std::vector<int>& out, const std::vector<int>& add) {
    out.insert(out.end(), add.begin(), add.end());
}

void normalize(std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

int ceil_div(int a, int b) { return a <= 0 ? 0 : (a + b - 1) / b; }

} // namespace

Hierarchy::Hierarchy(Space& s, std::vector<int> points, std::vector<int> domains, const WindowFn& window)
    : s_(s), points_(std::move(points)), ids_(std::move(domains)) {
    if (std::find(ids_.begin(), ids_.end(), s_.top()) == ids_.end()) ids_.insert(ids_.begin(), s_.top());
    const int n = num_domains();
    for (int i = 0; i < n; ++i) local_[ids_[i]] = i;
    top_ = local_[s_.top()];
    rel_.assign(static_cast<std::size_t>(n), std::vector<Rel>(static_cast<std::size_t>(n), Rel::Equal));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) rel_[i][j] = s_.relation(ids_[i], ids_[j]);
    windows_.resize(static_cast<std::size_t>(n));
    graphs_.resize(static_cast<std::size_t>(n));
    carriers_.resize(static_cast<std::size_t>(n));
    rows_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        windows_[i] = window(ids_[i]);
        graphs_[i] = factored_contact_graph(s_, ids_[i], windows_[i], &carriers_[i]);
        rows_[i].resize(static_cast<std::size_t>(graphs_[i].size()));
    }
}

int Hierarchy::find(const std::string& key) const {
    for (int i = 0; i < static_cast<int>(ids_.size()); ++i)
        if (s_.domain(ids_[i]).key == key) return i;
    return -1;
}

const std::vector<int>& Hierarchy::pi(int i, int x) {
    auto key = std::make_pair(i, x);
    auto it = pi_cache_.find(key);
    if (it != pi_cache_.end()) return it->second;
    int g = s_.gate(ids_[i], x);
    std::vector<int> out;
    for (int w : s_.walls_of(ids_[i], g)) {
        int node = graphs_[i].wall_node(w);
        if (node < 0) fail("Untrusted", "gate of " + s_.point_name(x) + " leaves the window of " + info(i).key);
        out.push_back(node);
    }
    normalize(out);
    return pi_cache_.emplace(key, std::move(out)).first->second;
}

const std::vector<std::uint16_t>& Hierarchy::row(int i, int a) {
    auto& r = rows_[i][a];
    if (r.empty()) {
        auto d = graphs_[i].bfs({a});
        if (row_entries_ + static_cast<long long>(d.size()) > kRowBudget) {
            for (auto& per : rows_)
                for (auto& x : per) std::vector<std::uint16_t>().swap(x);
            row_entries_ = 0;
        }
        auto& fresh = rows_[i][a];
        fresh.resize(d.size());
        for (std::size_t k = 0; k < d.size(); ++k) fresh[k] = d[k] < 0 || d[k] >= kNoPath ? kNoPath : static_cast<std::uint16_t>(d[k]);
        row_entries_ += static_cast<long long>(d.size());
        return fresh;
    }
    return r;
}

int Hierarchy::dist(int i, int a, int b) { return at(row(i, a), b); }

int Hierarchy::diam(int i, const std::vector<int>& a) {
    int best = 0;
    for (std::size_t p = 0; p < a.size(); ++p) {
        const auto& r = row(i, a[p]);
        for (std::size_t q = p + 1; q < a.size(); ++q) best = std::max(best, at(r, a[q]));
    }
    return best;
}

int Hierarchy::diam_union(int i, const std::vector<int>& a, const std::vector<int>& b) {
    int best = std::max(diam(i, a), diam(i, b));
    for (int p : a) {
        const auto& r = row(i, p);
        for (int q : b) best = std::max(best, at(r, q));
    }
    return best;
}

int Hierarchy::gap(int i, const std::vector<int>& a, const std::vector<int>& b) {
    int best = kFar;
    for (int p : a) {
        const auto& r = row(i, p);
        for (int q : b) best = std::min(best, at(r, q));
    }
    return best;
}

const std::vector<int>& Hierarchy::rho(int i, int j) {
    auto key = std::make_pair(i, j);
    auto it = rho_cache_.find(key);
    if (it == rho_cache_.end()) {
        std::vector<int> out;
        for (int p : windows_[i]) merge_into(out, pi(j, p));
        normalize(out);
        int dm = diam(j, out);
        it = rho_cache_.emplace(key, std::make_pair(std::move(out), dm)).first;
    }
    return it->second.first;
}

int Hierarchy::rho_diam(int i, int j) {
    rho(i, j);
    return rho_cache_.at({i, j}).second;
}

int Hierarchy::d_rho(int i, int j, const std::vector<int>& a) {
    const auto& r = rho(i, j);
    int best = std::max(diam(j, a), rho_diam(i, j));
    for (int p : a) {
        const auto& rw = row(j, p);
        for (int q : r) best = std::max(best, at(rw, q));
    }
    return best;
}

int Hierarchy::d_rho_rho(int i, int j, int k) {
    const auto& a = rho(i, k);
    const auto& b = rho(j, k);
    int best = std::max(rho_diam(i, k), rho_diam(j, k));
    for (int p : a) {
        const auto& rw = row(k, p);
        for (int q : b) best = std::max(best, at(rw, q));
    }
    return best;
}

const std::vector<int>& Hierarchy::rho_down(int i, int j, int node) {
    std::array<int, 3> key{i, j, node};
    auto it = down_cache_.find(key);
    if (it != down_cache_.end()) return it->second;
    std::vector<int> out;
    for (int p : carriers_[i][node]) merge_into(out, pi(j, p));
    normalize(out);
    return down_cache_.emplace(key, std::move(out)).first->second;
}

std::vector<int> Hierarchy::rho_down(int i, int j, const std::vector<int>& nodes) {
    std::vector<int> out;
    for (int n : nodes) merge_into(out, rho_down(i, j, n));
    normalize(out);
    return out;
}

Hierarchy build_structure(ComplexSpace& s, int eval_radius) {
    const CubeComplex& x = s.complex();
    const FactorSystem& fs = s.factors();
    if (eval_radius < 0) eval_radius = x.trusted_radius();
    std::vector<int> points;
    std::set<int> classes{fs.top};
    for (int v = 0; v < x.num_vertices(); ++v) {
        if (x.depth(v) > eval_radius) continue;
        points.push_back(v);
        for (int m : fs.members_at[v]) classes.insert(fs.member_class[m]);
    }
    return Hierarchy(s, points, std::vector<int>(classes.begin(), classes.end()),
                     [&s](int u) { return s.window(u); });
}

std::vector<std::pair<int, int>> all_pairs(const Hierarchy& h) {
    std::vector<std::pair<int, int>> out;
    const auto& p = h.points();
    for (std::size_t a = 0; a < p.size(); ++a)
        for (std::size_t b = a + 1; b < p.size(); ++b) out.emplace_back(p[a], p[b]);
    return out;
}

std::vector<std::pair<int, int>> sample_pairs(const Hierarchy& h, std::uint64_t seed, long long samples) {
    const auto& p = h.points();
    long long total = static_cast<long long>(p.size()) * static_cast<long long>(p.size() - 1) / 2;
    if (total <= samples) return all_pairs(h);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
    std::vector<std::pair<int, int>> out;
    while (static_cast<long long>(out.size()) < samples) {
        std::size_t a = pick(rng), b = pick(rng);
        if (a == b) continue;
        out.emplace_back(p[std::min(a, b)], p[std::max(a, b)]);
    }
    return out;
}

Tuple point_tuple(Hierarchy& h, int x) {
    Tuple t(static_cast<std::size_t>(h.num_domains()));
    for (int i = 0; i < h.num_domains(); ++i) t[i] = h.pi(i, x);
    return t;
}

int consistency_value(Hierarchy& h, const Tuple& b, int u, int v) {
    Rel r = h.rel(u, v);
    if (r == Rel::Transverse)
        return std::min(h.d_rho(u, v, b[v]), h.d_rho(v, u, b[u]));
    if (r == Rel::Nested)
        return std::min(h.d_rho(u, v, b[v]), h.diam_union(u, b[u], h.rho_down(v, u, b[v])));
    return 0;
}

std::optional<std::array<int, 3>> consistency_violation(Hierarchy& h, const Tuple& b, int kappa) {
    for (int u = 0; u < h.num_domains(); ++u)
        for (int v = 0; v < h.num_domains(); ++v) {
            if (u == v) continue;
            Rel r = h.rel(u, v);
            if (r != Rel::Nested && !(r == Rel::Transverse && u < v)) continue;
            int val = consistency_value(h, b, u, v);
            if (val > kappa) return std::array<int, 3>{u, v, val};
        }
    return std::nullopt;
}

Realization realize(Hierarchy& h, const Tuple& b, int kappa, int theta_cap) {
    if (static_cast<int>(b.size()) != h.num_domains()) fail("InvalidInput", "tuple needs one clique per domain");
    if (auto w = consistency_violation(h, b, kappa)) throw Inconsistent((*w)[0], (*w)[1], (*w)[2]);
    // Worst coordinate distance per point; the least threshold admitting a point wins.
    std::vector<int> worst;
    for (int x : h.points()) {
        int m = 0;
        for (int i = 0; i < h.num_domains() && m <= theta_cap; ++i) m = std::max(m, h.diam_union(i, h.pi(i, x), b[i]));
        worst.push_back(m);
    }
    for (int theta = std::max(kappa, 0); theta <= theta_cap; ++theta) {
        Realization out;
        out.theta_e = theta;
        for (std::size_t k = 0; k < worst.size(); ++k)
            if (worst[k] <= theta) out.points.push_back(h.points()[k]);
        if (out.points.empty()) continue;
        for (std::size_t a = 0; a < out.points.size(); ++a)
            for (std::size_t c = a + 1; c < out.points.size(); ++c)
                out.diameter = std::max(out.diameter, h.space().dist(out.points[a], out.points[c]));
        return out;
    }
    fail("NotFound", "no realization point below theta " + std::to_string(theta_cap));
}

int uniqueness_theta(Hierarchy& h, int kappa, const std::vector<std::pair<int, int>>& pairs) {
    int worst = 0;
    for (auto [x, y] : pairs) {
        int m = 0;
        for (int i = 0; i < h.num_domains() && m < kappa; ++i) m = std::max(m, h.d(i, x, y));
        if (m < kappa) worst = std::max(worst, h.space().dist(x, y));
    }
    return worst + 1;
}

int thresholded_sum(Hierarchy& h, int x, int y, int s) {
    int sum = 0;
    for (int i = 0; i < h.num_domains(); ++i) {
        int d = h.d(i, x, y);
        if (d >= s) sum += d;
    }
    return sum;
}

DistanceFormulaFit distance_formula_fit(Hierarchy& h, int s, const std::vector<std::pair<int, int>>& pairs, int k_cap,
                                        int c_cap) {
    std::vector<std::array<int, 2>> data;
    for (auto [x, y] : pairs) data.push_back({thresholded_sum(h, x, y, s), h.space().dist(x, y)});
    DistanceFormulaFit best;
    best.s = s;
    best.pairs_tested = static_cast<long long>(pairs.size());
    bool found = false;
    for (int K = 1; K <= k_cap; ++K) {
        int C = 0, arg = -1;
        for (std::size_t k = 0; k < data.size(); ++k) {
            auto [sum, d] = data[k];
            int need = std::max(d - K * sum, ceil_div(sum - K * d, K));
            if (arg < 0 || need > C) {
                C = std::max(C, need);
                arg = static_cast<int>(k);
            }
        }
        if (C > c_cap) continue;
        if (!found || K + C < best.K_df + best.C_df) {
            found = true;
            best.K_df = K;
            best.C_df = C;
            best.worst_pair = arg >= 0 ? pairs[arg] : std::make_pair(-1, -1);
        }
    }
    if (!found) fail("NoFit", "no (K, C) with K <= " + std::to_string(k_cap) + " and C <= " + std::to_string(c_cap));
    return best;
}

OrthogonalCloseReport orthogonal_close(Hierarchy& h) {
    OrthogonalCloseReport rep;
    const int n = h.num_domains();
    auto defined = [&](int u, int w) { return h.rel(u, w) == Rel::Nested || h.rel(u, w) == Rel::Transverse; };
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (h.rel(u, v) != Rel::Orthogonal) continue;
            for (int w = 0; w < n; ++w) {
                if (!defined(u, w) || !defined(v, w)) continue;
                ++rep.triples;
                int val = h.d_rho_rho(u, v, w);
                if (val > rep.max_value || rep.witness[0] < 0) {
                    rep.max_value = std::max(rep.max_value, val);
                    rep.witness = {u, v, w};
                }
            }
        }
    return rep;
}

namespace {

// Up to `count` distinct geodesics from a to b, each step drawn uniformly
// from the predecessors one closer to b.
template <class Nbrs, class Dist>
std::vector<std::vector<int>> sample_geodesics(int a, int b, int count, std::mt19937_64& rng, Nbrs nbrs, Dist dist) {
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> out;
    if (dist(a) >= kFar) return out;
    for (int attempt = 0; attempt < 4 * count && static_cast<int>(out.size()) < count; ++attempt) {
        std::vector<int> path{a};
        int cur = a;
        while (cur != b) {
            std::vector<int> next;
            int dc = dist(cur);
            for (int n : nbrs(cur))
                if (dist(n) == dc - 1) next.push_back(n);
            cur = next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)];
            path.push_back(cur);
        }
        if (seen.insert(path).second) out.push_back(std::move(path));
    }
    return out;
}

int path_defect(Hierarchy& h, const std::vector<int>& path) {
    const std::size_t L = path.size();
    int worst = 0;
    std::vector<int> m(L * L);
    for (int i = 0; i < h.num_domains(); ++i) {
        for (std::size_t a = 0; a < L; ++a)
            for (std::size_t b = a; b < L; ++b) m[a * L + b] = h.d(i, path[a], path[b]);
        for (std::size_t a = 0; a < L; ++a)
            for (std::size_t b = a; b < L; ++b)
                for (std::size_t c = b; c < L; ++c)
                    worst = std::max(worst, m[a * L + b] + m[b * L + c] - m[a * L + c]);
    }
    return worst;
}

} // namespace

HierarchyPath hierarchy_path(Hierarchy& h, int x, int y, int D, std::uint64_t seed, int geodesics) {
    Space& s = h.space();
    const int top = s.top();
    std::mt19937_64 rng(seed);
    auto paths = sample_geodesics(
        x, y, geodesics, rng, [&](int p) { return s.rep_neighbors(top, p); }, [&](int p) { return s.dist(p, y); });
    HierarchyPath best;
    best.D0 = kFar;
    for (const auto& p : paths) {
        ++best.tried;
        int d0 = std::max(1, path_defect(h, p));
        if (d0 < best.D0) {
            best.D0 = d0;
            best.path = p;
        }
    }
    if (best.D0 > D) fail("NotFound", "least defect " + std::to_string(best.D0) + " exceeds cap " + std::to_string(D));
    return best;
}

AxiomReport verify_axioms(Hierarchy& h, const CheckOptions& opt) {
    AxiomReport rep;
    rep.cap = opt.cap;
    HHSConstants& c = rep.constants;
    Space& s = h.space();
    const int n = h.num_domains();
    const auto& pts = h.points();
    auto name = [&](int i) { return h.info(i).key; };
    auto violate = [&](const std::string& axiom, int value, const std::string& witness) {
        rep.violations.push_back({axiom, value, witness});
    };
    auto pairs = sample_pairs(h, opt.seed, opt.samples);
    rep.pairs_tested = static_cast<long long>(pairs.size());
    std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);

    // Projections: nonempty bounded sets, coarsely Lipschitz along edges.
    for (int i = 0; i < n; ++i)
        for (int x : pts) {
            const auto& p = h.pi(i, x);
            if (p.empty()) violate("projections", 0, name(i) + " " + s.point_name(x));
            c.xi = std::max(c.xi, h.diam(i, p));
        }
    std::unordered_set<int> in_pts(pts.begin(), pts.end());
    for (int x : pts)
        for (int y : s.rep_neighbors(s.top(), x))
            if (y > x && in_pts.count(y))
                for (int i = 0; i < n; ++i) c.K_lip = std::max(c.K_lip, h.d(i, x, y));

    // Nesting and orthogonality.
    for (int i = 0; i < n; ++i) {
        if (i != h.top() && h.rel(i, h.top()) != Rel::Nested) violate("nesting", 0, name(i) + " not below the top");
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (h.rel(j, i) != reverse(h.rel(i, j))) violate("nesting", 0, name(i) + " " + name(j));
            if (h.rel(i, j) != Rel::Nested) continue;
            c.xi = std::max(c.xi, h.rho_diam(i, j));
            for (int k = 0; k < n; ++k)
                if (h.rel(j, k) == Rel::Orthogonal && h.rel(i, k) != Rel::Orthogonal)
                    violate("orthogonality", 0, name(i) + " in " + name(j) + " ⊥ " + name(k));
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (h.rel(i, j) == Rel::Transverse) c.xi = std::max(c.xi, h.rho_diam(i, j));
    for (int t = 0; t < n; ++t)
        for (int u = 0; u < n; ++u) {
            if (u != t && h.rel(u, t) != Rel::Nested) continue;
            std::vector<int> orth;
            for (int v = 0; v < n; ++v)
                if (h.rel(v, u) == Rel::Orthogonal && h.rel(v, t) == Rel::Nested) orth.push_back(v);
            if (orth.empty()) continue;
            bool ok = false;
            for (int w = 0; w < n && !ok; ++w) {
                if (w == t || h.rel(w, t) != Rel::Nested) continue;
                ok = std::all_of(orth.begin(), orth.end(),
                                 [&](int v) { return v == w || h.rel(v, w) == Rel::Nested; });
            }
            if (!ok) violate("orthogonality", 0, "no container for " + name(u) + " in " + name(t));
        }

    // Consistency for points, then for nested triples.
    for (int x : pts) {
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                if (u == v) continue;
                Rel r = h.rel(u, v);
                if (r != Rel::Nested && !(r == Rel::Transverse && u < v)) continue;
                int val;
                if (r == Rel::Transverse)
                    val = std::min(h.d_rho(u, v, h.pi(v, x)), h.d_rho(v, u, h.pi(u, x)));
                else
                    val = std::min(h.d_rho(u, v, h.pi(v, x)),
                                   h.diam_union(u, h.pi(u, x), h.rho_down(v, u, h.pi(v, x))));
                rep.kappa_points = std::max(rep.kappa_points, val);
            }
    }
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (h.rel(u, v) != Rel::Nested) continue;
            for (int w = 0; w < n; ++w) {
                Rel vw = h.rel(v, w);
                if (!(vw == Rel::Nested || (vw == Rel::Transverse && h.rel(w, u) != Rel::Orthogonal))) continue;
                rep.kappa_rho = std::max(rep.kappa_rho, h.d_rho_rho(u, v, w));
            }
        }
    c.kappa0 = std::max(rep.kappa_points, rep.kappa_rho);

    // Complexity: longest nesting chain.
    std::vector<int> chain(static_cast<std::size_t>(n), 0);
    std::function<int(int)> len = [&](int i) {
        if (chain[i]) return chain[i];
        int best = 1;
        for (int j = 0; j < n; ++j)
            if (h.rel(j, i) == Rel::Nested) best = std::max(best, 1 + len(j));
        return chain[i] = best;
    };
    for (int i = 0; i < n; ++i) c.n_complexity = std::max(c.n_complexity, len(i));

    // Hyperbolicity of each graph and the normalization constant.
    for (int i = 0; i < n; ++i) {
        const auto& g = h.graph(i);
        if (g.size() == 0) continue;
        if (!g.connected()) {
            violate("hyperbolicity", 0, name(i) + " disconnected");
            continue;
        }
        c.delta = std::max(c.delta, delta_probe(g, opt.seed, opt.delta_samples).delta);
        std::vector<int> seen;
        for (int p : h.window(i)) merge_into(seen, h.pi(i, p));
        normalize(seen);
        for (int d : g.bfs(seen)) c.norm_C = std::max(c.norm_C, d);
    }

    // Bounded geodesic image over sampled geodesics of each C_W.
    for (int w = 0; w < n; ++w) {
        std::vector<int> below;
        for (int v = 0; v < n; ++v)
            if (h.rel(v, w) == Rel::Nested) below.push_back(v);
        if (below.empty()) continue;
        const auto& g = h.graph(w);
        std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
        for (int k = 0; k < opt.bgi_pairs; ++k) {
            int x = pts[pick(rng)], y = pts[pick(rng)];
            int a = h.pi(w, x).front(), b = h.pi(w, y).front();
            auto from_b = g.bfs({b});
            auto paths = sample_geodesics(
                a, b, opt.geodesics, rng, [&](int p) { return g.neighbors(p); },
                [&](int p) { return from_b[p] < 0 ? kFar : from_b[p]; });
            for (const auto& gam : paths) {
                ++rep.bgi_geodesics;
                for (int v : below) {
                    int near = h.gap(w, gam, h.rho(v, w));
                    int val = near;
                    if (val > 0) val = std::min(val, h.diam(v, h.rho_down(w, v, gam)));
                    rep.E_bgi = std::max(rep.E_bgi, val);
                }
            }
        }
    }

    // Partial realization over sampled pairwise orthogonal families.
    std::vector<std::vector<int>> families;
    for (int i = 0; i < n; ++i) families.push_back({i});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (h.rel(i, j) != Rel::Orthogonal) continue;
            families.push_back({i, j});
            for (int k = j + 1; k < n; ++k)
                if (h.rel(i, k) == Rel::Orthogonal && h.rel(j, k) == Rel::Orthogonal) families.push_back({i, j, k});
        }
    std::shuffle(families.begin(), families.end(), rng);
    if (static_cast<int>(families.size()) > opt.alpha_samples) families.resize(static_cast<std::size_t>(opt.alpha_samples));
    for (const auto& fam : families) {
        std::vector<std::vector<int>> targets;
        std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
        for (int v : fam) targets.push_back(h.pi(v, pts[pick(rng)]));
        int best = kFar;
        for (int x : pts) {
            int cost = 0;
            for (std::size_t j = 0; j < fam.size() && cost < best; ++j) {
                int v = fam[j];
                cost = std::max(cost, h.diam_union(v, h.pi(v, x), targets[j]));
                for (int w = 0; w < n && cost < best; ++w) {
                    Rel r = h.rel(v, w);
                    if (r == Rel::Nested || r == Rel::Transverse)
                        cost = std::max(cost, h.d_rho(v, w, h.pi(w, x)));
                }
            }
            best = std::min(best, cost);
        }
        c.alpha = std::max(c.alpha, best);
    }

    c.E = std::max({c.xi, c.kappa0, static_cast<int>(std::ceil(c.delta)), c.K_lip, c.alpha, rep.E_bgi});

    // Large links at E.
    std::vector<std::pair<int, int>> ll_pairs = pairs;
    if (ll_pairs.size() > 3000) {
        std::shuffle(ll_pairs.begin(), ll_pairs.end(), rng);
        ll_pairs.resize(3000);
    }
    for (int w = 0; w < n; ++w) {
        std::vector<int> below;
        for (int v = 0; v < n; ++v)
            if (h.rel(v, w) == Rel::Nested) below.push_back(v);
        if (below.empty()) continue;
        for (auto [x, y] : ll_pairs) {
            std::vector<int> big;
            for (int t : below)
                if (h.d(t, x, y) >= c.E) big.push_back(t);
            std::vector<int> maximal;
            for (int t : big)
                if (std::none_of(big.begin(), big.end(), [&](int o) { return h.rel(t, o) == Rel::Nested; }))
                    maximal.push_back(t);
            int scale = h.d(w, x, y) + 1;
            int need = ceil_div(static_cast<int>(maximal.size()), scale);
            for (int t : maximal) need = std::max(need, ceil_div(h.d_rho(t, w, h.pi(w, x)), scale));
            c.lambda_ll = std::max(c.lambda_ll, need);
        }
    }

    // Uniqueness table and realization constants.
    for (int kappa : {5, 10, 20}) rep.theta_u_table[kappa] = uniqueness_theta(h, kappa, pairs);
    c.theta_e = std::max(c.kappa0, c.xi);
    c.theta_u = uniqueness_theta(h, 2 * c.theta_e + 1, pairs) - 1;

    // Hierarchy paths between a few sampled pairs.
    std::vector<std::pair<int, int>> hp = pairs;
    std::shuffle(hp.begin(), hp.end(), rng);
    if (hp.size() > 8) hp.resize(8);
    for (auto [x, y] : hp) c.D0 = std::max(c.D0, hierarchy_path(h, x, y, kFar, opt.seed, 16).D0);

    auto capped = [&](const std::string& axiom, int value) {
        if (value > opt.cap) violate(axiom, value, "exceeds cap " + std::to_string(opt.cap));
    };
    capped("consistency", c.kappa0);
    capped("bounded-geodesic-image", rep.E_bgi);
    capped("large-links", c.lambda_ll);
    capped("partial-realization", c.alpha);
    capped("projections", c.K_lip);
    for (auto [kappa, theta] : rep.theta_u_table) capped("uniqueness", theta);
    return rep;
}

std::string format_report(const AxiomReport& r) {
    const auto& c = r.constants;
    std::ostringstream os;
    os << "E: " << c.E << "\n"
       << "kappa0: " << c.kappa0 << "\n"
       << "xi: " << c.xi << "\n"
       << "delta: " << c.delta << "\n"
       << "K_lip: " << c.K_lip << "\n"
       << "n_complexity: " << c.n_complexity << "\n"
       << "theta_e: " << c.theta_e << "\n"
       << "theta_u: " << c.theta_u << "\n"
       << "lambda_ll: " << c.lambda_ll << "\n"
       << "D0: " << c.D0 << "\n"
       << "alpha: " << c.alpha << "\n"
       << "norm_C: " << c.norm_C << "\n"
       << "E_bgi: " << r.E_bgi << "\n"
       << "bgi_geodesics: " << r.bgi_geodesics << "\n"
       << "pairs_tested: " << r.pairs_tested << "\n";
    for (auto [k, t] : r.theta_u_table) os << "theta_u(" << k << "): " << t << "\n";
    os << "violations: " << r.violations.size() << "\n";
    for (const auto& v : r.violations) os << "violation " << v.axiom << " " << v.value << " " << v.witness << "\n";
    return os.str();
}

} // namespace hhs
