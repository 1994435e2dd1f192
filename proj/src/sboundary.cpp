#include "hhs/sboundary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

#include "hhs/contact.hpp"

namespace hhs {

namespace {

// Crossing order: the wall of each edge along base·motif^reps.
void walk(RaagSpace& s, const Word& start, const Word& w, int pos_offset, bool tagged, std::vector<int>& walls,
          std::vector<int>& pos, std::vector<int>* points) {
    const Raag& r = s.raag();
    Word cur = start;
    int idx = 0;
    for (int l : Raag::letters(w)) {
        const int v = std::abs(l) - 1;
        Word next = r.mul(cur, r.letter(v, l > 0 ? 1 : -1));
        walls.push_back(s.wall(v, l > 0 ? cur : next));
        pos.push_back(tagged ? pos_offset + idx : -1);
        if (points) points->push_back(s.point(next));
        cur = std::move(next);
        ++idx;
    }
}

// Points of the ray: before the first crossing and after each one.
std::vector<int> ray_points(RaagSpace& s, const UBS& u) {
    const Raag& r = s.raag();
    std::vector<int> walls, pos, pts{s.point(Word{})};
    walk(s, Word{}, u.ray.base, 0, false, walls, pos, &pts);
    Word cur = u.ray.base;
    for (int k = 0; k < u.reps; ++k) {
        walk(s, cur, u.ray.motif, 0, true, walls, pos, &pts);
        cur = r.mul(cur, u.ray.motif);
    }
    return pts;
}

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(static_cast<std::size_t>(n)) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void join(int a, int b) { p[find(a)] = find(b); }
};

Mask least_label(RaagSpace& s, Mask need) {
    Mask best = s.raag().all();
    for (Mask lam : s.family())
        if ((need & ~lam) == 0 && std::popcount(lam) < std::popcount(best)) best = lam;
    return best;
}

} // namespace

int UBS::wall_at(int rep, int pos) const {
    const int base = static_cast<int>(walls.size()) - reps * static_cast<int>(Raag::length(ray.motif));
    return walls[base + rep * static_cast<int>(Raag::length(ray.motif)) + pos];
}

UBSCheck check_ubs_axioms(RaagSpace& s, const UBS& u) {
    UBSCheck c;
    c.infinite = !u.ray.motif.empty();
    if (!c.infinite) c.witness = "empty motif";
    const auto pts = ray_points(s, u);
    const int n = static_cast<int>(u.walls.size());
    const Raag& r = s.raag();
    // Walls dual to edges at the ray's vertices: every wall that could separate two members.
    std::vector<int> nearby;
    for (int p : pts)
        for (int v = 0; v < r.rank(); ++v) {
            nearby.push_back(s.wall(v, s.word(p)));
            nearby.push_back(s.wall(v, r.mul(s.word(p), r.letter(v, -1))));
        }
    std::sort(nearby.begin(), nearby.end());
    nearby.erase(std::unique(nearby.begin(), nearby.end()), nearby.end());
    std::unordered_set<int> member(u.walls.begin(), u.walls.end());
    const int o = pts.front();
    // Wall i is crossed between pts[i] and pts[i + 1].
    for (int k = 1; k <= n; ++k) {
        ++c.prefixes;
        const int j = k - 1;
        for (int i = 0; i < j && c.ok(); ++i) {
            const bool cross_ij = s.walls_cross(u.walls[i], u.walls[j]);
            if (!cross_ij) {
                for (int h : nearby) {
                    if (member.count(h) && std::find(u.walls.begin(), u.walls.begin() + k, h) != u.walls.begin() + k)
                        continue;
                    if (s.walls_cross(h, u.walls[i]) || s.walls_cross(h, u.walls[j])) continue;
                    if (s.separates(h, pts[i + 1], pts[j])) {
                        c.separation_closed = false;
                        c.witness = "wall " + s.wall_name(h) + " separates members " + std::to_string(i) + " and " +
                                    std::to_string(j) + " of the prefix";
                        break;
                    }
                }
                // Members after i lie on the far side of i from the start.
                if (!s.separates(u.walls[i], o, pts[j + 1])) {
                    c.unidirectional = false;
                    c.witness = "member " + std::to_string(j) + " returns to the near side of member " +
                                std::to_string(i);
                }
            }
            for (int m = i + 1; m < j && !cross_ij && c.ok(); ++m) {
                if (s.walls_cross(u.walls[i], u.walls[m]) || s.walls_cross(u.walls[m], u.walls[j])) continue;
                const bool mid = s.separates(u.walls[m], pts[i], pts[j + 1]);
                const bool left = s.separates(u.walls[i], pts[m], pts[j + 1]);
                const bool right = s.separates(u.walls[j], pts[i], pts[m + 1]);
                if (!mid && !left && !right) {
                    c.no_facing_triple = false;
                    c.witness = "members " + std::to_string(i) + ", " + std::to_string(m) + ", " + std::to_string(j) +
                                " face each other";
                }
            }
        }
        if (!c.ok()) break;
    }
    return c;
}

UBS ray_ubs(RaagSpace& s, const PeriodicRay& ray, int reps) {
    const Raag& r = s.raag();
    if (ray.motif.empty()) fail("NotGeodesic", "empty motif");
    if (reps < 2) fail("InvalidInput", "need at least two periods");
    UBS u;
    u.ray = {r.normal_form(ray.base), r.normal_form(ray.motif)};
    u.reps = reps;
    Word cur;
    walk(s, Word{}, u.ray.base, 0, false, u.walls, u.position, nullptr);
    cur = u.ray.base;
    for (int k = 0; k < reps; ++k) {
        walk(s, cur, u.ray.motif, 0, true, u.walls, u.position, nullptr);
        cur = r.mul(cur, u.ray.motif);
    }
    if (Raag::length(cur) != static_cast<long>(u.walls.size()))
        fail("NotGeodesic", r.str(u.ray.base) + "·(" + r.str(u.ray.motif) + ")^k recrosses a wall");
    std::vector<int> sorted = u.walls;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        fail("NotGeodesic", r.str(u.ray.motif) + " recrosses a wall");
    u.axioms = check_ubs_axioms(s, u);
    if (!u.axioms.ok()) fail("AssertionFailed", "UBS axiom fails: " + u.axioms.witness);
    return u;
}

UBSDecomposition decompose(RaagSpace& s, const UBS& u) {
    const Raag& r = s.raag();
    const int m = static_cast<int>(Raag::length(u.ray.motif));
    const int k = u.reps / 2 - 1;
    if (k < 0 || k + 3 > u.reps) fail("InvalidInput", "prefix too short to decompose");
    // Positions whose walls stay nested across periods belong to one minimal family.
    Dsu dsu(m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (!s.walls_cross(u.wall_at(k, i), u.wall_at(k + 2, j)) &&
                !s.walls_cross(u.wall_at(k, j), u.wall_at(k + 2, i)))
                dsu.join(i, j);
    const auto letters = Raag::letters(u.ray.motif);
    std::map<int, int> root_index;
    UBSDecomposition d;
    d.source = u;
    for (int p = 0; p < m; ++p) {
        auto [it, fresh] = root_index.emplace(dsu.find(p), static_cast<int>(d.minimals.size()));
        if (fresh) d.minimals.emplace_back();
        auto& f = d.minimals[it->second];
        f.positions.push_back(p);
        f.generators |= Mask{1} << (std::abs(letters[p]) - 1);
    }
    for (auto& f : d.minimals) {
        std::vector<int> ls;
        for (int p : f.positions) ls.push_back(letters[p]);
        f.motif = r.from_letters(ls);
    }
    const int n = static_cast<int>(d.minimals.size());
    d.dominates.assign(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            bool all = true;
            for (int pj : d.minimals[j].positions)
                for (int pi : d.minimals[i].positions)
                    for (int kk = 2; kk < u.reps && all; ++kk)
                        if (!s.walls_cross(u.wall_at(1, pj), u.wall_at(kk, pi))) all = false;
            d.dominates[j][i] = all;
        }
    return d;
}

UBS family_ubs(RaagSpace& s, const UBSDecomposition& d, int i) {
    return ray_ubs(s, PeriodicRay{d.source.ray.base, d.minimals[i].motif}, d.source.reps);
}

bool boundary_equivalent(RaagSpace& s, const UBS& a, const UBS& b) {
    // Each ray's later walls must be crossed by a longer prefix of the other.
    auto covered = [&](const UBS& x, const UBS& y) {
        UBS longer = ray_ubs(s, y.ray, 4 * std::max(x.reps, y.reps));
        std::unordered_set<int> set(longer.walls.begin(), longer.walls.end());
        for (int k = x.reps / 2; k < x.reps; ++k)
            for (int p = 0; p < static_cast<int>(Raag::length(x.ray.motif)); ++p)
                if (!set.count(x.wall_at(k, p))) return false;
        return true;
    };
    return covered(a, b) && covered(b, a);
}

BoundaryPoint correspondence_b(RaagSpace& s, const UBSDecomposition& d, const std::vector<double>& coefficients) {
    const Raag& r = s.raag();
    if (coefficients.size() != d.minimals.size())
        fail("InvalidInput", "need one coefficient per minimal family");
    Word far = d.source.ray.base;
    for (int k = 0; k < d.source.reps; ++k) far = r.mul(far, d.source.ray.motif);
    BoundaryPoint p;
    for (std::size_t i = 0; i < d.minimals.size(); ++i) {
        const Mask lam = least_label(s, d.minimals[i].generators);
        const int u = s.domain_of(lam, far);
        for (const auto& t : p.terms)
            if (t.domain == u || s.relation(t.domain, u) != Rel::Orthogonal)
                fail("NotOrthogonalizable", s.domain(t.domain).key + " and " + s.domain(u).key +
                                                " are not orthogonal");
        BoundaryTerm t;
        t.domain = u;
        t.coeff = coefficients[i];
        t.dir = periodic_direction(s, u, d.source.ray.base, d.source.ray.motif);
        p.terms.push_back(std::move(t));
    }
    check_boundary_point(s, p);
    return p;
}

std::vector<FaceVisibility> visibility_report(RaagSpace& s, const UBSDecomposition& d, int cap) {
    const Raag& r = s.raag();
    const int n = static_cast<int>(d.minimals.size());
    std::vector<FaceVisibility> out;
    for (int mask = 1; mask < (1 << n); ++mask) {
        FaceVisibility f;
        std::vector<Mask> want;
        for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1) {
                f.face.push_back(i);
                want.push_back(d.minimals[i].generators);
            }
        std::sort(want.begin(), want.end());
        std::vector<int> mult(f.face.size(), 1);
        for (;;) {
            Word motif;
            for (std::size_t k = 0; k < f.face.size(); ++k)
                for (int e = 0; e < mult[k]; ++e) motif = r.mul(motif, d.minimals[f.face[k]].motif);
            try {
                auto sub = decompose(s, ray_ubs(s, PeriodicRay{d.source.ray.base, motif}, d.source.reps));
                std::vector<Mask> got;
                for (const auto& m : sub.minimals) got.push_back(m.generators);
                std::sort(got.begin(), got.end());
                if (got == want) {
                    f.visible = true;
                    f.motif = motif;
                }
            } catch (const Error&) {
            }
            if (f.visible) break;
            std::size_t k = 0;
            while (k < mult.size() && ++mult[k] > cap) mult[k++] = 1;
            if (k == mult.size()) break;
        }
        out.push_back(std::move(f));
    }
    return out;
}

DiscsReport discs_distortion(RaagSpace& s, const PeriodicRay& ray, int L, int margin) {
    const Raag& r = s.raag();
    // First L letters of the ray.
    std::vector<int> ls = Raag::letters(ray.base);
    const auto ml = Raag::letters(ray.motif);
    if (ml.empty()) fail("NotGeodesic", "empty motif");
    while (static_cast<int>(ls.size()) < L) ls.push_back(ml[(ls.size() - Raag::letters(ray.base).size()) % ml.size()]);
    ls.resize(static_cast<std::size_t>(L));
    const Word end = r.from_letters(ls);
    if (Raag::length(end) != L) fail("NotGeodesic", "ray prefix is not geodesic");

    // Y: the interval between the identity and end.
    std::vector<Word> Y;
    std::set<Word> inY;
    std::deque<Word> q{Word{}};
    inY.insert(Word{});
    while (!q.empty()) {
        Word y = q.front();
        q.pop_front();
        Y.push_back(y);
        for (int v = 0; v < r.rank(); ++v)
            for (int e : {1, -1}) {
                Word z = r.mul(y, r.letter(v, e));
                if (Raag::length(z) + Raag::length(r.mul(r.inv(z), end)) != L) continue;
                if (inY.insert(z).second) q.push_back(z);
            }
    }
    Mask need = Raag::support(end);
    const Mask flam = least_label(s, need);
    const int fdom = s.domain_of(flam, Word{});

    // C(F ∩ Y): contact graph of Y with each proper trace F' ∩ Y coned off.
    ContactGraph gy;
    auto edge_wall = [&](const Word& y, int v, int e) {
        return s.wall(v, e > 0 ? y : r.mul(y, r.letter(v, -1)));
    };
    for (const auto& y : Y) {
        std::vector<int> local;
        for (int v = 0; v < r.rank(); ++v)
            for (int e : {1, -1})
                if (inY.count(r.mul(y, r.letter(v, e)))) {
                    int w = edge_wall(y, v, e);
                    local.push_back(gy.add_wall(w, s.wall_name(w)));
                }
        for (std::size_t i = 0; i < local.size(); ++i)
            for (std::size_t j = i + 1; j < local.size(); ++j) gy.add_edge(local[i], local[j]);
    }
    std::set<std::vector<Word>> traces;
    for (const auto& y : Y)
        for (Mask lam : s.family()) {
            std::vector<Word> c{y};
            std::set<Word> seen{y};
            for (std::size_t h = 0; h < c.size(); ++h)
                for (int v = 0; v < r.rank(); ++v)
                    if ((lam >> v) & 1U)
                        for (int e : {1, -1}) {
                            Word z = r.mul(c[h], r.letter(v, e));
                            if (inY.count(z) && seen.insert(z).second) c.push_back(z);
                        }
            if (c.size() < 2 || c.size() == Y.size()) continue;
            std::sort(c.begin(), c.end());
            if (!traces.insert(c).second) continue;
            int cone = gy.add_cone(static_cast<int>(traces.size()), "trace");
            std::set<int> ws;
            for (const auto& z : c)
                for (int v = 0; v < r.rank(); ++v)
                    for (int e : {1, -1})
                        if (seen.count(r.mul(z, r.letter(v, e)))) ws.insert(edge_wall(z, v, e));
            for (int w : ws) gy.add_edge(cone, gy.wall_node(w));
        }

    auto window = s.ball_window(fdom, L + margin);
    ContactGraph gf = factored_contact_graph(s, fdom, window);

    DiscsReport rep;
    rep.domain = s.domain(fdom).key;
    std::vector<int> walls;
    for (int i = 0; i < gy.size(); ++i)
        if (!gy.node(i).cone) walls.push_back(i);
    rep.walls = static_cast<int>(walls.size());
    for (std::size_t a = 0; a < walls.size(); ++a) {
        auto dy = gy.bfs({walls[a]});
        int fa = gf.wall_node(gy.node(walls[a]).id);
        if (fa < 0) fail("Untrusted", "wall of Y missing from the window of F");
        auto df = gf.bfs({fa});
        for (std::size_t b = a + 1; b < walls.size(); ++b) {
            int fb = gf.wall_node(gy.node(walls[b]).id);
            if (fb < 0) fail("Untrusted", "wall of Y missing from the window of F");
            const double y = dy[walls[b]], f = df[fb];
            if (y <= 0 || f <= 0) continue;
            rep.max_distortion = std::max({rep.max_distortion, y / f, f / y});
            ++rep.pairs;
        }
    }
    return rep;
}

std::string format_decomposition(RaagSpace& s, const UBSDecomposition& d) {
    const Raag& r = s.raag();
    std::string out = "ray: " + r.str(d.source.ray.base) + "/" + r.str(d.source.ray.motif) + "\n";
    out += "dimension: " + std::to_string(d.dimension()) + "\n";
    for (std::size_t i = 0; i < d.minimals.size(); ++i) {
        std::string gens;
        for (int v = 0; v < r.rank(); ++v)
            if ((d.minimals[i].generators >> v) & 1U) gens += r.names()[v];
        out += "minimal " + std::to_string(i) + ": motif " + r.str(d.minimals[i].motif) + ", generators " + gens + "\n";
    }
    out += "dominates:\n";
    for (const auto& row : d.dominates) {
        out += " ";
        for (bool b : row) out += b ? " 1" : " 0";
        out += "\n";
    }
    return out;
}

} // namespace hhs
