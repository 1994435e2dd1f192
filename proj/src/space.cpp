#include "hhs/space.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

#include "hhs/errors.hpp"

namespace hhs {

ComplexSpace::ComplexSpace(const CubeComplex& x, const FactorSystem& fs) : x_(x), fs_(fs) {
    for (const auto& c : fs.classes) {
        DomainInfo d;
        d.key = c.key;
        d.level = c.level;
        d.label = c.label;
        d.base = fs.members[c.rep].vertices.front();
        info_.push_back(d);
    }
}

void ComplexSpace::local_view(int u, int p, LocalView& out) {
    out.walls.clear();
    out.cones.clear();
    const auto& rep = fs_.rep(u);
    std::vector<std::pair<int, int>> local;  // (wall, neighbour)
    for (int q : x_.neighbors(p))
        if (rep.contains(q)) local.emplace_back(x_.wall_between(p, q), q);
    std::sort(local.begin(), local.end());
    for (auto [w, q] : local) out.walls.push_back(w);
    // Cone each nested class through p, joined to its walls at p.
    std::map<int, std::vector<int>> cones;
    for (int m : fs_.members_at[p]) {
        int c = fs_.member_class[m];
        if (fs_.rel[c][u] != Rel::Nested) continue;
        for (auto [w, q] : local)
            if (fs_.members[m].contains(q)) cones[c].push_back(w);
    }
    for (auto& [c, ws] : cones) {
        std::sort(ws.begin(), ws.end());
        ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
        if (!ws.empty()) out.cones.emplace_back(c, std::move(ws));
    }
}

std::vector<int> ComplexSpace::rep_neighbors(int u, int p) {
    std::vector<int> out;
    for (int q : x_.neighbors(p))
        if (fs_.rep(u).contains(q)) out.push_back(q);
    return out;
}

RaagSpace::RaagSpace(Raag r) : r_(std::move(r)) {
    family_ = raag_family(r_);
    family_levels_ = raag_family_levels(family_);
    domain_ids_.resize(family_.size());
    for (int l : family_levels_) complexity_ = std::max(complexity_, l);
    point(Word{});
    top_ = domain_of(r_.all(), Word{});
}

int RaagSpace::point(const Word& w) {
    auto it = point_ids_.find(w);
    if (it != point_ids_.end()) return it->second;
    int id = static_cast<int>(points_.size());
    points_.push_back(w);
    point_ids_.emplace(w, id);
    return id;
}

int RaagSpace::family_level(Mask lam) const {
    for (std::size_t i = 0; i < family_.size(); ++i)
        if (family_[i] == lam) return family_levels_[i];
    return 0;
}

int RaagSpace::domain_of(Mask lam, const Word& g) {
    std::size_t f = 0;
    while (f < family_.size() && family_[f] != lam) ++f;
    if (f == family_.size()) fail("InvalidInput", "generator set is not a domain label");
    Word m = r_.min_rep(g, r_.star_of(lam));
    auto it = domain_ids_[f].find(m);
    if (it != domain_ids_[f].end()) return it->second;
    int id = static_cast<int>(domains_.size());
    DomainInfo d;
    d.key = raag_class_key(r_, lam, m);
    d.level = family_levels_[f];
    d.label = lam;
    d.base = point(m);
    domains_.push_back(d);
    dom_words_.push_back(m);
    domain_ids_[f].emplace(m, id);
    return id;
}

int RaagSpace::wall(int v, const Word& x) {
    Word m = r_.min_rep(x, r_.link(v));
    auto it = wall_ids_[v].find(m);
    if (it != wall_ids_[v].end()) return it->second;
    int id = static_cast<int>(wall_keys_.size());
    wall_keys_.emplace_back(v, m);
    wall_ids_[v].emplace(m, id);
    return id;
}

bool RaagSpace::walls_cross(int w1, int w2) {
    auto [v1, x1] = wall_keys_[w1];
    auto [v2, x2] = wall_keys_[w2];
    if (!r_.commute(v1, v2)) return false;
    return r_.in_double_coset(r_.link(v1), r_.mul(r_.inv(x1), x2), r_.link(v2));
}

namespace {

// Whether W(1, v) separates 1 from z.
bool far_side(const Raag& r, int v, const Word& z) {
    Mask blocked = 0;
    for (const auto& s : z) {
        if (s.g == v) return !((blocked >> v) & 1U) && s.e > 0;
        blocked |= ~r.link(s.g);
    }
    return false;
}

} // namespace

bool RaagSpace::separates(int w, int x, int y) {
    const auto& [v, m] = wall_keys_[w];
    Word mi = r_.inv(m);
    return far_side(r_, v, r_.mul(mi, points_[x])) != far_side(r_, v, r_.mul(mi, points_[y]));
}

int RaagSpace::dist(int x, int y) { return static_cast<int>(Raag::length(r_.mul(r_.inv(points_[x]), points_[y]))); }

Rel RaagSpace::relation(int u, int v) {
    if (u == v) return Rel::Equal;
    long long key = (static_cast<long long>(u) << 32) | static_cast<unsigned>(v);
    auto it = rel_cache_.find(key);
    if (it != rel_cache_.end()) return it->second;
    Rel r = raag_relation(r_, domains_[u].label, dom_words_[u], domains_[v].label, dom_words_[v]);
    rel_cache_.emplace(key, r);
    rel_cache_.emplace((static_cast<long long>(v) << 32) | static_cast<unsigned>(u), reverse(r));
    return r;
}

int RaagSpace::gate(int u, int x) {
    const Word& m = dom_words_[u];
    Word h = r_.head(r_.mul(r_.inv(m), points_[x]), domains_[u].label);
    return point(r_.mul(m, h));
}

bool RaagSpace::in_rep(int u, int x) { return r_.min_rep(points_[x], domains_[u].label) == dom_words_[u]; }

void RaagSpace::local_view(int u, int p, LocalView& out) {
    out.walls.clear();
    out.cones.clear();
    const Mask lam = domains_[u].label;
    const Word w = points_[p];
    std::vector<std::pair<int, int>> labelled;
    for (int v = 0; v < r_.rank(); ++v) {
        if (!((lam >> v) & 1U)) continue;
        labelled.emplace_back(v, wall(v, w));
        labelled.emplace_back(v, wall(v, r_.mul(w, r_.letter(v, -1))));
    }
    for (auto& [v, id] : labelled) out.walls.push_back(id);
    for (Mask sub : family_) {
        if (sub == lam || (sub & ~lam) != 0) continue;
        int c = domain_of(sub, w);
        std::vector<int> ws;
        for (auto& [v, id] : labelled)
            if ((sub >> v) & 1U) ws.push_back(id);
        out.cones.emplace_back(c, std::move(ws));
    }
}

std::vector<int> RaagSpace::rep_neighbors(int u, int p) {
    std::vector<int> out;
    const Mask lam = domains_[u].label;
    for (int v = 0; v < r_.rank(); ++v)
        if ((lam >> v) & 1U)
            for (int e : {1, -1}) out.push_back(point(r_.mul(points_[p], r_.letter(v, e))));
    return out;
}

std::vector<int> RaagSpace::path(int x, int y) {
    Word d = r_.mul(r_.inv(points_[x]), points_[y]);
    std::vector<int> out{x};
    Word cur = points_[x];
    for (const auto& s : d) {
        int step = s.e > 0 ? 1 : -1;
        for (int k = 0; k < std::abs(s.e); ++k) {
            cur = r_.mul(cur, r_.letter(s.g, step));
            out.push_back(point(cur));
        }
    }
    return out;
}

std::vector<int> RaagSpace::ball_window(int u, int radius) {
    int start = domains_[u].base;
    std::vector<int> out;
    if (Raag::length(points_[start]) > radius) return out;
    std::unordered_set<int> seen{start};
    std::deque<int> q{start};
    while (!q.empty()) {
        int p = q.front();
        q.pop_front();
        out.push_back(p);
        for (int n : rep_neighbors(u, p))
            if (Raag::length(points_[n]) <= radius && seen.insert(n).second) q.push_back(n);
    }
    return out;
}

int RaagSpace::translate(const Word& t, int p) { return point(r_.mul(t, points_[p])); }

std::string RaagSpace::wall_name(int w) {
    const auto& [v, m] = wall_keys_[w];
    return "W(" + r_.str(m) + "," + r_.names()[v] + ")";
}

} // namespace hhs
