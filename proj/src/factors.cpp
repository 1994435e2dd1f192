#include "hhs/factors.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <set>

#include "hhs/errors.hpp"

namespace hhs {

std::string to_string(Rel r) {
    switch (r) {
    case Rel::Equal: return "Equal";
    case Rel::Nested: return "Nested";
    case Rel::ReverseNested: return "ReverseNested";
    case Rel::Orthogonal: return "Orthogonal";
    case Rel::Transverse: return "Transverse";
    }
    return "?";
}

Rel reverse(Rel r) {
    if (r == Rel::Nested) return Rel::ReverseNested;
    if (r == Rel::ReverseNested) return Rel::Nested;
    return r;
}

int FactorSystem::find_class(const std::string& key) const {
    for (const auto& c : classes)
        if (c.key == key) return c.id;
    return -1;
}

std::vector<Mask> raag_family(const Raag& r) {
    std::set<Mask> fam{r.all()};
    for (int g = 0; g < r.rank(); ++g)
        if (r.link(g)) fam.insert(r.link(g));
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Mask> cur(fam.begin(), fam.end());
        for (Mask a : cur)
            for (Mask b : cur) {
                Mask c = a & b;
                if (c && fam.insert(c).second) grew = true;
            }
    }
    std::vector<Mask> out(fam.begin(), fam.end());
    std::sort(out.begin(), out.end(), [](Mask a, Mask b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    return out;
}

std::vector<int> raag_family_levels(const std::vector<Mask>& family) {
    std::vector<int> lv(family.size(), 1);
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if ((family[j] & ~family[i]) == 0 && family[j] != family[i]) lv[i] = std::max(lv[i], lv[j] + 1);
    return lv;
}

Rel raag_relation(const Raag& r, Mask l1, const Word& g, Mask l2, const Word& h) {
    Word d = r.mul(r.inv(g), h);
    Mask s1 = r.star_of(l1), s2 = r.star_of(l2);
    bool linked = r.in_double_coset(s1, d, s2);
    if (l1 == l2) return (linked && r.in_double_coset(s1, d, 0)) ? Rel::Equal : Rel::Transverse;
    if (linked) {
        if ((l1 & ~l2) == 0) return Rel::Nested;
        if ((l2 & ~l1) == 0) return Rel::ReverseNested;
        if ((l1 & ~r.link_of(l2)) == 0) return Rel::Orthogonal;
    }
    return Rel::Transverse;
}

std::string raag_class_key(const Raag& r, Mask l, const Word& m) {
    std::string k;
    for (int g = 0; g < r.rank(); ++g)
        if ((l >> g) & 1U) k += r.names()[g];
    return k + "@" + r.str(m);
}

bool walls_all_cross(const CubeComplex& x, const Bits& a, const Bits& b) {
    for (int w : a.ones())
        if (!b.subset_of(x.crossing_walls_of(w))) return false;
    return true;
}

namespace {

std::vector<int> trace(const CubeComplex& x, int start, Mask lam) {
    const Raag& r = x.periodic()->raag;
    std::vector<int> out{start};
    std::set<int> seen{start};
    std::deque<int> q{start};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int g = 0; g < r.rank(); ++g)
            if ((lam >> g) & 1U)
                for (int e : {1, -1}) {
                    int u = x.vertex_of(r.mul(x.word(v), r.letter(g, e)));
                    if (u >= 0 && seen.insert(u).second) {
                        out.push_back(u);
                        q.push_back(u);
                    }
                }
    }
    return out;
}

void finish_classes(const CubeComplex& x, FactorSystem& fs) {
    const int nc = fs.num_classes();
    for (int i = 0; i < nc; ++i) fs.classes[i].id = i;
    fs.members_at.assign(static_cast<std::size_t>(x.num_vertices()), {});
    for (int m = 0; m < static_cast<int>(fs.members.size()); ++m)
        for (int v : fs.members[m].vertices) fs.members_at[v].push_back(m);
    fs.delta_mult = 0;
    for (int v = 0; v < x.num_vertices(); ++v)
        if (x.trusted(v)) fs.delta_mult = std::max(fs.delta_mult, static_cast<int>(fs.members_at[v].size()));
    fs.complexity = 0;
    for (const auto& c : fs.classes) fs.complexity = std::max(fs.complexity, c.level);
    for (int i = 0; i < nc; ++i)
        if (fs.classes[i].level == fs.complexity && fs.rel[i].size() == static_cast<std::size_t>(nc)) {
            bool all_below = true;
            for (int j = 0; j < nc; ++j)
                if (j != i && fs.rel[j][i] != Rel::Nested) all_below = false;
            if (all_below) fs.top = i;
        }
}

FactorSystem algebraic_system(const CubeComplex& x, FactorOptions opt) {
    const Raag& r = x.periodic()->raag;
    auto family = raag_family(r);
    auto levels = raag_family_levels(family);
    FactorSystem fs;
    fs.xi = opt.xi;
    fs.algebraic = true;

    struct ClassRec {
        Mask lam;
        Word m;
        int level;
    };
    std::map<std::pair<Mask, Word>, int> member_index;
    std::map<std::pair<Mask, Word>, int> class_index;
    std::vector<ClassRec> recs;
    std::vector<std::pair<Mask, Word>> member_keys;
    for (int v : x.trusted_vertices())
        for (std::size_t f = 0; f < family.size(); ++f) {
            Mask lam = family[f];
            Word cm = r.min_rep(x.word(v), r.star_of(lam));
            if (!class_index.count({lam, cm})) {
                class_index[{lam, cm}] = static_cast<int>(recs.size());
                recs.push_back({lam, cm, levels[f]});
            }
            Word mm = r.min_rep(x.word(v), lam);
            if (member_index.count({lam, mm})) continue;
            if (static_cast<int>(fs.members.size()) >= opt.member_cap) fail("ClosureDiverged", "member cap exceeded");
            member_index[{lam, mm}] = static_cast<int>(fs.members.size());
            member_keys.emplace_back(lam, mm);
            fs.members.push_back(x.subcomplex(trace(x, v, lam)));
        }
    std::vector<int> order(recs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (recs[a].level != recs[b].level) return recs[a].level > recs[b].level;
        if (recs[a].lam != recs[b].lam) return recs[a].lam < recs[b].lam;
        return shortlex_less(recs[a].m, recs[b].m);
    });
    std::map<std::pair<Mask, Word>, int> new_id;
    for (int i : order) {
        const auto& rc = recs[i];
        DomainClass c;
        c.id = static_cast<int>(fs.classes.size());
        c.key = raag_class_key(r, rc.lam, rc.m);
        c.rep = member_index.at({rc.lam, rc.m});
        c.level = rc.level;
        c.label = rc.lam;
        c.base = rc.m;
        c.walls = fs.members[c.rep].crossing;
        new_id[{rc.lam, rc.m}] = c.id;
        fs.classes.push_back(std::move(c));
    }
    fs.member_class.resize(fs.members.size());
    for (std::size_t m = 0; m < fs.members.size(); ++m) {
        auto [lam, mm] = member_keys[m];
        fs.member_class[m] = new_id.at({lam, r.min_rep(mm, r.star_of(lam))});
    }
    const int nc = fs.num_classes();
    fs.rel.assign(static_cast<std::size_t>(nc), std::vector<Rel>(static_cast<std::size_t>(nc), Rel::Equal));
    for (int i = 0; i < nc; ++i)
        for (int j = i + 1; j < nc; ++j) {
            Rel rl = raag_relation(r, fs.classes[i].label, fs.classes[i].base, fs.classes[j].label, fs.classes[j].base);
            fs.rel[i][j] = rl;
            fs.rel[j][i] = reverse(rl);
        }
    finish_classes(x, fs);
    return fs;
}

int diameter_of(const CubeComplex& x, const std::vector<int>& vs) {
    int d = 0;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) d = std::max(d, x.dist(vs[i], vs[j]));
    return d;
}

FactorSystem explicit_system(const CubeComplex& x, FactorOptions opt) {
    FactorSystem fs;
    fs.xi = opt.xi;
    std::set<std::vector<int>> present;
    std::vector<ConvexSubcomplex> members;
    auto add = [&](ConvexSubcomplex f) {
        if (f.vertices.size() <= 1) return false;
        if (!present.insert(f.vertices).second) return false;
        if (static_cast<int>(members.size()) >= opt.member_cap) fail("ClosureDiverged", "member cap exceeded");
        members.push_back(std::move(f));
        return true;
    };
    add(x.whole());
    for (int w = 0; w < x.num_walls(); ++w)
        for (bool side : {false, true}) {
            auto h = x.hyperplane_side(w, side);
            if (h.vertices.size() <= 1) continue;
            add(h);
            std::map<Bits, std::vector<int>> fibers;
            Bits outside = ~h.crossing;
            for (int v = 0; v < x.num_vertices(); ++v) fibers[x.signs(v) & outside].push_back(v);
            for (auto& [k, vs] : fibers) {
                auto f = x.subcomplex(vs);
                if (f.crossing == h.crossing) add(std::move(f));
            }
        }
    std::size_t done = 0;
    while (done < members.size()) {
        std::size_t end = members.size();
        for (std::size_t i = 0; i < end; ++i)
            for (std::size_t j = (i < done ? done : 0); j < end; ++j)
                for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                    std::vector<int> img;
                    for (int y : members[b].vertices) img.push_back(x.gate(members[a], y));
                    auto g = x.subcomplex(img);
                    if (g.vertices.size() > 1 && diameter_of(x, g.vertices) > opt.xi) add(std::move(g));
                }
        done = end;
    }
    fs.members = std::move(members);

    std::map<Bits, std::vector<int>> by_walls;
    for (int m = 0; m < static_cast<int>(fs.members.size()); ++m) by_walls[fs.members[m].crossing].push_back(m);
    for (auto& [walls, ms] : by_walls) {
        DomainClass c;
        c.walls = walls;
        int least = x.num_vertices();
        for (int m : ms) least = std::min(least, fs.members[m].vertices.front());
        int best = -1;
        for (int m : ms) {
            if (!fs.members[m].contains(least)) continue;
            if (best < 0 || fs.members[m].vertices.size() < fs.members[best].vertices.size() ||
                (fs.members[m].vertices.size() == fs.members[best].vertices.size() &&
                 fs.members[m].vertices < fs.members[best].vertices))
                best = m;
        }
        c.rep = best;
        fs.classes.push_back(std::move(c));
    }
    std::sort(fs.classes.begin(), fs.classes.end(), [&](const DomainClass& a, const DomainClass& b) {
        if (a.walls.count() != b.walls.count()) return a.walls.count() > b.walls.count();
        return fs.members[a.rep].vertices < fs.members[b.rep].vertices;
    });
    const int nc = fs.num_classes();
    std::map<Bits, int> class_of_walls;
    for (int i = 0; i < nc; ++i) class_of_walls[fs.classes[i].walls] = i;
    fs.member_class.resize(fs.members.size());
    for (std::size_t m = 0; m < fs.members.size(); ++m) fs.member_class[m] = class_of_walls.at(fs.members[m].crossing);

    fs.rel.assign(static_cast<std::size_t>(nc), std::vector<Rel>(static_cast<std::size_t>(nc), Rel::Equal));
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) {
            if (i == j) continue;
            const Bits& a = fs.classes[i].walls;
            const Bits& b = fs.classes[j].walls;
            if (a.subset_of(b)) {
                fs.rel[i][j] = Rel::Nested;
            } else if (b.subset_of(a)) {
                fs.rel[i][j] = Rel::ReverseNested;
            } else if (walls_all_cross(x, a, b)) {
                fs.rel[i][j] = Rel::Orthogonal;
            } else {
                fs.rel[i][j] = Rel::Transverse;
            }
        }
    for (int i = nc - 1; i >= 0; --i) {
        int lv = 1;
        for (int j = 0; j < nc; ++j)
            if (fs.rel[j][i] == Rel::Nested) lv = std::max(lv, fs.classes[j].level + 1);
        fs.classes[i].level = lv;
    }
    for (int i = 0; i < nc; ++i) fs.classes[i].key = "F" + std::to_string(i);
    finish_classes(x, fs);
    return fs;
}

std::vector<int> fiber(const CubeComplex& x, int base, const Bits& walls) {
    std::vector<int> out;
    Bits outside = ~walls;
    for (int v = 0; v < x.num_vertices(); ++v)
        if (!((x.signs(v) ^ x.signs(base)) & outside).any()) out.push_back(v);
    return out;
}

int snap(const FactorSystem& fs, const ConvexSubcomplex& p) {
    int best = -1;
    for (int m = 0; m < static_cast<int>(fs.members.size()); ++m) {
        const auto& f = fs.members[m];
        if (f.vertices == p.vertices) return m;
        if (!p.crossing.subset_of(f.crossing)) continue;
        bool sup = std::includes(f.vertices.begin(), f.vertices.end(), p.vertices.begin(), p.vertices.end());
        if (sup && (best < 0 || f.vertices.size() < fs.members[best].vertices.size())) best = m;
    }
    if (best < 0) fail("NoContainer", "no factor-system member contains the constructed container");
    return best;
}

ConvexSubcomplex container_side(const CubeComplex& x, const ConvexSubcomplex& a, const ConvexSubcomplex& b, int base) {
    int h = -1;
    for (int w : x.walls_at(base))
        if (b.crossing.test(static_cast<std::size_t>(w))) {
            h = w;
            break;
        }
    if (h < 0) fail("NotAProduct", "B has no edge at the common vertex");
    auto ha = x.hyperplane_side(h, x.sign(base, h));
    if (!std::includes(ha.vertices.begin(), ha.vertices.end(), a.vertices.begin(), a.vertices.end()))
        fail("NotAProduct", "A does not lie in a combinatorial hyperplane dual to B");
    int hb_wall = -1;
    for (int w : x.walls_at(base))
        if (a.crossing.test(static_cast<std::size_t>(w))) {
            hb_wall = w;
            break;
        }
    if (hb_wall < 0) fail("NotAProduct", "A has no edge at the common vertex");
    auto hb = x.hyperplane_side(hb_wall, x.sign(base, hb_wall));
    std::vector<int> cur = ha.vertices;
    for (int v : hb.crossing.ones())
        for (bool side : {false, true}) {
            auto comb = x.hyperplane_side(v, side);
            std::vector<int> img;
            for (int y : comb.vertices) img.push_back(x.gate(ha, y));
            auto g = x.subcomplex(img);
            if (!std::includes(g.vertices.begin(), g.vertices.end(), a.vertices.begin(), a.vertices.end())) continue;
            std::vector<int> next;
            std::set_intersection(cur.begin(), cur.end(), g.vertices.begin(), g.vertices.end(), std::back_inserter(next));
            cur = std::move(next);
        }
    return x.subcomplex(cur);
}

} // namespace

FactorSystem generate_factor_system(const CubeComplex& x, FactorOptions opt) {
    if (opt.xi < 2) fail("InvalidInput", "xi must be at least 2");
    return x.periodic() ? algebraic_system(x, opt) : explicit_system(x, opt);
}

Rel relation(const FactorSystem& fs, int u, int v) { return fs.rel[u][v]; }

ProductRegion product_region(const CubeComplex& x, const FactorSystem& fs, int u) {
    if (u == fs.top) fail("MaximalDomain", "the ambient domain has no product region");
    ProductRegion pr;
    const auto& c = fs.classes[u];
    pr.f = fs.rep(u);
    if (fs.algebraic) {
        const Raag& r = x.periodic()->raag;
        int base = x.vertex_of(c.base);
        pr.e = x.subcomplex(trace(x, base, r.link_of(c.label)));
        pr.p = x.subcomplex(trace(x, base, r.star_of(c.label)));
        return pr;
    }
    int base = pr.f.vertices.front();
    Bits orth(static_cast<std::size_t>(x.num_walls()));
    for (int w = 0; w < x.num_walls(); ++w)
        if (!c.walls.test(static_cast<std::size_t>(w)) && c.walls.subset_of(x.crossing_walls_of(w))) orth.set(static_cast<std::size_t>(w));
    pr.e = x.subcomplex(fiber(x, base, orth));
    pr.p = x.subcomplex(fiber(x, base, orth | c.walls));
    return pr;
}

std::pair<int, int> orthogonal_container(const CubeComplex& x, const FactorSystem& fs, const ConvexSubcomplex& a,
                                         const ConvexSubcomplex& b) {
    if (a.vertices.empty() || b.vertices.empty() || a.crossing.none() || b.crossing.none())
        fail("NotAProduct", "both factors must be non-point subcomplexes");
    if (!walls_all_cross(x, a.crossing, b.crossing)) fail("NotAProduct", "some wall of A misses some wall of B");
    std::vector<int> common;
    std::set_intersection(a.vertices.begin(), a.vertices.end(), b.vertices.begin(), b.vertices.end(),
                          std::back_inserter(common));
    if (common.size() != 1) fail("NotAProduct", "A and B must meet in exactly one vertex");
    int base = common.front();
    auto pa = container_side(x, a, b, base);
    auto pb = container_side(x, b, a, base);
    return {snap(fs, pa), snap(fs, pb)};
}

} // namespace hhs
