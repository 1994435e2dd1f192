#include "hhs/boundary.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

namespace hhs {

namespace {

void dedupe(std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

int local_of(const Hierarchy& h, int u) {
    for (int i = 0; i < h.num_domains(); ++i)
        if (h.space_id(i) == u) return i;
    fail("Internal", "domain missing from view");
}

int base_length(const BoundaryDirection& d) {
    return d.periodic() ? static_cast<int>(Raag::length(d.base)) : 0;
}

// Ray points reaching depth at least depth in C U (each motif repetition
// advances by at least one).
std::vector<int> ray_ids(RaagSpace& s, const BoundaryDirection& d, int depth, const BoundaryOptions& opt) {
    std::vector<int> out;
    if (!d.periodic()) {
        for (const auto& w : d.chain) out.push_back(s.point(w));
        return out;
    }
    const int count = std::max(depth, 1) + 1;
    if (count > opt.ray_cap)
        fail("Untrusted", "ray prefix of " + std::to_string(count) + " repetitions exceeds the cap " +
                              std::to_string(opt.ray_cap));
    for (const auto& w : d.points(s.raag(), count)) out.push_back(s.point(w));
    return out;
}

double gromov(Hierarchy& h, int i, const std::vector<int>& b, const std::vector<int>& x, const std::vector<int>& y) {
    return 0.5 * (h.diam_union(i, b, x) + h.diam_union(i, b, y) - h.diam_union(i, x, y));
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// sigma^k(w) recovered from the action: g^k(x) = g^k(1) sigma^k(x).
BoundaryDirection image_direction(RaagSpace& s, Action& act, const BoundaryDirection& d, int k) {
    const Raag& r = s.raag();
    const int o = s.point(Word{});
    const Word shift = s.word(act.apply(o, k));
    BoundaryDirection out;
    out.domain = act.domain_image(d.domain, k);
    if (d.periodic()) {
        out.base = s.word(act.apply(s.point(d.base), k));
        out.motif = r.mul(r.inv(shift), s.word(act.apply(s.point(d.motif), k)));
    } else {
        for (const auto& w : d.chain) out.chain.push_back(s.word(act.apply(s.point(w), k)));
    }
    return out;
}

struct Projection {
    std::map<int, std::vector<int>> nodes;  // local S -> nodes of graph(S)
    std::set<int> unbounded;                // local S
    std::map<int, int> chosen;              // space ids
};

// S̄_q: the support together with the members of Supp(q) orthogonal to all of it.
std::vector<int> extended_support(RaagSpace& s, const std::vector<int>& support, const BoundaryPoint& q) {
    std::vector<int> out = support;
    for (int t : q.support()) {
        bool orth = true;
        for (int u : support)
            if (s.relation(t, u) != Rel::Orthogonal) orth = false;
        if (orth) out.push_back(t);
    }
    dedupe(out);
    return out;
}

bool walk_down(Hierarchy& h, int lt, int ls, const std::vector<int>& ray, int E, std::vector<int>& result) {
    const auto& rs = h.rho(ls, lt);
    std::vector<int> last, run;
    int stable = 0;
    for (int p : ray) {
        const auto& nodes = h.pi(lt, p);
        if (h.gap(lt, nodes, rs) <= E) {
            last.clear();
            stable = 0;
            continue;
        }
        auto img = h.rho_down(lt, ls, nodes);
        if (!last.empty() && h.diam_union(ls, img, last) <= E) {
            if (++stable >= 3) {
                result = run;
                return true;
            }
        } else {
            stable = 0;
            run = img;
        }
        last = std::move(img);
    }
    return false;
}

// Boundary projection inside a view that holds support ∪ Supp(q) and the rays of q.
Projection project_in_view(RaagSpace& s, Hierarchy& h, const std::vector<int>& support, const BoundaryPoint& q,
                           const std::map<int, std::vector<int>>& rays, const BoundaryOptions& opt,
                           const std::map<int, int>& prefer, bool* untrusted) {
    Projection out;
    for (int u : extended_support(s, support, q)) {
        std::vector<int> admissible;
        for (int t : q.support())
            if (s.relation(u, t) != Rel::Orthogonal) admissible.push_back(t);
        if (admissible.empty()) fail("NotRemote", "no support domain of q meets " + s.domain(u).key);
        int t = -1;
        auto pit = prefer.find(u);
        if (pit != prefer.end() && std::find(admissible.begin(), admissible.end(), pit->second) != admissible.end())
            t = pit->second;
        for (int c : admissible) {
            if (t >= 0) break;
            Rel r = s.relation(c, u);
            if (r == Rel::Nested || r == Rel::Transverse) t = c;
        }
        for (int c : admissible)
            if (t < 0 && c != u) t = c;
        if (t < 0) t = admissible.front();
        out.chosen[u] = t;
        const int ls = local_of(h, u);
        if (t == u) {
            out.unbounded.insert(ls);
            continue;
        }
        const int lt = local_of(h, t);
        Rel r = s.relation(t, u);
        if (r == Rel::Nested || r == Rel::Transverse) {
            out.nodes[ls] = h.rho(lt, ls);
            continue;
        }
        std::vector<int> img;
        if (!walk_down(h, lt, ls, rays.at(t), opt.E, img)) {
            if (untrusted) {
                *untrusted = true;
                return out;
            }
            fail("Untrusted", "ray of " + s.domain(t).key + " does not stabilize over " + s.domain(u).key);
        }
        out.nodes[ls] = img;
    }
    return out;
}

std::vector<int> all_domains(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out = a;
    out.insert(out.end(), b.begin(), b.end());
    dedupe(out);
    return out;
}

int total_base(const BoundaryPoint& p) {
    int n = 0;
    for (const auto& t : p.terms) n += base_length(t.dir);
    return n;
}

// Domains of classes meeting the path from the identity to x.
std::vector<int> path_domains(RaagSpace& s, int x) {
    std::vector<int> out;
    const int o = s.point(Word{});
    for (int p : s.path(o, x))
        for (Mask lam : s.family()) out.push_back(s.domain_of(lam, s.word(p)));
    dedupe(out);
    return out;
}

int term_of(const std::string& tok, std::size_t& i, int n) {
    long long coef = 1;
    bool digits = false;
    long long v = 0;
    while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) {
        v = v * 10 + (tok[i++] - '0');
        digits = true;
    }
    if (digits) coef = v;
    if (i < tok.size() && tok[i] == 'n') {
        ++i;
        int e = 1;
        if (i < tok.size() && tok[i] == '^') {
            ++i;
            e = 0;
            while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) e = e * 10 + (tok[i++] - '0');
        }
        long long p = 1;
        for (int k = 0; k < e; ++k) p *= n;
        return static_cast<int>(coef * p);
    }
    if (!digits) fail("ParseError", "bad exponent term in " + tok);
    return static_cast<int>(coef);
}

int eval_poly(const std::string& tok, int n) {
    std::size_t i = 0;
    long long total = 0;
    while (i < tok.size()) {
        int sign = 1;
        if (tok[i] == '+' || tok[i] == '-') sign = tok[i++] == '-' ? -1 : 1;
        total += sign * term_of(tok, i, n);
    }
    return static_cast<int>(total);
}

} // namespace

std::vector<Word> BoundaryDirection::points(const Raag& r, int count) const {
    if (!periodic()) return chain;
    std::vector<Word> out;
    Word cur = base;
    for (int k = 0; k < count; ++k) {
        out.push_back(cur);
        cur = r.mul(cur, motif);
    }
    return out;
}

std::vector<int> BoundaryPoint::support() const {
    std::vector<int> out;
    for (const auto& t : terms) out.push_back(t.domain);
    std::sort(out.begin(), out.end());
    return out;
}

double BoundaryPoint::coeff(int u) const {
    const auto* t = term(u);
    return t ? t->coeff : 0.0;
}

const BoundaryTerm* BoundaryPoint::term(int u) const {
    for (const auto& t : terms)
        if (t.domain == u) return &t;
    return nullptr;
}

Hierarchy chain_view(RaagSpace& s, std::vector<int> domains, const std::vector<std::vector<int>>& chains) {
    dedupe(domains);
    const int o = s.point(Word{});
    std::vector<int> points{o};
    for (const auto& c : chains) points.insert(points.end(), c.begin(), c.end());
    dedupe(points);
    const bool want_top = std::binary_search(domains.begin(), domains.end(), s.top());
    auto window = [&](int u) {
        std::vector<int> out{s.gate(u, o)};
        if (u == s.top() && !want_top) return out;
        for (const auto& c : chains) {
            int prev = s.gate(u, o);
            for (int p : c) {
                int g = s.gate(u, p);
                if (g != prev) {
                    auto seg = s.path(prev, g);
                    out.insert(out.end(), seg.begin(), seg.end());
                }
                prev = g;
            }
        }
        dedupe(out);
        return out;
    };
    return Hierarchy(s, points, domains, window);
}

BoundaryDirection periodic_direction(RaagSpace& s, int domain, const Word& base, const Word& motif) {
    const Raag& r = s.raag();
    BoundaryDirection d{domain, r.normal_form(base), r.normal_form(motif), {}};
    if (d.motif.empty()) fail("NotARay", "empty motif");
    constexpr int kReps = 8;
    std::vector<int> ids;
    for (const auto& w : d.points(r, kReps + 1)) ids.push_back(s.point(w));
    Hierarchy h = chain_view(s, {domain}, {ids});
    const int i = local_of(h, domain);
    const auto& b = h.pi(i, s.point(Word{}));
    int prev = h.diam_union(i, b, h.pi(i, ids[1]));
    for (int k = 2; k <= kReps; ++k) {
        int cur = h.diam_union(i, b, h.pi(i, ids[k]));
        if (cur <= prev)
            fail("NotARay", r.str(d.motif) + " stalls in " + s.domain(domain).key + " at repetition " +
                                std::to_string(k));
        prev = cur;
    }
    return d;
}

void check_boundary_point(RaagSpace& s, const BoundaryPoint& p, double tol) {
    if (p.terms.empty()) fail("InvalidBoundaryPoint", "empty support");
    double sum = 0;
    for (const auto& t : p.terms) {
        if (!(t.coeff > 0.0) || t.coeff > 1.0 + tol)
            fail("InvalidBoundaryPoint", "coefficient " + fmt(t.coeff) + " at " + s.domain(t.domain).key);
        if (t.dir.domain != t.domain) fail("InvalidBoundaryPoint", "direction lives in another domain");
        sum += t.coeff;
    }
    if (std::abs(sum - 1.0) > tol) fail("InvalidBoundaryPoint", "coefficients sum to " + fmt(sum));
    auto sup = p.support();
    for (std::size_t i = 0; i + 1 < sup.size(); ++i)
        if (sup[i] == sup[i + 1]) fail("InvalidBoundaryPoint", "repeated domain " + s.domain(sup[i]).key);
    for (std::size_t i = 0; i < sup.size(); ++i)
        for (std::size_t j = i + 1; j < sup.size(); ++j)
            if (s.relation(sup[i], sup[j]) != Rel::Orthogonal)
                fail("InvalidBoundaryPoint",
                     s.domain(sup[i]).key + " and " + s.domain(sup[j]).key + " are not orthogonal");
    if (static_cast<int>(sup.size()) > s.complexity())
        fail("InvalidBoundaryPoint", "support larger than the complexity");
}

std::string serialize(RaagSpace& s, const BoundaryPoint& p) {
    const Raag& r = s.raag();
    auto terms = p.terms;
    std::sort(terms.begin(), terms.end(),
              [&](const BoundaryTerm& a, const BoundaryTerm& b) { return s.domain(a.domain).key < s.domain(b.domain).key; });
    std::string out = "support: [";
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const auto& t = terms[k];
        std::string motif;
        if (t.dir.periodic()) {
            motif = r.str(t.dir.motif);
            if (!t.dir.base.empty()) motif = r.str(t.dir.base) + "/" + motif;
        } else {
            motif = "~" + s.point_name(s.gate(t.domain, s.point(t.dir.chain.back())));
        }
        if (k) out += ", ";
        out += "(" + s.domain(t.domain).key + ", " + fmt(t.coeff) + ", " + motif + ")";
    }
    return out + "]";
}

bool same_direction(RaagSpace& s, const BoundaryDirection& a, const BoundaryDirection& b, const BoundaryOptions& opt) {
    if (a.domain != b.domain) return false;
    const int depth = 8 * opt.E + base_length(a) + base_length(b);
    const int o = s.point(Word{});
    for (int d : {depth, 2 * depth}) {
        auto ra = ray_ids(s, a, d, opt);
        auto rb = ray_ids(s, b, d, opt);
        Hierarchy h = chain_view(s, {a.domain}, {ra, rb});
        const int i = local_of(h, a.domain);
        const auto& base = h.pi(i, o);
        const auto& fa = h.pi(i, ra.back());
        const auto& fb = h.pi(i, rb.back());
        int da = h.diam_union(i, base, fa), db = h.diam_union(i, base, fb);
        if (gromov(h, i, base, fa, fb) < std::min(da, db) - 2 * opt.E) return false;
        if (!a.periodic() && !b.periodic()) break;
    }
    return true;
}

bool is_remote(RaagSpace& s, const BoundaryPoint& p, const std::vector<int>& support) {
    auto sp = p.support();
    for (int u : support)
        if (std::find(sp.begin(), sp.end(), u) != sp.end()) return false;
    for (int u : support) {
        bool met = false;
        for (int t : sp)
            if (s.relation(u, t) != Rel::Orthogonal) met = true;
        if (!met) return false;
    }
    return true;
}

BoundaryProjection boundary_projection(RaagSpace& s, const std::vector<int>& support, const BoundaryPoint& q,
                                       const BoundaryOptions& opt, const std::map<int, int>& prefer) {
    if (!is_remote(s, q, support)) fail("NotRemote", "q is not remote with respect to the support");
    int depth = 16 * opt.E + total_base(q);
    for (int u : support) depth += static_cast<int>(Raag::length(s.domain_base_word(u)));
    for (;;) {
        std::map<int, std::vector<int>> rays;
        std::vector<std::vector<int>> chains;
        for (const auto& t : q.terms) chains.push_back(rays[t.domain] = ray_ids(s, t.dir, depth, opt));
        Hierarchy h = chain_view(s, all_domains(support, q.support()), chains);
        bool untrusted = false;
        const bool last = 2 * depth + 1 > opt.ray_cap;
        auto pr = project_in_view(s, h, support, q, rays, opt, prefer, last ? nullptr : &untrusted);
        if (untrusted) {
            depth *= 2;
            continue;
        }
        BoundaryProjection out;
        out.chosen = pr.chosen;
        for (int ls : pr.unbounded) out.unbounded.insert(h.space_id(ls));
        for (const auto& [ls, nodes] : pr.nodes) {
            auto& walls = out.walls[h.space_id(ls)];
            for (int n : nodes) walls.push_back(h.graph(ls).node(n).id);
            std::sort(walls.begin(), walls.end());
        }
        return out;
    }
}

std::string to_string(Membership m) {
    switch (m) {
    case Membership::Remote: return "Remote";
    case Membership::NonRemote: return "NonRemote";
    case Membership::Interior: return "Interior";
    case Membership::Outside: return "Outside";
    }
    return "?";
}

namespace {

MembershipResult outside(std::string why) {
    MembershipResult r;
    r.kind = Membership::Outside;
    r.witness = std::move(why);
    return r;
}

void check_neighborhood(const BasicNeighborhood& n) {
    if (!(n.eps > 0.0)) fail("InvalidNeighborhood", "epsilon must be positive");
    if (n.radius < 0) fail("InvalidNeighborhood", "negative radius");
}

MembershipResult remote_part(RaagSpace& s, const BoundaryPoint& q, const BasicNeighborhood& n,
                             const BoundaryOptions& opt) {
    const BoundaryPoint& p = n.center;
    const auto sbar = p.support();
    const int o = s.point(Word{});
    MembershipResult res;
    double orth_mass = 0;
    for (const auto& t : q.terms) {
        bool orth = true;
        for (int u : sbar)
            if (s.relation(t.domain, u) != Rel::Orthogonal) orth = false;
        if (orth) orth_mass += t.coeff;
    }
    if (orth_mass >= n.eps) return outside("remote: orthogonal mass " + fmt(orth_mass) + " >= eps");

    int depth = n.radius + 16 * opt.E + total_base(p) + total_base(q);
    for (;;) {
        std::map<int, std::vector<int>> rays, prays;
        std::vector<std::vector<int>> chains;
        for (const auto& t : q.terms) chains.push_back(rays[t.domain] = ray_ids(s, t.dir, depth, opt));
        for (const auto& t : p.terms) chains.push_back(prays[t.domain] = ray_ids(s, t.dir, depth, opt));
        Hierarchy h = chain_view(s, all_domains(sbar, q.support()), chains);
        bool untrusted = false;
        const bool last = 2 * depth + 1 > opt.ray_cap;
        auto pr = project_in_view(s, h, sbar, q, rays, opt, {}, last ? nullptr : &untrusted);
        if (untrusted) {
            depth *= 2;
            continue;
        }
        // The far point must sit beyond the coordinate for the Gromov product to see it.
        bool too_short = false;
        for (int u : sbar) {
            int ls = local_of(h, u);
            const auto& b = h.pi(ls, o);
            int reach = h.diam_union(ls, b, pr.nodes.at(ls));
            int far = h.diam_union(ls, b, h.pi(ls, prays.at(u).back()));
            if (far < reach + n.radius + 2 * opt.E) too_short = true;
        }
        if (too_short && !last && p.terms.front().dir.periodic()) {
            depth *= 2;
            continue;
        }
        for (int u : sbar) {
            int ls = local_of(h, u);
            const auto& b = h.pi(ls, o);
            double g = gromov(h, ls, b, pr.nodes.at(ls), h.pi(ls, prays.at(u).back()));
            if (g < n.radius)
                return outside("remote: projection to " + s.domain(u).key + " has Gromov product " + fmt(g) +
                               " < " + std::to_string(n.radius));
        }
        for (int u : extended_support(s, sbar, q)) {
            int ls = local_of(h, u);
            if (pr.unbounded.count(ls))
                return outside("remote: coordinate at " + s.domain(u).key + " is a direction of q");
            const double num = h.diam_union(ls, h.pi(ls, o), pr.nodes.at(ls));
            for (int v : sbar) {
                int lv = local_of(h, v);
                const double den = h.diam_union(lv, h.pi(lv, o), pr.nodes.at(lv));
                if (den == 0) {
                    ++res.skipped;
                    continue;
                }
                double gap = std::abs(num / den - p.coeff(u) / p.coeff(v));
                if (gap >= n.eps)
                    return outside("remote: ratio " + s.domain(u).key + "/" + s.domain(v).key + " off by " +
                                   fmt(gap));
            }
        }
        res.kind = Membership::Remote;
        return res;
    }
}

MembershipResult non_remote_part(RaagSpace& s, const BoundaryPoint& q, const BasicNeighborhood& n,
                                 const BoundaryOptions& opt) {
    const BoundaryPoint& p = n.center;
    auto sp = p.support();
    std::vector<int> shared;
    double rest = 0;
    for (const auto& t : q.terms) {
        if (std::binary_search(sp.begin(), sp.end(), t.domain))
            shared.push_back(t.domain);
        else
            rest += t.coeff;
    }
    if (rest >= n.eps) return outside("non-remote: mass off the shared support " + fmt(rest) + " >= eps");
    for (int u : shared) {
        double gap = std::abs(q.coeff(u) - p.coeff(u));
        if (gap >= n.eps) return outside("non-remote: coefficient at " + s.domain(u).key + " off by " + fmt(gap));
    }
    const int o = s.point(Word{});
    for (int u : shared) {
        const auto& dq = q.term(u)->dir;
        const auto& dp = p.term(u)->dir;
        const int depth = n.radius + 8 * opt.E + base_length(dq) + base_length(dp);
        auto rq = ray_ids(s, dq, depth, opt), rp = ray_ids(s, dp, depth, opt);
        Hierarchy h = chain_view(s, {u}, {rq, rp});
        int i = local_of(h, u);
        double g = gromov(h, i, h.pi(i, o), h.pi(i, rq.back()), h.pi(i, rp.back()));
        if (g < n.radius)
            return outside("non-remote: direction at " + s.domain(u).key + " has Gromov product " + fmt(g) + " < " +
                           std::to_string(n.radius));
    }
    MembershipResult res;
    res.kind = Membership::NonRemote;
    return res;
}

} // namespace

MembershipResult in_neighborhood(RaagSpace& s, const BoundaryPoint& q, const BasicNeighborhood& n,
                                 const BoundaryOptions& opt) {
    check_neighborhood(n);
    if (is_remote(s, q, n.center.support())) return remote_part(s, q, n, opt);
    return non_remote_part(s, q, n, opt);
}

MembershipResult in_neighborhood(RaagSpace& s, const Word& xw, const BasicNeighborhood& n,
                                 const BoundaryOptions& opt) {
    check_neighborhood(n);
    const BoundaryPoint& p = n.center;
    const auto sbar = p.support();
    const int o = s.point(Word{});
    const int x = s.point(xw);
    std::vector<int> perp;
    for (int t : path_domains(s, x)) {
        bool orth = true;
        for (int u : sbar)
            if (s.relation(t, u) != Rel::Orthogonal) orth = false;
        if (orth) perp.push_back(t);
    }
    const int depth = static_cast<int>(Raag::length(s.word(x))) + n.radius + 8 * opt.E + total_base(p);
    std::map<int, std::vector<int>> rays;
    std::vector<std::vector<int>> chains{{x}};
    for (const auto& t : p.terms) chains.push_back(rays[t.domain] = ray_ids(s, t.dir, depth, opt));
    Hierarchy h = chain_view(s, all_domains(sbar, perp), chains);

    MembershipResult res;
    std::map<int, double> d;
    for (int u : all_domains(sbar, perp)) d[u] = h.d(local_of(h, u), o, x);
    for (int u : sbar) {
        int i = local_of(h, u);
        double g = gromov(h, i, h.pi(i, o), h.pi(i, x), h.pi(i, rays.at(u).back()));
        if (g < n.radius)
            return outside("interior: projection to " + s.domain(u).key + " has Gromov product " + fmt(g) + " < " +
                           std::to_string(n.radius));
    }
    for (int u : sbar)
        for (int v : sbar) {
            if (u == v) continue;
            if (d[v] == 0) {
                ++res.skipped;
                continue;
            }
            double gap = std::abs(p.coeff(u) / p.coeff(v) - d[u] / d[v]);
            if (gap >= n.eps)
                return outside("interior: ratio " + s.domain(u).key + "/" + s.domain(v).key + " off by " + fmt(gap));
        }
    for (int t : perp)
        for (int u : sbar) {
            if (d[u] == 0) {
                ++res.skipped;
                continue;
            }
            if (d[t] / d[u] >= n.eps)
                return outside("interior: orthogonal ratio " + s.domain(t).key + "/" + s.domain(u).key + " = " +
                               fmt(d[t] / d[u]));
        }
    res.kind = Membership::Interior;
    return res;
}

SeparationResult disjoint_neighborhoods(RaagSpace& s, const BoundaryPoint& p, const BoundaryPoint& q,
                                        const std::vector<BoundaryPoint>& boundary_population,
                                        const std::vector<Word>& interior_population, const BoundaryOptions& opt) {
    SeparationResult out;
    std::vector<BoundaryPoint> bound = boundary_population;
    bound.push_back(p);
    bound.push_back(q);
    for (double eps : {0.2, 0.1, 0.05, 0.02, 0.01}) {
        for (int radius : {2, 4, 8, 16}) {
            BasicNeighborhood np{p, radius, eps}, nq{q, radius, eps};
            std::string hit;
            for (const auto& z : bound) {
                ++out.checked;
                if (in_neighborhood(s, z, np, opt).kind == Membership::Outside) continue;
                if (in_neighborhood(s, z, nq, opt).kind == Membership::Outside) continue;
                hit = serialize(s, z);
                break;
            }
            for (std::size_t k = 0; hit.empty() && k < interior_population.size(); ++k) {
                ++out.checked;
                const auto& z = interior_population[k];
                if (in_neighborhood(s, z, np, opt).kind == Membership::Outside) continue;
                if (in_neighborhood(s, z, nq, opt).kind == Membership::Outside) continue;
                hit = s.raag().str(z);
            }
            if (hit.empty()) {
                out.found = true;
                out.radius = radius;
                out.eps = eps;
                out.witness.clear();
                return out;
            }
            out.witness = "eps " + fmt(eps) + ", radius " + std::to_string(radius) + ": shared " + hit;
        }
    }
    return out;
}

std::vector<Word> sequence_from_template(const Raag& r, const std::string& tmpl, int horizon, int stride) {
    if (horizon <= 0 || stride <= 0) fail("InvalidInput", "horizon and stride must be positive");
    struct Factor {
        Word w;
        std::string exp;
    };
    std::vector<Factor> factors;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < tmpl.size() && std::isspace(static_cast<unsigned char>(tmpl[i]))) ++i;
    };
    for (skip(); i < tmpl.size(); skip()) {
        Factor f;
        if (tmpl[i] == '(') {
            auto close = tmpl.find(')', i);
            if (close == std::string::npos) fail("ParseError", "unbalanced parenthesis in " + tmpl);
            f.w = r.parse(tmpl.substr(i + 1, close - i - 1));
            i = close + 1;
        } else if (std::isalpha(static_cast<unsigned char>(tmpl[i]))) {
            f.w = r.parse(std::string(1, tmpl[i++]));
        } else {
            fail("ParseError", "unexpected '" + std::string(1, tmpl[i]) + "' in " + tmpl);
        }
        if (i < tmpl.size() && tmpl[i] == '^') {
            ++i;
            if (i < tmpl.size() && tmpl[i] == '{') {
                auto close = tmpl.find('}', i);
                if (close == std::string::npos) fail("ParseError", "unbalanced brace in " + tmpl);
                f.exp = tmpl.substr(i + 1, close - i - 1);
                i = close + 1;
            } else {
                std::size_t j = i;
                if (j < tmpl.size() && tmpl[j] == '-') ++j;
                while (j < tmpl.size() && (std::isdigit(static_cast<unsigned char>(tmpl[j])) || tmpl[j] == 'n')) ++j;
                f.exp = tmpl.substr(i, j - i);
                i = j;
            }
            f.exp.erase(std::remove_if(f.exp.begin(), f.exp.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
                        f.exp.end());
            if (f.exp.empty()) fail("ParseError", "missing exponent in " + tmpl);
        } else {
            f.exp = "1";
        }
        factors.push_back(std::move(f));
    }
    if (factors.empty()) fail("ParseError", "empty sequence template");
    std::vector<Word> out;
    for (int k = 1; k <= horizon; ++k) {
        const int n = k * stride;
        Word x;
        for (const auto& f : factors) {
            int e = eval_poly(f.exp, n);
            Word piece = e >= 0 ? f.w : r.inv(f.w);
            Word acc;
            // Square-and-multiply keeps long powers cheap.
            Word sq = piece;
            for (int m = std::abs(e); m > 0; m >>= 1) {
                if (m & 1) acc = r.mul(acc, sq);
                if (m > 1) sq = r.mul(sq, sq);
            }
            x = r.mul(x, acc);
        }
        out.push_back(std::move(x));
    }
    return out;
}

LimitResult limit_of_sequence(RaagSpace& s, const std::vector<Word>& xs, const BoundaryOptions& opt) {
    if (xs.size() < 3) fail("InvalidInput", "need at least three sequence points");
    const int N = static_cast<int>(xs.size());
    const int tail = N - (N + 2) / 3;
    const int o = s.point(Word{});
    std::vector<int> ids;
    for (const auto& w : xs) ids.push_back(s.point(w));

    LimitResult out;
    if (std::all_of(ids.begin() + tail, ids.end(), [&](int p) { return p == ids.back(); })) {
        out.kind = LimitResult::Kind::Interior;
        out.vertex = xs.back();
        return out;
    }

    std::vector<int> cands = path_domains(s, ids.back());
    {
        auto more = path_domains(s, ids[tail]);
        cands.insert(cands.end(), more.begin(), more.end());
        dedupe(cands);
    }
    std::vector<int> kept;
    for (int u : cands) {
        if (label_bounded(s, s.domain(u).label)) continue;
        const int g0 = s.gate(u, o);
        int first = s.dist(g0, s.gate(u, ids[tail])), last = s.dist(g0, s.gate(u, ids.back()));
        if (last - first >= 2) kept.push_back(u);
    }

    std::vector<int> unbounded;
    std::map<int, std::vector<int>> f;
    if (!kept.empty()) {
        Hierarchy h = chain_view(s, kept, {ids});
        for (int u : kept) {
            int i = local_of(h, u);
            LimitRow row;
            row.key = s.domain(u).key;
            for (int p : ids) row.dist.push_back(h.d(i, o, p));
            row.unbounded = row.dist.back() - row.dist[tail] >= 2;
            if (row.unbounded) unbounded.push_back(u);
            f[u] = row.dist;
            out.table.push_back(std::move(row));
        }
    }
    if (unbounded.empty()) {
        out.kind = LimitResult::Kind::Divergent;
        return out;
    }
    for (std::size_t a = 0; a < unbounded.size(); ++a)
        for (std::size_t b = a + 1; b < unbounded.size(); ++b)
            if (s.relation(unbounded[a], unbounded[b]) != Rel::Orthogonal)
                fail("Unstable", s.domain(unbounded[a]).key + " and " + s.domain(unbounded[b]).key +
                                     " both grow but are not orthogonal");

    std::map<int, double> avg;
    for (int u : unbounded) {
        double lo = 1e9, hi = -1e9, sum = 0;
        for (int n = tail; n < N; ++n) {
            double tot = 0;
            for (int v : unbounded) tot += f[v][n];
            if (tot == 0) {
                ++out.skipped;
                continue;
            }
            double a = f[u][n] / tot;
            lo = std::min(lo, a);
            hi = std::max(hi, a);
            sum += a;
        }
        if (hi - lo > opt.tol)
            fail("Unstable", "coefficient of " + s.domain(u).key + " oscillates between " + fmt(lo) + " and " + fmt(hi));
        avg[u] = sum / (N - tail - out.skipped / static_cast<int>(unbounded.size()));
    }
    double total = 0;
    for (auto& [u, a] : avg)
        if (a >= opt.tol) total += a;
    for (auto& [u, a] : avg) {
        if (a < opt.tol) continue;
        BoundaryTerm t;
        t.domain = u;
        t.coeff = a / total;
        t.dir.domain = u;
        t.dir.chain = xs;
        out.point.terms.push_back(std::move(t));
    }
    out.kind = LimitResult::Kind::Boundary;
    check_boundary_point(s, out.point);
    return out;
}

namespace {

struct Axis {
    int M = 1;
    Word plus, minus;
};

Axis axis_of(RaagSpace& s, const AutomorphismSpec& g, const ClassificationReport& c) {
    if (c.type != AutoType::Axial) fail("NotAxial", "classification is " + to_string(c.type));
    Axis ax;
    ax.M = big_invariants(s, g, c).M;
    Action act(s, g);
    const Raag& r = s.raag();
    const int o = s.point(Word{});
    ax.plus = s.word(act.apply(o, ax.M));
    ax.minus = s.word(act.apply(o, -ax.M));
    Word fw, bw;
    for (int k = 1; k <= 3; ++k) {
        fw = r.mul(fw, ax.plus);
        bw = r.mul(bw, ax.minus);
        if (s.point(fw) != act.apply(o, k * ax.M) || s.point(bw) != act.apply(o, -k * ax.M))
            fail("Unsupported", "the orbit of the identity under g^M is not a translation orbit");
    }
    return ax;
}

} // namespace

FixedSetReport fixed_points(RaagSpace& s, const AutomorphismSpec& g, const ClassificationReport& c,
                            const BoundaryOptions& opt) {
    Axis ax = axis_of(s, g, c);
    Action act(s, g);
    const Raag& r = s.raag();
    FixedSetReport out;
    out.M = ax.M;
    out.irreducible = c.irreducible;
    std::vector<int> big;
    for (int i : c.big.big) big.push_back(c.big.rows[i].domain);
    for (int u : big) {
        auto plus = periodic_direction(s, u, {}, ax.plus);
        auto minus = periodic_direction(s, u, {}, ax.minus);
        for (const auto* d : {&plus, &minus})
            if (!same_direction(s, image_direction(s, act, *d, ax.M), *d, opt))
                fail("AssertionFailed", "axis direction in " + s.domain(u).key + " is not invariant");
        out.plus.push_back(plus);
        out.minus.push_back(minus);
    }

    std::vector<int> doms = big;
    for (Mask lam : s.family())
        if (!label_bounded(s, lam)) doms.push_back(s.domain_of(lam, Word{}));
    dedupe(doms);
    for (int u : doms) {
        std::vector<Word> gens;
        const Mask lam = s.domain(u).label;
        for (int v = 0; v < r.rank(); ++v)
            if ((lam >> v) & 1U) gens.push_back(r.letter(v, 1));
        for (const auto& w : enumerate_words(r, gens, 2)) {
            BoundaryDirection d;
            try {
                d = periodic_direction(s, u, s.domain_base_word(u), w);
            } catch (const Error&) {
                continue;
            }
            if (!same_direction(s, image_direction(s, act, d, ax.M), d, opt)) continue;
            bool seen = false;
            for (const auto& e : out.fixed)
                if (same_direction(s, e, d, opt)) seen = true;
            if (seen) continue;
            for (int b : big) {
                Rel rel = s.relation(u, b);
                if (rel == Rel::Transverse || rel == Rel::ReverseNested)
                    fail("AssertionFailed", "fixed direction " + r.str(w) + " in " + s.domain(u).key +
                                                " against big domain " + s.domain(b).key);
            }
            out.fixed.push_back(std::move(d));
        }
    }
    return out;
}

ProbeResult north_south_probe(RaagSpace& s, const AutomorphismSpec& g, const BoundaryDirection& p, int radius,
                              int N_cap, const BoundaryOptions& opt) {
    const int o = s.point(Word{});
    auto c = classify(s, g, o, 20);
    Axis ax = axis_of(s, g, c);
    if (!c.irreducible) fail("NotAxial", "north-south dynamics needs an irreducible axial element");
    const int u = c.big.rows[c.big.big.front()].domain;
    auto plus = periodic_direction(s, u, {}, ax.plus);
    auto minus = periodic_direction(s, u, {}, ax.minus);
    if (p.domain == u && same_direction(s, p, minus, opt)) fail("FixedSouthPole", "p is the repelling direction");
    Action act(s, g);
    ProbeResult out;
    for (int N = 0; N <= N_cap; ++N) {
        auto q = N == 0 ? p : image_direction(s, act, p, N);
        if (q.domain != u) continue;
        const int depth = radius + 8 * opt.E + base_length(q);
        auto rq = ray_ids(s, q, depth, opt), rp = ray_ids(s, plus, depth, opt);
        Hierarchy h = chain_view(s, {u}, {rq, rp});
        int i = local_of(h, u);
        if (gromov(h, i, h.pi(i, o), h.pi(i, rq.back()), h.pi(i, rp.back())) >= radius) {
            out.N = N;
            return out;
        }
    }
    out.N = N_cap;
    out.timeout = true;
    return out;
}

GromovReport gromov_compare(RaagSpace& s, std::uint64_t seed, int count, int horizon, const BoundaryOptions& opt) {
    if (s.family().size() != 1) fail("NotSingleDomain", "the structure has more than one domain");
    const Raag& r = s.raag();
    std::mt19937_64 rng(seed);
    auto random_word = [&](int len) {
        std::vector<int> ls;
        while (static_cast<int>(ls.size()) < len) {
            int g = static_cast<int>(rng() % static_cast<std::uint64_t>(r.rank())) + 1;
            int l = (rng() & 1U) ? g : -g;
            if (!ls.empty() && ls.back() == -l) continue;
            ls.push_back(l);
        }
        return r.from_letters(ls);
    };
    constexpr int kProbe = 64;
    GromovReport out;
    std::vector<std::vector<int>> ends;
    while (static_cast<int>(out.rays.size()) < count) {
        Word base = random_word(static_cast<int>(rng() % 4));
        Word motif = random_word(1 + static_cast<int>(rng() % 3));
        Word cur = base;
        bool geodesic = true;
        for (int k = 1; k <= 4 && geodesic; ++k) {
            cur = r.mul(cur, motif);
            geodesic = Raag::length(cur) == Raag::length(base) + k * Raag::length(motif);
        }
        if (!geodesic) continue;
        Word far = base;
        for (int k = 0; k < kProbe; ++k) far = r.mul(far, motif);
        auto ls = Raag::letters(far);
        ls.resize(kProbe);
        if (std::find(ends.begin(), ends.end(), ls) != ends.end()) continue;
        ends.push_back(ls);
        out.rays.emplace_back(base, motif);
    }
    std::vector<BoundaryDirection> dirs;
    for (const auto& [base, motif] : out.rays) {
        std::vector<Word> xs;
        Word cur = base;
        for (int n = 1; n <= horizon; ++n) xs.push_back(cur = r.mul(cur, motif));
        auto lim = limit_of_sequence(s, xs, opt);
        if (lim.kind != LimitResult::Kind::Boundary || lim.point.terms.size() != 1) {
            out.singleton_support = false;
            out.witness = "ray " + r.str(base) + "/" + r.str(motif) + " has no singleton limit";
            continue;
        }
        dirs.push_back(lim.point.terms.front().dir);
    }
    for (std::size_t a = 0; a < dirs.size(); ++a)
        for (std::size_t b = a + 1; b < dirs.size(); ++b)
            if (same_direction(s, dirs[a], dirs[b], opt)) {
                out.injective = false;
                out.witness = "rays " + std::to_string(a) + " and " + std::to_string(b) + " share a direction";
            }
    return out;
}

bool splits_over_product(RaagSpace& s, const BoundaryPoint& p, int u) {
    for (int w : p.support()) {
        Rel r = s.relation(w, u);
        if (r != Rel::Equal && r != Rel::Nested && r != Rel::Orthogonal) return false;
    }
    return true;
}

} // namespace hhs
