#include "hhs/autos.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "hhs/contact.hpp"
#include "hhs/errors.hpp"

namespace hhs {

namespace {

Word map_word(const Raag& r, const std::vector<int>& sigma, const Word& w) {
    if (sigma.empty()) return w;
    Word out;
    for (const auto& s : w) out.push_back(Syl{sigma[s.g], s.e});
    return r.normal_form(out);
}

Mask map_mask(const std::vector<int>& sigma, Mask m) {
    if (sigma.empty()) return m;
    Mask out = 0;
    for (int v = 0; v < static_cast<int>(sigma.size()); ++v)
        if ((m >> v) & 1U) out |= Mask{1} << sigma[v];
    return out;
}

std::vector<int> invert(const std::vector<int>& p) {
    std::vector<int> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
    return q;
}

bool is_bijection(const std::vector<int>& p) {
    std::vector<char> hit(p.size(), 0);
    for (int v : p) {
        if (v < 0 || v >= static_cast<int>(p.size()) || hit[static_cast<std::size_t>(v)]) return false;
        hit[static_cast<std::size_t>(v)] = 1;
    }
    return true;
}

// Diameter of the projected orbit as it grows layer by layer. Each layer is
// a set of new orbit points; the window is the union of canonical paths
// between the gates of the given point pairs.
std::vector<int> orbit_growth(Space& s, int u, const std::vector<std::vector<int>>& layers,
                              const std::vector<std::pair<int, int>>& links, const std::vector<int>* fixed_window) {
    std::vector<int> window;
    if (fixed_window) {
        window = *fixed_window;
    } else {
        std::unordered_set<int> seen;
        auto add = [&](int p) {
            if (seen.insert(p).second) window.push_back(p);
        };
        add(s.gate(u, layers.front().front()));
        for (auto [a, b] : links)
            for (int p : s.path(s.gate(u, a), s.gate(u, b))) add(p);
    }
    ContactGraph g = factored_contact_graph(s, u, window);
    std::vector<int> members;
    std::vector<char> in(static_cast<std::size_t>(g.size()), 0);
    std::vector<std::vector<int>> rows;
    std::vector<int> out;
    int cur = 0;
    for (const auto& layer : layers) {
        for (int y : layer) {
            for (int w : s.walls_of(u, s.gate(u, y))) {
                int node = g.wall_node(w);
                if (node < 0) fail("Untrusted", "gate of " + s.point_name(y) + " leaves the orbit window");
                if (in[static_cast<std::size_t>(node)]) continue;
                in[static_cast<std::size_t>(node)] = 1;
                members.push_back(node);
                rows.push_back(g.bfs({node}));
                const auto& row = rows.back();
                for (int m : members) cur = std::max(cur, row[static_cast<std::size_t>(m)]);
            }
        }
        out.push_back(cur);
    }
    return out;
}

std::vector<int> dedupe(const std::vector<int>& v) {
    std::vector<int> out;
    std::unordered_set<int> seen;
    for (int x : v)
        if (seen.insert(x).second) out.push_back(x);
    return out;
}

std::string key_of(const Raag& r) {
    std::ostringstream os;
    for (const auto& n : r.names()) os << n << ' ';
    for (auto [a, b] : r.edges()) os << a << '-' << b << ' ';
    return os.str();
}

} // namespace

AutomorphismSpec AutomorphismSpec::permutation(std::vector<int> p, std::string name) {
    if (!is_bijection(p)) fail("InvalidInput", "vertex map is not a bijection");
    AutomorphismSpec g;
    g.kind = Kind::FinitePermutation;
    g.perm = std::move(p);
    g.name = std::move(name);
    return g;
}

AutomorphismSpec AutomorphismSpec::group_word(const Raag& r, const Word& w, std::vector<int> sigma) {
    if (!sigma.empty()) {
        if (static_cast<int>(sigma.size()) != r.rank() || !is_bijection(sigma))
            fail("InvalidInput", "generator map is not a permutation");
        for (int a = 0; a < r.rank(); ++a)
            for (int b = 0; b < r.rank(); ++b)
                if (a != b && r.commute(a, b) != r.commute(sigma[a], sigma[b]))
                    fail("InvalidInput", "generator map is not a graph automorphism");
    }
    AutomorphismSpec g;
    g.kind = Kind::GroupWord;
    g.word = r.normal_form(w);
    g.sigma = std::move(sigma);
    g.name = r.str(g.word);
    if (!g.sigma.empty()) {
        g.name += "*(";
        for (int v = 0; v < r.rank(); ++v) g.name += r.names()[g.sigma[v]];
        g.name += ")";
    }
    return g;
}

Action::Action(Space& s, const AutomorphismSpec& g) : s_(s), g_(g) {
    raag_ = dynamic_cast<RaagSpace*>(&s);
    cx_ = dynamic_cast<ComplexSpace*>(&s);
    if (g_.kind == AutomorphismSpec::Kind::GroupWord) {
        if (!raag_) fail("InvalidInput", "group words act on RAAG models only");
        g_.word = raag_->raag().normal_form(g_.word);
        if (!g_.sigma.empty()) sigma_inv_ = invert(g_.sigma);
        return;
    }
    if (!cx_) fail("InvalidInput", "vertex permutations act on finite complexes only");
    const auto& x = cx_->complex();
    if (static_cast<int>(g_.perm.size()) != x.num_vertices() || !is_bijection(g_.perm))
        fail("InvalidInput", "vertex map is not a bijection of the complex");
    for (auto [a, b] : x.edges())
        if (x.wall_between(g_.perm[a], g_.perm[b]) < 0) fail("InvalidInput", "vertex map does not preserve edges");
    inv_perm_ = invert(g_.perm);
    const auto& fs = cx_->factors();
    for (int m = 0; m < static_cast<int>(fs.members.size()); ++m) member_of_.emplace(fs.members[m].vertices, m);
}

int Action::step(int p, bool forward) {
    if (cx_ && g_.kind == AutomorphismSpec::Kind::FinitePermutation)
        return forward ? g_.perm[p] : inv_perm_[p];
    const Raag& r = raag_->raag();
    if (forward) return raag_->point(map_word(r, g_.sigma, r.mul(g_.word, raag_->word(p))));
    return raag_->point(r.mul(r.inv(g_.word), map_word(r, sigma_inv_, raag_->word(p))));
}

int Action::apply(int p, int k) {
    for (int i = 0; i < std::abs(k); ++i) p = step(p, k > 0);
    return p;
}

int Action::domain_step(int u, bool forward) {
    if (raag_) {
        const Raag& r = raag_->raag();
        const Mask lam = raag_->domain(u).label;
        const Word& m = raag_->domain_base_word(u);
        if (forward) return raag_->domain_of(map_mask(g_.sigma, lam), map_word(r, g_.sigma, r.mul(g_.word, m)));
        return raag_->domain_of(map_mask(sigma_inv_, lam), r.mul(r.inv(g_.word), map_word(r, sigma_inv_, m)));
    }
    const auto& fs = cx_->factors();
    const auto& map = forward ? g_.perm : inv_perm_;
    std::vector<int> image;
    for (int v : fs.rep(u).vertices) image.push_back(map[v]);
    std::sort(image.begin(), image.end());
    auto it = member_of_.find(image);
    if (it == member_of_.end()) fail("InvalidInput", "vertex map does not preserve the factor system");
    return fs.member_class[it->second];
}

int Action::domain_image(int u, int k) {
    for (int i = 0; i < std::abs(k); ++i) u = domain_step(u, k > 0);
    return u;
}

std::string to_string(Growth g) {
    switch (g) {
    case Growth::Bounded: return "Bounded";
    case Growth::Linear: return "Linear";
    case Growth::SublinearSuspect: return "SublinearSuspect";
    }
    return "?";
}

std::string to_string(AutoType t) {
    switch (t) {
    case AutoType::Elliptic: return "Elliptic";
    case AutoType::Axial: return "Axial";
    case AutoType::Unresolved: return "Unresolved";
    }
    return "?";
}

std::string to_string(RankRigidityReport::Verdict v) {
    switch (v) {
    case RankRigidityReport::Verdict::ProductWithUnboundedFactors: return "ProductWithUnboundedFactors";
    case RankRigidityReport::Verdict::RankOneElement: return "RankOneElement";
    case RankRigidityReport::Verdict::Unresolved: return "Unresolved";
    }
    return "?";
}

Growth fit_growth(const std::vector<int>& f, double* slope, double* r2) {
    if (slope) *slope = 0.0;
    if (r2) *r2 = 0.0;
    const int n = static_cast<int>(f.size()) - 1;
    if (n < 1) return Growth::Bounded;
    const int tail = (n + 2) / 3;
    if (f[static_cast<std::size_t>(n)] <= f[static_cast<std::size_t>(n - tail)]) return Growth::Bounded;
    const int lo = n - (2 * n) / 3;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const int m = n - lo + 1;
    for (int i = lo; i <= n; ++i) {
        double x = i, y = f[static_cast<std::size_t>(i)];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double vx = sxx - sx * sx / m, vy = syy - sy * sy / m, cxy = sxy - sx * sy / m;
    if (vx <= 0 || vy <= 0) return Growth::SublinearSuspect;
    double b = cxy / vx;
    double rr = cxy * cxy / (vx * vy);
    if (slope) *slope = b / 2.0;
    if (r2) *r2 = rr;
    return rr >= 0.99 && b > 0 ? Growth::Linear : Growth::SublinearSuspect;
}

BigSetReport big_set(Space& s, const AutomorphismSpec& g, int x, int N) {
    if (N < 1) fail("InvalidInput", "horizon must be positive");
    Action act(s, g);
    auto* raag = dynamic_cast<RaagSpace*>(&s);
    auto* cx = dynamic_cast<ComplexSpace*>(&s);
    std::vector<std::vector<int>> layers{{x}};
    std::vector<std::pair<int, int>> links;
    int fwd = x, back = x;
    for (int k = 1; k <= N; ++k) {
        int f = act.apply(fwd, 1), b = act.apply(back, -1);
        links.emplace_back(fwd, f);
        links.emplace_back(back, b);
        layers.push_back({f, b});
        fwd = f;
        back = b;
    }
    std::vector<int> cand;
    if (raag) {
        for (int p : s.path(x, act.apply(x, 1)))
            for (Mask lam : raag->family()) cand.push_back(raag->domain_of(lam, raag->word(p)));
    } else {
        for (int u = 0; u < s.num_domains(); ++u) cand.push_back(u);
    }
    cand = dedupe(cand);

    BigSetReport rep;
    rep.horizon = N;
    std::unordered_map<int, int> row_of;
    auto measure = [&](int u) {
        if (row_of.count(u)) return;
        GrowthRow row;
        row.domain = u;
        row.key = s.domain(u).key;
        std::vector<int> w;
        if (cx) w = cx->window(u);
        row.diam = orbit_growth(s, u, layers, links, cx ? &w : nullptr);
        row.growth = fit_growth(row.diam, &row.slope, &row.r2);
        row_of[u] = static_cast<int>(rep.rows.size());
        rep.rows.push_back(std::move(row));
    };
    for (int u : cand) measure(u);
    // Big sets are invariant, so images of big domains must be measured too.
    for (int round = 0; round < 4; ++round) {
        std::vector<int> fresh;
        for (const auto& row : rep.rows)
            if (row.growth != Growth::Bounded)
                for (int k : {1, -1}) {
                    int v = act.domain_image(row.domain, k);
                    if (!row_of.count(v)) fresh.push_back(v);
                }
        fresh = dedupe(fresh);
        if (fresh.empty()) break;
        for (int v : fresh) measure(v);
    }
    for (int i = 0; i < static_cast<int>(rep.rows.size()); ++i)
        if (rep.rows[i].growth != Growth::Bounded) rep.big.push_back(i);
    std::sort(rep.big.begin(), rep.big.end(),
              [&](int a, int b) { return rep.rows[a].key < rep.rows[b].key; });
    return rep;
}

std::vector<std::string> ClassificationReport::big_keys() const {
    std::vector<std::string> out;
    for (int i : big.big) out.push_back(big.rows[i].key);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

void assert_orthogonal(Space& s, const BigSetReport& b) {
    for (std::size_t i = 0; i < b.big.size(); ++i)
        for (std::size_t j = i + 1; j < b.big.size(); ++j) {
            const auto& u = b.rows[b.big[i]];
            const auto& v = b.rows[b.big[j]];
            if (s.relation(u.domain, v.domain) != Rel::Orthogonal)
                fail("BigNotOrthogonal", u.key + " and " + v.key + " are " +
                                             to_string(s.relation(u.domain, v.domain)));
        }
}

} // namespace

bool label_bounded(RaagSpace& s, Mask label) {
    static std::map<std::pair<std::string, Mask>, bool> cache;
    auto key = std::make_pair(key_of(s.raag()), label);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    int u = s.domain_of(label, Word{});
    // Eccentricity of the walls at the identity.
    auto reach = [&](int radius) {
        auto g = factored_contact_graph(s, u, s.ball_window(u, radius));
        std::vector<int> src;
        for (int w : s.walls_of(u, s.point(Word{}))) src.push_back(g.wall_node(w));
        auto d = g.bfs(src);
        return *std::max_element(d.begin(), d.end());
    };
    bool bounded = reach(6) <= reach(4);
    cache.emplace(key, bounded);
    return bounded;
}

ClassificationReport classify(Space& s, const AutomorphismSpec& g, int x, int N) {
    ClassificationReport r;
    r.big = big_set(s, g, x, N);
    assert_orthogonal(s, r.big);
    if (r.big.big.empty()) {
        r.type = AutoType::Elliptic;
        return r;
    }
    bool linear = false;
    for (int i : r.big.big) linear = linear || r.big.rows[i].growth == Growth::Linear;
    r.type = linear ? AutoType::Axial : AutoType::Unresolved;
    if (r.big.big.size() == 1) {
        const auto& row = r.big.rows[r.big.big.front()];
        r.irreducible = row.domain == s.top();
        bool bounded = true;
        if (auto* raag = dynamic_cast<RaagSpace*>(&s)) {
            Mask lk = raag->raag().link_of(s.domain(row.domain).label);
            for (Mask lam : raag->family())
                if (lam != 0 && (lam & ~lk) == 0) bounded = bounded && label_bounded(*raag, lam);
        }
        r.rank_one = linear && bounded;
    }
    try {
        r.M_power = big_invariants(s, g, r).M;
    } catch (const Error& e) {
        if (e.kind() != "CapExceeded") throw;
        r.M_power = -1;
    }
    return r;
}

BigInvariants big_invariants(Space& s, const AutomorphismSpec& g, const ClassificationReport& r, int cap) {
    assert_orthogonal(s, r.big);
    Action act(s, g);
    BigInvariants out;
    int M = 1;
    for (int i : r.big.big) {
        const auto& row = r.big.rows[i];
        int period = 0, v = row.domain;
        for (int k = 1; k <= cap; ++k) {
            v = act.domain_image(v, 1);
            if (v == row.domain) {
                period = k;
                break;
            }
        }
        if (period == 0) fail("CapExceeded", "no power up to " + std::to_string(cap) + " fixes " + row.key);
        out.witnesses.push_back(row.key + " period " + std::to_string(period));
        M = std::lcm(M, period);
    }
    if (M > cap) fail("CapExceeded", "least common period " + std::to_string(M) + " exceeds the cap");
    out.M = M;
    return out;
}

std::vector<int> active_domains(RaagSpace& s, const std::vector<Word>& gens, int x, int N) {
    const int point_cap = 20000;
    std::vector<Action> acts;
    for (const auto& w : gens) acts.emplace_back(s, AutomorphismSpec::group_word(s.raag(), w));
    std::vector<std::vector<int>> layers{{x}};
    std::vector<std::pair<int, int>> links;
    std::unordered_set<int> seen{x};
    for (int n = 1; n <= N; ++n) {
        std::vector<int> next;
        for (int y : layers.back())
            for (auto& a : acts)
                for (int k : {1, -1}) {
                    int z = a.apply(y, k);
                    if (seen.insert(z).second) {
                        next.push_back(z);
                        links.emplace_back(y, z);
                    }
                }
        if (static_cast<int>(seen.size()) > point_cap)
            fail("HorizonExceedsBall", "subgroup ball of radius " + std::to_string(n) + " exceeds " +
                                           std::to_string(point_cap) + " points");
        layers.push_back(std::move(next));
    }
    std::vector<int> cand;
    for (auto& a : acts)
        for (int k : {1, -1})
            for (int p : s.path(x, a.apply(x, k)))
                for (Mask lam : s.family()) cand.push_back(s.domain_of(lam, s.word(p)));
    cand = dedupe(cand);
    std::vector<int> active;
    const int tail = (N + 2) / 3;
    for (int u : cand) {
        auto f = orbit_growth(s, u, layers, links, nullptr);
        if (f[static_cast<std::size_t>(N)] > f[static_cast<std::size_t>(N - tail)]) active.push_back(u);
    }
    std::vector<int> out;
    for (int u : active) {
        bool maximal = true;
        for (int v : active)
            if (v != u && s.relation(u, v) == Rel::Nested) maximal = false;
        if (maximal) out.push_back(u);
    }
    std::sort(out.begin(), out.end(), [&](int a, int b) { return s.domain(a).key < s.domain(b).key; });
    return out;
}

std::vector<Word> enumerate_words(const Raag& r, const std::vector<Word>& gens, int L) {
    std::vector<Word> sym;
    for (const auto& g : gens) {
        sym.push_back(r.normal_form(g));
        sym.push_back(r.inv(r.normal_form(g)));
    }
    const int k = static_cast<int>(sym.size());
    std::vector<Word> out;
    std::set<Word> seen;
    std::vector<int> idx;
    // Depth-first by length, so shorter words come first within each length pass.
    for (int len = 1; len <= L; ++len) {
        idx.assign(static_cast<std::size_t>(len), 0);
        while (true) {
            bool reduced = true;
            for (int i = 1; i < len; ++i)
                if ((idx[i] ^ 1) == idx[i - 1]) reduced = false;
            if (reduced) {
                Word w;
                for (int i : idx) w = r.mul(w, sym[static_cast<std::size_t>(i)]);
                if (!w.empty() && seen.insert(w).second) out.push_back(w);
            }
            int pos = len - 1;
            while (pos >= 0 && ++idx[pos] == k) idx[pos--] = 0;
            if (pos < 0) break;
        }
    }
    return out;
}

std::vector<Word> cyclic_representatives(const Raag& r, const std::vector<Word>& words) {
    std::vector<Word> out;
    for (const auto& w : words) {
        auto ls = Raag::letters(w);
        bool least = true;
        for (std::size_t k = 1; k < ls.size() && least; ++k) {
            std::vector<int> rot(ls.begin() + static_cast<long>(k), ls.end());
            rot.insert(rot.end(), ls.begin(), ls.begin() + static_cast<long>(k));
            if (shortlex_less(r.normal_form(r.from_letters(rot)), w)) least = false;
        }
        if (least) out.push_back(w);
    }
    return out;
}

OmnibusResult omnibus_search(RaagSpace& s, const std::vector<Word>& gens, int x, int N, int L, int horizon) {
    auto active = active_domains(s, gens, x, N);
    std::vector<std::string> want;
    for (int u : active) want.push_back(s.domain(u).key);
    std::sort(want.begin(), want.end());
    for (const auto& w : enumerate_words(s.raag(), gens, L)) {
        auto rep = classify(s, AutomorphismSpec::group_word(s.raag(), w), x, horizon);
        if (rep.big_keys() == want) return {w, rep};
    }
    std::string keys;
    for (const auto& k : want) keys += " " + k;
    fail("NotFound", "no word of length <= " + std::to_string(L) + " has big set {" + keys + " }");
}

RankRigidityReport rank_rigidity_report(const Raag& r, const std::vector<Word>& gens, const RankRigidityOptions& opt) {
    RankRigidityReport rep;
    RaagSpace s(r);
    const int o = s.point(Word{});
    std::ostringstream ev;
    auto s_probe = [&](int radius) {
        int d = factored_contact_graph(s, s.top(), s.ball_window(s.top(), radius)).diameter();
        rep.s_diameter[radius] = d;
        return d;
    };

    for (const auto& w : enumerate_words(r, gens, opt.L)) {
        auto c = classify(s, AutomorphismSpec::group_word(r, w), o, opt.horizon);
        if (!c.rank_one) continue;
        rep.verdict = RankRigidityReport::Verdict::RankOneElement;
        rep.element = w;
        const auto& row = c.big.rows[c.big.big.front()];
        rep.domain = row.key;
        ev << "element " << r.str(w) << " big " << row.key << " slope " << row.slope << " r2 " << row.r2 << "\n";
        ev << format_growth(c.big);
        // A rank-one element along S forces C S to be unbounded.
        rep.s_bounded = row.domain != s.top() && row.growth != Growth::Linear;
        rep.cross_check = row.domain != s.top() || row.growth == Growth::Linear;
        rep.evidence = ev.str();
        return rep;
    }

    std::vector<int> diams;
    for (int radius : opt.radii) diams.push_back(s_probe(radius));
    rep.s_bounded = diams.size() >= 2 && diams.back() <= diams[diams.size() - 2];
    for (auto [radius, d] : rep.s_diameter) ev << "radius " << radius << " diam C S " << d << "\n";

    int kappa0 = opt.kappa0;
    if (kappa0 < 0) {
        CubeComplex ball = CubeComplex::build_raag_ball(r, opt.radii.front(), 2);
        FactorSystem fs = generate_factor_system(ball);
        ComplexSpace cs(ball, fs);
        Hierarchy h = build_structure(cs, std::min(ball.trusted_radius(), 3));
        kappa0 = verify_axioms(h).constants.kappa0;
    }
    ev << "kappa0 " << kappa0 << "\n";

    for (Mask lam : s.family()) {
        if (lam == r.all()) continue;
        const Mask star = r.star_of(lam);
        if (r.link_of(lam) == 0) continue;
        // Distance from a word to A_star is the length of what follows its head.
        std::vector<long> c;
        for (int radius : opt.radii) {
            long worst = 0;
            int u = s.domain_of(r.all(), Word{});
            for (int p : s.ball_window(u, radius)) {
                const Word& w = s.word(p);
                worst = std::max(worst, Raag::length(w) - Raag::length(r.head(w, star)));
            }
            c.push_back(worst);
        }
        bool stable = std::adjacent_find(c.begin(), c.end(), std::not_equal_to<>()) == c.end();
        ev << "product " << s.domain(s.domain_of(lam, Word{})).key << " c";
        for (long v : c) ev << " " << v;
        ev << "\n";
        if (stable && c.front() <= 2 + kappa0) {
            rep.verdict = RankRigidityReport::Verdict::ProductWithUnboundedFactors;
            rep.domain = s.domain(s.domain_of(lam, Word{})).key;
            rep.cross_check = rep.s_bounded;
            rep.evidence = ev.str();
            return rep;
        }
    }
    rep.cross_check = !rep.s_bounded;
    rep.evidence = ev.str();
    return rep;
}

std::string format_growth(const BigSetReport& r) {
    std::ostringstream os;
    os << "domain,growth,slope,r2";
    for (int n = 0; n <= r.horizon; ++n) os << ",n" << n;
    os << "\n";
    for (const auto& row : r.rows) {
        os << row.key << "," << to_string(row.growth) << "," << row.slope << "," << row.r2;
        for (int d : row.diam) os << "," << d;
        os << "\n";
    }
    return os.str();
}

} // namespace hhs
