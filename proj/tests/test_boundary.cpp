#include <random>

#include "doctest.h"
#include "hhs/boundary.hpp"
#include "hhs/text_format.hpp"

using namespace hhs;

namespace {

Raag model_raag(const std::string& name) {
    return load_model(std::string(HHS_MODELS_DIR) + "/" + name + ".hhs").raag;
}

int dom(RaagSpace& s, const std::string& key) {
    for (Mask lam : s.family()) {
        int u = s.domain_of(lam, Word{});
        if (s.domain(u).key == key) return u;
    }
    FAIL("no domain " << key);
    return -1;
}

BoundaryTerm term(RaagSpace& s, const std::string& key, double coeff, const std::string& motif,
                  const std::string& base = "1") {
    int u = dom(s, key);
    return BoundaryTerm{u, coeff, periodic_direction(s, u, s.raag().parse(base), s.raag().parse(motif))};
}

double coeff_of(RaagSpace& s, const LimitResult& l, const std::string& key) {
    for (const auto& t : l.point.terms)
        if (s.domain(t.domain).key == key) return t.coeff;
    return 0.0;
}

} // namespace

TEST_CASE("boundary point invariants") {
    Raag r = model_raag("z2");
    RaagSpace s(r);
    BoundaryPoint p{{term(s, "a@1", 0.5, "a"), term(s, "b@1", 0.5, "b")}};
    CHECK_NOTHROW(check_boundary_point(s, p));
    CHECK(serialize(s, p) == "support: [(a@1, 0.5, a), (b@1, 0.5, b)]");

    BoundaryPoint heavy{{term(s, "a@1", 0.7, "a"), term(s, "b@1", 0.5, "b")}};
    CHECK_THROWS_AS(check_boundary_point(s, heavy), Error);
    BoundaryPoint twice{{term(s, "a@1", 0.5, "a"), term(s, "a@1", 0.5, "A")}};
    CHECK_THROWS_AS(check_boundary_point(s, twice), Error);
    // The diagonal does not leave every ball of the S graph.
    CHECK_THROWS_AS(periodic_direction(s, s.top(), {}, r.parse("ab")), Error);
    // Nor does b in the horizontal class.
    CHECK_THROWS_AS(periodic_direction(s, dom(s, "a@1"), {}, r.parse("b")), Error);
}

TEST_CASE("directions") {
    Raag r = model_raag("z2");
    RaagSpace s(r);
    auto plus = term(s, "a@1", 1, "a").dir;
    CHECK(same_direction(s, plus, term(s, "a@1", 1, "a", "a^5b^3").dir));
    CHECK(same_direction(s, plus, term(s, "a@1", 1, "ab").dir));
    CHECK_FALSE(same_direction(s, plus, term(s, "a@1", 1, "A").dir));
    CHECK_FALSE(same_direction(s, plus, term(s, "b@1", 1, "b").dir));

    Raag f = model_raag("f2");
    RaagSpace sf(f);
    int top = sf.top();
    auto d = [&](const char* base, const char* motif) { return periodic_direction(sf, top, f.parse(base), f.parse(motif)); };
    CHECK(same_direction(sf, d("1", "ab"), d("ab", "ab")));
    CHECK_FALSE(same_direction(sf, d("1", "ab"), d("1", "ba")));
    // Two rays diverging at the root.
    CHECK_FALSE(same_direction(sf, d("1", "a"), d("1", "b")));
}

TEST_CASE("remoteness") {
    Raag r = model_raag("z2");
    RaagSpace s(r);
    BoundaryPoint pv{{term(s, "b@1", 1, "b")}};
    CHECK_FALSE(is_remote(s, pv, {dom(s, "b@1")}));
    CHECK_FALSE(is_remote(s, pv, {dom(s, "a@1")}));

    Raag p4 = model_raag("p4");
    RaagSpace sp(p4);
    BoundaryPoint q{{term(sp, "bd@1", 1, "bd")}};
    CHECK(is_remote(sp, q, {dom(sp, "ac@1")}));
    CHECK_FALSE(is_remote(sp, q, {dom(sp, "bd@1")}));
    CHECK_FALSE(is_remote(sp, q, {dom(sp, "c@1")}));
}

TEST_CASE("boundary projections") {
    Raag r = model_raag("p4");
    RaagSpace s(r);
    const int ac = dom(s, "ac@1"), bd = dom(s, "bd@1");
    REQUIRE(s.relation(ac, bd) == Rel::Transverse);
    BoundaryPoint q{{term(s, "bd@1", 1, "bd")}};
    auto pr = boundary_projection(s, {ac}, q);
    REQUIRE(pr.walls.count(ac));
    CHECK(pr.chosen.at(ac) == bd);
    // The coordinate is rho^{bd}_{ac}: the walls of F_ac at the gate of F_bd.
    int o = s.point(Word{});
    Hierarchy h = chain_view(s, {ac, bd}, {{o}});
    std::vector<int> rho;
    for (int n : h.rho(h.find("bd@1"), h.find("ac@1"))) rho.push_back(h.graph(h.find("ac@1")).node(n).id);
    std::sort(rho.begin(), rho.end());
    CHECK(pr.walls.at(ac) == rho);
    CHECK_THROWS_AS(boundary_projection(s, {bd}, q), Error);

    // Both b@1 and c@1 sit below the top; either choice gives nearby images.
    BoundaryPoint bc{{term(s, "b@1", 0.5, "b"), term(s, "c@1", 0.5, "c")}};
    const int top = s.top(), b = dom(s, "b@1"), c = dom(s, "c@1");
    auto viaB = boundary_projection(s, {top}, bc, {}, {{top, b}});
    auto viaC = boundary_projection(s, {top}, bc, {}, {{top, c}});
    CHECK(viaB.chosen.at(top) == b);
    CHECK(viaC.chosen.at(top) == c);
    std::vector<int> rb, rc;
    for (const auto& w : bc.terms[0].dir.points(r, 80)) rb.push_back(s.point(w));
    for (const auto& w : bc.terms[1].dir.points(r, 80)) rc.push_back(s.point(w));
    Hierarchy ht = chain_view(s, {top, b, c}, {rb, rc});
    std::vector<int> nb, nc;
    for (int w : viaB.walls.at(top)) nb.push_back(ht.graph(ht.top()).wall_node(w));
    for (int w : viaC.walls.at(top)) nc.push_back(ht.graph(ht.top()).wall_node(w));
    REQUIRE(std::find(nb.begin(), nb.end(), -1) == nb.end());
    REQUIRE(std::find(nc.begin(), nc.end(), -1) == nc.end());
    CHECK(ht.diam_union(ht.top(), nb, nc) <= 2 * 4);
}

TEST_CASE("bounded geodesic image walk") {
    Raag r = model_raag("p4");
    RaagSpace s(r);
    // q lives on the top; c@1 is nested in it, so the ray is walked until the image settles.
    BoundaryPoint q{{term(s, "abcd@1", 1, "ad")}};
    const int c = dom(s, "c@1");
    REQUIRE(is_remote(s, q, {c}));
    auto pr = boundary_projection(s, {c}, q);
    REQUIRE(pr.walls.count(c));
    CHECK_FALSE(pr.walls.at(c).empty());
}

TEST_CASE("sequence templates") {
    Raag r = model_raag("z2");
    auto xs = sequence_from_template(r, "a^{n^2} b^n", 4);
    REQUIRE(xs.size() == 4);
    CHECK(xs[2] == r.parse("a^9b^3"));
    CHECK(sequence_from_template(r, "(ab)^n", 3, 2)[1] == r.parse("a^4b^4"));
    CHECK(sequence_from_template(r, "a^n B^2", 1)[0] == r.parse("aBB"));
    CHECK_THROWS_AS(sequence_from_template(r, "a^", 2), Error);
    CHECK_THROWS_AS(sequence_from_template(r, "a^{n", 2), Error);
}

TEST_CASE("limits in the plane") {
    Raag r = model_raag("z2");
    RaagSpace s(r);
    auto diag = limit_of_sequence(s, sequence_from_template(r, "a^n b^n", 200));
    REQUIRE(diag.kind == LimitResult::Kind::Boundary);
    CHECK(coeff_of(s, diag, "a@1") == doctest::Approx(0.5).epsilon(0.05));
    CHECK(coeff_of(s, diag, "b@1") == doctest::Approx(0.5).epsilon(0.05));

    auto axis = limit_of_sequence(s, sequence_from_template(r, "a^n", 200));
    REQUIRE(axis.point.terms.size() == 1);
    CHECK(coeff_of(s, axis, "a@1") == doctest::Approx(1.0));

    auto para = limit_of_sequence(s, sequence_from_template(r, "a^{n^2} b^n", 200));
    REQUIRE(para.point.terms.size() == 1);
    CHECK(coeff_of(s, para, "a@1") == doctest::Approx(1.0));

    // Reindexing n -> 2n.
    auto diag2 = limit_of_sequence(s, sequence_from_template(r, "a^n b^n", 100, 2));
    CHECK(coeff_of(s, diag2, "a@1") == doctest::Approx(coeff_of(s, diag, "a@1")).epsilon(0.05));
    auto para2 = limit_of_sequence(s, sequence_from_template(r, "a^{n^2} b^n", 100, 2));
    CHECK(para2.point.support() == para.point.support());
    for (const auto& t : diag.point.terms)
        CHECK(same_direction(s, t.dir, diag2.point.term(t.domain)->dir));

    auto still = limit_of_sequence(s, std::vector<Word>(9, r.parse("ab")));
    CHECK(still.kind == LimitResult::Kind::Interior);
    std::vector<Word> hop;
    for (int k = 0; k < 30; ++k) hop.push_back(r.parse(k % 2 ? "a" : "B"));
    CHECK(limit_of_sequence(s, hop).kind == LimitResult::Kind::Divergent);
    std::vector<Word> swing;
    for (int k = 1; k <= 60; ++k) swing.push_back(r.parse(k % 2 ? "a^" + std::to_string(k) : "a^" + std::to_string(k) + "b^" + std::to_string(k)));
    CHECK_THROWS_AS(limit_of_sequence(s, swing), Error);
}

TEST_CASE("neighbourhood membership") {
    Raag r = model_raag("z2");
    RaagSpace s(r);
    BoundaryPoint p{{term(s, "a@1", 0.5, "a"), term(s, "b@1", 0.5, "b")}};
    BasicNeighborhood n{p, 4, 0.1};
    CHECK(in_neighborhood(s, p, n).kind == Membership::NonRemote);
    CHECK(in_neighborhood(s, r.parse("a^50b^50"), n).kind == Membership::Interior);
    auto far = in_neighborhood(s, r.parse("a^2500b^50"), n);
    CHECK(far.kind == Membership::Outside);
    CHECK(far.witness.find("ratio") != std::string::npos);

    BoundaryPoint tilted{{term(s, "a@1", 0.7, "a"), term(s, "b@1", 0.3, "b")}};
    CHECK(in_neighborhood(s, tilted, n).kind == Membership::Outside);
    BoundaryPoint flipped{{term(s, "a@1", 0.5, "A"), term(s, "b@1", 0.5, "b")}};
    CHECK(in_neighborhood(s, flipped, n).kind == Membership::Outside);
    CHECK_THROWS_AS(in_neighborhood(s, p, BasicNeighborhood{p, 4, 0.0}), Error);

    // A point supported on the horizontal class alone has no orthogonal mass to spare.
    BoundaryPoint h{{term(s, "a@1", 1, "a")}};
    BasicNeighborhood nh{h, 4, 0.1};
    CHECK(in_neighborhood(s, r.parse("a^40b^2"), nh).kind == Membership::Interior);
    CHECK(in_neighborhood(s, r.parse("a^40b^20"), nh).kind == Membership::Outside);
    CHECK(splits_over_product(s, p, dom(s, "a@1")));
}

TEST_CASE("remote membership") {
    Raag r = model_raag("p4");
    RaagSpace s(r);
    BoundaryPoint p{{term(s, "ac@1", 1, "ac")}};
    BoundaryPoint q{{term(s, "bd@1", 1, "bd")}};
    auto m = in_neighborhood(s, q, BasicNeighborhood{p, 2, 0.1});
    // rho^{bd}_{ac} sits at the base, so it never enters a cone of positive radius.
    CHECK(m.kind == Membership::Outside);
    CHECK(m.witness.rfind("remote", 0) == 0);
}

TEST_CASE("separating neighbourhoods in the plane") {
    Raag r = model_raag("z2");
    RaagSpace s(r);
    std::mt19937_64 rng(7);
    auto random_point = [&] {
        const char* h[] = {"a", "A"};
        const char* v[] = {"b", "B"};
        int kind = static_cast<int>(rng() % 3);
        if (kind == 0) return BoundaryPoint{{term(s, "a@1", 1, h[rng() % 2])}};
        if (kind == 1) return BoundaryPoint{{term(s, "b@1", 1, v[rng() % 2])}};
        double c = static_cast<double>(1 + rng() % 9) / 10.0;
        return BoundaryPoint{{term(s, "a@1", c, h[rng() % 2]), term(s, "b@1", 1 - c, v[rng() % 2])}};
    };
    std::vector<BoundaryPoint> population;
    for (int k = 0; k < 24; ++k) population.push_back(random_point());
    std::vector<Word> interior;
    for (int i = -6; i <= 6; i += 3)
        for (int j = -6; j <= 6; j += 3) interior.push_back(r.mul(r.letter(0, i == 0 ? 1 : i), r.letter(1, j == 0 ? 1 : j)));
    int pairs = 0;
    while (pairs < 20) {
        auto p = random_point(), q = random_point();
        if (serialize(s, p) == serialize(s, q)) continue;
        ++pairs;
        auto res = disjoint_neighborhoods(s, p, q, population, interior);
        CHECK_MESSAGE(res.found, serialize(s, p) << " vs " << serialize(s, q) << ": " << res.witness);
    }
}

TEST_CASE("fixed points of axial elements") {
    Raag f = model_raag("f2");
    RaagSpace sf(f);
    int o = sf.point(Word{});
    auto g = AutomorphismSpec::group_word(f, f.parse("ab"));
    auto c = classify(sf, g, o, 15);
    auto fp = fixed_points(sf, g, c);
    CHECK(fp.irreducible);
    REQUIRE(fp.plus.size() == 1);
    CHECK_FALSE(same_direction(sf, fp.plus[0], fp.minus[0]));
    CHECK(fp.fixed.size() == 2);
    CHECK(fp.join_factor.empty());

    auto gi = AutomorphismSpec::group_word(f, f.parse("BA"));
    auto fi = fixed_points(sf, gi, classify(sf, gi, o, 15));
    CHECK(same_direction(sf, fi.plus[0], fp.minus[0]));
    CHECK(same_direction(sf, fi.minus[0], fp.plus[0]));

    Raag z = model_raag("z2");
    RaagSpace sz(z);
    auto a = AutomorphismSpec::group_word(z, z.parse("a"));
    auto fz = fixed_points(sz, a, classify(sz, a, sz.point(Word{}), 20));
    CHECK_FALSE(fz.irreducible);
    REQUIRE(fz.plus.size() == 1);
    CHECK(sz.domain(fz.plus[0].domain).key == "a@1");
    // Both vertical ends are fixed along with the two horizontal ones.
    CHECK(fz.fixed.size() == 4);

    auto id = AutomorphismSpec::group_word(z, Word{});
    CHECK_THROWS_AS(fixed_points(sz, id, classify(sz, id, sz.point(Word{}), 20)), Error);
}

TEST_CASE("north-south dynamics") {
    Raag f = model_raag("f2");
    RaagSpace s(f);
    auto g = AutomorphismSpec::group_word(f, f.parse("ab"));
    int top = s.top();
    auto plus = periodic_direction(s, top, {}, f.parse("ab"));
    auto minus = periodic_direction(s, top, {}, f.parse("BA"));
    CHECK(north_south_probe(s, g, plus, 10, 30).N == 0);
    CHECK_THROWS_AS(north_south_probe(s, g, minus, 10, 30), Error);
    auto back = north_south_probe(s, g, periodic_direction(s, top, {}, f.parse("A")), 10, 30);
    CHECK_FALSE(back.timeout);
    CHECK(back.N <= 30);
    CHECK(back.N > 0);
}

TEST_CASE("trees") {
    Raag f = model_raag("f2");
    RaagSpace s(f);
    auto rep = gromov_compare(s, 3);
    CHECK(rep.rays.size() == 10);
    CHECK(rep.singleton_support);
    CHECK(rep.injective);
    Raag z = model_raag("z2");
    RaagSpace sz(z);
    CHECK_THROWS_AS(gromov_compare(sz, 3), Error);
}
