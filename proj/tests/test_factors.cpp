#include <set>

#include "doctest.h"
#include "hhs/errors.hpp"
#include "hhs/factors.hpp"
#include "hhs/text_format.hpp"
#include "oracles.hpp"

using namespace hhs;

namespace {

CubeComplex model(const std::string& name) { return build_model(load_model(std::string(HHS_MODELS_DIR) + "/" + name + ".hhs")); }

std::vector<std::string> keys(const FactorSystem& fs) {
    std::vector<std::string> out;
    for (const auto& c : fs.classes) out.push_back(c.key);
    return out;
}

ConvexSubcomplex axis(const CubeComplex& x, int g, int n) {
    const Raag& r = x.periodic()->raag;
    std::vector<int> vs;
    for (int k = -n; k <= n; ++k) vs.push_back(x.vertex_of(k == 0 ? Word{} : r.letter(g, k)));
    return x.subcomplex(vs);
}

void check_relation_axioms(const FactorSystem& fs) {
    const int n = fs.num_classes();
    for (int i = 0; i < n; ++i) {
        CHECK(fs.rel[i][i] == Rel::Equal);
        if (i != fs.top) CHECK(fs.rel[i][fs.top] == Rel::Nested);
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            CHECK(fs.rel[i][j] != Rel::Equal);
            CHECK(fs.rel[j][i] == reverse(fs.rel[i][j]));
            if (fs.rel[i][j] == Rel::Nested) CHECK(fs.classes[i].level < fs.classes[j].level);
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                if (fs.rel[i][j] == Rel::Nested && fs.rel[j][k] == Rel::Nested) CHECK(fs.rel[i][k] == Rel::Nested);
                if (fs.rel[i][j] == Rel::Nested && fs.rel[j][k] == Rel::Orthogonal) CHECK(fs.rel[i][k] == Rel::Orthogonal);
            }
        }
    }
}

} // namespace

TEST_CASE("factor systems of the shipped complexes") {
    auto seg = model("path3");
    auto fs = generate_factor_system(seg);
    CHECK(fs.members.size() == 1);
    CHECK(fs.num_classes() == 1);
    CHECK(fs.complexity == 1);

    CHECK(generate_factor_system(model("tree7")).num_classes() == 1);
    CHECK(generate_factor_system(model("tripod")).num_classes() == 1);

    auto sq = generate_factor_system(model("square"));
    REQUIRE(sq.num_classes() == 3);
    CHECK(sq.rel[1][2] == Rel::Orthogonal);
    CHECK(sq.complexity == 2);

    auto g = model("grid3");
    auto gfs = generate_factor_system(g);
    REQUIRE(gfs.num_classes() == 3);
    CHECK(gfs.top == 0);
    CHECK(gfs.rel[1][2] == Rel::Orthogonal);
    CHECK(gfs.rel[1][0] == Rel::Nested);
    for (int c = 1; c < 3; ++c) {
        CHECK(gfs.rep(c).vertices.size() == 3);
        CHECK(gfs.rep(c).contains(g.find("00")));
    }
    // Three rows plus three columns plus the whole grid.
    CHECK(gfs.members.size() == 7);
    CHECK(gfs.delta_mult == 3);
}

TEST_CASE("periodic factor systems") {
    auto z2 = model("z2");
    auto fs = generate_factor_system(z2);
    CHECK(keys(fs) == std::vector<std::string>{"ab@1", "a@1", "b@1"});
    CHECK(fs.rel[1][2] == Rel::Orthogonal);
    CHECK(fs.rel[1][0] == Rel::Nested);
    CHECK(fs.rel[2][0] == Rel::Nested);
    CHECK(fs.complexity == 2);
    CHECK(fs.delta_mult == 3);

    auto f2 = generate_factor_system(model("f2"));
    CHECK(keys(f2) == std::vector<std::string>{"ab@1"});
    CHECK(f2.complexity == 1);

    auto p4 = model("p4");
    auto pfs = generate_factor_system(p4);
    CHECK(pfs.complexity == 3);
    check_relation_axioms(pfs);
    check_relation_axioms(fs);
    check_relation_axioms(generate_factor_system(model("grid3")));
    check_relation_axioms(generate_factor_system(model("square")));
}

TEST_CASE("raag family of P4") {
    Raag r({"a", "b", "c", "d"}, {{0, 1}, {1, 2}, {2, 3}});
    auto fam = raag_family(r);
    std::set<Mask> got(fam.begin(), fam.end());
    CHECK(got == std::set<Mask>{0b1111, 0b0010, 0b0100, 0b0101, 0b1010});
    auto lv = raag_family_levels(fam);
    for (std::size_t i = 0; i < fam.size(); ++i) {
        if (fam[i] == 0b1111) CHECK(lv[i] == 3);
        if (fam[i] == 0b0101) CHECK(lv[i] == 2);
        if (fam[i] == 0b0010) CHECK(lv[i] == 1);
    }
    Word e;
    CHECK(raag_relation(r, 0b0010, e, 0b0101, e) == Rel::Orthogonal);
    CHECK(raag_relation(r, 0b0010, e, 0b1010, e) == Rel::Nested);
    CHECK(raag_relation(r, 0b0010, e, 0b0010, r.parse("a")) == Rel::Equal);
    CHECK(raag_relation(r, 0b0010, e, 0b0010, r.parse("d")) == Rel::Transverse);
    CHECK(raag_relation(r, 0b0101, e, 0b1010, e) == Rel::Transverse);
}

TEST_CASE("periodic relations agree with the wall criterion") {
    for (const char* name : {"z2", "p4"}) {
        auto x = model(name);
        auto fs = generate_factor_system(x);
        const int n = fs.num_classes();
        const int radius = x.periodic()->realized_radius;
        // Orthogonal classes have members through a common vertex v spanning a
        // product; only edges near v are used so that every square fits in the ball.
        auto near_walls = [&](const ConvexSubcomplex& f, int v, int h) {
            Bits out(static_cast<std::size_t>(x.num_walls()));
            for (int p : f.vertices)
                if (x.dist(v, p) < h)
                    for (int q : x.neighbors(p))
                        if (f.contains(q)) out.set(static_cast<std::size_t>(x.wall_between(p, q)));
            return out;
        };
        std::vector<std::vector<char>> witnessed(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
        std::vector<std::vector<char>> seen = witnessed;
        for (int v : x.trusted_vertices()) {
            int h = (radius - x.depth(v)) / 2;
            if (h < 1) continue;
            for (int m1 : fs.members_at[v])
                for (int m2 : fs.members_at[v]) {
                    int i = fs.member_class[m1], j = fs.member_class[m2];
                    if (i == j) continue;
                    seen[i][j] = 1;
                    if (walls_all_cross(x, near_walls(fs.members[m1], v, h), near_walls(fs.members[m2], v, h)))
                        witnessed[i][j] = 1;
                }
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j || !seen[i][j]) continue;
                if (fs.rel[i][j] == Rel::Orthogonal) CHECK(witnessed[i][j]);
                if (fs.rel[i][j] == Rel::Transverse) CHECK(!witnessed[i][j]);
            }
    }
}

TEST_CASE("factor system closure and multiplicity") {
    for (const char* name : {"square", "grid3", "path3", "tripod", "tree7"}) {
        auto x = model(name);
        auto fs = generate_factor_system(x);
        std::set<std::vector<int>> present;
        for (const auto& m : fs.members) {
            CHECK(m.vertices.size() > 1);
            present.insert(m.vertices);
        }
        CHECK(present.count(x.whole().vertices) == 1);
        for (const auto& f : fs.members)
            for (const auto& f2 : fs.members) {
                std::vector<int> img;
                for (int y : f2.vertices) img.push_back(x.gate(f, y));
                auto g = x.subcomplex(img);
                int diam = 0;
                for (int a : g.vertices)
                    for (int b : g.vertices) diam = std::max(diam, x.dist(a, b));
                CHECK((diam <= fs.xi || present.count(g.vertices) == 1));
            }
        for (int v = 0; v < x.num_vertices(); ++v) CHECK(static_cast<int>(fs.members_at[v].size()) <= fs.delta_mult);
        auto again = generate_factor_system(x);
        CHECK(keys(again) == keys(fs));
        CHECK(again.members.size() == fs.members.size());
    }
    CHECK_THROWS_AS(generate_factor_system(model("square"), {1, 20000}), Error);
}

TEST_CASE("product regions") {
    auto z2 = model("z2");
    auto fs = generate_factor_system(z2);
    int v = fs.find_class("a@1");
    auto pr = product_region(z2, fs, v);
    CHECK(pr.f.contains(z2.vertex_of(Word{})));
    CHECK(pr.e.vertices.size() == pr.f.vertices.size());
    CHECK(pr.p.vertices.size() == static_cast<std::size_t>(z2.num_vertices()));
    CHECK((pr.f.crossing & pr.e.crossing).none());
    CHECK((pr.f.crossing | pr.e.crossing) == pr.p.crossing);
    CHECK_THROWS_AS(product_region(z2, fs, fs.top), Error);

    auto p4 = model("p4");
    auto pfs = generate_factor_system(p4);
    const Raag& r = p4.periodic()->raag;
    auto bpr = product_region(p4, pfs, pfs.find_class("b@1"));
    CHECK(bpr.e.contains(p4.vertex_of(r.parse("a"))));
    CHECK(bpr.e.contains(p4.vertex_of(r.parse("c"))));
    CHECK(!bpr.e.contains(p4.vertex_of(r.parse("b"))));
    CHECK(bpr.p.vertices.size() < static_cast<std::size_t>(p4.num_vertices()));
    CHECK(!bpr.p.contains(p4.vertex_of(r.parse("d"))));

    auto g = model("grid3");
    auto gfs = generate_factor_system(g);
    auto gpr = product_region(g, gfs, 1);
    CHECK(gpr.p.vertices.size() == 9);
    CHECK(gpr.e.vertices.size() == 3);
}

TEST_CASE("orthogonal containers") {
    auto z2 = model("z2");
    auto fs = generate_factor_system(z2);
    auto va = axis(z2, 1, 3);
    auto ha = axis(z2, 0, 3);
    auto [pa, pb] = orthogonal_container(z2, fs, va, ha);
    CHECK(fs.member_class[pa] == fs.find_class("b@1"));
    CHECK(fs.member_class[pb] == fs.find_class("a@1"));
    CHECK(std::includes(fs.members[pa].vertices.begin(), fs.members[pa].vertices.end(), va.vertices.begin(),
                        va.vertices.end()));
    CHECK_THROWS_AS(orthogonal_container(z2, fs, va, va), Error);

    auto p4 = model("p4");
    auto pfs = generate_factor_system(p4);
    // a and c do not commute in P4, so their axes span no product.
    CHECK_THROWS_AS(orthogonal_container(p4, pfs, axis(p4, 0, 1), axis(p4, 2, 1)), Error);
    auto [qa, qb] = orthogonal_container(p4, pfs, axis(p4, 1, 1), axis(p4, 0, 1));
    CHECK(pfs.rel[pfs.member_class[qa]][pfs.member_class[qb]] == Rel::Orthogonal);
    CHECK(pfs.members[qa].contains(p4.vertex_of(p4.periodic()->raag.parse("b"))));
}
