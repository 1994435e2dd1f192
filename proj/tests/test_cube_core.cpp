#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "hhs/cube_complex.hpp"
#include "hhs/errors.hpp"
#include "hhs/text_format.hpp"
#include "oracles.hpp"

using namespace hhs;

namespace {

CubeComplex model(const std::string& name) { return build_model(load_model(std::string(HHS_MODELS_DIR) + "/" + name + ".hhs")); }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream b;
    b << in.rdbuf();
    return b.str();
}

int z2_vertex(const CubeComplex& x, int i, int j) {
    const Raag& r = x.periodic()->raag;
    return x.vertex_of(r.mul(r.letter(0, i), r.letter(1, j)));
}

void check_gates_against_brute_force(const CubeComplex& x, const std::vector<ConvexSubcomplex>& fs) {
    auto tv = x.trusted_vertices();
    for (int v : tv) {
        auto d = x.bfs_distances(v);
        for (const auto& f : fs) {
            int want = oracle::closest(x, d, f);
            REQUIRE(want >= 0);
            REQUIRE(x.gate(f, v) == want);
        }
    }
}

} // namespace

TEST_CASE("explicit builds: walls from square closure") {
    auto sq = model("square");
    CHECK(sq.num_walls() == 2);
    for (int w = 0; w < 2; ++w) CHECK(sq.wall_edges(w).size() == 2);
    CHECK(sq.walls_cross(0, 1));

    auto p = model("path3");
    CHECK(p.num_walls() == 3);
    for (int w = 0; w < 3; ++w) CHECK(p.wall_edges(w).size() == 1);

    auto g = model("grid3");
    CHECK(g.num_walls() == 4);
    int vertical = 0, horizontal = 0;
    for (int w = 0; w < 4; ++w) {
        auto [u, v] = g.edges()[g.wall_edges(w)[0]];
        bool same_row = g.label(u)[1] == g.label(v)[1];
        (same_row ? vertical : horizontal)++;
        CHECK(g.wall_edges(w).size() == 3);
    }
    CHECK(vertical == 2);
    CHECK(horizontal == 2);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            auto [u1, v1] = g.edges()[g.wall_edges(a)[0]];
            auto [u2, v2] = g.edges()[g.wall_edges(b)[0]];
            bool va = g.label(u1)[1] == g.label(v1)[1];
            bool vb = g.label(u2)[1] == g.label(v2)[1];
            CHECK(g.walls_cross(a, b) == (va != vb));
        }
    CHECK(g.trusted_radius() == 4);
}

TEST_CASE("explicit build errors") {
    ExplicitDescription k23{{"u1", "u2", "w1", "w2", "w3"},
                            {{"u1", "w1"}, {"u1", "w2"}, {"u1", "w3"}, {"u2", "w1"}, {"u2", "w2"}, {"u2", "w3"}}};
    try {
        CubeComplex::build_explicit(k23);
        FAIL("expected NotMedian");
    } catch (const Error& e) {
        CHECK(e.kind() == "NotMedian");
    }
    ExplicitDescription tri{{"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}};
    CHECK_THROWS_AS(CubeComplex::build_explicit(tri), Error);
    ExplicitDescription split{{"a", "b", "c"}, {{"a", "b"}}};
    try {
        CubeComplex::build_explicit(split);
        FAIL("expected Disconnected");
    } catch (const Error& e) {
        CHECK(e.kind() == "Disconnected");
    }
    try {
        CubeComplex::build_raag_ball(Raag({"a"}, {}), 2, 2);
        FAIL("expected RadiusTooSmall");
    } catch (const Error& e) {
        CHECK(e.kind() == "RadiusTooSmall");
    }
}

TEST_CASE("raag balls") {
    Raag z2({"a", "b"}, {{0, 1}});
    auto x = CubeComplex::build_raag_ball(z2, 6, 2);
    std::set<std::pair<int, int>> diamond;
    for (int i = -6; i <= 6; ++i)
        for (int j = -6; j <= 6; ++j)
            if (std::abs(i) + std::abs(j) <= 4) diamond.emplace(i, j);
    std::set<std::pair<int, int>> got;
    for (int v : x.trusted_vertices()) {
        int i = 0, j = 0;
        for (const auto& s : x.word(v)) (s.g == 0 ? i : j) += s.e;
        got.emplace(i, j);
    }
    CHECK(got == diamond);
    CHECK(x.num_vertices() == 1 + 4 * (1 + 2 + 3 + 4 + 5 + 6));

    Raag f2({"a", "b"}, {});
    auto t = CubeComplex::build_raag_ball(f2, 5, 2);
    CHECK(t.num_vertices() == 1 + 4 * (1 + 3 + 9 + 27 + 81));
    for (int w = 0; w < t.num_walls(); ++w) CHECK(t.wall_edges(w).size() == 1);
    for (int v : t.trusted_vertices()) CHECK(t.neighbors(v).size() == 4);

    Raag p4({"a", "b", "c", "d"}, {{0, 1}, {1, 2}, {2, 3}});
    auto p = CubeComplex::build_raag_ball(p4, 4, 2);
    std::set<oracle::Letters> forms;
    for (const auto& w : oracle::all_words(4, p4.all(), 4)) forms.insert(oracle::swap_closure_min(p4, w));
    CHECK(p.num_vertices() == static_cast<int>(forms.size()));
    CHECK(p.num_vertices() == 1401);
}

TEST_CASE("graph distance equals separating wall count") {
    for (auto* name : {"square", "grid3", "tree7", "z2", "p4"}) {
        auto x = model(name);
        for (int v : x.trusted_vertices()) {
            auto d = x.bfs_distances(v);
            for (int u = 0; u < x.num_vertices(); ++u) REQUIRE(d[u] == x.dist(u, v));
        }
    }
}

TEST_CASE("medians agree with interval intersection") {
    for (auto* name : {"square", "tripod", "grid3", "tree7"}) {
        auto x = model(name);
        std::vector<std::vector<int>> d;
        for (int v = 0; v < x.num_vertices(); ++v) d.push_back(x.bfs_distances(v));
        for (int a = 0; a < x.num_vertices(); ++a)
            for (int b = 0; b < x.num_vertices(); ++b)
                for (int c = 0; c < x.num_vertices(); ++c) {
                    int m = -1;
                    REQUIRE(oracle::median_count(d, a, b, c, &m) == 1);
                    REQUIRE(x.median(a, b, c) == m);
                }
    }
}

TEST_CASE("gate examples") {
    auto z = model("z2");
    std::vector<int> axis;
    for (int i = -5; i <= 5; ++i) axis.push_back(z2_vertex(z, i, 0));
    auto f = z.subcomplex(axis);
    CHECK(z.gate(f, z2_vertex(z, 3, 2)) == z2_vertex(z, 3, 0));
    CHECK(z.gate(f, z2_vertex(z, -2, 0)) == z2_vertex(z, -2, 0));

    auto t = model("f2");
    const Raag& r = t.periodic()->raag;
    auto seg = t.subcomplex({t.vertex_of(Word{}), t.vertex_of(r.parse("a")), t.vertex_of(r.parse("ab"))});
    CHECK(t.gate(seg, t.vertex_of(r.parse("Ba"))) == t.vertex_of(Word{}));
    CHECK_THROWS_AS(t.gate(ConvexSubcomplex{}, 0), Error);
}

TEST_CASE("gates agree with brute-force nearest points") {
    for (auto* name : {"square", "path3", "tripod", "grid3", "tree7", "z2", "p4"}) {
        auto x = model(name);
        std::vector<ConvexSubcomplex> fs;
        for (int w = 0; w < x.num_walls(); w += 1 + x.num_walls() / 40) {
            fs.push_back(x.hyperplane_side(w, false));
            fs.push_back(x.hyperplane_side(w, true));
            fs.push_back(x.carrier(w));
        }
        auto tv = x.trusted_vertices();
        std::mt19937_64 rng(7);
        for (int k = 0; k < 10; ++k) {
            int a = tv[rng() % tv.size()], b = tv[rng() % tv.size()];
            try {
                fs.push_back(x.convex_hull({a, b}));
            } catch (const Error&) {
            }
        }
        check_gates_against_brute_force(x, fs);
    }
}

TEST_CASE("convex hulls") {
    auto z = model("z2");
    auto h = z.convex_hull({z2_vertex(z, 0, 0), z2_vertex(z, 2, 3)});
    std::vector<int> rect;
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 3; ++j) rect.push_back(z2_vertex(z, i, j));
    std::sort(rect.begin(), rect.end());
    CHECK(h.vertices == rect);
    CHECK(z.median_closure({z2_vertex(z, 0, 0), z2_vertex(z, 2, 3)}).vertices == rect);
    CHECK(z.convex_hull({z2_vertex(z, 1, 1)}).vertices == std::vector<int>{z2_vertex(z, 1, 1)});
    CHECK(z.convex_hull(h.vertices) == h);

    auto t = model("tree7");
    auto path = t.convex_hull({t.find("xa"), t.find("yb")});
    std::vector<int> want{t.find("xa"), t.find("x"), t.find("r"), t.find("y"), t.find("yb")};
    std::sort(want.begin(), want.end());
    CHECK(path.vertices == want);

    auto g = model("grid3");
    std::mt19937_64 rng(3);
    for (int k = 0; k < 30; ++k) {
        std::vector<int> s{static_cast<int>(rng() % 9), static_cast<int>(rng() % 9)};
        auto a = g.convex_hull(s);
        CHECK(a == g.median_closure(s));
        s.push_back(static_cast<int>(rng() % 9));
        auto b = g.convex_hull(s);
        for (int v : a.vertices) CHECK(b.contains(v));
    }
}

TEST_CASE("parallelism") {
    auto z = model("z2");
    std::vector<int> l0, l1, vert;
    for (int i = -2; i <= 2; ++i) {
        l0.push_back(z2_vertex(z, i, 0));
        l1.push_back(z2_vertex(z, i, 1));
        vert.push_back(z2_vertex(z, 0, i));
    }
    auto a = z.subcomplex(l0), b = z.subcomplex(l1), c = z.subcomplex(vert);
    CHECK(CubeComplex::parallel(a, a));
    CHECK(CubeComplex::parallel(a, b));
    CHECK_FALSE(CubeComplex::parallel(a, c));
}

TEST_CASE("periodic stability on the old trusted ball") {
    Raag p4({"a", "b", "c", "d"}, {{0, 1}, {1, 2}, {2, 3}});
    auto small = CubeComplex::build_raag_ball(p4, 4, 2);
    auto big = CubeComplex::build_raag_ball(p4, 6, 2);
    auto tv = small.trusted_vertices();
    auto lift = [&](int v) { return big.vertex_of(small.word(v)); };
    for (int u : tv)
        for (int v : tv) {
            REQUIRE(small.dist(u, v) == big.dist(lift(u), lift(v)));
            int m = small.median(u, v, tv[(u + v) % tv.size()]);
            REQUIRE(m >= 0);
            REQUIRE(lift(m) == big.median(lift(u), lift(v), lift(tv[(u + v) % tv.size()])));
        }
}

TEST_CASE("model files round-trip") {
    for (auto* name : {"square", "path3", "tripod", "grid3", "tree7", "z2", "f2", "p4"}) {
        std::string text = slurp(std::string(HHS_MODELS_DIR) + "/" + name + ".hhs");
        auto m = parse_model(text);
        CHECK(serialize_model(m) == text);
        CHECK(parse_model(serialize_model(m)) == m);
    }
}

TEST_CASE("parse errors carry line numbers") {
    try {
        parse_model("raag\ngraph: a b | a-b\nradius: x\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    try {
        parse_model("# comment\nnonsense\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_model("explicit\nedges: a-b\n"), ParseError);
    CHECK_THROWS_AS(parse_model("explicit\nvertices: a b\nedges: ab\n"), ParseError);
}
