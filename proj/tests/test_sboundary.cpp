#include <set>

#include "doctest.h"
#include "hhs/sboundary.hpp"
#include "hhs/text_format.hpp"

using namespace hhs;

namespace {

Raag model_raag(const std::string& name) {
    return load_model(std::string(HHS_MODELS_DIR) + "/" + name + ".hhs").raag;
}

PeriodicRay ray(const Raag& r, const std::string& base, const std::string& motif) {
    return PeriodicRay{r.parse(base), r.parse(motif)};
}

std::set<std::string> keys(RaagSpace& s, const BoundaryPoint& p) {
    std::set<std::string> out;
    for (const auto& t : p.terms) out.insert(s.domain(t.domain).key);
    return out;
}

} // namespace

TEST_CASE("ray UBS axioms") {
    Raag f = model_raag("f2");
    RaagSpace s(f);
    auto u = ray_ubs(s, ray(f, "1", "ab"), 6);
    CHECK(u.walls.size() == 12);
    CHECK(u.axioms.ok());
    CHECK(u.axioms.prefixes == 12);
    CHECK_THROWS_AS(ray_ubs(s, ray(f, "a", "A"), 6), Error);
    CHECK_THROWS_AS(ray_ubs(s, ray(f, "1", "aA"), 6), Error);

    // A turning path violates unidirectionality.
    UBS bad = u;
    std::swap(bad.walls[0], bad.walls[3]);
    CHECK_FALSE(check_ubs_axioms(s, bad).ok());
}

TEST_CASE("decompositions") {
    Raag f = model_raag("f2");
    RaagSpace sf(f);
    auto df = decompose(sf, ray_ubs(sf, ray(f, "1", "ab")));
    CHECK(df.dimension() == 0);

    Raag z = model_raag("z2");
    RaagSpace sz(z);
    CHECK(decompose(sz, ray_ubs(sz, ray(z, "1", "a"))).dimension() == 0);
    auto dz = decompose(sz, ray_ubs(sz, ray(z, "b", "ab")));
    REQUIRE(dz.dimension() == 1);
    CHECK(dz.dominates[0][1]);
    CHECK(dz.dominates[1][0]);
    for (const auto& v : visibility_report(sz, dz)) CHECK(v.visible);
    CHECK(format_decomposition(sz, dz).find("dimension: 1") != std::string::npos);

    Raag p = model_raag("p4");
    RaagSpace sp(p);
    auto dp = decompose(sp, ray_ubs(sp, ray(p, "1", "ab")));
    REQUIRE(dp.dimension() == 1);
    auto bp = correspondence_b(sp, dp, {0.5, 0.5});
    CHECK(keys(sp, bp) == std::set<std::string>{"ac@1", "b@1"});
    // a and c do not commute, so (ac)^∞ is a single minimal family.
    CHECK(decompose(sp, ray_ubs(sp, ray(p, "1", "ac"))).dimension() == 0);
}

TEST_CASE("decomposition is idempotent") {
    Raag z = model_raag("z2");
    RaagSpace s(z);
    for (const char* m : {"ab", "aB", "aab", "abb"}) {
        auto d = decompose(s, ray_ubs(s, ray(z, "1", m)));
        for (int i = 0; i <= d.dimension(); ++i) {
            auto again = decompose(s, family_ubs(s, d, i));
            REQUIRE(again.minimals.size() == 1);
            CHECK(again.minimals[0].generators == d.minimals[i].generators);
            CHECK(boundary_equivalent(s, family_ubs(s, again, 0), family_ubs(s, d, i)));
        }
    }
}

TEST_CASE("correspondence agrees with limits and fixed points") {
    Raag z = model_raag("z2");
    RaagSpace sz(z);
    auto d = decompose(sz, ray_ubs(sz, ray(z, "1", "ab")));
    auto bp = correspondence_b(sz, d, {0.5, 0.5});
    auto lim = limit_of_sequence(sz, sequence_from_template(z, "(ab)^n", 40));
    REQUIRE(lim.kind == LimitResult::Kind::Boundary);
    CHECK(keys(sz, bp) == keys(sz, lim.point));
    for (const auto& t : bp.terms) {
        REQUIRE(lim.point.term(t.domain) != nullptr);
        CHECK(lim.point.coeff(t.domain) == doctest::Approx(t.coeff).epsilon(0.05));
        CHECK(same_direction(sz, t.dir, lim.point.term(t.domain)->dir));
    }

    Raag f = model_raag("f2");
    RaagSpace sf(f);
    auto g = AutomorphismSpec::group_word(f, f.parse("ab"));
    auto fp = fixed_points(sf, g, classify(sf, g, sf.point(Word{}), 15));
    REQUIRE(fp.plus.size() == 1);
    auto df = decompose(sf, ray_ubs(sf, ray(f, "1", "ab")));
    auto pf = correspondence_b(sf, df, {1.0});
    REQUIRE(pf.terms.size() == 1);
    CHECK(same_direction(sf, pf.terms[0].dir, fp.plus[0]));
    CHECK_THROWS_AS(correspondence_b(sf, df, {0.5, 0.5}), Error);
}

TEST_CASE("correspondence is injective on simplices") {
    Raag z = model_raag("z2");
    RaagSpace s(z);
    std::vector<UBSDecomposition> reps;
    const std::vector<std::string> motifs{"a", "A", "b", "B", "ab", "aB", "Ab", "AB", "ba", "aa", "bB"};
    for (const auto& m : motifs) {
        UBS u;
        try {
            u = ray_ubs(s, ray(z, "1", m));
        } catch (const Error& e) {
            CHECK(e.kind() == "NotGeodesic");
            continue;
        }
        bool fresh = true;
        for (const auto& d : reps)
            if (boundary_equivalent(s, d.source, u)) fresh = false;
        if (fresh) reps.push_back(decompose(s, u));
    }
    REQUIRE(reps.size() == 8);
    std::vector<BoundaryPoint> images;
    for (const auto& d : reps) {
        std::vector<double> c(d.minimals.size(), 1.0 / static_cast<double>(d.minimals.size()));
        images.push_back(correspondence_b(s, d, c));
    }
    for (std::size_t i = 0; i < images.size(); ++i)
        for (std::size_t j = i + 1; j < images.size(); ++j) {
            bool same = keys(s, images[i]) == keys(s, images[j]);
            for (const auto& t : images[i].terms)
                if (same) same = same_direction(s, t.dir, images[j].term(t.domain)->dir);
            CHECK_FALSE(same);
        }
}

TEST_CASE("discs distortion") {
    for (auto [model, motif, L] : {std::tuple{"f2", "ab", 6}, std::tuple{"z2", "ab", 6}, std::tuple{"p4", "ab", 5},
                                   std::tuple{"p4", "ac", 5}}) {
        Raag r = model_raag(model);
        RaagSpace s(r);
        auto rep = discs_distortion(s, ray(r, "1", motif), L);
        INFO(model << " " << motif << " on " << rep.domain);
        CHECK(rep.walls == L);
        CHECK(rep.pairs > 0);
        CHECK(rep.max_distortion <= 3.0);
    }
}
