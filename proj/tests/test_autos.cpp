#include <cmath>

#include "doctest.h"
#include "hhs/autos.hpp"
#include "hhs/text_format.hpp"

using namespace hhs;

namespace {

Raag model_raag(const std::string& name) {
    return load_model(std::string(HHS_MODELS_DIR) + "/" + name + ".hhs").raag;
}

AutomorphismSpec word(const Raag& r, const std::string& w) { return AutomorphismSpec::group_word(r, r.parse(w)); }

} // namespace

TEST_CASE("growth fitting") {
    std::vector<int> flat(21, 3), line(21), root(21);
    for (int n = 0; n <= 20; ++n) {
        line[n] = 2 * n + 1;
        root[n] = static_cast<int>(std::sqrt(40.0 * n));
    }
    CHECK(fit_growth(flat) == Growth::Bounded);
    double slope = 0;
    CHECK(fit_growth(line, &slope) == Growth::Linear);
    CHECK(slope == doctest::Approx(1.0));
    CHECK(fit_growth(root) == Growth::SublinearSuspect);
}

TEST_CASE("translations of the plane") {
    Raag r = model_raag("z2");
    RaagSpace s(r);
    int o = s.point(Word{});

    auto id = classify(s, AutomorphismSpec::group_word(r, Word{}), o, 20);
    CHECK(id.type == AutoType::Elliptic);
    CHECK(id.big.big.empty());

    auto a = classify(s, word(r, "a"), o, 20);
    CHECK(a.type == AutoType::Axial);
    REQUIRE(a.big_keys() == std::vector<std::string>{"a@1"});
    CHECK(a.big.rows[a.big.big[0]].slope == doctest::Approx(1.0).epsilon(0.05));
    CHECK_FALSE(a.irreducible);
    CHECK_FALSE(a.rank_one);
    CHECK(a.M_power == 1);

    auto diag = classify(s, word(r, "ab"), o, 20);
    CHECK(diag.big_keys() == std::vector<std::string>{"a@1", "b@1"});
    CHECK(big_invariants(s, word(r, "ab"), diag).M == 1);

    // Translation by ab followed by the swap a <-> b exchanges the two line classes.
    auto swap = AutomorphismSpec::group_word(r, r.parse("ab"), {1, 0});
    auto sw = classify(s, swap, o, 20);
    CHECK(sw.big_keys() == std::vector<std::string>{"a@1", "b@1"});
    CHECK(big_invariants(s, swap, sw).M == 2);
    CHECK_THROWS_AS(big_invariants(s, swap, sw, 1), Error);
}

TEST_CASE("free group axis") {
    Raag r = model_raag("f2");
    RaagSpace s(r);
    int o = s.point(Word{});
    auto c = classify(s, word(r, "ab"), o, 15);
    CHECK(c.type == AutoType::Axial);
    CHECK(c.irreducible);
    CHECK(c.rank_one);
    CHECK(c.big_keys() == std::vector<std::string>{s.domain(s.top()).key});
}

TEST_CASE("finite permutations are elliptic") {
    auto spec = load_model(std::string(HHS_MODELS_DIR) + "/square.hhs");
    CubeComplex x = build_model(spec);
    FactorSystem fs = generate_factor_system(x);
    ComplexSpace s(x, fs);
    std::vector<int> rot(4);
    // 00 -> 10 -> 11 -> 01 -> 00
    rot[x.find("00")] = x.find("10");
    rot[x.find("10")] = x.find("11");
    rot[x.find("11")] = x.find("01");
    rot[x.find("01")] = x.find("00");
    auto c = classify(s, AutomorphismSpec::permutation(rot), x.find("00"), 12);
    CHECK(c.type == AutoType::Elliptic);
    std::vector<int> bad{0, 0, 1, 2};
    CHECK_THROWS_AS(AutomorphismSpec::permutation(bad), Error);
}

TEST_CASE("inverses and powers share the big set") {
    for (const char* name : {"z2", "f2", "p4"}) {
        Raag r = model_raag(name);
        RaagSpace s(r);
        int o = s.point(Word{});
        for (const auto& w : enumerate_words(r, {r.parse("a"), r.parse("b")}, 2)) {
            auto g = classify(s, AutomorphismSpec::group_word(r, w), o, 20);
            auto gi = classify(s, AutomorphismSpec::group_word(r, r.inv(w)), o, 20);
            CHECK(g.type == gi.type);
            CHECK(g.big_keys() == gi.big_keys());
            auto g2 = classify(s, AutomorphismSpec::group_word(r, r.mul(w, w)), o, 20);
            CHECK(g.big_keys() == g2.big_keys());
        }
    }
}

TEST_CASE("no short word is suspect") {
    for (const char* name : {"z2", "f2", "p4"}) {
        Raag r = model_raag(name);
        RaagSpace s(r);
        int o = s.point(Word{});
        std::vector<Word> gens;
        for (int v = 0; v < r.rank(); ++v) gens.push_back(r.letter(v, 1));
        for (const auto& w : enumerate_words(r, gens, 3)) {
            auto c = classify(s, AutomorphismSpec::group_word(r, w), o, 20);
            CHECK_MESSAGE(c.type != AutoType::Unresolved, r.str(w));
            for (int i : c.big.big) {
                const auto& row = c.big.rows[i];
                if (row.growth == Growth::Linear) CHECK(row.slope >= 1.0 / static_cast<double>(Raag::length(w)) - 1e-9);
            }
        }
    }
}

TEST_CASE("word enumeration") {
    Raag r = model_raag("f2");
    auto ws = enumerate_words(r, {r.parse("a"), r.parse("b")}, 2);
    CHECK(ws.size() == 4 + 12);
    CHECK(r.str(ws.front()) == "a");
    Raag z = model_raag("z2");
    // ab and ba coincide in the plane.
    CHECK(enumerate_words(z, {z.parse("a"), z.parse("b")}, 2).size() == 4 + 8);
}

TEST_CASE("active domains") {
    Raag z = model_raag("z2");
    RaagSpace sz(z);
    int o = sz.point(Word{});
    auto az = active_domains(sz, {z.parse("a")}, o, 6);
    REQUIRE(az.size() == 1);
    CHECK(sz.domain(az[0]).key == "a@1");
    auto om = omnibus_search(sz, {z.parse("a")}, o, 6, 2);
    CHECK(z.str(om.g) == "a");

    Raag f = model_raag("f2");
    RaagSpace sf(f);
    auto af = active_domains(sf, {f.parse("a"), f.parse("b")}, sf.point(Word{}), 5);
    REQUIRE(af.size() == 1);
    CHECK(af[0] == sf.top());

    Raag p = model_raag("p4");
    RaagSpace sp(p);
    auto ap = active_domains(sp, {p.parse("a"), p.parse("c")}, sp.point(Word{}), 5);
    for (std::size_t i = 0; i < ap.size(); ++i)
        for (std::size_t j = i + 1; j < ap.size(); ++j) CHECK(sp.relation(ap[i], ap[j]) == Rel::Orthogonal);
}

TEST_CASE("rank rigidity") {
    auto z = rank_rigidity_report(model_raag("z2"), {model_raag("z2").parse("a"), model_raag("z2").parse("b")});
    CHECK(z.verdict == RankRigidityReport::Verdict::ProductWithUnboundedFactors);
    CHECK(z.s_bounded);
    CHECK(z.cross_check);
    for (auto [radius, d] : z.s_diameter) CHECK(d <= 4);

    Raag f = model_raag("f2");
    auto rf = rank_rigidity_report(f, {f.parse("a"), f.parse("b")});
    CHECK(rf.verdict == RankRigidityReport::Verdict::RankOneElement);
    CHECK(rf.cross_check);

    Raag p = model_raag("p4");
    std::vector<Word> gens;
    for (int v = 0; v < p.rank(); ++v) gens.push_back(p.letter(v, 1));
    auto rp = rank_rigidity_report(p, gens);
    CHECK(rp.verdict == RankRigidityReport::Verdict::RankOneElement);
    CHECK(Raag::length(rp.element) <= 4);
}
