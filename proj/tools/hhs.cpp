#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hhs/autos.hpp"
#include "hhs/boundary.hpp"
#include "hhs/contact.hpp"
#include "hhs/factors.hpp"
#include "hhs/hhs_check.hpp"
#include "hhs/sboundary.hpp"
#include "hhs/text_format.hpp"

using namespace hhs;

namespace {

struct RunConfig {
    std::string input;
    std::string subcommand;
    std::string mode;  // limit | nbhd
    std::uint64_t seed = 1;
    int radius = -1;
    int margin = -1;
    int horizon = 20;
    int word_cap = 4;
    int threshold = 3;
    double tol = 0.05;
    std::string out = "-";
    std::string word;
    std::string gens;
    std::string tmpl;
    std::string center;
    std::string point;
    std::string ray;
    std::string coeffs;
    double eps = 0.1;
    int stride = 1;
    int reps = 8;
};

// Appends the producing operation to every nonempty line.
std::string cite(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (!line.empty()) out += line + "  [" + source + "]\n";
    return out;
}

struct Loaded {
    ModelSpec spec;
    CubeComplex x;
    FactorSystem fs;
    std::unique_ptr<ComplexSpace> space;
};

std::unique_ptr<Loaded> load(const RunConfig& c, bool with_factors) {
    auto m = std::make_unique<Loaded>();
    m->spec = load_model(c.input);
    const int radius = c.radius > 0 ? c.radius : m->spec.radius;
    const int margin = c.margin >= 0 ? c.margin : m->spec.margin;
    m->x = build_model(m->spec, radius, margin);
    if (with_factors) {
        m->fs = generate_factor_system(m->x);
        m->space = std::make_unique<ComplexSpace>(m->x, m->fs);
    }
    return m;
}

Raag load_raag(const RunConfig& c) {
    ModelSpec spec = load_model(c.input);
    if (spec.kind != ModelSpec::Kind::Raag) fail("InvalidInput", c.subcommand + " needs a RAAG model");
    return spec.raag;
}

std::vector<Word> parse_gens(const Raag& r, const std::string& text) {
    std::vector<Word> out;
    if (text.empty()) {
        for (int v = 0; v < r.rank(); ++v) out.push_back(r.letter(v, 1));
        return out;
    }
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(r.parse(item));
    return out;
}

PeriodicRay parse_ray(const Raag& r, const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return PeriodicRay{Word{}, r.parse(text)};
    return PeriodicRay{r.parse(text.substr(0, slash)), r.parse(text.substr(slash + 1))};
}

int domain_by_key(RaagSpace& s, const std::string& key) {
    auto at = key.find('@');
    if (at == std::string::npos) fail("InvalidInput", "domain key " + key + " lacks @");
    Word base = s.raag().parse(key.substr(at + 1));
    for (Mask lam : s.family()) {
        int u = s.domain_of(lam, base);
        if (s.domain(u).key == key) return u;
    }
    fail("InvalidInput", "no domain " + key);
}

// key:coeff:[base/]motif, comma separated.
BoundaryPoint parse_point(RaagSpace& s, const std::string& text) {
    BoundaryPoint p;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto c1 = item.find(':'), c2 = item.rfind(':');
        if (c1 == std::string::npos || c1 == c2) fail("InvalidInput", "bad boundary term " + item);
        BoundaryTerm t;
        t.domain = domain_by_key(s, item.substr(0, c1));
        t.coeff = std::stod(item.substr(c1 + 1, c2 - c1 - 1));
        auto ray = parse_ray(s.raag(), item.substr(c2 + 1));
        t.dir = periodic_direction(s, t.domain, ray.base, ray.motif);
        p.terms.push_back(std::move(t));
    }
    check_boundary_point(s, p);
    return p;
}

int cmd_build(const RunConfig& c, std::ostream& os) {
    auto m = load(c, false);
    os << "vertices: " << m->x.num_vertices() << "\n"
       << "edges: " << m->x.num_edges() << "\n"
       << "walls: " << m->x.num_walls() << "\n"
       << "trusted_radius: " << m->x.trusted_radius() << "\n";
    os << "model:\n" << serialize_model(m->spec);
    return 0;
}

int cmd_contact(const RunConfig& c, std::ostream& os) {
    auto m = load(c, true);
    ContactGraph g = contact_graph(m->x);
    os << cite("contact_graph: vertices " + std::to_string(g.size()) + " edges " + std::to_string(g.num_edges()),
               "contact.contact_graph");
    for (int u = 0; u < m->fs.num_classes(); ++u) {
        ContactGraph f = factored_contact_graph(*m->space, u, m->space->window(u));
        auto d = delta_probe(f, c.seed, 20000);
        std::ostringstream line;
        line << "factored " << m->fs.classes[u].key << ": vertices " << f.size() << " edges " << f.num_edges()
             << " cones " << f.num_cones() << " diameter " << f.diameter() << " delta " << d.delta;
        os << cite(line.str(), "contact.factored_contact_graph, contact.delta_probe");
    }
    return 0;
}

int cmd_factors(const RunConfig& c, std::ostream& os) {
    auto m = load(c, true);
    const auto& fs = m->fs;
    os << cite("classes: " + std::to_string(fs.num_classes()) + "\nxi: " + std::to_string(fs.xi) +
                   "\ncomplexity: " + std::to_string(fs.complexity),
               "factors.generate_factor_system");
    for (const auto& k : fs.classes)
        os << "class " << k.key << " level " << k.level << (k.id == fs.top ? " top" : "") << "\n";
    for (int u = 0; u < fs.num_classes(); ++u)
        for (int v = u + 1; v < fs.num_classes(); ++v)
            os << fs.classes[u].key << " " << to_string(fs.rel[u][v]) << " " << fs.classes[v].key << "\n";
    return 0;
}

int cmd_check_axioms(const RunConfig& c, std::ostream& os) {
    auto m = load(c, true);
    Hierarchy h = build_structure(*m->space);
    CheckOptions opt;
    opt.seed = c.seed;
    auto rep = verify_axioms(h, opt);
    os << "domains: " << h.num_domains() << "\npoints: " << h.points().size() << "\n";
    os << cite(format_report(rep), "hhs_check.verify_axioms");
    auto oc = orthogonal_close(h);
    os << cite("orthogonal_close: " + std::to_string(oc.max_value), "hhs_check.orthogonal_close");
    return rep.violations.empty() ? 0 : 1;
}

int cmd_distance_formula(const RunConfig& c, std::ostream& os) {
    auto m = load(c, true);
    Hierarchy h = build_structure(*m->space);
    auto pairs = all_pairs(h);
    if (pairs.size() > 150000) pairs = sample_pairs(h, c.seed, 150000);
    auto fit = distance_formula_fit(h, c.threshold, pairs);
    std::ostringstream r;
    r << "s: " << fit.s << "\nK_df: " << fit.K_df << "\nC_df: " << fit.C_df << "\npairs_tested: " << fit.pairs_tested;
    os << cite(r.str(), "hhs_check.distance_formula_fit");
    return 0;
}

std::string type_line(const ClassificationReport& rep) {
    if (rep.type != AutoType::Axial) return to_string(rep.type);
    std::string s = "Axial ";
    s += rep.irreducible ? "irreducible" : "reducible";
    if (rep.rank_one) s += " rank-one";
    return s;
}

int cmd_classify(const RunConfig& c, std::ostream& os) {
    Raag r = load_raag(c);
    RaagSpace s(r);
    auto g = AutomorphismSpec::group_word(r, r.parse(c.word.empty() ? "1" : c.word));
    auto rep = classify(s, g, s.point(Word{}), c.horizon);
    os << type_line(rep) << "\n";
    std::string big;
    for (const auto& k : rep.big_keys()) big += (big.empty() ? "" : " ") + k;
    os << "big: " << big << "\n";
    if (rep.type == AutoType::Axial)
        os << cite("M: " + std::to_string(big_invariants(s, g, rep).M), "autos.big_invariants");
    os << format_growth(rep.big);
    return rep.type == AutoType::Unresolved ? 1 : 0;
}

int cmd_omnibus(const RunConfig& c, std::ostream& os) {
    Raag r = load_raag(c);
    RaagSpace s(r);
    auto gens = parse_gens(r, c.gens);
    const int o = s.point(Word{});
    const int N = c.radius > 0 ? c.radius : 6;
    std::string active;
    for (int u : active_domains(s, gens, o, N)) active += (active.empty() ? "" : " ") + s.domain(u).key;
    os << cite("active: " + active, "autos.active_domains");
    auto res = omnibus_search(s, gens, o, N, c.word_cap, c.horizon);
    os << "element: " << r.str(res.g) << "\n" << type_line(res.report) << "\n";
    std::string big;
    for (const auto& k : res.report.big_keys()) big += (big.empty() ? "" : " ") + k;
    os << "big: " << big << "\n";
    return 0;
}

int cmd_rank_rigidity(const RunConfig& c, std::ostream& os) {
    Raag r = load_raag(c);
    RankRigidityOptions opt;
    opt.horizon = c.horizon;
    opt.L = c.word_cap;
    auto rep = rank_rigidity_report(r, parse_gens(r, c.gens), opt);
    os << "verdict: " << to_string(rep.verdict) << "\n"
       << "domain: " << rep.domain << "\n"
       << "element: " << r.str(rep.element) << "\n"
       << "essential: " << (rep.essential ? "yes" : "no") << "\n"
       << "s_bounded: " << (rep.s_bounded ? "yes" : "no") << "\n";
    for (auto [radius, d] : rep.s_diameter)
        os << cite("diam C S at radius " + std::to_string(radius) + ": " + std::to_string(d),
                   "autos.rank_rigidity_report");
    os << rep.evidence;
    return rep.cross_check ? 0 : 1;
}

int cmd_boundary(const RunConfig& c, std::ostream& os) {
    Raag r = load_raag(c);
    RaagSpace s(r);
    BoundaryOptions opt;
    opt.tol = c.tol;
    if (c.mode == "limit") {
        auto xs = sequence_from_template(r, c.tmpl, c.horizon, c.stride);
        auto lim = limit_of_sequence(s, xs, opt);
        const char* kind = lim.kind == LimitResult::Kind::Boundary   ? "boundary"
                           : lim.kind == LimitResult::Kind::Interior ? "interior"
                                                                     : "divergent";
        os << "limit: " << kind << "\n";
        if (lim.kind == LimitResult::Kind::Boundary) os << cite(serialize(s, lim.point), "boundary.limit_of_sequence");
        if (lim.kind == LimitResult::Kind::Interior) os << "vertex: " << r.str(lim.vertex) << "\n";
        os << "skipped: " << lim.skipped << "\n";
        for (const auto& row : lim.table)
            os << row.key << " " << (row.unbounded ? "unbounded" : "bounded") << " final "
               << (row.dist.empty() ? 0 : row.dist.back()) << "\n";
        return 0;
    }
    BasicNeighborhood n{parse_point(s, c.center), c.radius > 0 ? c.radius : 4, c.eps};
    MembershipResult m;
    if (c.point.find(':') != std::string::npos)
        m = in_neighborhood(s, parse_point(s, c.point), n, opt);
    else
        m = in_neighborhood(s, r.parse(c.point), n, opt);
    os << "membership: " << to_string(m.kind) << "\n";
    if (!m.witness.empty()) os << "witness: " << m.witness << "\n";
    os << "skipped: " << m.skipped << "\n";
    return 0;
}

int cmd_ubs(const RunConfig& c, std::ostream& os) {
    Raag r = load_raag(c);
    RaagSpace s(r);
    auto u = ray_ubs(s, parse_ray(r, c.ray), c.reps);
    os << "walls: " << u.walls.size() << "\n"
       << cite("prefixes_checked: " + std::to_string(u.axioms.prefixes), "sboundary.check_ubs_axioms");
    auto d = decompose(s, u);
    os << cite(format_decomposition(s, d), "sboundary.decompose");
    for (const auto& v : visibility_report(s, d)) {
        os << "face";
        for (int i : v.face) os << " " << i;
        os << ": " << (v.visible ? "visible via " + r.str(v.motif) : "not visible") << "\n";
    }
    return 0;
}

int cmd_correspondence(const RunConfig& c, std::ostream& os) {
    Raag r = load_raag(c);
    RaagSpace s(r);
    auto d = decompose(s, ray_ubs(s, parse_ray(r, c.ray), c.reps));
    std::vector<double> coeffs;
    if (c.coeffs.empty()) {
        coeffs.assign(d.minimals.size(), 1.0 / static_cast<double>(d.minimals.size()));
    } else {
        std::stringstream in(c.coeffs);
        std::string item;
        while (std::getline(in, item, ',')) coeffs.push_back(std::stod(item));
    }
    auto p = correspondence_b(s, d, coeffs);
    os << "dimension: " << d.dimension() << "\n" << cite(serialize(s, p), "sboundary.correspondence_b");
    return 0;
}

int dispatch(const RunConfig& c, std::ostream& os) {
    if (c.subcommand == "build") return cmd_build(c, os);
    if (c.subcommand == "contact") return cmd_contact(c, os);
    if (c.subcommand == "factors") return cmd_factors(c, os);
    if (c.subcommand == "check-axioms") return cmd_check_axioms(c, os);
    if (c.subcommand == "distance-formula") return cmd_distance_formula(c, os);
    if (c.subcommand == "classify") return cmd_classify(c, os);
    if (c.subcommand == "omnibus") return cmd_omnibus(c, os);
    if (c.subcommand == "rank-rigidity") return cmd_rank_rigidity(c, os);
    if (c.subcommand == "boundary") return cmd_boundary(c, os);
    if (c.subcommand == "ubs") return cmd_ubs(c, os);
    if (c.subcommand == "correspondence") return cmd_correspondence(c, os);
    fail("InvalidInput", "unknown subcommand " + c.subcommand);
}

bool input_error(const std::string& kind) {
    return kind == "ParseError" || kind == "InvalidInput" || kind == "IoError";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchically hyperbolic structures on cube complexes"};
    app.require_subcommand(1);
    RunConfig c;

    auto common = [&](CLI::App* sub) {
        sub->add_option("input", c.input, "model file")->required();
        sub->add_option("--seed", c.seed, "random seed");
        sub->add_option("--radius", c.radius, "ball radius")->check(CLI::Range(1, 1 << 20));
        sub->add_option("--margin", c.margin, "untrusted margin")->check(CLI::NonNegativeNumber);
        sub->add_option("--horizon", c.horizon, "orbit or sequence horizon")->check(CLI::Range(1, 1 << 20));
        sub->add_option("--word-cap", c.word_cap, "longest enumerated word")->check(CLI::Range(1, 1 << 20));
        sub->add_option("--threshold", c.threshold, "distance formula threshold")->check(CLI::Range(1, 1 << 20));
        sub->add_option("--tol", c.tol, "ratio tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--out", c.out, "report path, - for stdout");
        sub->callback([&c, sub] { c.subcommand = sub->get_name(); });
        return sub;
    };

    common(app.add_subcommand("build", "realize the complex"));
    common(app.add_subcommand("contact", "contact and factored contact graphs"));
    common(app.add_subcommand("factors", "factor system classes and relations"));
    common(app.add_subcommand("check-axioms", "verify the hierarchy axioms and extract constants"));
    common(app.add_subcommand("distance-formula", "fit the distance formula"));
    auto* cl = common(app.add_subcommand("classify", "classify a group element"));
    cl->add_option("--word", c.word, "group element");
    auto* om = common(app.add_subcommand("omnibus", "search for an omnibus element"));
    om->add_option("--gens", c.gens, "comma separated generators");
    auto* rr = common(app.add_subcommand("rank-rigidity", "rank rigidity dichotomy"));
    rr->add_option("--gens", c.gens, "comma separated generators");
    auto* bd = app.add_subcommand("boundary", "boundary limits and neighbourhoods");
    bd->add_option("mode", c.mode, "limit or nbhd")->required()->check(CLI::IsMember({"limit", "nbhd"}));
    common(bd);
    bd->add_option("--template", c.tmpl, "sequence template such as \"a^n b^n\"");
    bd->add_option("--stride", c.stride, "reindexing stride")->check(CLI::Range(1, 1 << 20));
    bd->add_option("--center", c.center, "key:coeff:motif terms, comma separated");
    bd->add_option("--point", c.point, "a group element or a boundary point");
    bd->add_option("--eps", c.eps, "ratio slack")->check(CLI::PositiveNumber);
    auto* ub = common(app.add_subcommand("ubs", "UBS of a periodic ray and its decomposition"));
    ub->add_option("--ray", c.ray, "base/motif")->required();
    ub->add_option("--reps", c.reps, "motif periods")->check(CLI::Range(2, 64));
    auto* co = common(app.add_subcommand("correspondence", "boundary point of a ray simplex"));
    co->add_option("--ray", c.ray, "base/motif")->required();
    co->add_option("--coeffs", c.coeffs, "comma separated coefficients");
    co->add_option("--reps", c.reps, "motif periods")->check(CLI::Range(2, 64));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::ostringstream report;
    int status = 0;
    try {
        status = dispatch(c, report);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return input_error(e.kind()) ? 2 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "InvalidInput: " << e.what() << "\n";
        return 2;
    }
    if (c.out == "-") {
        std::cout << report.str();
    } else {
        std::ofstream f(c.out);
        if (!f) {
            std::cerr << "IoError: cannot write " << c.out << "\n";
            return 2;
        }
        f << report.str();
    }
    return status;
}
