#include "hhs/text_format.hpp"

#include <fstream>
#include <sstream>

#include "hhs/errors.hpp"

namespace hhs {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

std::pair<std::string, std::string> split_pair(const std::string& tok, int line) {
    auto d = tok.find('-');
    if (d == std::string::npos || d == 0 || d + 1 == tok.size()) throw ParseError(line, "expected a-b pair, got '" + tok + "'");
    return {tok.substr(0, d), tok.substr(d + 1)};
}

int parse_int(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw ParseError(line, "bad integer '" + s + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        throw ParseError(line, "bad integer '" + s + "'");
    }
}

} // namespace

bool ModelSpec::operator==(const ModelSpec& o) const {
    if (kind != o.kind) return false;
    if (kind == Kind::Explicit) return explicit_desc == o.explicit_desc;
    return raag == o.raag && radius == o.radius && margin == o.margin;
}

ModelSpec parse_model(const std::string& text) {
    ModelSpec m;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool have_header = false, have_vertices = false, have_graph = false, have_radius = false;
    while (std::getline(in, raw)) {
        ++line;
        auto hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (!have_header) {
            if (s == "explicit") {
                m.kind = ModelSpec::Kind::Explicit;
            } else if (s == "raag") {
                m.kind = ModelSpec::Kind::Raag;
            } else {
                throw ParseError(line, "expected header 'explicit' or 'raag'");
            }
            have_header = true;
            continue;
        }
        auto colon = s.find(':');
        if (colon == std::string::npos) throw ParseError(line, "expected 'key: value'");
        std::string key = trim(s.substr(0, colon));
        std::string val = trim(s.substr(colon + 1));
        if (m.kind == ModelSpec::Kind::Explicit) {
            if (key == "vertices") {
                m.explicit_desc.vertices = tokens(val);
                if (m.explicit_desc.vertices.empty()) throw ParseError(line, "empty vertex list");
                have_vertices = true;
            } else if (key == "edges") {
                for (const auto& t : tokens(val)) m.explicit_desc.edges.push_back(split_pair(t, line));
            } else {
                throw ParseError(line, "unknown key '" + key + "' for explicit model");
            }
        } else {
            if (key == "graph") {
                auto bar = val.find('|');
                auto names = tokens(val.substr(0, bar));
                if (names.empty()) throw ParseError(line, "graph needs at least one generator");
                for (const auto& n : names)
                    if (n.size() != 1 || n[0] < 'a' || n[0] > 'z') throw ParseError(line, "generator names are single lowercase letters");
                std::vector<std::pair<int, int>> es;
                if (bar != std::string::npos) {
                    for (const auto& t : tokens(val.substr(bar + 1))) {
                        auto [a, b] = split_pair(t, line);
                        int u = -1, v = -1;
                        for (int i = 0; i < static_cast<int>(names.size()); ++i) {
                            if (names[i] == a) u = i;
                            if (names[i] == b) v = i;
                        }
                        if (u < 0 || v < 0 || u == v) throw ParseError(line, "bad commutation pair '" + t + "'");
                        es.emplace_back(u, v);
                    }
                }
                try {
                    m.raag = Raag(names, es);
                } catch (const Error& e) {
                    throw ParseError(line, e.what());
                }
                have_graph = true;
            } else if (key == "radius") {
                m.radius = parse_int(val, line);
                have_radius = true;
            } else if (key == "margin") {
                m.margin = parse_int(val, line);
            } else {
                throw ParseError(line, "unknown key '" + key + "' for raag model");
            }
        }
    }
    if (!have_header) throw ParseError(line + 1, "missing header");
    if (m.kind == ModelSpec::Kind::Explicit && !have_vertices) throw ParseError(line + 1, "missing 'vertices:'");
    if (m.kind == ModelSpec::Kind::Raag && (!have_graph || !have_radius))
        throw ParseError(line + 1, "raag model needs 'graph:' and 'radius:'");
    return m;
}

std::string serialize_model(const ModelSpec& m) {
    std::ostringstream out;
    if (m.kind == ModelSpec::Kind::Explicit) {
        out << "explicit\nvertices:";
        for (const auto& v : m.explicit_desc.vertices) out << ' ' << v;
        out << "\nedges:";
        for (const auto& [a, b] : m.explicit_desc.edges) out << ' ' << a << '-' << b;
        out << '\n';
    } else {
        out << "raag\ngraph:";
        for (const auto& n : m.raag.names()) out << ' ' << n;
        out << " |";
        for (auto [u, v] : m.raag.edges()) out << ' ' << m.raag.names()[u] << '-' << m.raag.names()[v];
        out << "\nradius: " << m.radius << "\nmargin: " << m.margin << '\n';
    }
    return out.str();
}

ModelSpec load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoError", "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

CubeComplex build_model(const ModelSpec& m) { return build_model(m, m.radius, m.margin); }

CubeComplex build_model(const ModelSpec& m, int radius, int margin) {
    if (m.kind == ModelSpec::Kind::Explicit) return CubeComplex::build_explicit(m.explicit_desc);
    return CubeComplex::build_raag_ball(m.raag, radius, margin);
}

} // namespace hhs
