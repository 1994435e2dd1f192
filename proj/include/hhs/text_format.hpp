#pragma once

#include <string>

#include "hhs/cube_complex.hpp"
#include "hhs/raag.hpp"

namespace hhs {

// Parsed model file. Grammar (one directive per line, '#' starts a comment):
//
//   explicit
//   vertices: <name> <name> ...
//   edges: <name>-<name> <name>-<name> ...
//
//   raag
//   graph: <gen> <gen> ... | <gen>-<gen> ...
//   radius: <int>
//   margin: <int>
struct ModelSpec {
    enum class Kind { Explicit, Raag };
    Kind kind = Kind::Explicit;
    ExplicitDescription explicit_desc;
    Raag raag;
    int radius = 0;
    int margin = 2;

    bool operator==(const ModelSpec& o) const;
};

ModelSpec parse_model(const std::string& text);
std::string serialize_model(const ModelSpec& m);
ModelSpec load_model(const std::string& path);
CubeComplex build_model(const ModelSpec& m);
CubeComplex build_model(const ModelSpec& m, int radius, int margin);

} // namespace hhs
