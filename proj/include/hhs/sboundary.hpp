#pragma once

#include <string>
#include <vector>

#include "hhs/boundary.hpp"
#include "hhs/space.hpp"

namespace hhs {

// The combinatorial ray base·motif^∞.
struct PeriodicRay {
    Word base;
    Word motif;
};

struct UBSCheck {
    bool infinite = true;
    bool separation_closed = true;
    bool no_facing_triple = true;
    bool unidirectional = true;
    int prefixes = 0;
    std::string witness;
    bool ok() const { return infinite && separation_closed && no_facing_triple && unidirectional; }
};

// Walls crossed by the ray, over a trusted prefix of reps motif periods.
struct UBS {
    PeriodicRay ray;
    int reps = 0;
    std::vector<int> walls;     // in crossing order
    std::vector<int> position;  // motif position of each wall, -1 inside the base
    UBSCheck axioms;
    int wall_at(int rep, int pos) const;
};

// Throws NotGeodesic when a wall is crossed twice, and AssertionFailed when
// an axiom fails on a prefix.
UBS ray_ubs(RaagSpace& s, const PeriodicRay& ray, int reps = 8);
// The four clauses, checked on every prefix.
UBSCheck check_ubs_axioms(RaagSpace& s, const UBS& u);

struct MinimalFamily {
    std::vector<int> positions;  // motif positions
    Word motif;                  // the motif letters at those positions, in order
    Mask generators = 0;
};

struct UBSDecomposition {
    UBS source;
    std::vector<MinimalFamily> minimals;
    std::vector<std::vector<bool>> dominates;  // dominates[j][i]: U_j dominates U_i
    int dimension() const { return static_cast<int>(minimals.size()) - 1; }
};

UBSDecomposition decompose(RaagSpace& s, const UBS& u);
// The UBS of one minimal family, as the ray base·(family motif)^∞.
UBS family_ubs(RaagSpace& s, const UBSDecomposition& d, int i);
// Whether the two UBSes have finite symmetric difference, judged on motifs.
bool boundary_equivalent(RaagSpace& s, const UBS& a, const UBS& b);

// Throws NotOrthogonalizable when the minimal domains are not pairwise orthogonal.
BoundaryPoint correspondence_b(RaagSpace& s, const UBSDecomposition& d, const std::vector<double>& coefficients);

struct FaceVisibility {
    std::vector<int> face;  // indices of minimals
    bool visible = false;
    Word motif;             // a realizing ray from the same base
};

// Every nonempty face, searched by interleaving family motifs with
// multiplicities up to cap.
std::vector<FaceVisibility> visibility_report(RaagSpace& s, const UBSDecomposition& d, int cap = 3);

struct DiscsReport {
    std::string domain;
    int walls = 0;
    long long pairs = 0;
    double max_distortion = 1.0;  // max of d_Y/d_F and d_F/d_Y over wall pairs
};

// Compares the factored contact graph of F ∩ Y with that of F, where Y is
// the interval spanned by the first L letters of the ray and F the least
// domain containing it; the graph of F is built over the ball of radius
// L + margin.
DiscsReport discs_distortion(RaagSpace& s, const PeriodicRay& ray, int L, int margin = 2);

std::string format_decomposition(RaagSpace& s, const UBSDecomposition& d);

} // namespace hhs
