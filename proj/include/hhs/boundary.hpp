#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hhs/autos.hpp"
#include "hhs/hhs_check.hpp"
#include "hhs/space.hpp"

namespace hhs {

// A point of the Gromov boundary of C U, given by the projections of the
// eventually periodic ray base·motif^k, or of an explicit chain of points.
struct BoundaryDirection {
    int domain = -1;
    Word base;
    Word motif;
    std::vector<Word> chain;

    bool periodic() const { return chain.empty(); }
    // The first count ray points (all chain points for a chain).
    std::vector<Word> points(const Raag& r, int count) const;
};

struct BoundaryTerm {
    int domain = -1;
    double coeff = 0.0;
    BoundaryDirection dir;
};

// Formal sum of directions over a pairwise orthogonal support.
struct BoundaryPoint {
    std::vector<BoundaryTerm> terms;

    std::vector<int> support() const;
    double coeff(int u) const;
    const BoundaryTerm* term(int u) const;
};

struct BoundaryOptions {
    int E = 4;
    double tol = 0.05;
    int ray_cap = 4096;  // longest ray prefix that is materialized
};

// Periodic direction; throws NotARay unless the projections leave every ball.
BoundaryDirection periodic_direction(RaagSpace& s, int domain, const Word& base, const Word& motif);

// Throws InvalidBoundaryPoint on a broken invariant.
void check_boundary_point(RaagSpace& s, const BoundaryPoint& p, double tol = 1e-6);
// support: [(key, coeff, motif)]
std::string serialize(RaagSpace& s, const BoundaryPoint& p);

// Hierarchy over the given domains whose windows are unions of canonical
// paths between the gates of consecutive points of each chain, starting at
// the gate of the identity.
Hierarchy chain_view(RaagSpace& s, std::vector<int> domains, const std::vector<std::vector<int>>& chains);

// Whether two directions name the same point of the boundary of C U.
bool same_direction(RaagSpace& s, const BoundaryDirection& a, const BoundaryDirection& b,
                    const BoundaryOptions& opt = {});

bool is_remote(RaagSpace& s, const BoundaryPoint& p, const std::vector<int>& support);

struct BoundaryProjection {
    std::map<int, std::vector<int>> walls;  // bounded coordinates, as wall ids
    std::set<int> unbounded;                // coordinates that are directions of q itself
    std::map<int, int> chosen;              // S -> T_S
};

// Throws NotRemote. prefer[S] overrides the choice of T_S when admissible.
BoundaryProjection boundary_projection(RaagSpace& s, const std::vector<int>& support, const BoundaryPoint& q,
                                       const BoundaryOptions& opt = {}, const std::map<int, int>& prefer = {});

// Neighbourhood of center: U_S is the set of points whose Gromov product
// with the direction of the center at S, based at the identity, is at least
// radius.
struct BasicNeighborhood {
    BoundaryPoint center;
    int radius = 4;
    double eps = 0.1;
};

enum class Membership { Remote, NonRemote, Interior, Outside };
std::string to_string(Membership m);

struct MembershipResult {
    Membership kind = Membership::Outside;
    std::string witness;  // the failing clause when Outside
    int skipped = 0;      // ratio terms with a zero denominator
};

MembershipResult in_neighborhood(RaagSpace& s, const BoundaryPoint& q, const BasicNeighborhood& n,
                                 const BoundaryOptions& opt = {});
MembershipResult in_neighborhood(RaagSpace& s, const Word& x, const BasicNeighborhood& n,
                                 const BoundaryOptions& opt = {});

struct SeparationResult {
    bool found = false;
    int radius = 0;
    double eps = 0.0;
    long long checked = 0;
    std::string witness;
};

// Searches radius and eps for basic neighbourhoods of p and q sharing no
// member of the test population.
SeparationResult disjoint_neighborhoods(RaagSpace& s, const BoundaryPoint& p, const BoundaryPoint& q,
                                        const std::vector<BoundaryPoint>& boundary_population,
                                        const std::vector<Word>& interior_population,
                                        const BoundaryOptions& opt = {});

// Sequence x_n from a template such as "a^n b^n", "a^{n^2} b^n" or "(ab)^n",
// evaluated at n = stride, 2 stride, ..., horizon stride.
std::vector<Word> sequence_from_template(const Raag& r, const std::string& tmpl, int horizon, int stride = 1);

struct LimitRow {
    std::string key;
    std::vector<int> dist;  // d_U(x0, x_n)
    bool unbounded = false;
};

struct LimitResult {
    enum class Kind { Boundary, Interior, Divergent };
    Kind kind = Kind::Divergent;
    BoundaryPoint point;
    Word vertex;
    int skipped = 0;
    std::vector<LimitRow> table;
};

// Throws Unstable when tail ratios oscillate beyond tolerance or the
// unbounded domains are not pairwise orthogonal.
LimitResult limit_of_sequence(RaagSpace& s, const std::vector<Word>& xs, const BoundaryOptions& opt = {});

struct FixedSetReport {
    bool irreducible = false;
    std::vector<BoundaryDirection> plus, minus;  // one pair per big domain
    std::vector<BoundaryDirection> fixed;        // enumerated coordinate directions fixed by g
    std::string join_factor;                     // the distorted factor C(g), always empty here
    int M = 1;
};

// Throws NotAxial.
FixedSetReport fixed_points(RaagSpace& s, const AutomorphismSpec& g, const ClassificationReport& c,
                            const BoundaryOptions& opt = {});

struct ProbeResult {
    int N = 0;
    bool timeout = false;
};

// Least N with g^N p in the neighbourhood of radius r of the attracting
// direction. Throws NotAxial, or FixedSouthPole when p is the repelling one.
ProbeResult north_south_probe(RaagSpace& s, const AutomorphismSpec& g, const BoundaryDirection& p, int radius,
                              int N_cap, const BoundaryOptions& opt = {});

struct GromovReport {
    std::vector<std::pair<Word, Word>> rays;  // (base, motif)
    bool singleton_support = true;
    bool injective = true;
    std::string witness;
};

// Throws NotSingleDomain unless the only domain is S.
GromovReport gromov_compare(RaagSpace& s, std::uint64_t seed, int count = 10, int horizon = 30,
                            const BoundaryOptions& opt = {});

// Whether every support domain is nested in u or orthogonal to it.
bool splits_over_product(RaagSpace& s, const BoundaryPoint& p, int u);

} // namespace hhs
