#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hhs/cube_complex.hpp"
#include "hhs/raag.hpp"

namespace hhs {

// Relation of the first domain to the second. Nested means the first is
// properly nested in the second; ReverseNested the converse.
enum class Rel { Equal, Nested, ReverseNested, Orthogonal, Transverse };

std::string to_string(Rel r);
Rel reverse(Rel r);

struct DomainClass {
    int id = 0;
    std::string key;        // stable printable name
    int rep = -1;           // member index of the representative
    int level = 1;          // longest nesting chain ending here; minimal domains have level 1
    Mask label = 0;         // generator set of the coset for periodic models
    Word base;              // least vertex of the class, periodic models only
    Bits walls;             // crossing walls shared by every member
};

struct FactorSystem {
    int xi = 2;
    int delta_mult = 0;
    bool algebraic = false;
    std::vector<ConvexSubcomplex> members;
    std::vector<int> member_class;
    std::vector<DomainClass> classes;
    std::vector<std::vector<Rel>> rel;
    std::vector<std::vector<int>> members_at;  // vertex -> member ids
    int top = 0;                               // the ambient class S
    int complexity = 0;

    int num_classes() const { return static_cast<int>(classes.size()); }
    const ConvexSubcomplex& rep(int c) const { return members[classes[c].rep]; }
    int find_class(const std::string& key) const;
};

struct FactorOptions {
    int xi = 2;
    int member_cap = 20000;
};

// Periodic (RAAG) balls use the coset description of the factor system;
// explicit complexes use combinatorial hyperplanes plus projection closure.
FactorSystem generate_factor_system(const CubeComplex& x, FactorOptions opt = {});

Rel relation(const FactorSystem& fs, int u, int v);

// Every wall of a crosses every wall of b.
bool walls_all_cross(const CubeComplex& x, const Bits& a, const Bits& b);

struct ProductRegion {
    ConvexSubcomplex f, e, p;
};
ProductRegion product_region(const CubeComplex& x, const FactorSystem& fs, int u);

// Members P_A ⊇ A and P_B ⊇ B that are orthogonal, built by intersecting
// gate-projections of combinatorial hyperplanes as in the product lemma.
std::pair<int, int> orthogonal_container(const CubeComplex& x, const FactorSystem& fs, const ConvexSubcomplex& a,
                                         const ConvexSubcomplex& b);

// Family of generator sets carrying domains: the intersection closure of
// the whole graph and all nonempty vertex links.
std::vector<Mask> raag_family(const Raag& r);
// Longest chain in the family ending at each member, indexed like the family.
std::vector<int> raag_family_levels(const std::vector<Mask>& family);
// Relation between the classes of g A_l1 and h A_l2.
Rel raag_relation(const Raag& r, Mask l1, const Word& g, Mask l2, const Word& h);
// Printable class key: generator letters, '@', least class element.
std::string raag_class_key(const Raag& r, Mask l, const Word& m);

} // namespace hhs
