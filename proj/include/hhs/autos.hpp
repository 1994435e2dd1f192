#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hhs/hhs_check.hpp"
#include "hhs/space.hpp"

namespace hhs {

// An isometry: a vertex permutation of a finite complex, or x -> sigma(t x)
// on a RAAG model, where t is a group word and sigma an optional generator
// permutation that is a graph automorphism.
struct AutomorphismSpec {
    enum class Kind { FinitePermutation, GroupWord };
    Kind kind = Kind::GroupWord;
    std::vector<int> perm;
    Word word;
    std::vector<int> sigma;
    std::string name;

    static AutomorphismSpec permutation(std::vector<int> p, std::string name = "perm");
    static AutomorphismSpec group_word(const Raag& r, const Word& w, std::vector<int> sigma = {});
};

// Applies an automorphism to points and domains of a space.
class Action {
public:
    Action(Space& s, const AutomorphismSpec& g);
    int apply(int p, int k = 1);
    int domain_image(int u, int k = 1);

private:
    int step(int p, bool forward);
    int domain_step(int u, bool forward);

    Space& s_;
    AutomorphismSpec g_;
    RaagSpace* raag_ = nullptr;
    ComplexSpace* cx_ = nullptr;
    std::vector<int> inv_perm_, sigma_inv_;
    std::map<std::vector<int>, int> member_of_;
};

enum class Growth { Bounded, Linear, SublinearSuspect };
std::string to_string(Growth g);

struct GrowthRow {
    int domain = 0;  // space domain id
    std::string key;
    std::vector<int> diam;  // diam of the projected orbit {g^k x : |k| <= n}, n = 0..N
    Growth growth = Growth::Bounded;
    double slope = 0.0;  // displacement per power of g on the fitted tail
    double r2 = 0.0;
};

// Plateau over the last ceil(N/3) steps is Bounded; a least-squares fit on
// the last 2N/3 steps with R^2 >= 0.99 is Linear; anything else is suspect.
Growth fit_growth(const std::vector<int>& f, double* slope = nullptr, double* r2 = nullptr);

struct BigSetReport {
    int horizon = 0;
    std::vector<GrowthRow> rows;  // every candidate domain
    std::vector<int> big;         // indices into rows
};

BigSetReport big_set(Space& s, const AutomorphismSpec& g, int x, int N);

enum class AutoType { Elliptic, Axial, Unresolved };
std::string to_string(AutoType t);

struct ClassificationReport {
    BigSetReport big;
    AutoType type = AutoType::Elliptic;
    bool irreducible = false;
    bool rank_one = false;
    int M_power = 1;
    std::vector<std::string> big_keys() const;
};

// Throws BigNotOrthogonal if two big domains fail to be orthogonal.
ClassificationReport classify(Space& s, const AutomorphismSpec& g, int x, int N);

struct BigInvariants {
    int M = 1;
    std::vector<std::string> witnesses;
};
// Throws BigNotOrthogonal, or CapExceeded when no power up to cap fixes BIG.
BigInvariants big_invariants(Space& s, const AutomorphismSpec& g, const ClassificationReport& r, int cap = 12);

// Whether the factored contact graph of a RAAG domain label has bounded
// diameter, judged by comparing the eccentricity of the identity's walls
// over ball windows of radius 4 and 6.
bool label_bounded(RaagSpace& s, Mask label);

// Maximal domains on which the orbit of the ball of radius N in the
// subgroup generated by gens has unbounded projections.
std::vector<int> active_domains(RaagSpace& s, const std::vector<Word>& gens, int x, int N);

struct OmnibusResult {
    Word g;
    ClassificationReport report;
};
OmnibusResult omnibus_search(RaagSpace& s, const std::vector<Word>& gens, int x, int N, int L, int horizon = 20);

// Reduced words of length 1..L over gens and their inverses, shortest first.
std::vector<Word> enumerate_words(const Raag& r, const std::vector<Word>& gens, int L);
// Words that are shortlex-least among the normal forms of their cyclic
// rotations; every other word is conjugate to one of these or to a shorter word.
std::vector<Word> cyclic_representatives(const Raag& r, const std::vector<Word>& words);

struct RankRigidityReport {
    enum class Verdict { ProductWithUnboundedFactors, RankOneElement, Unresolved };
    Verdict verdict = Verdict::Unresolved;
    std::string domain;  // the product domain U or the rank-one element's big domain
    Word element;
    bool essential = true;
    bool s_bounded = false;
    bool cross_check = true;
    std::map<int, int> s_diameter;  // radius -> diam of C S over the ball window
    std::string evidence;
};
std::string to_string(RankRigidityReport::Verdict v);

struct RankRigidityOptions {
    int horizon = 20;
    int L = 4;
    std::vector<int> radii{6, 8, 10};
    int kappa0 = -1;  // measured on a ball of the first radius when negative
};
RankRigidityReport rank_rigidity_report(const Raag& r, const std::vector<Word>& gens, const RankRigidityOptions& opt = {});

std::string format_growth(const BigSetReport& r);

} // namespace hhs
