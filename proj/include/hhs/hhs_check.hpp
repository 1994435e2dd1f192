#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhs/contact.hpp"
#include "hhs/errors.hpp"
#include "hhs/space.hpp"

namespace hhs {

struct HHSConstants {
    int E = 0;
    int kappa0 = 0;
    int xi = 0;
    double delta = 0.0;
    int K_lip = 0;
    int n_complexity = 0;
    int theta_e = 0;
    int theta_u = 0;
    int lambda_ll = 1;
    int D0 = 1;
    int alpha = 0;
    int norm_C = 0;
};

// A finite instance of the hierarchy: evaluation points, the domains that
// meet them, and each domain's factored contact graph over a window of its
// representative. Graph distances inside a window bound the true ones from
// above. Indices i, j below are local domain indices.
class Hierarchy {
public:
    using WindowFn = std::function<std::vector<int>(int)>;
    Hierarchy(Space& s, std::vector<int> points, std::vector<int> domains, const WindowFn& window);

    Space& space() { return s_; }
    const std::vector<int>& points() const { return points_; }
    int num_domains() const { return static_cast<int>(ids_.size()); }
    int space_id(int i) const { return ids_[i]; }
    const DomainInfo& info(int i) { return s_.domain(ids_[i]); }
    int top() const { return top_; }
    // Local index of the domain with this key, or -1.
    int find(const std::string& key) const;
    Rel rel(int i, int j) const { return rel_[i][j]; }
    const ContactGraph& graph(int i) const { return graphs_[i]; }
    const std::vector<int>& window(int i) const { return windows_[i]; }
    const std::vector<int>& carriers(int i, int node) const { return carriers_[i][node]; }

    // Walls at the gate of x onto F_i, as nodes of graph(i).
    const std::vector<int>& pi(int i, int x);
    int dist(int i, int a, int b);
    int diam(int i, const std::vector<int>& a);
    int diam_union(int i, const std::vector<int>& a, const std::vector<int>& b);
    int gap(int i, const std::vector<int>& a, const std::vector<int>& b);
    int d(int i, int x, int y) { return diam_union(i, pi(i, x), pi(i, y)); }

    // rho^i_j: pi_j of the window of F_i. Defined for i nested in or transverse to j.
    const std::vector<int>& rho(int i, int j);
    int rho_diam(int i, int j);
    // diam(a ∪ rho^i_j) in graph(j), and diam(rho^i_k ∪ rho^j_k) in graph(k).
    int d_rho(int i, int j, const std::vector<int>& a);
    int d_rho_rho(int i, int j, int k);
    // rho^i_j of a node of graph(i), for j nested in i: pi_j over the points
    // where the node is local.
    const std::vector<int>& rho_down(int i, int j, int node);
    std::vector<int> rho_down(int i, int j, const std::vector<int>& nodes);

    HHSConstants constants;

private:
    const std::vector<std::uint16_t>& row(int i, int a);

    Space& s_;
    std::vector<int> points_;
    std::vector<int> ids_;
    std::map<int, int> local_;
    int top_ = 0;
    std::vector<std::vector<Rel>> rel_;
    std::vector<std::vector<int>> windows_;
    std::vector<ContactGraph> graphs_;
    std::vector<std::vector<std::vector<int>>> carriers_;
    std::map<std::pair<int, int>, std::vector<int>> pi_cache_;
    std::vector<std::vector<std::vector<std::uint16_t>>> rows_;  // BFS distances, 0xFFFF when unreachable
    long long row_entries_ = 0;
    std::map<std::pair<int, int>, std::pair<std::vector<int>, int>> rho_cache_;
    std::map<std::array<int, 3>, std::vector<int>> down_cache_;
};

// Structure over a finite complex. Points are the vertices within
// eval_radius of the basepoint (default: the trusted radius); domains are
// the classes with a member through one of them.
Hierarchy build_structure(ComplexSpace& s, int eval_radius = -1);

struct Violation {
    std::string axiom;
    int value = 0;
    std::string witness;
};

struct AxiomReport {
    HHSConstants constants;
    int kappa_points = 0;    // consistency inequalities for points
    int kappa_rho = 0;       // consistency of rho for nested triples
    int E_bgi = 0;
    int bgi_geodesics = 0;
    long long pairs_tested = 0;
    std::map<int, int> theta_u_table;  // kappa -> theta_u(kappa)
    int cap = 0;
    std::vector<Violation> violations;
};

struct CheckOptions {
    std::uint64_t seed = 1;
    // Pair sweeps are exhaustive up to this many pairs, sampled beyond.
    long long samples = 150000;
    int cap = 64;
    int geodesics = 64;
    int bgi_pairs = 12;
    int alpha_samples = 40;
    long long delta_samples = 20000;
};

AxiomReport verify_axioms(Hierarchy& h, const CheckOptions& opt = {});

// Least theta with: d(x,y) >= theta forces some d_U(x,y) >= kappa, over the pairs.
int uniqueness_theta(Hierarchy& h, int kappa, const std::vector<std::pair<int, int>>& pairs);

std::vector<std::pair<int, int>> all_pairs(const Hierarchy& h);
std::vector<std::pair<int, int>> sample_pairs(const Hierarchy& h, std::uint64_t seed, long long samples);

struct OrthogonalCloseReport {
    int max_value = 0;
    long long triples = 0;
    std::array<int, 3> witness{-1, -1, -1};
};

// max d_W(rho^U_W, rho^V_W) over U ⊥ V and W with rho^U_W, rho^V_W defined.
OrthogonalCloseReport orthogonal_close(Hierarchy& h);

struct DistanceFormulaFit {
    int s = 0;
    int K_df = 0;
    int C_df = 0;
    std::pair<int, int> worst_pair{-1, -1};
    long long pairs_tested = 0;
};

// Thresholded sum of d_U(x,y) over domains, counting only terms >= s.
int thresholded_sum(Hierarchy& h, int x, int y, int s);
DistanceFormulaFit distance_formula_fit(Hierarchy& h, int s, const std::vector<std::pair<int, int>>& pairs,
                                        int k_cap = 20, int c_cap = 400);

// One clique per domain, as nodes of that domain's graph.
using Tuple = std::vector<std::vector<int>>;
Tuple point_tuple(Hierarchy& h, int x);

class Inconsistent : public Error {
public:
    Inconsistent(int u, int v, int value)
        : Error("Inconsistent", "pair (" + std::to_string(u) + "," + std::to_string(v) +
                                    ") violates consistency, value " + std::to_string(value)),
          u(u), v(v), value(value) {}
    int u, v, value;
};

// First pair (u, v) whose consistency inequality fails at kappa.
std::optional<std::array<int, 3>> consistency_violation(Hierarchy& h, const Tuple& b, int kappa);
int consistency_value(Hierarchy& h, const Tuple& b, int u, int v);

struct Realization {
    std::vector<int> points;
    int diameter = 0;
    int theta_e = 0;
};
Realization realize(Hierarchy& h, const Tuple& b, int kappa, int theta_cap = 64);

struct HierarchyPath {
    std::vector<int> path;
    int D0 = 1;
    int tried = 0;
};
// Least monotonicity defect over sampled geodesics from x to y.
HierarchyPath hierarchy_path(Hierarchy& h, int x, int y, int D, std::uint64_t seed = 1, int geodesics = 64);

std::string format_report(const AxiomReport& r);

} // namespace hhs
