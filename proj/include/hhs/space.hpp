#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hhs/cube_complex.hpp"
#include "hhs/factors.hpp"
#include "hhs/raag.hpp"

namespace hhs {

struct DomainInfo {
    std::string key;
    int level = 1;
    Mask label = 0;
    int base = -1;  // a point of the representative (its least vertex)
};

// Edges of the factored contact graph visible from one point p of F_U:
// the walls of F_U at p form a clique, and each nested class with a member
// through p is coned onto that member's walls at p.
struct LocalView {
    std::vector<int> walls;
    std::vector<std::pair<int, std::vector<int>>> cones;
};

// Uniform access to a cube complex with a factor system. Points, walls and
// domains are integer ids; the RAAG model interns them lazily.
class Space {
public:
    virtual ~Space() = default;

    virtual int dist(int x, int y) = 0;
    virtual std::string point_name(int x) = 0;
    virtual int num_domains() = 0;
    virtual const DomainInfo& domain(int u) = 0;
    virtual int top() = 0;
    virtual int complexity() = 0;
    virtual Rel relation(int u, int v) = 0;
    virtual int gate(int u, int x) = 0;
    virtual bool in_rep(int u, int x) = 0;
    virtual void local_view(int u, int p, LocalView& out) = 0;
    // Neighbours of p inside the representative F_u.
    virtual std::vector<int> rep_neighbors(int u, int p) = 0;
    // A canonical geodesic from x to y (inside F_u whenever x, y are).
    virtual std::vector<int> path(int x, int y) = 0;
    virtual std::string wall_name(int w) = 0;
    std::vector<int> walls_of(int u, int p) {
        LocalView lv;
        local_view(u, p, lv);
        return lv.walls;
    }
};

// Finite complex plus a generated factor system.
class ComplexSpace : public Space {
public:
    ComplexSpace(const CubeComplex& x, const FactorSystem& fs);

    int dist(int x, int y) override { return x_.dist(x, y); }
    std::string point_name(int x) override { return x_.label(x); }
    int num_domains() override { return fs_.num_classes(); }
    const DomainInfo& domain(int u) override { return info_[u]; }
    int top() override { return fs_.top; }
    int complexity() override { return fs_.complexity; }
    Rel relation(int u, int v) override { return fs_.rel[u][v]; }
    int gate(int u, int x) override { return x_.gate(fs_.rep(u), x); }
    bool in_rep(int u, int x) override { return fs_.rep(u).contains(x); }
    void local_view(int u, int p, LocalView& out) override;
    std::vector<int> rep_neighbors(int u, int p) override;
    std::vector<int> path(int x, int y) override { return x_.geodesic(x, y); }
    std::string wall_name(int w) override { return "w" + std::to_string(w); }

    const CubeComplex& complex() const { return x_; }
    const FactorSystem& factors() const { return fs_; }
    std::vector<int> window(int u) const { return fs_.rep(u).vertices; }

private:
    const CubeComplex& x_;
    const FactorSystem& fs_;
    std::vector<DomainInfo> info_;
};

// The RAAG model without truncation: points are group elements, walls are
// keyed by (generator, least element of x A_lk(v)), and domains by
// (generator set, least element of the class coset).
class RaagSpace : public Space {
public:
    explicit RaagSpace(Raag r);

    int point(const Word& w);
    const Word& word(int p) const { return points_[p]; }
    int num_points() const { return static_cast<int>(points_.size()); }
    // Domain of the class of g A_lam.
    int domain_of(Mask lam, const Word& g);
    const Raag& raag() const { return r_; }
    const std::vector<Mask>& family() const { return family_; }
    int family_level(Mask lam) const;
    // Wall dual to the edge (x, x v) for v a positive generator.
    int wall(int v, const Word& x);
    int wall_label(int w) const { return wall_keys_[w].first; }
    const Word& wall_point(int w) const { return wall_keys_[w].second; }
    // Whether walls w1, w2 cross.
    bool walls_cross(int w1, int w2);
    // Whether wall w separates points x and y.
    bool separates(int w, int x, int y);
    // Points of F_u within the word-metric ball of the given radius.
    std::vector<int> ball_window(int u, int radius);
    // Left translation of p by t.
    int translate(const Word& t, int p);

    int dist(int x, int y) override;
    std::string point_name(int x) override { return r_.str(points_[x]); }
    int num_domains() override { return static_cast<int>(domains_.size()); }
    const DomainInfo& domain(int u) override { return domains_[u]; }
    int top() override { return top_; }
    int complexity() override { return complexity_; }
    Rel relation(int u, int v) override;
    int gate(int u, int x) override;
    bool in_rep(int u, int x) override;
    void local_view(int u, int p, LocalView& out) override;
    std::vector<int> rep_neighbors(int u, int p) override;
    std::vector<int> path(int x, int y) override;
    std::string wall_name(int w) override;

    const Word& domain_base_word(int u) const { return dom_words_[u]; }

private:
    Raag r_;
    std::vector<Mask> family_;
    std::vector<int> family_levels_;
    int complexity_ = 1;
    int top_ = 0;
    std::vector<Word> points_;
    std::unordered_map<Word, int, WordHash> point_ids_;
    std::vector<DomainInfo> domains_;
    std::vector<Word> dom_words_;
    std::vector<std::unordered_map<Word, int, WordHash>> domain_ids_;
    std::vector<std::pair<int, Word>> wall_keys_;
    std::unordered_map<Word, int, WordHash> wall_ids_[32];
    std::unordered_map<long long, Rel> rel_cache_;
};

} // namespace hhs
