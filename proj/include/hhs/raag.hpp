#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace hhs {

using Mask = std::uint32_t;

// A syllable g^e with e != 0. Words are kept as syllable lists so that long
// powers such as a^40000 stay cheap.
struct Syl {
    int g = 0;
    int e = 0;
    bool operator==(const Syl&) const = default;
    auto operator<=>(const Syl&) const = default;
};

using Word = std::vector<Syl>;

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept;
};

// Right-angled Artin group on a finite simple graph. Generators are printed
// as lowercase letters, inverses as uppercase; the identity prints as "1".
class Raag {
public:
    Raag() = default;
    Raag(std::vector<std::string> names, std::vector<std::pair<int, int>> edges);

    int rank() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    Mask all() const { return rank() >= 32 ? ~Mask{0} : ((Mask{1} << rank()) - 1); }
    Mask link(int g) const { return link_[g]; }
    // Common link of a vertex set; vertices adjacent to every member of m.
    Mask link_of(Mask m) const;
    Mask star_of(Mask m) const { return m | link_of(m); }
    bool commute(int g, int h) const { return (link_[g] >> h) & 1U; }
    int generator(const std::string& name) const;

    // Freely reduce, using commutations to bring cancelling syllables together.
    Word reduce(const Word& w) const;
    // Shortlex-least representative with letter order a < A < b < B < ...
    Word normal_form(const Word& w) const;
    Word mul(const Word& x, const Word& y) const;
    Word inv(const Word& w) const;
    Word letter(int g, int e) const { return Word{Syl{g, e}}; }
    static long length(const Word& w);
    static Mask support(const Word& w);

    // Maximal prefix of w lying in A_m (the gate of w onto A_m).
    Word head(const Word& w, Mask m, Word* rest = nullptr) const;
    // Least element of the coset w A_m, and the removed A_m part.
    Word min_rep(const Word& w, Mask m, Word* tail = nullptr) const;
    // Least element of the coset A_m w.
    Word min_rep_left(Mask m, const Word& w) const;
    // Whether w lies in A_l A_r.
    bool in_double_coset(Mask l, const Word& w, Mask r) const;

    // Letter expansion: +(g+1) for g, -(g+1) for its inverse.
    static std::vector<int> letters(const Word& w);
    Word from_letters(const std::vector<int>& ls) const;

    Word parse(const std::string& s) const;
    std::string str(const Word& w) const;
    bool operator==(const Raag& o) const { return names_ == o.names_ && edges_ == o.edges_; }

private:
    void append(Word& w, Syl s) const;

    std::vector<std::string> names_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<Mask> link_;
};

// Shortlex comparison of normal forms (length first, then letter order).
bool shortlex_less(const Word& a, const Word& b);

} // namespace hhs
