#include "hhs/raag.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "hhs/errors.hpp"

namespace hhs {

namespace {

int letter_key(const Syl& s) { return 2 * s.g + (s.e < 0 ? 1 : 0); }

} // namespace

std::size_t WordHash::operator()(const Word& w) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto& s : w) {
        std::size_t v = (static_cast<std::size_t>(s.g) << 40) ^ static_cast<std::size_t>(static_cast<std::uint32_t>(s.e));
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

Raag::Raag(std::vector<std::string> names, std::vector<std::pair<int, int>> edges)
    : names_(std::move(names)), edges_(std::move(edges)), link_(names_.size(), 0) {
    if (names_.size() > 26) fail("InvalidGraph", "at most 26 generators are supported");
    for (auto& [u, v] : edges_) {
        if (u == v || u < 0 || v < 0 || u >= rank() || v >= rank()) fail("InvalidGraph", "bad commutation edge");
        if (u > v) std::swap(u, v);
        link_[u] |= Mask{1} << v;
        link_[v] |= Mask{1} << u;
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

Mask Raag::link_of(Mask m) const {
    Mask out = all();
    for (int g = 0; g < rank(); ++g)
        if ((m >> g) & 1U) out &= link_[g];
    return out & ~m;
}

int Raag::generator(const std::string& name) const {
    for (int g = 0; g < rank(); ++g)
        if (names_[g] == name) return g;
    return -1;
}

void Raag::append(Word& w, Syl s) const {
    if (s.e == 0) return;
    for (std::size_t i = w.size(); i-- > 0;) {
        if (w[i].g == s.g) {
            w[i].e += s.e;
            if (w[i].e == 0) w.erase(w.begin() + static_cast<long>(i));
            return;
        }
        if (!commute(w[i].g, s.g)) break;
    }
    w.push_back(s);
}

Word Raag::reduce(const Word& w) const {
    Word out;
    out.reserve(w.size());
    for (const auto& s : w) append(out, s);
    return out;
}

Word Raag::normal_form(const Word& w) const {
    Word r = reduce(w);
    const std::size_t n = r.size();
    if (n <= 1) return r;
    std::vector<int> indeg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!commute(r[j].g, r[i].g)) ++indeg[i];
    std::vector<char> used(n, 0);
    Word out;
    out.reserve(n);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i] && indeg[i] == 0 && (best == n || letter_key(r[i]) < letter_key(r[best]))) best = i;
        used[best] = 1;
        out.push_back(r[best]);
        for (std::size_t j = best + 1; j < n; ++j)
            if (!used[j] && !commute(r[best].g, r[j].g)) --indeg[j];
    }
    return out;
}

Word Raag::mul(const Word& x, const Word& y) const {
    Word out = x;
    for (const auto& s : y) append(out, s);
    return normal_form(out);
}

Word Raag::inv(const Word& w) const {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(Syl{it->g, -it->e});
    return normal_form(out);
}

long Raag::length(const Word& w) {
    long n = 0;
    for (const auto& s : w) n += std::labs(s.e);
    return n;
}

Mask Raag::support(const Word& w) {
    Mask m = 0;
    for (const auto& s : w) m |= Mask{1} << s.g;
    return m;
}

Word Raag::head(const Word& w, Mask m, Word* rest) const {
    Word h, r;
    Mask blocked = 0;
    for (const auto& s : reduce(w)) {
        if (((m >> s.g) & 1U) && !((blocked >> s.g) & 1U)) {
            append(h, s);
        } else {
            append(r, s);
            blocked |= ~link_[s.g];
        }
    }
    if (rest) *rest = normal_form(r);
    return normal_form(h);
}

Word Raag::min_rep(const Word& w, Mask m, Word* tail) const {
    Word red = reduce(w);
    Word keep, t;
    Mask blocked = 0;
    for (auto it = red.rbegin(); it != red.rend(); ++it) {
        if (((m >> it->g) & 1U) && !((blocked >> it->g) & 1U)) {
            t.push_back(*it);
        } else {
            keep.push_back(*it);
            blocked |= ~link_[it->g];
        }
    }
    std::reverse(keep.begin(), keep.end());
    std::reverse(t.begin(), t.end());
    if (tail) *tail = normal_form(t);
    return normal_form(keep);
}

Word Raag::min_rep_left(Mask m, const Word& w) const {
    Word rest;
    head(w, m, &rest);
    return rest;
}

bool Raag::in_double_coset(Mask l, const Word& w, Mask r) const {
    Word rest;
    head(w, l, &rest);
    return (support(rest) & ~r) == 0;
}

std::vector<int> Raag::letters(const Word& w) {
    std::vector<int> out;
    for (const auto& s : w) {
        int l = s.e > 0 ? s.g + 1 : -(s.g + 1);
        for (int k = 0; k < std::abs(s.e); ++k) out.push_back(l);
    }
    return out;
}

Word Raag::from_letters(const std::vector<int>& ls) const {
    Word w;
    for (int l : ls) append(w, Syl{std::abs(l) - 1, l > 0 ? 1 : -1});
    return normal_form(w);
}

Word Raag::parse(const std::string& s) const {
    Word w;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '.' || c == '*') {
            ++i;
            continue;
        }
        if (c == '1' && (i + 1 == s.size() || !std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            ++i;
            continue;
        }
        if (!std::isalpha(static_cast<unsigned char>(c))) fail("ParseError", "bad character in word '" + s + "'");
        int g = generator(std::string(1, static_cast<char>(std::tolower(static_cast<unsigned char>(c)))));
        if (g < 0) fail("ParseError", "unknown generator '" + std::string(1, c) + "'");
        int sign = std::isupper(static_cast<unsigned char>(c)) ? -1 : 1;
        ++i;
        long e = 1;
        if (i < s.size() && s[i] == '^') {
            ++i;
            std::size_t j = i;
            if (j < s.size() && s[j] == '-') ++j;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j == i || (j == i + 1 && s[i] == '-')) fail("ParseError", "missing exponent in '" + s + "'");
            e = std::stol(s.substr(i, j - i));
            i = j;
        }
        append(w, Syl{g, static_cast<int>(sign * e)});
    }
    return normal_form(w);
}

std::string Raag::str(const Word& w) const {
    if (w.empty()) return "1";
    std::string out;
    for (const auto& s : w) {
        std::string l = names_[s.g];
        if (s.e < 0)
            for (auto& ch : l) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        int k = std::abs(s.e);
        if (k <= 3) {
            for (int i = 0; i < k; ++i) out += l;
        } else {
            out += l + "^" + std::to_string(k);
        }
    }
    return out;
}

bool shortlex_less(const Word& a, const Word& b) {
    long la = Raag::length(a), lb = Raag::length(b);
    if (la != lb) return la < lb;
    std::size_t i = 0, j = 0;
    int oi = 0, oj = 0;
    while (i < a.size() && j < b.size()) {
        int ka = letter_key(a[i]), kb = letter_key(b[j]);
        if (ka != kb) return ka < kb;
        int ra = std::abs(a[i].e) - oi, rb = std::abs(b[j].e) - oj;
        int step = std::min(ra, rb);
        oi += step;
        oj += step;
        if (oi == std::abs(a[i].e)) { ++i; oi = 0; }
        if (oj == std::abs(b[j].e)) { ++j; oj = 0; }
    }
    return false;
}

} // namespace hhs
