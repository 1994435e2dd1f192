#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace hhs {

// Fixed-width bitset sized at runtime; used for halfspace signs and wall sets.
class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1ULL; }
    void set(std::size_t i) { w_[i >> 6] |= 1ULL << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(1ULL << (i & 63)); }
    void flip(std::size_t i) { w_[i >> 6] ^= 1ULL << (i & 63); }
    void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
        return c;
    }
    bool any() const {
        for (auto x : w_)
            if (x) return true;
        return false;
    }
    bool none() const { return !any(); }

    Bits& operator|=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    Bits& operator&=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    Bits& operator^=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }
    Bits operator~() const {
        Bits r = *this;
        for (auto& x : r.w_) x = ~x;
        r.trim();
        return r;
    }
    friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
    friend Bits operator&(Bits a, const Bits& b) { return a &= b; }
    friend Bits operator^(Bits a, const Bits& b) { return a ^= b; }
    bool operator==(const Bits& o) const = default;
    bool operator<(const Bits& o) const { return w_ < o.w_; }

    bool subset_of(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }
    bool intersects(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }
    static std::size_t xor_count(const Bits& a, const Bits& b) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < a.w_.size(); ++i) c += static_cast<std::size_t>(std::popcount(a.w_[i] ^ b.w_[i]));
        return c;
    }
    // Index list of set bits in increasing order.
    std::vector<int> ones() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < w_.size(); ++i) {
            auto x = w_[i];
            while (x) {
                out.push_back(static_cast<int>(i * 64 + static_cast<std::size_t>(std::countr_zero(x))));
                x &= x - 1;
            }
        }
        return out;
    }
    const std::vector<std::uint64_t>& words() const { return w_; }
    std::uint64_t* data() { return w_.data(); }

private:
    void trim() {
        if (n_ % 64 && !w_.empty()) w_.back() &= (1ULL << (n_ % 64)) - 1;
    }
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct BitsHash {
    std::size_t operator()(const Bits& b) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (auto x : b.words()) h = (h ^ x) * 1099511628211ULL;
        return h;
    }
};

} // namespace hhs
