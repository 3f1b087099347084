#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace braidcsp {

/// Fixed-size bitset with a runtime size. Candidate sets, adjacency rows and
/// domain masks all live in this representation; the pattern searches spend
/// most of their time in these loops.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int nbits) : words_((nbits + 63) / 64, 0), size_(nbits) {}

    int size() const { return size_; }

    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    void clear() {
        for (auto& w : words_) w = 0;
    }

    int count() const {
        int n = 0;
        for (auto w : words_) n += std::popcount(w);
        return n;
    }

    bool any() const {
        for (auto w : words_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    Bitset& operator|=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Bitset& operator&=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    bool intersects(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    /// dst = a & b, without allocating when dst already has the right size.
    static void assign_and(Bitset& dst, const Bitset& a, const Bitset& b) {
        dst.resize_like(a);
        for (std::size_t i = 0; i < dst.words_.size(); ++i)
            dst.words_[i] = a.words_[i] & b.words_[i];
    }

    /// dst = a & b & ~c.
    static void assign_and_andnot(Bitset& dst, const Bitset& a, const Bitset& b, const Bitset& c) {
        dst.resize_like(a);
        for (std::size_t i = 0; i < dst.words_.size(); ++i)
            dst.words_[i] = a.words_[i] & b.words_[i] & ~c.words_[i];
    }

    /// Visit set bits in ascending order. F returns void.
    template <class F>
    void for_each_set(F&& f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                int bit = std::countr_zero(w);
                f(static_cast<int>(wi * 64 + bit));
                w &= w - 1;
            }
        }
    }

    /// Visit set bits ascending until F returns true. Returns true if stopped.
    template <class F>
    bool for_each_set_until(F&& f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                int bit = std::countr_zero(w);
                if (f(static_cast<int>(wi * 64 + bit))) return true;
                w &= w - 1;
            }
        }
        return false;
    }

    /// First set bit, or -1.
    int first() const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi)
            if (words_[wi]) return static_cast<int>(wi * 64 + std::countr_zero(words_[wi]));
        return -1;
    }

    friend bool operator==(const Bitset& a, const Bitset& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    void resize_like(const Bitset& a) {
        if (size_ != a.size_) {
            words_.assign(a.words_.size(), 0);
            size_ = a.size_;
        }
    }

    std::vector<std::uint64_t> words_;
    int size_ = 0;
};

} // namespace braidcsp
