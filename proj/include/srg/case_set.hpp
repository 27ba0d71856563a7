#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace srg {

// Fixed-size bitset over case indices; the workhorse of rule evaluation.
class CaseSet {
public:
    CaseSet() = default;
    explicit CaseSet(std::size_t n, bool fill = false) : size_(n), words_((n + 63) / 64, fill ? ~0ull : 0ull)
    {
        trim();
    }

    std::size_t size() const { return size_; }
    void set(std::size_t i) { words_[i >> 6] |= 1ull << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(1ull << (i & 63)); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ull; }

    std::size_t count() const
    {
        std::size_t n = 0;
        for (auto w : words_)
            n += std::popcount(w);
        return n;
    }

    bool any() const
    {
        for (auto w : words_)
            if (w)
                return true;
        return false;
    }

    CaseSet & operator&=(const CaseSet & o)
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] &= o.words_[i];
        return *this;
    }
    CaseSet & operator|=(const CaseSet & o)
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] |= o.words_[i];
        return *this;
    }
    CaseSet & subtract(const CaseSet & o)
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] &= ~o.words_[i];
        return *this;
    }
    CaseSet complement() const
    {
        CaseSet out = *this;
        for (auto & w : out.words_)
            w = ~w;
        out.trim();
        return out;
    }

    friend CaseSet operator&(CaseSet a, const CaseSet & b) { return a &= b; }
    friend CaseSet operator|(CaseSet a, const CaseSet & b) { return a |= b; }
    friend CaseSet operator-(CaseSet a, const CaseSet & b) { return a.subtract(b); }
    friend bool operator==(const CaseSet &, const CaseSet &) = default;

    // |a & b| without materialising the intersection.
    static std::size_t intersect_count(const CaseSet & a, const CaseSet & b)
    {
        std::size_t n = 0;
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            n += std::popcount(a.words_[i] & b.words_[i]);
        return n;
    }

    // dst = a & b, reusing dst's storage.
    static void intersect_into(CaseSet & dst, const CaseSet & a, const CaseSet & b)
    {
        dst.size_ = a.size_;
        dst.words_.resize(a.words_.size());
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            dst.words_[i] = a.words_[i] & b.words_[i];
    }

    template <typename F>
    void for_each(F && f) const
    {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            auto w = words_[wi];
            while (w) {
                auto b = std::countr_zero(w);
                f(wi * 64 + static_cast<std::size_t>(b));
                w &= w - 1;
            }
        }
    }

    std::vector<std::size_t> indices() const
    {
        std::vector<std::size_t> out;
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

private:
    void trim()
    {
        if (size_ % 64 && ! words_.empty())
            words_.back() &= (1ull << (size_ % 64)) - 1;
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}
