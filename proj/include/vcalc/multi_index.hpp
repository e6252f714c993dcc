#ifndef VCALC_MULTI_INDEX_HPP
#define VCALC_MULTI_INDEX_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>

#include "vcalc/errors.hpp"

namespace vcalc {

// Exponent vector alpha in N^n with cached total degree.
class MultiIndex {
  public:
    static constexpr std::size_t kMaxArguments = 16;

    MultiIndex() = default;
    explicit MultiIndex(std::size_t n) : n_(checked_size(n)) {}
    MultiIndex(std::initializer_list<int> exponents) : n_(checked_size(exponents.size())) {
        std::size_t i = 0;
        for (int e : exponents) {
            set(i++, e);
        }
    }

    static MultiIndex unit(std::size_t n, std::size_t i) {
        MultiIndex a(n);
        a.set(i, 1);
        return a;
    }

    std::size_t size() const noexcept { return n_; }
    int degree() const noexcept { return degree_; }
    int operator[](std::size_t i) const noexcept { return exponents_[i]; }

    void set(std::size_t i, int e) {
        if (i >= n_) {
            throw UsageError("multi-index position out of range");
        }
        if (e < 0 || e > 255) {
            throw UsageError("multi-index exponent out of range");
        }
        degree_ += e - exponents_[i];
        exponents_[i] = static_cast<std::uint8_t>(e);
    }
    void increment(std::size_t i) { set(i, (*this)[i] + 1); }
    void decrement(std::size_t i) { set(i, (*this)[i] - 1); }

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
        if (a.n_ != b.n_) {
            throw UsageError("multi-index size mismatch");
        }
        MultiIndex r(a);
        for (std::size_t i = 0; i < a.n_; ++i) {
            r.set(i, a[i] + b[i]);
        }
        return r;
    }

    // Multi-index with position i removed (used when a coordinate is dropped).
    MultiIndex without(std::size_t i) const {
        MultiIndex r(n_ - 1);
        for (std::size_t k = 0, j = 0; k < n_; ++k) {
            if (k != i) {
                r.set(j++, (*this)[k]);
            }
        }
        return r;
    }

    // Multi-index with a zero exponent inserted at position i.
    MultiIndex with_inserted(std::size_t i, int e = 0) const {
        MultiIndex r(n_ + 1);
        for (std::size_t k = 0, j = 0; k <= n_; ++k) {
            if (k == i) {
                r.set(k, e);
            } else {
                r.set(k, (*this)[j++]);
            }
        }
        return r;
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) noexcept {
        return a.n_ == b.n_ && a.exponents_ == b.exponents_;
    }

    // Graded reverse-lexicographic: lower total degree first; among equal
    // degrees the exponent sequences are compared from the last position.
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) noexcept {
        if (auto c = a.degree_ <=> b.degree_; c != 0) {
            return c;
        }
        for (std::size_t i = a.n_; i-- > 0;) {
            if (auto c = a.exponents_[i] <=> b.exponents_[i]; c != 0) {
                return c;
            }
        }
        return a.n_ <=> b.n_;
    }

    friend std::ostream& operator<<(std::ostream& os, const MultiIndex& a) {
        os << '(';
        for (std::size_t i = 0; i < a.n_; ++i) {
            os << (i ? "," : "") << a[i];
        }
        return os << ')';
    }

    std::size_t hash() const noexcept {
        std::size_t h = n_;
        for (std::size_t i = 0; i < n_; ++i) {
            h = h * 131 + exponents_[i];
        }
        return h;
    }

  private:
    static std::uint8_t checked_size(std::size_t n) {
        if (n > kMaxArguments) {
            throw UsageError("too many arguments for a multi-index");
        }
        return static_cast<std::uint8_t>(n);
    }

    std::array<std::uint8_t, kMaxArguments> exponents_{};
    std::uint8_t n_ = 0;
    int degree_ = 0;
};

} // namespace vcalc

template <>
struct std::hash<vcalc::MultiIndex> {
    std::size_t operator()(const vcalc::MultiIndex& a) const noexcept { return a.hash(); }
};

#endif
