#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fullgroup/error.hpp"

namespace fullgroup {

namespace detail {

inline std::int64_t narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

inline std::int64_t checked_pow(std::int64_t base, int exp) {
    __int128 r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= base;
        if (r > INT64_MAX) throw std::overflow_error("power " + std::to_string(base) + "^" + std::to_string(exp) +
                                                     " exceeds 64 bits");
    }
    return static_cast<std::int64_t>(r);
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
    return r;
}

}  // namespace detail

/// Exact rational with 64-bit numerator and positive denominator, always
/// reduced.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
        if (den_ == 0) throw MalformedInput("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        auto g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
        __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return reduce(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num_, b.den_); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return reduce(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("division by zero rational");
        return reduce(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        __int128 l = static_cast<__int128>(a.num_) * b.den_;
        __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l <=> r;
    }

    std::string text() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Accepts "p/q" or an integer.
    static Rational parse(std::string_view s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string_view::npos) return Rational(std::stoll(std::string(s)));
            return Rational(std::stoll(std::string(s.substr(0, slash))), std::stoll(std::string(s.substr(slash + 1))));
        } catch (const std::logic_error&) {
            throw MalformedInput("not a rational: '" + std::string(s) + "'");
        }
    }

private:
    static Rational reduce(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n, b = d;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        return Rational(detail::narrow(n), detail::narrow(d));
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// A value numerator / base^exponent of the Bernoulli measure, reduced so
/// that the numerator is not divisible by the base unless it is zero.
class MeasureValue {
public:
    MeasureValue(int base, std::uint64_t numerator, int exponent) : base_(base), num_(numerator), exp_(exponent) {
        if (num_ == 0) {
            exp_ = 0;
            return;
        }
        while (exp_ > 0 && num_ % static_cast<std::uint64_t>(base_) == 0) {
            num_ /= static_cast<std::uint64_t>(base_);
            --exp_;
        }
    }

    int base() const { return base_; }
    std::uint64_t numerator() const { return num_; }
    int exponent() const { return exp_; }

    Rational value() const {
        return Rational(static_cast<std::int64_t>(num_), detail::checked_pow(base_, exp_));
    }

    friend bool operator==(const MeasureValue& a, const MeasureValue& b) {
        return a.num_ == b.num_ && (a.num_ == 0 || (a.exp_ == b.exp_ && a.base_ == b.base_));
    }
    friend std::strong_ordering operator<=>(const MeasureValue& a, const MeasureValue& b) {
        return a.value() <=> b.value();
    }

    std::string text() const {
        if (num_ == 0) return "0";
        if (exp_ == 0) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(base_) + "^" + std::to_string(exp_);
    }

private:
    int base_;
    std::uint64_t num_;
    int exp_;
};

}  // namespace fullgroup
