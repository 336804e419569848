#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace circlt {

/// Minimal exact rational on int64 with overflow checks. Enough for the
/// alternating binomial sums used by the density formulas (p <= 20);
/// anything larger throws rather than silently wrapping.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT: implicit by design
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator+(const Rational& o) const {
        return Rational(checked_add(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
                        checked_mul(den_, o.den_));
    }
    Rational operator-(const Rational& o) const {
        return Rational(checked_sub(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
                        checked_mul(den_, o.den_));
    }
    Rational operator*(const Rational& o) const {
        return Rational(checked_mul(num_, o.num_), checked_mul(den_, o.den_));
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::domain_error("rational division by zero");
        return Rational(checked_mul(num_, o.den_), checked_mul(den_, o.num_));
    }
    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }

private:
    static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
        __int128 r = static_cast<__int128>(a) * b;
        if (r > INT64_MAX || r < INT64_MIN) throw std::overflow_error("rational overflow (mul)");
        return static_cast<std::int64_t>(r);
    }
    static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
        __int128 r = static_cast<__int128>(a) + b;
        if (r > INT64_MAX || r < INT64_MIN) throw std::overflow_error("rational overflow (add)");
        return static_cast<std::int64_t>(r);
    }
    static std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
        __int128 r = static_cast<__int128>(a) - b;
        if (r > INT64_MAX || r < INT64_MIN) throw std::overflow_error("rational overflow (sub)");
        return static_cast<std::int64_t>(r);
    }
    void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace circlt
