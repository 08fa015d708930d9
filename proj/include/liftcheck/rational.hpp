#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace liftcheck {

// Exact rational with 64-bit parts; used for valuations in (1/e)Z and slopes.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
        if (d == 0) throw std::domain_error("Rational with zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rational operator+(Rational a, Rational b) {
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend Rational operator-(Rational a, Rational b) {
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    friend Rational operator*(Rational a, Rational b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
    friend Rational operator/(Rational a, Rational b) { return {a.num_ * b.den_, a.den_ * b.num_}; }
    Rational operator-() const { return {-num_, den_}; }
    Rational& operator+=(Rational o) { return *this = *this + o; }

    friend bool operator==(Rational a, Rational b) = default;
    friend std::strong_ordering operator<=>(Rational a, Rational b) {
        return (a.num_ * b.den_) <=> (b.num_ * a.den_);
    }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        auto g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// A valuation as reported by truncated arithmetic: an exact finite value,
// +infinity (exact zero of a finite ring), or only a lower bound when every
// known digit vanishes ("zero to precision").
class Valuation {
public:
    enum class Kind { Finite, Infinite, AtLeast };

    static Valuation finite(Rational v) { return {Kind::Finite, v}; }
    static Valuation infinite() { return {Kind::Infinite, 0}; }
    static Valuation at_least(Rational bound) { return {Kind::AtLeast, bound}; }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_infinite() const { return kind_ == Kind::Infinite; }
    bool is_lower_bound() const { return kind_ == Kind::AtLeast; }

    // Finite value or lower bound; throws for infinity.
    Rational value() const {
        if (kind_ == Kind::Infinite) throw std::logic_error("valuation is infinite");
        return v_;
    }

    // Decides v > t; an unresolved lower bound at or below t is indeterminate.
    bool exceeds(Rational t) const;
    bool at_least_value(Rational t) const;

    std::string str() const {
        switch (kind_) {
            case Kind::Finite: return v_.str();
            case Kind::Infinite: return "inf";
            case Kind::AtLeast: return ">=" + v_.str();
        }
        return {};
    }

    friend bool operator==(const Valuation&, const Valuation&) = default;

private:
    Valuation(Kind k, Rational v) : kind_(k), v_(v) {}
    Kind kind_;
    Rational v_;
};

}  // namespace liftcheck
