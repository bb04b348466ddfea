#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace ectdim::dims {

/// Exact rational number on int64 with canonical form (reduced, positive
/// denominator). Dimension exponents must stay exact: a kernel test on the
/// repeating-variable matrix is meaningless in floating point.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num);  // NOLINT(google-explicit-constructor) integers convert freely
    Rational(std::int64_t num, std::int64_t den);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    Rational operator-() const;
    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// "3", "-1/2", ...
    std::string str() const;

    /// Parses an integer or "num/den" token. Throws std::invalid_argument on
    /// malformed input or zero denominator.
    static Rational parse(const std::string& token);

private:
    void normalize();

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace ectdim::dims
