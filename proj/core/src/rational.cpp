#include "ectdim/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ectdim::dims {

namespace {

std::int64_t checked_cast(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        throw std::overflow_error("rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational make_reduced(__int128 num, __int128 den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational(checked_cast(num), checked_cast(den));
}

}  // namespace

Rational::Rational(std::int64_t num) : num_(num), den_(1) {}

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    normalize();
}

void Rational::normalize() {
    if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
    *this = make_reduced(static_cast<__int128>(num_) * rhs.den_ +
                             static_cast<__int128>(rhs.num_) * den_,
                         static_cast<__int128>(den_) * rhs.den_);
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
    return *this += -rhs;
}

Rational& Rational::operator*=(const Rational& rhs) {
    *this = make_reduced(static_cast<__int128>(num_) * rhs.num_,
                         static_cast<__int128>(den_) * rhs.den_);
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.num_ == 0) throw std::domain_error("rational division by zero");
    *this = make_reduced(static_cast<__int128>(num_) * rhs.den_,
                         static_cast<__int128>(den_) * rhs.num_);
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& token) {
    auto parse_int = [](std::string_view sv) {
        std::int64_t v = 0;
        const char* first = sv.data();
        const char* last = sv.data() + sv.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) {
            throw std::invalid_argument("malformed rational token");
        }
        return v;
    };
    auto slash = token.find('/');
    if (slash == std::string::npos) {
        return Rational(parse_int(token));
    }
    std::int64_t num = parse_int(std::string_view(token).substr(0, slash));
    std::int64_t den = parse_int(std::string_view(token).substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational token with zero denominator");
    return Rational(num, den);
}

}  // namespace ectdim::dims
