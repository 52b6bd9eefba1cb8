#pragma once

// Exact rational arithmetic on arbitrary-precision integers.
//
// Rationals are kept reduced at all times: den >= 1 and gcd(|num|, den) = 1
// after every construction, so equality is plain structural comparison.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace rotsum {

using BigInt = boost::multiprecision::cpp_int;

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}

    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }
    Rational(long long n, long long d) : num_(n), den_(d) { reduce(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ == 0 ? 0 : (num_ > 0 ? 1 : -1); }

    double to_double() const { return num_.convert_to<double>() / den_.convert_to<double>(); }

    Rational operator-() const { return Rational(raw_tag{}, -num_, den_); }

    Rational operator+(const Rational& o) const {
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Rational operator-(const Rational& o) const {
        return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    Rational operator*(const Rational& o) const {
        return Rational(num_ * o.num_, den_ * o.den_);
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
        return Rational(num_ * o.den_, den_ * o.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return num_ * o.den_ < o.num_ * den_; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator<=(const Rational& o) const { return !(o < *this); }
    bool operator>=(const Rational& o) const { return !(*this < o); }

    // Largest integer <= value.
    BigInt floor() const {
        if (den_ == 1) return num_;
        BigInt f = num_ / den_;
        if (num_ < 0) --f;  // cpp_int division truncates toward zero
        return f;
    }

    // value - floor(value), in [0, 1).
    Rational frac() const { return *this - Rational(floor()); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    std::string str() const {
        std::string s = num_.str();
        if (den_ != 1) s += "/" + den_.str();
        return s;
    }

private:
    struct raw_tag {};
    Rational(raw_tag, BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {}

    void reduce() {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_;
    BigInt den_;  // always >= 1
};

inline Rational abs(const Rational& r) { return r.abs(); }

}  // namespace rotsum
