#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <compare>
#include <string>

#include "steklov/errors.hpp"

namespace steklov {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational with arbitrary-precision integer parts, always reduced with
/// positive denominator (boost::rational maintains the invariant).
class Rational {
  public:
    Rational() : r_(0) {}
    Rational(long n) : r_(BigInt(n)) {}  // NOLINT: implicit by design
    Rational(long n, long d) : r_(BigInt(n), BigInt(d)) {}
    Rational(BigInt n, BigInt d) : r_(std::move(n), std::move(d)) {}

    /// Parses "p", "-p/q" etc.; decimal forms are rejected to keep exactness.
    static Rational parse(const std::string& s);

    BigInt num() const { return r_.numerator(); }
    BigInt den() const { return r_.denominator(); }
    bool is_integer() const { return r_.denominator() == 1; }
    bool is_zero() const { return r_.numerator() == 0; }
    bool positive() const { return r_.numerator() > 0; }

    double to_double() const;
    std::string str() const;

    Rational operator-() const { return Rational(-r_); }
    Rational& operator+=(const Rational& o) { r_ += o.r_; return *this; }
    Rational& operator-=(const Rational& o) { r_ -= o.r_; return *this; }
    Rational& operator*=(const Rational& o) { r_ *= o.r_; return *this; }
    Rational& operator/=(const Rational& o);
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.r_ == b.r_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.r_ != b.r_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.r_ < b.r_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.r_ <= b.r_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.r_ > b.r_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.r_ >= b.r_; }

    BigInt floor() const;

    /// Representative in [0, mod) of *this modulo mod (mod > 0).
    Rational mod(const Rational& mod) const;

    /// True when (*this - other) is an integer multiple of mod.
    bool congruent(const Rational& other, const Rational& mod) const {
        return (*this - other).mod(mod).is_zero();
    }

  private:
    explicit Rational(boost::rational<BigInt> r) : r_(std::move(r)) {}
    boost::rational<BigInt> r_;
};

BigInt gcd(BigInt a, BigInt b);
BigInt lcm(const BigInt& a, const BigInt& b);

/// Smallest positive rational with q / a and q / b both integral:
/// lcm(num_a, num_b) / gcd(den_a, den_b).
Rational rational_lcm(const Rational& a, const Rational& b);

}  // namespace steklov
