#include "steklov/rational.hpp"

#include <sstream>

namespace steklov {

Rational Rational::parse(const std::string& s) {
    auto trim = [](std::string t) {
        const char* ws = " \t";
        auto a = t.find_first_not_of(ws);
        auto b = t.find_last_not_of(ws);
        if (a == std::string::npos) return std::string();
        return t.substr(a, b - a + 1);
    };
    std::string t = trim(s);
    if (t.empty()) throw IoError("Rational::parse: empty string");
    if (t.find('.') != std::string::npos)
        throw IoError("Rational::parse: decimal forms are not exact: " + s);
    auto slash = t.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(t), BigInt(1));
        BigInt n(trim(t.substr(0, slash)));
        BigInt d(trim(t.substr(slash + 1)));
        if (d == 0) throw IoError("Rational::parse: zero denominator: " + s);
        return Rational(std::move(n), std::move(d));
    } catch (const std::runtime_error&) {
        throw IoError("Rational::parse: malformed rational: " + s);
    }
}

double Rational::to_double() const {
    return boost::multiprecision::cpp_rational(r_.numerator(), r_.denominator())
        .convert_to<double>();
}

std::string Rational::str() const {
    std::ostringstream os;
    os << r_.numerator();
    if (r_.denominator() != 1) os << '/' << r_.denominator();
    return os.str();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw Error("Rational: division by zero");
    r_ /= o.r_;
    return *this;
}

BigInt Rational::floor() const {
    BigInt q = r_.numerator() / r_.denominator();
    if (r_.numerator() < 0 && q * r_.denominator() != r_.numerator()) --q;
    return q;
}

Rational Rational::mod(const Rational& m) const {
    if (!m.positive()) throw Error("Rational::mod: modulus must be positive");
    Rational q = *this / m;
    return *this - Rational(q.floor(), BigInt(1)) * m;
}

BigInt gcd(BigInt a, BigInt b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        BigInt t = a % b;
        a = b;
        b = t;
    }
    return a;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0) return 0;
    BigInt g = gcd(a, b);
    BigInt l = (a / g) * b;
    return l < 0 ? -l : l;
}

Rational rational_lcm(const Rational& a, const Rational& b) {
    if (!a.positive() || !b.positive())
        throw Error("rational_lcm: arguments must be positive");
    return Rational(lcm(a.num(), b.num()), gcd(a.den(), b.den()));
}

}  // namespace steklov
