#ifndef POLYSTAB_RATIONAL_HPP
#define POLYSTAB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace polystab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Exact rational value with a binary64 view.
///
/// All closed-form constants are evaluated in integer arithmetic and kept
/// exact; the double view is derived by rounding, never the other way round.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long long n) : v_(n) {}                       // NOLINT(google-explicit-constructor)
    Rational(const BigInt& n) : v_(n) {}                   // NOLINT(google-explicit-constructor)
    Rational(const BigInt& num, const BigInt& den) : v_(num, den) {}
    explicit Rational(const BigRat& v) : v_(v) {}

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }
    bool is_integer() const { return denominator() == 1; }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { v_ /= o.v_; return *this; }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    /// Correctly rounded binary64 view of the exact value.
    double to_double() const {
        BigInt num = numerator(), den = denominator();
        const bool neg = num < 0;
        if (neg) num = -num;
        // When both parts are exactly representable, IEEE division rounds
        // correctly in one step.
        static const BigInt two53 = BigInt(1) << 53;
        if (num < two53 && den < two53) {
            const double d = static_cast<double>(num) / static_cast<double>(den);
            return neg ? -d : d;
        }
        // Scale so that num/den lands in [2^62, 2^63) and divide in extended
        // precision; the final rounding is then dominated by the 80/64-bit
        // significand headroom.
        long shift = 0;
        BigInt n = num, d = den;
        while (n / d >= (BigInt(1) << 63)) { d <<= 1; ++shift; }
        while (n / d < (BigInt(1) << 62)) { n <<= 1; --shift; }
        const BigInt q = (n << 11) / d;  // 74 significant bits
        long double ld = static_cast<long double>(static_cast<std::uint64_t>(q >> 11));
        ld += static_cast<long double>(static_cast<std::uint64_t>(q & 0x7ff)) / 2048.0L;
        ld = std::ldexp(ld, static_cast<int>(shift));
        const double out = static_cast<double>(ld);
        return neg ? -out : out;
    }

    /// Render as "p/q", or "p" when the value is an integer.
    std::string str() const {
        std::string s = numerator().str();
        if (!is_integer()) s += "/" + denominator().str();
        return s;
    }

private:
    BigRat v_;
};

} // namespace polystab

#endif
