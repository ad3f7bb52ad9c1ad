#pragma once

#include <compare>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cfx {

using BigInt = mpz_class;

/// Exact rational with arbitrary-precision numerator and denominator.
///
/// Always held in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
    explicit Rational(const BigInt& value) : value_(value) {}
    Rational(const BigInt& numerator, const BigInt& denominator);

    /// Exact conversion; every finite double is a dyadic rational.
    static Rational from_double(double value);
    /// Parses "num/den" or a plain integer.
    static Rational parse(std::string_view text);

    const BigInt& num() const { return value_.get_num(); }
    const BigInt& den() const { return value_.get_den(); }
    const mpq_class& mpq() const { return value_; }

    double to_double() const { return value_.get_d(); }
    std::string str() const;
    int sign() const { return sgn(value_); }

    Rational operator-() const;
    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

    friend bool operator==(const Rational& lhs, const Rational& rhs) {
        return cmp(lhs.value_, rhs.value_) == 0;
    }
    friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
        return cmp(lhs.value_, rhs.value_) <=> 0;
    }

private:
    mpq_class value_;
};

/// Floor and ceiling of an exact rational.
BigInt floor(const Rational& value);
BigInt ceil(const Rational& value);

std::string to_string(const BigInt& value);

}  // namespace cfx
