#include "cfx/rational.hpp"

#include <cmath>

#include "cfx/errors.hpp"

namespace cfx {

Rational::Rational(const BigInt& numerator, const BigInt& denominator)
    : value_(numerator, denominator) {
    if (denominator == 0) {
        throw DomainError("rational with zero denominator");
    }
    value_.canonicalize();
}

Rational Rational::from_double(double value) {
    if (!std::isfinite(value)) {
        throw DomainError("cannot convert a non-finite double to a rational");
    }
    Rational r;
    r.value_ = mpq_class(value);  // mpq_set_d is exact
    return r;
}

Rational Rational::parse(std::string_view text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rational(BigInt(std::string(text), 10));
        }
        return Rational(BigInt(std::string(text.substr(0, slash)), 10),
                        BigInt(std::string(text.substr(slash + 1)), 10));
    } catch (const std::invalid_argument&) {
        throw DomainError("malformed rational: '" + std::string(text) + "'");
    }
}

std::string Rational::str() const {
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational Rational::operator-() const {
    Rational r;
    r.value_ = -value_;
    return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
    value_ += rhs.value_;
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
    value_ -= rhs.value_;
    return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
    value_ *= rhs.value_;
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.sign() == 0) {
        throw DomainError("division by zero");
    }
    value_ /= rhs.value_;
    return *this;
}

BigInt floor(const Rational& value) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), value.num().get_mpz_t(), value.den().get_mpz_t());
    return q;
}

BigInt ceil(const Rational& value) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), value.num().get_mpz_t(), value.den().get_mpz_t());
    return q;
}

std::string to_string(const BigInt& value) { return value.get_str(); }

}  // namespace cfx
