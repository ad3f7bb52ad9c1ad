#include "cfx/bigfloat.hpp"

#include <utility>
#include <vector>

#include "cfx/errors.hpp"

namespace cfx {

BigFloat::BigFloat(mpfr_prec_t precision) {
    mpfr_init2(value_, precision);
    mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
    if (this != &other) {
        mpfr_set_prec(value_, other.precision());
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

BigFloat BigFloat::parse(std::string_view text, mpfr_prec_t precision) {
    BigFloat out(precision);
    const std::string owned(text);
    if (mpfr_set_str(out.value_, owned.c_str(), 10, MPFR_RNDN) != 0) {
        throw DomainError("malformed real number: '" + owned + "'");
    }
    return out;
}

BigFloat BigFloat::from_rational(const Rational& value, mpfr_prec_t precision) {
    BigFloat out(precision);
    mpfr_set_q(out.value_, value.mpq().get_mpq_t(), MPFR_RNDN);
    return out;
}

Rational BigFloat::to_rational() const {
    if (!mpfr_number_p(value_)) {
        throw DomainError("non-finite value has no rational form");
    }
    if (mpfr_zero_p(value_)) {
        return Rational(0);
    }
    BigInt mantissa;
    const mpfr_exp_t exponent = mpfr_get_z_2exp(mantissa.get_mpz_t(), value_);
    BigInt scale = 1;
    if (exponent >= 0) {
        mpz_mul_2exp(mantissa.get_mpz_t(), mantissa.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
    } else {
        mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<mp_bitcnt_t>(-exponent));
    }
    return Rational(mantissa, scale);
}

std::string BigFloat::str(std::size_t digits) const {
    char* raw = nullptr;
    std::string format = digits == 0 ? "%Rg" : "%." + std::to_string(digits) + "Rg";
    if (mpfr_asprintf(&raw, format.c_str(), value_) < 0) {
        return "nan";
    }
    std::string out(raw);
    mpfr_free_str(raw);
    return out;
}

}  // namespace cfx
