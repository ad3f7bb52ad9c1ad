#pragma once

#include <string>
#include <string_view>

#include <mpfr.h>

#include "cfx/rational.hpp"

namespace cfx {

// Owning value wrapper around an mpfr_t.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t precision);
    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    /// Correctly rounded (to nearest) parse of a decimal string.
    static BigFloat parse(std::string_view text, mpfr_prec_t precision);
    /// Correctly rounded (to nearest) conversion of an exact rational.
    static BigFloat from_rational(const Rational& value, mpfr_prec_t precision);

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

    double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
    /// The exact dyadic value held.
    Rational to_rational() const;
    std::string str(std::size_t digits = 0) const;

private:
    mpfr_t value_;
};

}  // namespace cfx
