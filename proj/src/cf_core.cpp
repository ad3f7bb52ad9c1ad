#include "cfx/cf_core.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "cfx/errors.hpp"

namespace cfx {

namespace {

void require_valid_digits(const std::vector<BigInt>& digits) {
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] < 1) {
            throw DomainError("partial quotient a_" + std::to_string(i + 1) + " = " +
                              digits[i].get_str() + " is not a positive integer");
        }
    }
}

}  // namespace

CFWord::CFWord(std::vector<BigInt> digits) : digits_(std::move(digits)) {
    require_valid_digits(digits_);
}

CFWord::CFWord(std::initializer_list<long> digits) {
    digits_.reserve(digits.size());
    for (long d : digits) {
        digits_.emplace_back(d);
    }
    require_valid_digits(digits_);
}

CFWord CFWord::parse(std::string_view text) {
    std::vector<BigInt> digits;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto token = text.substr(start, end - start);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (token.empty()) {
            throw DomainError("empty digit in '" + std::string(text) + "'");
        }
        try {
            digits.emplace_back(std::string(token), 10);
        } catch (const std::invalid_argument&) {
            throw DomainError("malformed digit '" + std::string(token) + "'");
        }
        start = end + 1;
    }
    return CFWord(std::move(digits));
}

bool CFWord::is_canonical() const { return digits_.size() < 2 || digits_.back() >= 2; }

CFWord CFWord::prefix(std::size_t length) const {
    length = std::min(length, digits_.size());
    CFWord out;
    out.digits_.assign(digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(length));
    return out;
}

CFWord CFWord::extended(const BigInt& digit) const {
    if (digit < 1) {
        throw DomainError("partial quotient " + digit.get_str() + " is not a positive integer");
    }
    CFWord out = *this;
    out.digits_.push_back(digit);
    return out;
}

std::string CFWord::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        if (i) os << ',';
        os << digits_[i].get_str();
    }
    os << ']';
    return os.str();
}

Interval::Interval(Rational left, Rational right, Closure left_closure, Closure right_closure)
    : left_(std::move(left)),
      right_(std::move(right)),
      left_closure_(left_closure),
      right_closure_(right_closure) {
    if (!(left_ < right_)) {
        throw DomainError("interval requires left < right, got [" + left_.str() + ", " +
                          right_.str() + "]");
    }
}

bool Interval::contains(const Interval& other) const {
    const bool left_ok = left_ < other.left_ ||
                         (left_ == other.left_ && (left_closure_ == Closure::closed ||
                                                   other.left_closure_ == Closure::open));
    const bool right_ok = other.right_ < right_ ||
                          (right_ == other.right_ && (right_closure_ == Closure::closed ||
                                                      other.right_closure_ == Closure::open));
    return left_ok && right_ok;
}

bool Interval::closures_meet(const Interval& other) const {
    return !(right_ < other.left_ || other.right_ < left_);
}

Rational evaluate_cf(const CFWord& word) {
    if (word.empty()) {
        throw DomainError("evaluate_cf: empty continued fraction");
    }
    // Backward nesting: x = 1 / (a_k + x_next), starting from the tail.
    BigInt num = 0;
    BigInt den = 1;
    for (auto it = word.digits().rbegin(); it != word.digits().rend(); ++it) {
        // 1 / (a + num/den) = den / (a*den + num)
        BigInt next_den = (*it) * den + num;
        num = std::move(den);
        den = std::move(next_den);
    }
    return Rational(num, den);
}

std::vector<ConvergentPair> convergents(const CFWord& word) {
    std::vector<ConvergentPair> out;
    out.reserve(word.size());
    BigInt p_prev = 1, q_prev = 0;  // k = -1
    BigInt p = 0, q = 1;            // k = 0
    for (std::size_t k = 0; k < word.size(); ++k) {
        BigInt p_next = word[k] * p + p_prev;
        BigInt q_next = word[k] * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(p_next);
        q = std::move(q_next);
        out.push_back({p, q, k + 1});
    }
    return out;
}

CFWord expand_rational(const Rational& value) {
    if (!(Rational(0) < value && value < Rational(1))) {
        throw DomainError("expand_rational requires 0 < r < 1, got " + value.str());
    }
    std::vector<BigInt> digits;
    BigInt num = value.num();
    BigInt den = value.den();
    while (num != 0) {
        BigInt digit, rem;
        mpz_fdiv_qr(digit.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
        digits.push_back(std::move(digit));
        den = std::move(num);
        num = std::move(rem);
    }
    // Euclid on a reduced fraction < 1 always ends on a quotient >= 2.
    return CFWord(std::move(digits));
}

RealExpansion expand_real(const BigFloat& x, std::size_t n, std::size_t precision_bits,
                          RealInput kind) {
    if (!mpfr_number_p(x.get()) || mpfr_sgn(x.get()) <= 0 ||
        mpfr_cmp_ui(x.get(), 1) >= 0) {
        throw DomainError("expand_real requires 0 < x < 1");
    }
    if (precision_bits < required_precision_bits(n)) {
        throw DomainError("expand_real: precision_bits = " + std::to_string(precision_bits) +
                          " is below the required 4n + 64 = " +
                          std::to_string(required_precision_bits(n)));
    }
    if (kind == RealInput::rounded && static_cast<std::size_t>(x.precision()) < precision_bits) {
        throw DomainError("expand_real: input carries " + std::to_string(x.precision()) +
                          " mantissa bits, fewer than precision_bits = " +
                          std::to_string(precision_bits));
    }

    // x = mantissa * 2^exponent with exponent < 0 since 0 < x < 1.
    BigInt mantissa;
    const mpfr_exp_t exponent = mpfr_get_z_2exp(mantissa.get_mpz_t(), x.get());
    const auto frac_bits = static_cast<mp_bitcnt_t>(-exponent);

    RealExpansion result;
    std::vector<BigInt> digits;
    digits.reserve(n);

    if (kind == RealInput::exact) {
        BigInt num = mantissa;
        BigInt den = 1;
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), frac_bits);
        BigInt digit, rem;
        while (digits.size() < n) {
            if (num == 0) {
                result.truncated = true;
                break;
            }
            mpz_fdiv_qr(digit.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
            digits.push_back(digit);
            mpz_swap(den.get_mpz_t(), num.get_mpz_t());
            mpz_swap(num.get_mpz_t(), rem.get_mpz_t());
        }
        result.word = CFWord(std::move(digits));
        return result;
    }

    // Enclosure [x - 2^-P, x + 2^-P] over the common denominator 2^K.
    const mp_bitcnt_t scale_bits = std::max<mp_bitcnt_t>(frac_bits, precision_bits);
    BigInt center = mantissa;
    mpz_mul_2exp(center.get_mpz_t(), center.get_mpz_t(), scale_bits - frac_bits);
    BigInt radius = 1;
    mpz_mul_2exp(radius.get_mpz_t(), radius.get_mpz_t(), scale_bits - precision_bits);
    BigInt one = 1;
    mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), scale_bits);

    BigInt lo_num = center - radius, lo_den = one;
    BigInt hi_num = center + radius, hi_den = one;
    if (lo_num <= 0) {
        throw PrecisionError("expand_real: error interval of x reaches 0 before digit 1");
    }
    if (hi_num > hi_den) {
        hi_num = hi_den;  // x < 1 is a precondition
    }

    BigInt d_lo, r_lo, d_hi, r_hi;
    while (digits.size() < n) {
        if (lo_num == 0 || hi_num == 0) {
            throw PrecisionError("expand_real: error interval reaches 0 at digit " +
                                 std::to_string(digits.size() + 1) +
                                 " (digit unbounded at this precision)");
        }
        mpz_fdiv_qr(d_lo.get_mpz_t(), r_lo.get_mpz_t(), lo_den.get_mpz_t(), lo_num.get_mpz_t());
        mpz_fdiv_qr(d_hi.get_mpz_t(), r_hi.get_mpz_t(), hi_den.get_mpz_t(), hi_num.get_mpz_t());
        if (d_lo != d_hi) {
            throw PrecisionError("expand_real: digit " + std::to_string(digits.size() + 1) +
                                 " uncertain (" + d_hi.get_str() + " vs " + d_lo.get_str() +
                                 ") at " + std::to_string(precision_bits) + " bits");
        }
        digits.push_back(d_lo);
        // Gauss map: r -> den mod num / num on each endpoint.
        mpz_swap(lo_den.get_mpz_t(), lo_num.get_mpz_t());
        mpz_swap(lo_num.get_mpz_t(), r_lo.get_mpz_t());
        mpz_swap(hi_den.get_mpz_t(), hi_num.get_mpz_t());
        mpz_swap(hi_num.get_mpz_t(), r_hi.get_mpz_t());
    }
    result.word = CFWord(std::move(digits));
    return result;
}

std::vector<RunningStat> running_stats(const CFWord& word) {
    if (word.empty()) {
        throw DomainError("running_stats: empty word");
    }
    std::vector<RunningStat> out;
    out.reserve(word.size());
    BigInt max = word[0];
    BigInt sum = 0;
    for (const auto& d : word.digits()) {
        if (d > max) max = d;
        sum += d;
        out.push_back({max, sum});
    }
    return out;
}

CylinderInfo cylinder_interval(const CFWord& word) {
    BigInt p_prev = 1, q_prev = 0;
    BigInt p = 0, q = 1;
    for (const auto& a : word.digits()) {
        BigInt p_next = a * p + p_prev;
        BigInt q_next = a * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(p_next);
        q = std::move(q_next);
    }
    Rational convergent(p, q);
    Rational mediant(p + p_prev, q + q_prev);
    Rational length(BigInt(1), q * (q + q_prev));
    // p_n/q_n is the left endpoint for even n, the right one for odd n.
    if (word.size() % 2 == 0) {
        return {Interval(std::move(convergent), std::move(mediant)), std::move(length)};
    }
    return {Interval(std::move(mediant), std::move(convergent)), std::move(length)};
}

bool check_qn_bounds(const CFWord& word) {
    BigInt lower = 1, upper = 1;
    for (const auto& a : word.digits()) {
        lower *= a;
        upper *= a + 1;
    }
    const BigInt q = word.empty() ? BigInt(1) : convergents(word).back().q;
    return lower <= q && q <= upper;
}

}  // namespace cfx
