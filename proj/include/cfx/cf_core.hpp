#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "cfx/bigfloat.hpp"
#include "cfx/rational.hpp"

namespace cfx {

/// Finite sequence of partial quotients a_1, ..., a_n, every one >= 1.
class CFWord {
public:
    CFWord() = default;
    explicit CFWord(std::vector<BigInt> digits);
    CFWord(std::initializer_list<long> digits);

    /// Parses a comma-separated digit list such as "1,2,2".
    static CFWord parse(std::string_view text);

    const std::vector<BigInt>& digits() const { return digits_; }
    std::size_t size() const { return digits_.size(); }
    bool empty() const { return digits_.empty(); }
    const BigInt& operator[](std::size_t i) const { return digits_[i]; }

    /// Canonical finite form: the last digit is >= 2 whenever there are at
    /// least two digits.
    bool is_canonical() const;

    CFWord prefix(std::size_t length) const;
    CFWord extended(const BigInt& digit) const;

    std::string str() const;

    friend bool operator==(const CFWord&, const CFWord&) = default;

private:
    std::vector<BigInt> digits_;
};

enum class Closure { open, closed };

/// Interval with exact rational endpoints; left < right.
class Interval {
public:
    Interval(Rational left, Rational right, Closure left_closure = Closure::open,
             Closure right_closure = Closure::open);

    static Interval closed(Rational left, Rational right) {
        return Interval(std::move(left), std::move(right), Closure::closed, Closure::closed);
    }

    const Rational& left() const { return left_; }
    const Rational& right() const { return right_; }
    Closure left_closure() const { return left_closure_; }
    Closure right_closure() const { return right_closure_; }

    Rational length() const { return right_ - left_; }
    Interval closure() const { return closed(left_, right_); }

    /// Containment of the underlying point sets (closure-aware).
    bool contains(const Interval& other) const;
    /// True when the closures of the two intervals share at least one point.
    bool closures_meet(const Interval& other) const;

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    Rational left_;
    Rational right_;
    Closure left_closure_;
    Closure right_closure_;
};

struct ConvergentPair {
    BigInt p;
    BigInt q;
    std::size_t index = 0;
};

struct CylinderInfo {
    Interval interval;
    Rational length;
};

/// Running maximum T_k and running sum S_k of a digit prefix.
struct RunningStat {
    BigInt max;
    BigInt sum;
};

enum class RealInput {
    /// The value carries an absolute error of at most 2^-precision_bits.
    rounded,
    /// The value is exactly the dyadic rational held.
    exact,
};

struct RealExpansion {
    CFWord word;
    /// Set when the expansion terminated (exact rational input) before the
    /// requested number of digits.
    bool truncated = false;
};

/// Exact value of the finite continued fraction [a_1, ..., a_n].
Rational evaluate_cf(const CFWord& word);

/// (p_k, q_k) for k = 1..n from the three-term recursion with
/// p_{-1} = 1, q_{-1} = 0, p_0 = 0, q_0 = 1.
std::vector<ConvergentPair> convergents(const CFWord& word);

/// Canonical expansion of a rational in (0, 1) by Euclidean division.
CFWord expand_rational(const Rational& value);

/// Minimum mantissa bits required by expand_real for n digits.
constexpr std::size_t required_precision_bits(std::size_t n) { return 4 * n + 64; }

/// First n partial quotients of x in (0, 1) by Gauss-map steps.
///
/// The value is tracked as a rigorous enclosing interval with exact dyadic
/// endpoints; each step applies the Gauss map to both endpoints and accepts a
/// digit only when they agree. Throws PrecisionError rather than emitting an
/// uncertain digit.
RealExpansion expand_real(const BigFloat& x, std::size_t n, std::size_t precision_bits,
                          RealInput kind = RealInput::rounded);

std::vector<RunningStat> running_stats(const CFWord& word);

/// The cylinder I(a_1..a_n), returned open, together with its exact length
/// 1 / (q_n (q_n + q_{n-1})). The empty word gives (0, 1).
CylinderInfo cylinder_interval(const CFWord& word);

/// prod a_k <= q_n <= prod (a_k + 1), checked exactly.
bool check_qn_bounds(const CFWord& word);

}  // namespace cfx
