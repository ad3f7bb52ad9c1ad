#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>

namespace cfx {

// Growth families for phi(n). All logarithms in this library are natural.

/// phi(n) = n^power.
struct Polynomial {
    double power;
};
/// phi(n) = e^{n^alpha}.
struct SingleExp {
    double alpha;
};
/// phi(n) = c^{b^{n^alpha}}.
struct DoublyExp {
    double b;
    double c;
    double alpha;
};
/// phi(n) = base^n. Desk-scale surrogate for exact enumeration tests; it is
/// not one of the families with a closed-form dimension.
struct Geometric {
    double base;
};

using Family = std::variant<Polynomial, SingleExp, DoublyExp, Geometric>;

/// phi together with the target limit beta of T_n / phi(n).
class GrowthSpec {
public:
    static GrowthSpec polynomial(double power, double beta = 1.0);
    static GrowthSpec single_exp(double alpha, double beta = 1.0);
    static GrowthSpec doubly_exp(double b, double c, double alpha, double beta = 1.0);
    static GrowthSpec geometric(double base, double beta = 1.0);

    const Family& family() const { return family_; }
    double beta() const { return beta_; }

    /// "polynomial", "single", "doubly" or "geometric".
    std::string family_name() const;
    std::string describe() const;

    const DoublyExp* doubly() const { return std::get_if<DoublyExp>(&family_); }

private:
    GrowthSpec(Family family, double beta);

    Family family_;
    double beta_;
};

/// A real number of either sign held through its natural logarithm.
///
/// Beyond the native range (|log| > overflow_threshold) the logarithm of the
/// absolute logarithm is stored and authoritative; log() may then be +-inf.
class LogScalar {
public:
    static constexpr double overflow_threshold = 700.0;

    LogScalar() = default;
    static LogScalar from_log(double log_value);
    /// Builds sign * exp(log_abs_log) as the log value.
    static LogScalar from_log_log(double log_abs_log, int sign = 1);

    double log() const { return log_value_; }
    /// ln |log()|; exact stored value in the overflow regime.
    double log_abs_log() const;
    bool overflow() const { return log_abs_log_.has_value(); }
    const std::optional<double>& stored_log_log() const { return log_abs_log_; }

    /// The represented quantity exp(log()) (0 or inf outside double range).
    double value() const;

    /// The logarithm shifted by a finite offset, staying accurate in the
    /// overflow regime: represents exp(log() + offset).
    LogScalar shifted(double offset) const;

private:
    double log_value_ = 0.0;
    std::optional<double> log_abs_log_;
};

/// ln phi(n).
LogScalar log_phi(const GrowthSpec& spec, std::size_t n);

/// ln f(n) with f(n) = (beta - 1/n) phi(n); nullopt when beta - 1/n <= 0.
std::optional<LogScalar> bound_f(const GrowthSpec& spec, std::size_t n);
/// ln g(n) with g(n) = (beta + 1/n) phi(n).
LogScalar bound_g(const GrowthSpec& spec, std::size_t n);

/// ln(L(n+1) - L(n)) with L = ln phi.
double log_increment(const GrowthSpec& spec, std::size_t n);

/// The three lower-bound construction conditions at a single index:
/// f(n) >= 2, g(n+1) >= g(n), phi(n)/n >= 2.
struct ThresholdConditions {
    bool f_at_least_two;
    bool g_non_decreasing;
    bool phi_over_n_at_least_two;
    bool all() const { return f_at_least_two && g_non_decreasing && phi_over_n_at_least_two; }
};
ThresholdConditions threshold_conditions(const GrowthSpec& spec, std::size_t n);

/// Least N with all three conditions holding for every n >= N. The tail is
/// certified analytically (eventual monotonicity of the increments of
/// ln phi), the head by direct scan. Polynomial specs are rejected.
std::size_t threshold_N(const GrowthSpec& spec);

// Upper-bound inclusion E(b,c,alpha,beta) in E*(d,c,alpha) for b > d > 1.

/// beta (c - 1) / (2 (c + 1)): half the largest delta with (beta-delta) c > beta+delta.
double default_delta(const GrowthSpec& spec);
/// (b + 1) / 2.
double default_d(const GrowthSpec& spec);

/// The two per-index inequalities behind the inclusion.
struct InclusionCheck {
    /// b^{(n+1)^alpha} - b^{n^alpha} >= 1, i.e. phi(n+1)/phi(n) >= c.
    bool exponent_gap;
    /// (beta-delta) phi(n+1) - (beta+delta) phi(n) >= c^{d^{(n+1)^alpha}}.
    bool growth_gap;
    bool both() const { return exponent_gap && growth_gap; }
};
InclusionCheck inclusion_check(const GrowthSpec& spec, double d, double delta, std::size_t n);

/// Least N0 <= horizon such that both inequalities hold on [N0, horizon];
/// nullopt when they fail at the horizon itself.
std::optional<std::size_t> find_N0(const GrowthSpec& spec, double d, double delta,
                                   std::size_t horizon);

/// True iff both inequalities hold for every n in [N0, n_max] (vacuous when
/// n_max < N0).
bool verify_inclusion_inequalities(const GrowthSpec& spec, double d, double delta,
                                   std::size_t N0, std::size_t n_max);

}  // namespace cfx
