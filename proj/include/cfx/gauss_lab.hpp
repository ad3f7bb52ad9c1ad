#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cfx/bigfloat.hpp"
#include "cfx/cf_core.hpp"
#include "cfx/random.hpp"

namespace cfx {

/// Gauss measure (1/ln 2) ln((1 + right) / (1 + left)) of an interval in [0, 1],
/// from the exact endpoint ratio rounded once.
double gauss_measure(const Interval& interval);

/// 2^u - 1 at the given precision (absolute error <= 2^-precision_bits).
BigFloat gauss_from_uniform(const BigFloat& u, std::size_t precision_bits);

/// One Gauss-distributed draw: u uniform on (0, 1) at precision_bits (u = 0
/// is redrawn), mapped through the inverse distribution function 2^u - 1.
BigFloat sample_gauss(TrialStream& stream, std::size_t precision_bits);

struct SimConfig {
    std::size_t n_digits = 0;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    /// 0 selects the minimum 4 n + 64.
    std::size_t precision_bits = 0;
    std::size_t workers = 1;

    std::size_t effective_precision() const;
    void validate() const;
};

/// Running-extreme diagnostics for the almost-sure laws that are not
/// testable at finite n; reported only.
struct LawDiagnostics {
    /// min over k in [16, n] of T_k ln ln k / k (liminf law, limit 1/ln 2).
    double philipp_min = 0.0;
    /// max / min over k in [16, n] of (ln T_k - ln k) / ln ln k (limsup 1, liminf 0).
    double iterated_log_max = 0.0;
    double iterated_log_min = 0.0;
};

struct ExtremeSample {
    std::size_t trial_index = 0;
    BigInt T_n;
    BigInt S_n;
    std::size_t n = 0;
    LawDiagnostics diagnostics;
};

struct SimResult {
    SimConfig config;
    std::vector<ExtremeSample> samples;
    /// Trials whose expansion hit a precision abort, ascending.
    std::vector<std::size_t> failed_trials;
};

/// Maximum tolerated share of aborted trials.
constexpr double kMaxAbortFraction = 0.001;

LawDiagnostics law_diagnostics(std::span<const RunningStat> stats);

/// Seeded Monte Carlo of (T_n, S_n) under Gauss measure. The result depends
/// only on (seed, n_digits, trials, precision_bits), never on workers.
SimResult simulate_extremes(const SimConfig& config);

struct CdfComparison {
    double y = 0.0;
    double empirical = 0.0;
    double theoretical = 0.0;
    double abs_diff = 0.0;
};

/// Empirical P(T_n ln 2 / n < y) against the limit e^{-1/y}.
std::vector<CdfComparison> galambos_cdf_compare(std::span<const ExtremeSample> samples,
                                                std::span<const double> ys);

/// (S_n - T_n) / (n ln n).
double trimmed_sum_stat(const ExtremeSample& sample);
/// ln T_n / ln n.
double log_ratio_stat(const ExtremeSample& sample);

double median(std::vector<double> values);

/// CSV with columns trial,n,T_n,S_n,trimmed_stat,log_ratio.
void write_samples_csv(std::ostream& os, std::span<const ExtremeSample> samples);

/// Locale-independent shortest round-trip formatting.
std::string format_double(double value);

}  // namespace cfx
