#include "cfx/gauss_lab.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <thread>

#include "cfx/errors.hpp"

namespace cfx {

namespace {

constexpr mpfr_prec_t kMeasurePrecision = 256;
constexpr std::size_t kDiagnosticStart = 16;

double to_double(const BigInt& value) { return value.get_d(); }

ExtremeSample run_trial(const SimConfig& config, std::size_t trial, std::size_t precision) {
    TrialStream stream(config.seed, trial);
    const BigFloat x = sample_gauss(stream, precision);
    const RealExpansion expansion = expand_real(x, config.n_digits, precision);
    if (expansion.word.size() != config.n_digits) {
        throw PrecisionError("trial " + std::to_string(trial) + " terminated early");
    }
    const auto stats = running_stats(expansion.word);
    ExtremeSample sample;
    sample.trial_index = trial;
    sample.T_n = stats.back().max;
    sample.S_n = stats.back().sum;
    sample.n = config.n_digits;
    sample.diagnostics = law_diagnostics(stats);
    return sample;
}

}  // namespace

double gauss_measure(const Interval& interval) {
    if (interval.left() < Rational(0) || Rational(1) < interval.right()) {
        throw DomainError("gauss_measure requires 0 <= left < right <= 1");
    }
    const Rational ratio = (Rational(1) + interval.right()) / (Rational(1) + interval.left());
    BigFloat r = BigFloat::from_rational(ratio, kMeasurePrecision);
    BigFloat ln2(kMeasurePrecision);
    mpfr_log(r.get(), r.get(), MPFR_RNDN);
    mpfr_const_log2(ln2.get(), MPFR_RNDN);
    mpfr_div(r.get(), r.get(), ln2.get(), MPFR_RNDN);
    return r.to_double();
}

BigFloat gauss_from_uniform(const BigFloat& u, std::size_t precision_bits) {
    BigFloat x(static_cast<mpfr_prec_t>(precision_bits));
    mpfr_exp2(x.get(), u.get(), MPFR_RNDN);
    mpfr_sub_ui(x.get(), x.get(), 1, MPFR_RNDN);  // exact: 2^u lies in [1, 2)
    return x;
}

BigFloat sample_gauss(TrialStream& stream, std::size_t precision_bits) {
    BigFloat u(static_cast<mpfr_prec_t>(precision_bits));
    for (;;) {
        const BigInt k = stream.uniform_bits(precision_bits);
        if (k == 0) {
            continue;
        }
        mpfr_set_z_2exp(u.get(), k.get_mpz_t(), -static_cast<mpfr_exp_t>(precision_bits), MPFR_RNDN);
        BigFloat x = gauss_from_uniform(u, precision_bits);
        // 2^u may round to 1 for u within an ulp of 0; the boundary is redrawn.
        if (mpfr_sgn(x.get()) > 0) {
            return x;
        }
    }
}

std::size_t SimConfig::effective_precision() const {
    return precision_bits == 0 ? required_precision_bits(n_digits) : precision_bits;
}

void SimConfig::validate() const {
    if (n_digits == 0) {
        throw DomainError("simulation requires n_digits >= 1");
    }
    if (trials == 0) {
        throw DomainError("simulation requires trials >= 1");
    }
    if (effective_precision() < required_precision_bits(n_digits)) {
        throw DomainError("simulation precision " + std::to_string(precision_bits) +
                          " is below 4n + 64 = " + std::to_string(required_precision_bits(n_digits)));
    }
    if (workers == 0) {
        throw DomainError("simulation requires workers >= 1");
    }
}

LawDiagnostics law_diagnostics(std::span<const RunningStat> stats) {
    LawDiagnostics out;
    if (stats.size() < kDiagnosticStart) {
        return out;
    }
    out.philipp_min = INFINITY;
    out.iterated_log_max = -INFINITY;
    out.iterated_log_min = INFINITY;
    for (std::size_t k = kDiagnosticStart; k <= stats.size(); ++k) {
        const double dk = static_cast<double>(k);
        const double t = to_double(stats[k - 1].max);
        const double lnlnk = std::log(std::log(dk));
        out.philipp_min = std::min(out.philipp_min, t * lnlnk / dk);
        const double il = (std::log(t) - std::log(dk)) / lnlnk;
        out.iterated_log_max = std::max(out.iterated_log_max, il);
        out.iterated_log_min = std::min(out.iterated_log_min, il);
    }
    return out;
}

SimResult simulate_extremes(const SimConfig& config) {
    config.validate();
    const std::size_t precision = config.effective_precision();

    std::vector<std::optional<ExtremeSample>> slots(config.trials);
    const auto work = [&](std::size_t worker) {
        for (std::size_t t = worker; t < config.trials; t += config.workers) {
            try {
                slots[t] = run_trial(config, t, precision);
            } catch (const PrecisionError&) {
                slots[t].reset();
            }
        }
    };
    if (config.workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(config.workers);
        for (std::size_t w = 0; w < config.workers; ++w) {
            pool.emplace_back(work, w);
        }
    }

    SimResult result;
    result.config = config;
    result.config.precision_bits = precision;
    result.samples.reserve(config.trials);
    for (std::size_t t = 0; t < config.trials; ++t) {
        if (slots[t]) {
            result.samples.push_back(std::move(*slots[t]));
        } else {
            result.failed_trials.push_back(t);
        }
    }
    const double abort_share =
        static_cast<double>(result.failed_trials.size()) / static_cast<double>(config.trials);
    if (abort_share > kMaxAbortFraction) {
        throw PrecisionError("simulation: " + std::to_string(result.failed_trials.size()) +
                             " of " + std::to_string(config.trials) +
                             " trials hit a precision abort (limit 0.1%)");
    }
    return result;
}

std::vector<CdfComparison> galambos_cdf_compare(std::span<const ExtremeSample> samples,
                                                std::span<const double> ys) {
    if (samples.empty()) {
        throw DomainError("galambos_cdf_compare: no samples");
    }
    const std::size_t n = samples.front().n;
    for (const auto& s : samples) {
        if (s.n != n) {
            throw DomainError("galambos_cdf_compare: samples mix different n");
        }
    }
    std::vector<CdfComparison> out;
    out.reserve(ys.size());
    const double scale = std::log(2.0) / static_cast<double>(n);
    for (double y : ys) {
        if (!(y > 0.0)) {
            throw DomainError("galambos_cdf_compare: y must be positive");
        }
        std::size_t below = 0;
        for (const auto& s : samples) {
            if (to_double(s.T_n) * scale < y) ++below;
        }
        CdfComparison row;
        row.y = y;
        row.empirical = static_cast<double>(below) / static_cast<double>(samples.size());
        row.theoretical = std::exp(-1.0 / y);
        row.abs_diff = std::abs(row.empirical - row.theoretical);
        out.push_back(row);
    }
    return out;
}

double trimmed_sum_stat(const ExtremeSample& sample) {
    if (sample.n < 2) {
        throw DomainError("trimmed_sum_stat requires n >= 2");
    }
    const double n = static_cast<double>(sample.n);
    return to_double(sample.S_n - sample.T_n) / (n * std::log(n));
}

double log_ratio_stat(const ExtremeSample& sample) {
    if (sample.n < 3 || sample.T_n < 1) {
        throw DomainError("log_ratio_stat requires n >= 3 and T_n >= 1");
    }
    return std::log(to_double(sample.T_n)) / std::log(static_cast<double>(sample.n));
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw DomainError("median of an empty sample");
    }
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (values.size() % 2 == 1) {
        return *mid;
    }
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

void write_samples_csv(std::ostream& os, std::span<const ExtremeSample> samples) {
    os << "trial,n,T_n,S_n,trimmed_stat,log_ratio\n";
    for (const auto& s : samples) {
        os << s.trial_index << ',' << s.n << ',' << s.T_n.get_str() << ',' << s.S_n.get_str() << ','
           << (s.n >= 2 ? format_double(trimmed_sum_stat(s)) : "") << ','
           << (s.n >= 3 ? format_double(log_ratio_stat(s)) : "") << '\n';
    }
}

}  // namespace cfx
