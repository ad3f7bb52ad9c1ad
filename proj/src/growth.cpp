#include "cfx/growth.hpp"

#include <cmath>
#include <sstream>

#include "cfx/errors.hpp"

namespace cfx {

namespace {

constexpr std::size_t kThresholdScanCap = 1'000'000'000;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string("growth parameter ") + name + " must be a positive finite number");
    }
}

void require_above_one(double value, const char* name) {
    if (!(value > 1.0) || !std::isfinite(value)) {
        throw DomainError(std::string("growth parameter ") + name + " must be > 1");
    }
}

// ln ln phi(n) for the families where it is the natural coordinate.
double log_log_phi(const GrowthSpec& spec, std::size_t n) {
    const double dn = static_cast<double>(n);
    return std::visit(Overloaded{
                          [&](const Polynomial& p) { return std::log(p.power * std::log(dn)); },
                          [&](const SingleExp& s) { return s.alpha * std::log(dn); },
                          [&](const DoublyExp& d) {
                              return std::pow(dn, d.alpha) * std::log(d.b) + std::log(std::log(d.c));
                          },
                          [&](const Geometric& g) { return std::log(dn * std::log(g.base)); },
                      },
                      spec.family());
}

// ln(e^hi - e^lo) for hi > lo.
double log_diff_exp(double hi, double lo) { return hi + std::log(-std::expm1(lo - hi)); }

// The increments of ln phi are non-decreasing from m on, and already large
// enough at m for both the g and phi/n conditions; or, for concave single
// exponentials, a monotone sufficient inequality holds at m.
bool tail_certified(const GrowthSpec& spec, std::size_t m) {
    const double dm = static_cast<double>(m);
    const double beta = spec.beta();
    const auto increments_ok = [&] {
        return log_increment(spec, m) >= std::log(std::log1p(1.0 / dm)) &&
               threshold_conditions(spec, m).g_non_decreasing;
    };
    return std::visit(
        Overloaded{
            [&](const Polynomial&) -> bool { throw DomainError("threshold_N: polynomial growth is excluded"); },
            [&](const SingleExp& s) {
                if (s.alpha >= 1.0) return increments_ok();
                return s.alpha * dm * std::pow(dm + 1.0, s.alpha - 1.0) >= 1.0 &&
                       s.alpha * beta * dm * std::pow(dm + 1.0, s.alpha) >= 1.0;
            },
            [&](const DoublyExp& d) {
                const bool convex =
                    d.alpha >= 1.0 || d.alpha * std::pow(dm, d.alpha) * std::log(d.b) >= 1.0 - d.alpha;
                return convex && increments_ok();
            },
            [&](const Geometric&) { return increments_ok(); },
        },
        spec.family());
}

const DoublyExp& require_inclusion_params(const GrowthSpec& spec, double d, double delta) {
    const DoublyExp* de = spec.doubly();
    if (de == nullptr) {
        throw DomainError("inclusion inequalities require a doubly exponential spec");
    }
    if (!(d > 1.0 && d < de->b)) {
        throw DomainError("inclusion inequalities require b > d > 1");
    }
    const double beta = spec.beta();
    if (!(delta > 0.0 && delta < beta)) {
        throw DomainError("inclusion inequalities require 0 < delta < beta");
    }
    if (!((beta - delta) * de->c > beta + delta)) {
        throw DomainError("inclusion inequalities require (beta - delta) c > beta + delta, i.e. "
                          "delta < beta (c - 1) / (c + 1)");
    }
    return *de;
}

}  // namespace

GrowthSpec::GrowthSpec(Family family, double beta) : family_(family), beta_(beta) {
    require_positive(beta, "beta");
}

GrowthSpec GrowthSpec::polynomial(double power, double beta) {
    require_positive(power, "p");
    return GrowthSpec(Polynomial{power}, beta);
}

GrowthSpec GrowthSpec::single_exp(double alpha, double beta) {
    require_positive(alpha, "alpha");
    return GrowthSpec(SingleExp{alpha}, beta);
}

GrowthSpec GrowthSpec::doubly_exp(double b, double c, double alpha, double beta) {
    require_above_one(b, "b");
    require_above_one(c, "c");
    require_positive(alpha, "alpha");
    return GrowthSpec(DoublyExp{b, c, alpha}, beta);
}

GrowthSpec GrowthSpec::geometric(double base, double beta) {
    require_above_one(base, "base");
    return GrowthSpec(Geometric{base}, beta);
}

std::string GrowthSpec::family_name() const {
    return std::visit(Overloaded{
                          [](const Polynomial&) { return "polynomial"; },
                          [](const SingleExp&) { return "single"; },
                          [](const DoublyExp&) { return "doubly"; },
                          [](const Geometric&) { return "geometric"; },
                      },
                      family_);
}

std::string GrowthSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(Overloaded{
                   [&](const Polynomial& p) { os << "phi(n) = n^" << p.power; },
                   [&](const SingleExp& s) { os << "phi(n) = exp(n^" << s.alpha << ")"; },
                   [&](const DoublyExp& d) {
                       os << "phi(n) = " << d.c << "^(" << d.b << "^(n^" << d.alpha << "))";
                   },
                   [&](const Geometric& g) { os << "phi(n) = " << g.base << "^n"; },
               },
               family_);
    os << ", beta = " << beta_;
    return os.str();
}

LogScalar LogScalar::from_log(double log_value) {
    LogScalar out;
    out.log_value_ = log_value;
    if (std::abs(log_value) > overflow_threshold) {
        out.log_abs_log_ = std::log(std::abs(log_value));
    }
    return out;
}

LogScalar LogScalar::from_log_log(double log_abs_log, int sign) {
    LogScalar out;
    const double magnitude = std::exp(log_abs_log);
    out.log_value_ = sign < 0 ? -magnitude : magnitude;
    if (magnitude > overflow_threshold) {
        out.log_abs_log_ = log_abs_log;
    }
    return out;
}

double LogScalar::log_abs_log() const {
    if (log_abs_log_) {
        return *log_abs_log_;
    }
    return std::log(std::abs(log_value_));
}

double LogScalar::value() const { return std::exp(log_value_); }

LogScalar LogScalar::shifted(double offset) const {
    if (!log_abs_log_) {
        return from_log(log_value_ + offset);
    }
    const int sign = log_value_ < 0 ? -1 : 1;
    const double rel = sign * offset * std::exp(-*log_abs_log_);
    return from_log_log(*log_abs_log_ + std::log1p(rel), sign);
}

LogScalar log_phi(const GrowthSpec& spec, std::size_t n) {
    if (n == 0) {
        throw DomainError("log_phi requires n >= 1");
    }
    const double dn = static_cast<double>(n);
    return std::visit(Overloaded{
                          [&](const Polynomial& p) { return LogScalar::from_log(p.power * std::log(dn)); },
                          [&](const SingleExp&) { return LogScalar::from_log_log(log_log_phi(spec, n)); },
                          [&](const DoublyExp&) { return LogScalar::from_log_log(log_log_phi(spec, n)); },
                          [&](const Geometric& g) { return LogScalar::from_log(dn * std::log(g.base)); },
                      },
                      spec.family());
}

std::optional<LogScalar> bound_f(const GrowthSpec& spec, std::size_t n) {
    const double factor = spec.beta() - 1.0 / static_cast<double>(n);
    if (!(factor > 0.0)) {
        return std::nullopt;
    }
    return log_phi(spec, n).shifted(std::log(factor));
}

LogScalar bound_g(const GrowthSpec& spec, std::size_t n) {
    return log_phi(spec, n).shifted(std::log(spec.beta() + 1.0 / static_cast<double>(n)));
}

double log_increment(const GrowthSpec& spec, std::size_t n) {
    if (n == 0) {
        throw DomainError("log_increment requires n >= 1");
    }
    const double dn = static_cast<double>(n);
    return std::visit(Overloaded{
                          [&](const Polynomial& p) { return std::log(p.power * std::log1p(1.0 / dn)); },
                          [&](const Geometric& g) { return std::log(std::log(g.base)); },
                          [&](const auto&) {
                              return log_diff_exp(log_log_phi(spec, n + 1), log_log_phi(spec, n));
                          },
                      },
                      spec.family());
}

ThresholdConditions threshold_conditions(const GrowthSpec& spec, std::size_t n) {
    const double dn = static_cast<double>(n);
    const double ln2 = std::log(2.0);
    ThresholdConditions out{};
    const auto f = bound_f(spec, n);
    out.f_at_least_two = f.has_value() && f->log() >= ln2;
    // g(n+1)/g(n) = exp(L(n+1) - L(n)) * (beta + 1/(n+1)) / (beta + 1/n)
    const double needed = std::log1p(1.0 / (dn * (dn + 1.0) * spec.beta() + dn));
    out.g_non_decreasing = log_increment(spec, n) >= std::log(needed);
    out.phi_over_n_at_least_two = log_phi(spec, n).log() - std::log(dn) >= ln2;
    return out;
}

std::size_t threshold_N(const GrowthSpec& spec) {
    if (std::holds_alternative<Polynomial>(spec.family())) {
        throw DomainError("threshold_N: polynomial growth is excluded");
    }
    std::size_t anchor = 0;
    for (std::size_t m = 1; m <= kThresholdScanCap; ++m) {
        if (threshold_conditions(spec, m).all() && tail_certified(spec, m)) {
            anchor = m;
            break;
        }
    }
    if (anchor == 0) {
        throw DomainError("threshold_N: no certified threshold below the scan cap for " +
                          spec.describe());
    }
    std::size_t N = anchor;
    while (N > 1 && threshold_conditions(spec, N - 1).all()) {
        --N;
    }
    return N;
}

double default_delta(const GrowthSpec& spec) {
    const DoublyExp* de = spec.doubly();
    if (de == nullptr) {
        throw DomainError("default_delta requires a doubly exponential spec");
    }
    return spec.beta() * (de->c - 1.0) / (2.0 * (de->c + 1.0));
}

double default_d(const GrowthSpec& spec) {
    const DoublyExp* de = spec.doubly();
    if (de == nullptr) {
        throw DomainError("default_d requires a doubly exponential spec");
    }
    return (de->b + 1.0) / 2.0;
}

InclusionCheck inclusion_check(const GrowthSpec& spec, double d, double delta, std::size_t n) {
    const DoublyExp& de = require_inclusion_params(spec, d, delta);
    if (n == 0) {
        throw DomainError("inclusion_check requires n >= 1");
    }
    const double beta = spec.beta();
    const double ln_b = std::log(de.b);
    const double ln_d = std::log(d);
    const double lnln_c = std::log(std::log(de.c));
    const double t1 = std::pow(static_cast<double>(n + 1), de.alpha);
    const double t0 = std::pow(static_cast<double>(n), de.alpha);

    InclusionCheck out{};
    out.exponent_gap = log_diff_exp(t1 * ln_b, t0 * ln_b) >= 0.0;

    // With A = ln phi(n+1), B = ln phi(n), D = ln c * d^{(n+1)^alpha}:
    //   (beta-delta) e^A - (beta+delta) e^B >= e^D
    //   <=>  kappa = (beta-delta) - (beta+delta) e^{-(A-B)} > 0  and  A - D >= -ln kappa.
    const double log_a = t1 * ln_b + lnln_c;
    const double log_b = t0 * ln_b + lnln_c;
    const double log_d = t1 * ln_d + lnln_c;
    const double a_minus_b = std::exp(log_diff_exp(log_a, log_b));
    const double kappa = (beta - delta) - (beta + delta) * std::exp(-a_minus_b);
    if (!(kappa > 0.0)) {
        out.growth_gap = false;
        return out;
    }
    const double ln_kappa = std::log(kappa);
    out.growth_gap = ln_kappa >= 0.0 || log_diff_exp(log_a, log_d) >= std::log(-ln_kappa);
    return out;
}

std::optional<std::size_t> find_N0(const GrowthSpec& spec, double d, double delta,
                                   std::size_t horizon) {
    require_inclusion_params(spec, d, delta);
    if (horizon == 0 || !inclusion_check(spec, d, delta, horizon).both()) {
        return std::nullopt;
    }
    std::size_t n0 = horizon;
    while (n0 > 1 && inclusion_check(spec, d, delta, n0 - 1).both()) {
        --n0;
    }
    return n0;
}

bool verify_inclusion_inequalities(const GrowthSpec& spec, double d, double delta,
                                   std::size_t N0, std::size_t n_max) {
    require_inclusion_params(spec, d, delta);
    for (std::size_t n = std::max<std::size_t>(N0, 1); n <= n_max; ++n) {
        if (!inclusion_check(spec, d, delta, n).both()) {
            return false;
        }
    }
    return true;
}

}  // namespace cfx
