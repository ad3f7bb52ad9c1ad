#include "cfx/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cfx/errors.hpp"
#include "cfx/gauss_lab.hpp"

namespace cfx {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double log_add(double a, double b) {
    if (a == -INFINITY) return b;
    if (b == -INFINITY) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// ln(e^hi - e^lo), hi > lo.
double log_sub(double hi, double lo) {
    if (lo == -INFINITY) return hi;
    return hi + std::log(-std::expm1(lo - hi));
}

std::size_t tail_start(std::size_t n_max, double tail_fraction) {
    if (!(tail_fraction >= 0.0 && tail_fraction < 1.0)) {
        throw DomainError("tail fraction must lie in [0, 1)");
    }
    const auto start = static_cast<std::size_t>(std::floor(static_cast<double>(n_max) * tail_fraction));
    return std::max<std::size_t>(start, 1);
}

void reduce_tail(DimEstimate& est, std::size_t n_max, double tail_fraction) {
    const std::size_t start = tail_start(n_max, tail_fraction);
    double best = INFINITY;
    for (const auto& [n, ratio] : est.partials) {
        if (n >= start) best = std::min(best, ratio);
    }
    est.value = std::clamp(best, 0.0, 1.0);
}

DimEstimate table_value(DimMethod method, Rational value) {
    DimEstimate est;
    est.method = method;
    est.value = value.to_double();
    est.exact = std::move(value);
    return est;
}

Rational one_over_b_plus_one(double b) { return Rational(1) / (Rational::from_double(b) + Rational(1)); }

GrowthSpec with_param(const GrowthSpec& base, SweepParam param, double value) {
    const double beta = param == SweepParam::beta ? value : base.beta();
    const auto reject = [&]() -> GrowthSpec {
        throw DomainError("sweep parameter " + sweep_param_name(param) + " does not apply to the " +
                          base.family_name() + " family");
    };
    return std::visit(
        Overloaded{
            [&](const Polynomial& p) {
                if (param != SweepParam::power && param != SweepParam::beta) return reject();
                return GrowthSpec::polynomial(param == SweepParam::power ? value : p.power, beta);
            },
            [&](const SingleExp& s) {
                if (param != SweepParam::alpha && param != SweepParam::beta) return reject();
                return GrowthSpec::single_exp(param == SweepParam::alpha ? value : s.alpha, beta);
            },
            [&](const DoublyExp& d) {
                if (param == SweepParam::power) return reject();
                return GrowthSpec::doubly_exp(param == SweepParam::b ? value : d.b,
                                              param == SweepParam::c ? value : d.c,
                                              param == SweepParam::alpha ? value : d.alpha, beta);
            },
            [&](const Geometric&) { return reject(); },
        },
        base.family());
}

}  // namespace

std::string method_name(DimMethod method) {
    switch (method) {
        case DimMethod::closed_form: return "closed_form";
        case DimMethod::lemma46: return "lemma46";
        case DimMethod::remark: return "remark";
        case DimMethod::box_count: return "box_count";
        case DimMethod::wang_wu_upper: return "wang_wu_upper";
    }
    return "unknown";
}

DimEstimate lemma46_bound(std::span<const LogScalar> log_m, std::span<const LogScalar> log_eps,
                          std::size_t n_max, double tail_fraction) {
    if (n_max == 0 || log_m.size() < n_max || log_eps.size() < n_max) {
        throw DomainError("lemma46_bound needs m_n and eps_n for n = 1..n_max");
    }
    const double ln2 = std::log(2.0);
    for (std::size_t i = 0; i < n_max; ++i) {
        if (log_m[i].log() < ln2 * (1.0 - 1e-12)) {
            throw DomainError("lemma46_bound requires m_n >= 2 (fails at n = " + std::to_string(i + 1) + ")");
        }
        if (!(log_eps[i].log() < 0.0)) {
            throw DomainError("lemma46_bound requires 0 < eps_n < 1 (fails at n = " + std::to_string(i + 1) + ")");
        }
        if (i > 0 && !(log_eps[i].log_abs_log() > log_eps[i - 1].log_abs_log())) {
            throw DomainError("lemma46_bound requires eps_n strictly decreasing (fails at n = " +
                              std::to_string(i + 1) + ")");
        }
    }
    DimEstimate est;
    est.method = DimMethod::lemma46;
    est.partials.reserve(n_max);
    double log_num = -INFINITY;  // ln sum_{k<n} ln m_k
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double ll_eps = log_eps[n - 1].log_abs_log();
        const double ll_m = log_m[n - 1].log_abs_log();
        if (!(ll_eps > ll_m)) {
            throw DomainError("lemma46_bound requires m_n eps_n < 1 (fails at n = " + std::to_string(n) + ")");
        }
        const double log_den = log_sub(ll_eps, ll_m);
        est.partials.emplace_back(n, std::exp(log_num - log_den));
        log_num = log_add(log_num, ll_m);
    }
    reduce_tail(est, n_max, tail_fraction);
    return est;
}

DimEstimate remark_bound(const GrowthSpec& spec, std::size_t n_max, double tail_fraction) {
    if (n_max == 0) {
        throw DomainError("remark_bound requires n_max >= 1");
    }
    DimEstimate est;
    est.method = DimMethod::remark;
    est.partials.reserve(n_max);
    double log_sum = -INFINITY;  // ln sum_{k<=n} L(k)
    double next = log_phi(spec, 1).log_abs_log();
    for (std::size_t n = 1; n <= n_max; ++n) {
        log_sum = log_add(log_sum, next);
        next = log_phi(spec, n + 1).log_abs_log();
        // r_n = 1 / (2 + L(n+1) / sum)
        est.partials.emplace_back(n, 1.0 / (2.0 + std::exp(next - log_sum)));
    }
    reduce_tail(est, n_max, tail_fraction);
    return est;
}

DimEstimate closed_form_dim(const GrowthSpec& spec) {
    const auto half = Rational(BigInt(1), BigInt(2));
    const Rational value = std::visit(
        Overloaded{
            [&](const Polynomial&) { return Rational(1); },
            [&](const SingleExp& s) { return s.alpha < 0.5 ? Rational(1) : half; },
            [&](const DoublyExp& d) {
                if (d.alpha < 1.0) return half;
                if (d.alpha == 1.0) return one_over_b_plus_one(d.b);
                return Rational(0);
            },
            [&](const Geometric&) -> Rational {
                throw DomainError("no closed-form dimension for the geometric test family");
            },
        },
        spec.family());
    return table_value(DimMethod::closed_form, value);
}

DimEstimate wang_wu_upper(const GrowthSpec& spec) {
    const DoublyExp* d = spec.doubly();
    if (d == nullptr) {
        throw DomainError("wang_wu_upper requires a doubly exponential spec");
    }
    Rational value(0);
    if (d->alpha < 1.0) {
        value = Rational(BigInt(1), BigInt(2));
    } else if (d->alpha == 1.0) {
        value = one_over_b_plus_one(d->b);
    }
    if (value < *closed_form_dim(spec).exact) {
        throw std::logic_error("upper-bound table fell below the closed-form dimension");
    }
    return table_value(DimMethod::wang_wu_upper, value);
}

std::size_t count_boxes(std::span<const Interval> intervals, const Rational& delta) {
    if (!(delta > Rational(0)) || delta > Rational(1)) {
        throw DomainError("box size must lie in (0, 1]");
    }
    const BigInt boxes = ceil(Rational(1) / delta);
    if (boxes > BigInt(1L << 40)) {
        throw DomainError("box size too small to enumerate");
    }
    const BigInt last = boxes - 1;
    std::vector<std::pair<BigInt, BigInt>> spans;
    spans.reserve(intervals.size());
    for (const Interval& I : intervals) {
        // Closed boxes meeting [a, b] in positive length or at an endpoint.
        BigInt lo = ceil(I.left() / delta) - 1;
        BigInt hi = floor(I.right() / delta);
        if (lo < 0) lo = 0;
        if (hi > last) hi = last;
        spans.emplace_back(std::move(lo), std::move(hi));
    }
    std::sort(spans.begin(), spans.end());
    BigInt total = 0;
    BigInt covered = -1;  // highest box index already counted
    for (const auto& [lo, hi] : spans) {
        const BigInt start = lo > covered ? lo : covered + 1;
        if (hi >= start) {
            total += hi - start + 1;
            covered = hi;
        }
    }
    return total.get_ui();
}

DimEstimate box_count_dim(std::span<const Interval> intervals, std::span<const Rational> scales) {
    if (scales.size() < 4) {
        throw DomainError("box counting needs at least 4 scales");
    }
    if (intervals.empty()) {
        throw DomainError("box counting needs a non-empty set");
    }
    const auto [smallest, largest] = std::minmax_element(scales.begin(), scales.end());
    if (*largest < *smallest * Rational(8)) {
        throw DomainError("box-counting scales must span at least 3 octaves");
    }
    std::vector<Interval> sorted(intervals.begin(), intervals.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Interval& a, const Interval& b) { return a.left() < b.left(); });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i].left() < Rational(0) || Rational(1) < sorted[i].right()) {
            throw DomainError("box counting requires intervals inside [0, 1]");
        }
        if (i > 0 && !(sorted[i - 1].right() < sorted[i].left())) {
            throw DomainError("box counting requires pairwise disjoint intervals");
        }
    }

    std::vector<Rational> ordered(scales.begin(), scales.end());
    std::sort(ordered.begin(), ordered.end(), std::greater<>());
    std::vector<double> xs, ys;
    for (const Rational& delta : ordered) {
        xs.push_back(-std::log(delta.to_double()));
        ys.push_back(std::log(static_cast<double>(count_boxes(sorted, delta))));
    }
    const auto k = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / k;
        my += ys[i] / k;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    DimEstimate est;
    est.method = DimMethod::box_count;
    est.value = std::clamp(sxy / sxx, 0.0, 1.0);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        est.partials.emplace_back(i, (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]));
    }
    return est;
}

std::vector<Rational> geometric_scales(unsigned base, unsigned from, unsigned to) {
    if (base < 2 || from > to) {
        throw DomainError("geometric_scales requires base >= 2 and from <= to");
    }
    std::vector<Rational> out;
    for (unsigned k = from; k <= to; ++k) {
        BigInt den;
        mpz_ui_pow_ui(den.get_mpz_t(), base, k);
        out.emplace_back(BigInt(1), den);
    }
    return out;
}

SweepParam parse_sweep_param(const std::string& name) {
    if (name == "alpha") return SweepParam::alpha;
    if (name == "b") return SweepParam::b;
    if (name == "c") return SweepParam::c;
    if (name == "beta") return SweepParam::beta;
    if (name == "power" || name == "p") return SweepParam::power;
    throw DomainError("unknown sweep parameter '" + name + "'");
}

std::string sweep_param_name(SweepParam param) {
    switch (param) {
        case SweepParam::alpha: return "alpha";
        case SweepParam::b: return "b";
        case SweepParam::c: return "c";
        case SweepParam::beta: return "beta";
        case SweepParam::power: return "power";
    }
    return "unknown";
}

std::vector<CurvePoint> dim_curve(const FamilySweep& sweep) {
    std::vector<CurvePoint> out;
    out.reserve(sweep.values.size());
    for (double v : sweep.values) {
        const GrowthSpec spec = with_param(sweep.base, sweep.param, v);
        out.push_back({spec.family_name(), sweep_param_name(sweep.param), v, closed_form_dim(spec)});
    }
    return out;
}

std::vector<CurvePoint> figure_one_curve() {
    std::vector<double> alphas;
    for (int i = 1; i <= 300; ++i) alphas.push_back(i / 100.0);
    std::vector<CurvePoint> out = dim_curve({GrowthSpec::single_exp(1.0), SweepParam::alpha, alphas});
    const auto doubly = dim_curve({GrowthSpec::doubly_exp(2.0, 2.0, 1.0), SweepParam::alpha, alphas});
    out.insert(out.end(), doubly.begin(), doubly.end());
    const auto bs = dim_curve({GrowthSpec::doubly_exp(2.0, 2.0, 1.0), SweepParam::b, {2.0, 3.0, 4.0}});
    out.insert(out.end(), bs.begin(), bs.end());
    return out;
}

void write_curve_csv(std::ostream& os, std::span<const CurvePoint> points) {
    os << "family,param,value,dimension,exact\n";
    for (const auto& p : points) {
        os << p.family << ',' << p.param << ',' << format_double(p.value) << ','
           << format_double(p.dim.value) << ',' << (p.dim.exact ? p.dim.exact->str() : "") << '\n';
    }
}

}  // namespace cfx
