#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfx/cf_core.hpp"
#include "cfx/growth.hpp"
#include "cfx/rational.hpp"

namespace cfx {

enum class DimMethod { closed_form, lemma46, remark, box_count, wang_wu_upper };

std::string method_name(DimMethod method);

struct DimEstimate {
    double value = 0.0;
    DimMethod method = DimMethod::closed_form;
    /// (n, ratio) pairs; for box counting, (scale index, local slope).
    std::vector<std::pair<std::size_t, double>> partials;
    /// Exact value for the table methods.
    std::optional<Rational> exact;
};

/// Share of the partial-ratio sequence used as the liminf proxy window.
constexpr double kDefaultTailFraction = 0.5;

/// r_n = sum_{k<n} ln m_k / (-ln m_n - ln eps_n) for n = 1..n_max, reduced to
/// the minimum over the tail window [tail_fraction * n_max, n_max].
/// log_m[i] and log_eps[i] describe level i + 1.
DimEstimate lemma46_bound(std::span<const LogScalar> log_m, std::span<const LogScalar> log_eps,
                          std::size_t n_max, double tail_fraction = kDefaultTailFraction);

/// r_n = sum_{k<=n} L(k) / (2 sum_{k<=n} L(k) + L(n+1)), L = ln phi, reduced
/// the same way.
DimEstimate remark_bound(const GrowthSpec& spec, std::size_t n_max,
                         double tail_fraction = kDefaultTailFraction);

/// Exact dimension of the level set for the polynomial, single and doubly
/// exponential families.
DimEstimate closed_form_dim(const GrowthSpec& spec);

/// Upper-bound table for the doubly exponential family: 1/2, 1/(b+1), 0.
DimEstimate wang_wu_upper(const GrowthSpec& spec);

/// Box-counting slope of a finite union of closed intervals in [0, 1].
/// A closed grid box [i d, (i+1) d] (the last one clipped at 1) counts when
/// it meets an interval in positive length or contains one of its endpoints.
DimEstimate box_count_dim(std::span<const Interval> intervals, std::span<const Rational> scales);

/// Number of grid boxes of size delta counted by box_count_dim.
std::size_t count_boxes(std::span<const Interval> intervals, const Rational& delta);

/// delta = base^{-k} for k = from..to.
std::vector<Rational> geometric_scales(unsigned base, unsigned from, unsigned to);

enum class SweepParam { alpha, b, c, beta, power };

struct FamilySweep {
    GrowthSpec base;
    SweepParam param;
    std::vector<double> values;
};

struct CurvePoint {
    std::string family;
    std::string param;
    double value = 0.0;
    DimEstimate dim;
};

SweepParam parse_sweep_param(const std::string& name);
std::string sweep_param_name(SweepParam param);

/// closed_form_dim over the sweep.
std::vector<CurvePoint> dim_curve(const FamilySweep& sweep);

/// Data for the family figure: single-exp and doubly-exp (b = c = 2) over
/// alpha = i/100, i = 1..300, plus the doubly-exp b sweep at alpha = 1.
std::vector<CurvePoint> figure_one_curve();

/// CSV with columns family,param,value,dimension,exact.
void write_curve_csv(std::ostream& os, std::span<const CurvePoint> points);

}  // namespace cfx
