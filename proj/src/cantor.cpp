#include "cfx/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "cfx/bigfloat.hpp"
#include "cfx/errors.hpp"
#include "cfx/random.hpp"

namespace cfx {

namespace {

constexpr std::size_t kMaxRefineBits = 1 << 14;
// Product of phi values allowed in an exact epsilon, in bits.
constexpr double kMaxEpsilonBits = 1 << 24;

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

// ln(phi(k)/k + 1).
LogScalar log_phi_over_k_plus_one(const GrowthSpec& spec, std::size_t k) {
    const LogScalar a = log_phi(spec, k).shifted(-std::log(static_cast<double>(k)));
    if (a.overflow()) {
        return a;
    }
    return LogScalar::from_log(log_add(a.log(), 0.0));
}

// ln ln of the level-k factor in the epsilon product: phi(k)/k + 1 below N,
// g(k) from N on. Both factors exceed 1.
double level_factor_log_log(const ConstructionParams& params, std::size_t k) {
    if (k < params.N) {
        return log_phi_over_k_plus_one(params.spec, k).log_abs_log();
    }
    const LogScalar g = bound_g(params.spec, k);
    if (!(g.log() > 0.0)) {
        throw DomainError("g(" + std::to_string(k) + ") <= 1; N is below the threshold");
    }
    return g.log_abs_log();
}

LogScalar epsilon_from_sum(std::size_t n, double log_sum) {
    // ln eps_n = -[(2n+3) ln 2 + 2 sum]
    const double head = std::log(static_cast<double>(2 * n + 3) * std::log(2.0));
    return LogScalar::from_log_log(log_add(head, std::log(2.0) + log_sum), -1);
}

// Chains of directed roundings; the result is exact iff every step was.
struct Rounded {
    BigFloat value;
    bool exact;
};

Rounded phi_rounded(const GrowthSpec& spec, std::size_t k, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    BigFloat out(prec);
    BigFloat t(prec);
    BigFloat base(prec);
    int ternary = 0;
    const auto step = [&](int r) { ternary |= (r != 0); };
    mpfr_set_ui(t.get(), static_cast<unsigned long>(k), MPFR_RNDN);
    std::visit(Overloaded{
                   [&](const Polynomial& p) {
                       BigFloat e(prec);
                       mpfr_set_d(e.get(), p.power, MPFR_RNDN);
                       step(mpfr_pow(out.get(), t.get(), e.get(), rnd));
                   },
                   [&](const SingleExp& s) {
                       BigFloat e(prec);
                       mpfr_set_d(e.get(), s.alpha, MPFR_RNDN);
                       step(mpfr_pow(t.get(), t.get(), e.get(), rnd));
                       step(mpfr_exp(out.get(), t.get(), rnd));
                   },
                   [&](const DoublyExp& d) {
                       BigFloat e(prec);
                       mpfr_set_d(e.get(), d.alpha, MPFR_RNDN);
                       step(mpfr_pow(t.get(), t.get(), e.get(), rnd));
                       mpfr_set_d(base.get(), d.b, MPFR_RNDN);
                       step(mpfr_pow(t.get(), base.get(), t.get(), rnd));
                       mpfr_set_d(base.get(), d.c, MPFR_RNDN);
                       step(mpfr_pow(out.get(), base.get(), t.get(), rnd));
                   },
                   [&](const Geometric& g) {
                       mpfr_set_d(base.get(), g.base, MPFR_RNDN);
                       step(mpfr_pow_ui(out.get(), base.get(), static_cast<unsigned long>(k), rnd));
                   },
               },
               spec.family());
    return {std::move(out), ternary == 0};
}

template <class Round>
BigInt certified_round(const GrowthSpec& spec, std::size_t k, const Rational& factor,
                       std::size_t max_phi_bits, Round round) {
    if (factor.sign() < 0) {
        throw DomainError("certified rounding requires a non-negative factor");
    }
    for (std::size_t extra = 128; extra <= kMaxRefineBits; extra *= 2) {
        const PhiEnclosure enc = phi_enclosure(spec, k, max_phi_bits, extra);
        BigInt lo = round(factor * enc.lower);
        if (enc.exact || lo == round(factor * enc.upper)) {
            return lo;
        }
    }
    throw PrecisionError("could not certify rounding of phi(" + std::to_string(k) + ") at " +
                         std::to_string(kMaxRefineBits) + " extra bits");
}

Rational inverse_k(std::size_t k) { return Rational(BigInt(1), BigInt(static_cast<unsigned long>(k))); }

void require_exact_mode(const ConstructionParams& params, const char* what) {
    if (params.mode != ConstructionMode::exact) {
        throw DomainError(std::string(what) + " requires exact construction mode");
    }
}

std::size_t first_eps_level(const ConstructionParams& params) {
    return std::max<std::size_t>(1, params.N == 0 ? 1 : params.N - 1);
}

Interval level_interval(const CFWord& word, const ExactRange& next) {
    const Interval a = cylinder_interval(word.extended(next.lo)).interval;
    const Interval b = cylinder_interval(word.extended(next.hi)).interval;
    return Interval::closed(std::min(a.left(), b.left()), std::max(a.right(), b.right()));
}

std::vector<std::size_t> sorted_by_position(std::span<const LevelNode> nodes) {
    std::vector<std::size_t> order(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return nodes[a].interval.left() < nodes[b].interval.left();
    });
    return order;
}

}  // namespace

ConstructionParams ConstructionParams::with_threshold(const GrowthSpec& spec, ConstructionMode mode) {
    ConstructionParams params{spec};
    params.N = threshold_N(spec);
    params.mode = mode;
    return params;
}

PhiEnclosure phi_enclosure(const GrowthSpec& spec, std::size_t k, std::size_t max_phi_bits,
                           std::size_t extra_bits) {
    if (k == 0) {
        throw DomainError("phi_enclosure requires k >= 1");
    }
    const double bits = log_phi(spec, k).log() / std::log(2.0);
    if (!(bits <= static_cast<double>(max_phi_bits))) {
        throw DomainError("phi(" + std::to_string(k) + ") exceeds " + std::to_string(max_phi_bits) +
                          " bits; use log_only mode");
    }
    const auto prec =
        static_cast<mpfr_prec_t>(std::max(64.0, std::ceil(bits)) + static_cast<double>(extra_bits));
    Rounded down = phi_rounded(spec, k, prec, MPFR_RNDD);
    PhiEnclosure out;
    out.lower = down.value.to_rational();
    if (down.exact) {
        out.upper = out.lower;
        out.exact = true;
        return out;
    }
    out.upper = phi_rounded(spec, k, prec, MPFR_RNDU).value.to_rational();
    return out;
}

BigInt certified_floor(const GrowthSpec& spec, std::size_t k, const Rational& factor,
                       std::size_t max_phi_bits) {
    return certified_round(spec, k, factor, max_phi_bits, [](const Rational& r) { return floor(r); });
}

BigInt certified_ceil(const GrowthSpec& spec, std::size_t k, const Rational& factor,
                      std::size_t max_phi_bits) {
    return certified_round(spec, k, factor, max_phi_bits, [](const Rational& r) { return ceil(r); });
}

SymbolRange symbol_range(const ConstructionParams& params, std::size_t k) {
    if (k == 0) {
        throw DomainError("symbol_range requires k >= 1");
    }
    const GrowthSpec& spec = params.spec;
    SymbolRange out;
    if (k < params.N) {
        out.log = {LogScalar::from_log(0.0), log_phi_over_k_plus_one(spec, k)};
        if (params.mode == ConstructionMode::exact) {
            out.exact = ExactRange{BigInt(1),
                                   certified_floor(spec, k, inverse_k(k), params.max_phi_bits) + 1};
        }
        return out;
    }
    const auto f = bound_f(spec, k);
    if (!f) {
        throw DomainError("f(" + std::to_string(k) + ") is not positive; N is below the threshold");
    }
    out.log = {*f, bound_g(spec, k)};
    if (params.mode == ConstructionMode::exact) {
        const Rational beta = Rational::from_double(spec.beta());
        ExactRange range{certified_ceil(spec, k, beta - inverse_k(k), params.max_phi_bits),
                         certified_floor(spec, k, beta + inverse_k(k), params.max_phi_bits)};
        if (range.hi < range.lo) {
            throw DomainError("empty digit range at position " + std::to_string(k));
        }
        out.exact = std::move(range);
    }
    return out;
}

CountM count_m(const ConstructionParams& params, std::size_t n) {
    if (n == 0) {
        throw DomainError("count_m requires n >= 1");
    }
    CountM out;
    out.log = log_phi_over_k_plus_one(params.spec, n);
    if (params.mode == ConstructionMode::exact) {
        out.exact = certified_floor(params.spec, n, inverse_k(n), params.max_phi_bits) + 1;
    }
    return out;
}

LogScalar gap_epsilon_log(const ConstructionParams& params, std::size_t n) {
    if (n < first_eps_level(params)) {
        throw DomainError("gap epsilon is defined for n >= max(1, N - 1)");
    }
    double log_sum = -INFINITY;
    for (std::size_t k = 1; k <= n; ++k) {
        log_sum = log_add(log_sum, level_factor_log_log(params, k));
    }
    return epsilon_from_sum(n, log_sum);
}

EpsilonBound gap_epsilon_exact(const ConstructionParams& params, std::size_t n) {
    if (n < first_eps_level(params)) {
        throw DomainError("gap epsilon is defined for n >= max(1, N - 1)");
    }
    double bits = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        bits += log_phi(params.spec, k).log() / std::log(2.0);
    }
    if (!(bits <= kMaxEpsilonBits)) {
        throw DomainError("exact epsilon at level " + std::to_string(n) + " is too large to form");
    }
    const Rational beta = Rational::from_double(params.spec.beta());
    Rational product(1);
    bool exact = true;
    for (std::size_t k = 1; k <= n; ++k) {
        const PhiEnclosure enc = phi_enclosure(params.spec, k, params.max_phi_bits);
        exact = exact && enc.exact;
        if (k < params.N) {
            product *= enc.lower * inverse_k(k) + Rational(1);
        } else {
            product *= (beta + inverse_k(k)) * enc.lower;
        }
    }
    BigInt pow2 = 1;
    mpz_mul_2exp(pow2.get_mpz_t(), pow2.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * n + 3));
    return {Rational(1) / (Rational(pow2) * product * product), exact};
}

ConstructionSequences construction_sequences(const ConstructionParams& params, std::size_t n_max) {
    ConstructionSequences out;
    out.log_m.reserve(n_max);
    out.log_eps.reserve(n_max);
    double log_sum = -INFINITY;
    for (std::size_t n = 1; n <= n_max; ++n) {
        out.log_m.push_back(log_phi_over_k_plus_one(params.spec, n));
        log_sum = log_add(log_sum, level_factor_log_log(params, n));
        out.log_eps.push_back(epsilon_from_sum(n, log_sum));
    }
    return out;
}

std::span<const LevelNode> LevelTree::level_nodes(std::size_t level) const {
    const LevelInfo& info = levels.at(level);
    return std::span<const LevelNode>(nodes).subspan(info.first_node, info.node_count);
}

LevelTree build_levels(const ConstructionParams& params, std::size_t depth, std::size_t budget) {
    require_exact_mode(params, "build_levels");
    LevelTree tree(params, depth);

    std::vector<ExactRange> ranges;  // ranges[k] for k = 1..depth+1
    ranges.push_back({1, 1});
    for (std::size_t k = 1; k <= depth + 1; ++k) {
        ranges.push_back(*symbol_range(params, k).exact);
    }

    // Admission check before any enumeration.
    BigInt total = 1;
    BigInt level_count = 1;
    for (std::size_t n = 1; n <= depth; ++n) {
        level_count *= ranges[n].count();
        total += level_count;
        if (total > BigInt(static_cast<unsigned long>(budget))) {
            throw BudgetError("level " + std::to_string(n) + " would bring the tree to " +
                              to_string(total) + " nodes, over the budget of " + std::to_string(budget));
        }
    }

    tree.nodes.push_back({CFWord{}, Interval::closed(0, 1)});
    LevelInfo root;
    root.node_count = 1;
    tree.levels.push_back(root);

    for (std::size_t n = 1; n <= depth; ++n) {
        LevelInfo info;
        info.level = n;
        info.range = ranges[n];
        info.m = *count_m(params, n).exact;
        if (n >= first_eps_level(params)) {
            info.log_eps = gap_epsilon_log(params, n);
            info.eps = gap_epsilon_exact(params, n);
        }
        info.first_node = tree.nodes.size();
        const LevelInfo& prev = tree.levels[n - 1];
        for (std::size_t p = prev.first_node; p < prev.first_node + prev.node_count; ++p) {
            tree.nodes[p].first_child = tree.nodes.size();
            for (BigInt a = ranges[n].lo; a <= ranges[n].hi; ++a) {
                CFWord word = tree.nodes[p].digits.extended(a);
                Interval J = level_interval(word, ranges[n + 1]);
                tree.nodes.push_back({std::move(word), std::move(J), p});
            }
            tree.nodes[p].child_count = tree.nodes.size() - tree.nodes[p].first_child;
        }
        info.node_count = tree.nodes.size() - info.first_node;
        tree.levels.push_back(std::move(info));
    }
    return tree;
}

LevelTree prune_to_counts(const LevelTree& tree) {
    LevelTree out(tree.params, tree.depth, true);
    out.nodes.push_back(tree.nodes.front());
    out.levels.push_back(tree.levels.front());
    // Map from retained source node to its index in the output.
    std::vector<std::size_t> kept{0};
    for (std::size_t n = 1; n <= tree.depth; ++n) {
        LevelInfo info = tree.levels[n];
        info.first_node = out.nodes.size();
        std::vector<std::size_t> next;
        for (std::size_t i = 0; i < kept.size(); ++i) {
            const std::size_t src = kept[i];
            const std::size_t dst = out.levels[n - 1].first_node + i;
            const LevelNode& parent = tree.nodes[src];
            const std::size_t take =
                std::min<std::size_t>(parent.child_count, info.m.fits_ulong_p() ? info.m.get_ui()
                                                                                : parent.child_count);
            out.nodes[dst].first_child = out.nodes.size();
            out.nodes[dst].child_count = take;
            // Children are stored in increasing digit order.
            for (std::size_t c = 0; c < take; ++c) {
                LevelNode child = tree.nodes[parent.first_child + c];
                child.parent = dst;
                child.first_child = 0;
                child.child_count = 0;
                out.nodes.push_back(std::move(child));
                next.push_back(parent.first_child + c);
            }
        }
        info.node_count = out.nodes.size() - info.first_node;
        out.levels.push_back(std::move(info));
        kept = std::move(next);
    }
    return out;
}

bool verify_separation(const LevelTree& tree, std::size_t n) {
    if (n == 0) {
        return true;
    }
    const auto nodes = tree.level_nodes(n);
    const auto order = sorted_by_position(nodes);
    const auto& eps = tree.levels.at(n).eps;
    for (std::size_t i = 1; i < order.size(); ++i) {
        const Rational gap = nodes[order[i]].interval.left() - nodes[order[i - 1]].interval.right();
        if (eps ? gap < eps->value : gap <= Rational(0)) {
            return false;
        }
    }
    return true;
}

TreeAudit audit_tree(const LevelTree& tree) {
    TreeAudit audit;
    const auto fail = [&](bool& flag, std::string message) {
        flag = false;
        audit.failures.push_back(std::move(message));
    };
    for (std::size_t n = 1; n <= tree.depth; ++n) {
        const LevelInfo& info = tree.levels[n];
        const auto nodes = tree.level_nodes(n);
        const std::string where = "level " + std::to_string(n);
        for (const LevelNode& node : nodes) {
            if (!tree.nodes[node.parent].interval.contains(node.interval)) {
                fail(audit.nesting, where + ": " + node.digits.str() + " escapes its parent");
            }
            const BigInt& last = node.digits[n - 1];
            if (info.range && (last < info.range->lo || last > info.range->hi)) {
                fail(audit.digit_bounds, where + ": digit " + to_string(last) + " out of range");
            }
        }
        for (std::size_t p = tree.levels[n - 1].first_node;
             p < tree.levels[n - 1].first_node + tree.levels[n - 1].node_count; ++p) {
            const std::size_t children = tree.nodes[p].child_count;
            const BigInt expected =
                tree.pruned ? (info.m < info.range->count() ? info.m : info.range->count())
                            : info.range->count();
            if (BigInt(static_cast<unsigned long>(children)) != expected) {
                fail(audit.child_counts, where + ": node " + tree.nodes[p].digits.str() + " has " +
                                             std::to_string(children) + " children, expected " +
                                             to_string(expected));
            }
        }
        const auto order = sorted_by_position(nodes);
        for (std::size_t i = 1; i < order.size(); ++i) {
            if (!(nodes[order[i - 1]].interval.right() < nodes[order[i]].interval.left())) {
                fail(audit.disjoint, where + ": " + nodes[order[i - 1]].digits.str() + " meets " +
                                         nodes[order[i]].digits.str());
            }
        }
        if (!verify_separation(tree, n)) {
            fail(audit.separation, where + ": adjacent gap below epsilon");
        }
    }
    return audit;
}

MassAssignment::MassAssignment(const LevelTree& tree) : tree_(&tree) {
    if (!tree.pruned) {
        throw DomainError("mass assignment requires a pruned tree");
    }
    mass_.push_back(Rational(1));
    order_.push_back({0});
    for (std::size_t n = 1; n <= tree.depth; ++n) {
        const LevelInfo& info = tree.levels[n];
        if (info.range && info.range->count() < info.m) {
            throw DomainError("level " + std::to_string(n) + " has fewer admissible digits than m_n");
        }
        mass_.push_back(mass_.back() / Rational(info.m));
        order_.push_back(sorted_by_position(tree.level_nodes(n)));
    }
}

Rational MassAssignment::level_total(std::size_t level) const {
    return Rational(static_cast<long>(tree_->levels.at(level).node_count)) * mass_.at(level);
}

std::size_t mass_level(const MassAssignment& assignment, const Rational& length) {
    const LevelTree& tree = assignment.tree();
    for (std::size_t n = 1; n <= tree.depth; ++n) {
        const auto& eps = tree.levels[n].eps;
        if (eps && eps->value <= length) {
            return n;
        }
    }
    return tree.depth;
}

Rational natural_mass_exact(const MassAssignment& assignment, const Interval& U) {
    if (U.left() < Rational(0) || Rational(1) < U.right()) {
        throw DomainError("natural_mass requires U inside [0, 1]");
    }
    const std::size_t n = mass_level(assignment, U.length());
    const auto nodes = assignment.tree().level_nodes(n);
    const auto& order = assignment.positional_order(n);
    // Disjoint closed intervals sorted by position: right ends are sorted too.
    const auto first = std::partition_point(order.begin(), order.end(), [&](std::size_t i) {
        return nodes[i].interval.right() < U.left();
    });
    const auto last = std::partition_point(first, order.end(), [&](std::size_t i) {
        return nodes[i].interval.left() <= U.right();
    });
    return Rational(static_cast<long>(last - first)) * assignment.node_mass(n);
}

double natural_mass(const MassAssignment& assignment, const Interval& U) {
    return natural_mass_exact(assignment, U).to_double();
}

HolderResult holder_check(const MassAssignment& assignment, double s, std::size_t trials,
                          std::uint64_t seed, std::size_t workers) {
    const LevelTree& tree = assignment.tree();
    const std::size_t N = tree.params.N;
    if (!(s > 0.0 && s <= 1.0)) {
        throw DomainError("holder_check requires 0 < s <= 1");
    }
    if (trials == 0 || workers == 0) {
        throw DomainError("holder_check requires trials >= 1 and workers >= 1");
    }
    if (N == 0 || N >= tree.depth || !tree.levels[N].log_eps || !tree.levels[tree.depth].log_eps) {
        throw DomainError("holder_check requires a tree deeper than N");
    }
    const double log_hi = tree.levels[N].log_eps->log();
    const double log_lo = tree.levels[tree.depth].log_eps->log();
    const auto leaves = tree.level_nodes(tree.depth);

    struct Sample {
        double ratio;
        double length;
        std::size_t level;
    };
    std::vector<Sample> samples(trials);
    const auto work = [&](std::size_t worker) {
        for (std::size_t i = worker; i < trials; i += workers) {
            TrialStream stream(seed, i);
            const double log_len = log_lo + (log_hi - log_lo) * stream.uniform();
            const auto leaf = static_cast<std::size_t>(stream.next() % leaves.size());
            const Interval& J = leaves[leaf].interval;
            const Rational center = J.left() + J.length() * Rational::from_double(stream.uniform());
            const Rational half = Rational::from_double(std::exp(log_len) / 2.0);
            const Interval U = Interval::closed(std::max(center - half, Rational(0)),
                                                std::min(center + half, Rational(1)));
            const double mass = natural_mass(assignment, U);
            samples[i] = {mass / std::pow(U.length().to_double(), s), U.length().to_double(),
                          mass_level(assignment, U.length())};
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    HolderResult out;
    out.samples = trials;
    for (const Sample& sample : samples) {
        if (sample.ratio > out.max_ratio) {
            out.max_ratio = sample.ratio;
            out.worst_length = sample.length;
            out.worst_level = sample.level;
        }
    }
    return out;
}

}  // namespace cfx
