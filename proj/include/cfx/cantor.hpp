#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfx/cf_core.hpp"
#include "cfx/growth.hpp"
#include "cfx/rational.hpp"

namespace cfx {

// Nested Cantor-like construction inside F_N: digits k < N range over
// [1, floor(phi(k)/k) + 1], digits k >= N over [ceil f(k), floor g(k)].

enum class ConstructionMode { exact, log_only };

struct ConstructionParams {
    GrowthSpec spec;
    std::size_t N = 1;
    ConstructionMode mode = ConstructionMode::exact;
    /// Exact mode refuses phi(k) with more integer bits than this.
    std::size_t max_phi_bits = std::size_t{1} << 20;

    /// Parameters with N taken from threshold_N.
    static ConstructionParams with_threshold(const GrowthSpec& spec,
                                             ConstructionMode mode = ConstructionMode::exact);
};

/// Certified rational enclosure lower <= phi(k) <= upper; both equal phi(k)
/// when it is a dyadic rational computed without rounding.
struct PhiEnclosure {
    Rational lower;
    Rational upper;
    bool exact = false;
};
PhiEnclosure phi_enclosure(const GrowthSpec& spec, std::size_t k, std::size_t max_phi_bits,
                           std::size_t extra_bits = 128);

/// floor(factor * phi(k)) and ceil(factor * phi(k)) for factor >= 0,
/// certified by refining the enclosure; PrecisionError if it cannot be.
BigInt certified_floor(const GrowthSpec& spec, std::size_t k, const Rational& factor,
                       std::size_t max_phi_bits);
BigInt certified_ceil(const GrowthSpec& spec, std::size_t k, const Rational& factor,
                      std::size_t max_phi_bits);

struct ExactRange {
    BigInt lo;
    BigInt hi;
    BigInt count() const { return hi - lo + 1; }
};

struct LogRange {
    LogScalar lo;
    LogScalar hi;
};

/// Admissible digit range at position k; exact only in exact mode.
struct SymbolRange {
    std::optional<ExactRange> exact;
    LogRange log;
};
SymbolRange symbol_range(const ConstructionParams& params, std::size_t k);

/// m_n = floor(phi(n)/n) + 1.
struct CountM {
    std::optional<BigInt> exact;
    LogScalar log;
};
CountM count_m(const ConstructionParams& params, std::size_t n);

/// ln eps_n for n >= max(1, N - 1), where
/// eps_n = 2^{-(2n+3)} (prod_{k<N} (phi(k)/k + 1) prod_{k=N}^{n} (beta + 1/k) phi(k))^{-2}.
LogScalar gap_epsilon_log(const ConstructionParams& params, std::size_t n);

/// Rational eps_n from a lower enclosure of each phi(k): exact when phi is
/// exact, otherwise a rigorous upper bound on eps_n.
struct EpsilonBound {
    Rational value;
    bool exact = false;
};
EpsilonBound gap_epsilon_exact(const ConstructionParams& params, std::size_t n);

/// ln m_n and ln eps_n for n = 1..n_max (the eps formula is applied at every
/// level, including the finitely many below N - 1).
struct ConstructionSequences {
    std::vector<LogScalar> log_m;
    std::vector<LogScalar> log_eps;
};
ConstructionSequences construction_sequences(const ConstructionParams& params, std::size_t n_max);

struct LevelNode {
    CFWord digits;
    /// Closed level interval J(digits); [0, 1] for the root.
    Interval interval;
    std::size_t parent = 0;
    std::size_t first_child = 0;
    std::size_t child_count = 0;
};

struct LevelInfo {
    std::size_t level = 0;
    /// Digit range at this level (absent for the root).
    std::optional<ExactRange> range;
    BigInt m = 1;
    /// Gap bound; present for levels >= max(1, N - 1).
    std::optional<LogScalar> log_eps;
    std::optional<EpsilonBound> eps;
    std::size_t first_node = 0;
    std::size_t node_count = 0;
};

struct LevelTree {
    LevelTree(ConstructionParams params_, std::size_t depth_, bool pruned_ = false)
        : params(std::move(params_)), depth(depth_), pruned(pruned_) {}

    ConstructionParams params;
    std::size_t depth = 0;
    bool pruned = false;
    std::vector<LevelInfo> levels;
    std::vector<LevelNode> nodes;

    std::span<const LevelNode> level_nodes(std::size_t level) const;
};

constexpr std::size_t kDefaultNodeBudget = 1'000'000;

/// Enumerates every admissible digit word up to depth with exact level
/// intervals. BudgetError names the first level that would exceed budget.
LevelTree build_levels(const ConstructionParams& params, std::size_t depth,
                       std::size_t budget = kDefaultNodeBudget);

/// Keeps the m_n children with the smallest digits under every retained node.
LevelTree prune_to_counts(const LevelTree& tree);

/// Adjacent level-n intervals (in positional order) are separated by at
/// least eps_n. Vacuously true for n = 0.
bool verify_separation(const LevelTree& tree, std::size_t n);

struct TreeAudit {
    bool nesting = true;
    bool disjoint = true;
    bool child_counts = true;
    bool separation = true;
    bool digit_bounds = true;
    std::vector<std::string> failures;
    bool ok() const { return nesting && disjoint && child_counts && separation && digit_bounds; }
};
TreeAudit audit_tree(const LevelTree& tree);

/// Natural mass on a pruned tree: each level-n node carries (m_1...m_n)^{-1}.
class MassAssignment {
public:
    explicit MassAssignment(const LevelTree& tree);

    const LevelTree& tree() const { return *tree_; }
    const Rational& node_mass(std::size_t level) const { return mass_.at(level); }
    Rational level_total(std::size_t level) const;

    /// Indices of the level's nodes sorted by position.
    const std::vector<std::size_t>& positional_order(std::size_t level) const {
        return order_.at(level);
    }

private:
    const LevelTree* tree_;
    std::vector<Rational> mass_;
    std::vector<std::vector<std::size_t>> order_;
};

/// Level used for U: the first n with eps_n <= |U|, or the deepest level.
std::size_t mass_level(const MassAssignment& assignment, const Rational& length);

/// Sum of node masses over the level-n intervals meeting U, at n = mass_level(|U|).
Rational natural_mass_exact(const MassAssignment& assignment, const Interval& U);
double natural_mass(const MassAssignment& assignment, const Interval& U);

struct HolderResult {
    double max_ratio = 0.0;
    double worst_length = 0.0;
    std::size_t worst_level = 0;
    std::size_t samples = 0;
};

/// max mu(U) / |U|^s over random U with eps_depth <= |U| < eps_N, centred on
/// points of the construction; sample i draws from its own stream (seed, i).
HolderResult holder_check(const MassAssignment& assignment, double s, std::size_t trials,
                          std::uint64_t seed, std::size_t workers = 1);

}  // namespace cfx
