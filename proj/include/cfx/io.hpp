#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "cfx/cantor.hpp"
#include "cfx/cf_core.hpp"
#include "cfx/dimension.hpp"
#include "cfx/gauss_lab.hpp"
#include "cfx/growth.hpp"

namespace cfx {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

/// Non-finite doubles become null.
Json number(double value);
Json to_json(const LogScalar& value);
Json to_json(const Interval& interval);
Json to_json(const GrowthSpec& spec);
Json to_json(const DimEstimate& estimate);
Json to_json(std::span<const CdfComparison> rows);
Json to_json(const ConstructionSequences& seq, std::size_t N);

/// Levels, digit ranges, exact node intervals and ln eps per level.
Json tree_to_json(const LevelTree& tree);

/// Closed level-n intervals from a tree export.
std::vector<Interval> level_intervals_from_json(const Json& tree, std::size_t level);

}  // namespace cfx
