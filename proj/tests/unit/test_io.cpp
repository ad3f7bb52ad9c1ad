#include <doctest.h>

#include <cmath>

#include "cfx/io.hpp"

using namespace cfx;

TEST_CASE("tree export round-trips level intervals") {
    const auto params = ConstructionParams::with_threshold(GrowthSpec::geometric(2));
    const auto tree = build_levels(params, 3);
    const Json json = Json::parse(tree_to_json(tree).dump());
    CHECK(json["schema_version"] == kSchemaVersion);
    CHECK(json["levels"][1]["eps"] == "1/288");
    const auto intervals = level_intervals_from_json(json, 3);
    const auto nodes = tree.level_nodes(3);
    REQUIRE(intervals.size() == nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(intervals[i] == nodes[i].interval);
}

TEST_CASE("json helpers") {
    CHECK(number(INFINITY).is_null());
    const Json est = to_json(closed_form_dim(GrowthSpec::doubly_exp(2, 2, 1)));
    CHECK(est["method"] == "closed_form");
    CHECK(est["exact"] == "1/3");
    const Json big = to_json(LogScalar::from_log_log(1000.0, -1));
    CHECK(big["ln"].is_null());
    CHECK(big["ln_abs_ln"] == 1000.0);
}
