#include "cfx/io.hpp"

#include <cmath>

#include "cfx/errors.hpp"

namespace cfx {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string closure_name(Closure c) { return c == Closure::open ? "open" : "closed"; }

}  // namespace

Json number(double value) {
    if (!std::isfinite(value)) {
        return nullptr;
    }
    return value;
}

Json to_json(const LogScalar& value) {
    Json out;
    out["ln"] = number(value.log());
    out["ln_abs_ln"] = number(value.log_abs_log());
    return out;
}

Json to_json(const Interval& interval) {
    Json out;
    out["left"] = interval.left().str();
    out["right"] = interval.right().str();
    out["left_closure"] = closure_name(interval.left_closure());
    out["right_closure"] = closure_name(interval.right_closure());
    return out;
}

Json to_json(const GrowthSpec& spec) {
    Json out;
    out["family"] = spec.family_name();
    std::visit(Overloaded{
                   [&](const Polynomial& p) { out["p"] = p.power; },
                   [&](const SingleExp& s) { out["alpha"] = s.alpha; },
                   [&](const DoublyExp& d) {
                       out["b"] = d.b;
                       out["c"] = d.c;
                       out["alpha"] = d.alpha;
                   },
                   [&](const Geometric& g) { out["base"] = g.base; },
               },
               spec.family());
    out["beta"] = spec.beta();
    return out;
}

Json to_json(const DimEstimate& estimate) {
    Json out;
    out["method"] = method_name(estimate.method);
    out["value"] = number(estimate.value);
    out["exact"] = estimate.exact ? Json(estimate.exact->str()) : Json(nullptr);
    Json partials = Json::array();
    for (const auto& [n, ratio] : estimate.partials) {
        partials.push_back(Json::array({n, number(ratio)}));
    }
    out["partials"] = std::move(partials);
    return out;
}

Json to_json(std::span<const CdfComparison> rows) {
    Json out = Json::array();
    for (const auto& row : rows) {
        out.push_back({{"y", row.y},
                       {"empirical", row.empirical},
                       {"theoretical", row.theoretical},
                       {"abs_diff", row.abs_diff}});
    }
    return out;
}

Json to_json(const ConstructionSequences& seq, std::size_t N) {
    Json levels = Json::array();
    for (std::size_t i = 0; i < seq.log_m.size(); ++i) {
        const std::size_t n = i + 1;
        levels.push_back({{"level", n},
                          {"ln_m", to_json(seq.log_m[i])},
                          {"ln_eps", to_json(seq.log_eps[i])},
                          {"eps_formula", n + 1 >= N ? "gap_bound" : "extended"}});
    }
    return levels;
}

Json tree_to_json(const LevelTree& tree) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["spec"] = to_json(tree.params.spec);
    out["N"] = tree.params.N;
    out["depth"] = tree.depth;
    out["pruned"] = tree.pruned;
    Json levels = Json::array();
    for (const LevelInfo& info : tree.levels) {
        Json level;
        level["level"] = info.level;
        if (info.range) {
            level["lo"] = to_string(info.range->lo);
            level["hi"] = to_string(info.range->hi);
        }
        level["m"] = to_string(info.m);
        level["ln_eps"] = info.log_eps ? to_json(*info.log_eps) : Json(nullptr);
        level["eps"] = info.eps ? Json(info.eps->value.str()) : Json(nullptr);
        level["eps_exact"] = info.eps ? Json(info.eps->exact) : Json(nullptr);
        Json nodes = Json::array();
        for (const LevelNode& node : tree.level_nodes(info.level)) {
            nodes.push_back({{"digits", node.digits.str()},
                             {"left", node.interval.left().str()},
                             {"right", node.interval.right().str()}});
        }
        level["nodes"] = std::move(nodes);
        levels.push_back(std::move(level));
    }
    out["levels"] = std::move(levels);
    return out;
}

std::vector<Interval> level_intervals_from_json(const Json& tree, std::size_t level) {
    if (!tree.contains("levels") || !tree["levels"].is_array()) {
        throw DomainError("tree JSON has no levels array");
    }
    for (const auto& entry : tree["levels"]) {
        if (entry.at("level").get<std::size_t>() != level) {
            continue;
        }
        std::vector<Interval> out;
        for (const auto& node : entry.at("nodes")) {
            out.push_back(Interval::closed(Rational::parse(node.at("left").get<std::string>()),
                                           Rational::parse(node.at("right").get<std::string>())));
        }
        return out;
    }
    throw DomainError("tree JSON has no level " + std::to_string(level));
}

}  // namespace cfx
