#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "cfx/cantor.hpp"
#include "cfx/cf_core.hpp"
#include "cfx/dimension.hpp"
#include "cfx/errors.hpp"
#include "cfx/gauss_lab.hpp"
#include "cfx/growth.hpp"
#include "cfx/io.hpp"

namespace cfx::cli {

namespace {

struct SpecArgs {
    std::string family = "doubly";
    double p = 2.0;
    double alpha = 1.0;
    double b = 2.0;
    double c = 2.0;
    double beta = 1.0;
    double base = 2.0;

    void attach(CLI::App* app) {
        app->add_option("--family", family, "polynomial, single, doubly or geometric")
            ->check(CLI::IsMember({"polynomial", "single", "doubly", "geometric"}))
            ->capture_default_str();
        app->add_option("--p", p, "polynomial power")->capture_default_str();
        app->add_option("--alpha", alpha, "exponent alpha")->capture_default_str();
        app->add_option("--b", b, "inner base b")->capture_default_str();
        app->add_option("--c", c, "outer base c")->capture_default_str();
        app->add_option("--beta", beta, "target limit beta")->capture_default_str();
        app->add_option("--base", base, "geometric base")->capture_default_str();
    }

    GrowthSpec build() const {
        if (family == "polynomial") return GrowthSpec::polynomial(p, beta);
        if (family == "single") return GrowthSpec::single_exp(alpha, beta);
        if (family == "geometric") return GrowthSpec::geometric(base, beta);
        return GrowthSpec::doubly_exp(b, c, alpha, beta);
    }
};

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

Json header(const std::string& subcommand) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["subcommand"] = subcommand;
    return out;
}

Json digits_json(const CFWord& word) {
    Json out = Json::array();
    for (const auto& a : word.digits()) out.push_back(to_string(a));
    return out;
}

void add_word_stats(Json& out, const CFWord& word) {
    out["digits"] = digits_json(word);
    if (!word.empty()) {
        const RunningStat last = running_stats(word).back();
        out["T_n"] = to_string(last.max);
        out["S_n"] = to_string(last.sum);
    }
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw UsageError{"malformed number '" + item + "' in list '" + text + "'"};
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw UsageError{"empty list"};
    }
    return out;
}

Json estimate_entry(const std::function<DimEstimate()>& compute, const std::string& method,
                    bool partials) {
    try {
        Json out = to_json(compute());
        if (!partials) out.erase("partials");
        return out;
    } catch (const DomainError& e) {
        return {{"method", method}, {"value", nullptr}, {"error", e.what()}};
    }
}

}  // namespace

std::string outputs_checksum(const std::vector<Output>& outputs) {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    for (const auto& out : outputs) {
        EVP_DigestUpdate(ctx, out.path.data(), out.path.size());
        EVP_DigestUpdate(ctx, "\n", 1);
        EVP_DigestUpdate(ctx, out.content.data(), out.content.size());
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_DigestFinal_ex(ctx, digest, &length);
    EVP_MD_CTX_free(ctx);
    static constexpr char hex[] = "0123456789abcdef";
    std::string text;
    for (unsigned int i = 0; i < length; ++i) {
        text.push_back(hex[digest[i] >> 4]);
        text.push_back(hex[digest[i] & 0xf]);
    }
    return text;
}

RunResult execute(const std::vector<std::string>& args) {
    CLI::App app{"Continued-fraction extremes toolkit", "cfx"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    RunResult result;

    // expand
    auto* expand = app.add_subcommand("expand", "partial quotients of a rational or real in (0,1)");
    std::string rational_text, real_text;
    std::size_t expand_n = 0, expand_precision = 0;
    auto* rational_opt = expand->add_option("--rational", rational_text, "exact input num/den");
    auto* real_opt = expand->add_option("--real", real_text, "decimal input");
    rational_opt->excludes(real_opt);
    expand->add_option("--n", expand_n, "number of digits (required with --real)");
    expand->add_option("--precision", expand_precision, "working bits (default 4n+64)");

    // cylinder
    auto* cylinder = app.add_subcommand("cylinder", "cylinder interval of a digit word");
    std::string cylinder_digits;
    cylinder->add_option("--digits", cylinder_digits, "comma-separated digits")->required();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo of T_n and S_n under Gauss measure");
    SimConfig sim;
    std::string ys_text = "0.5,1,2";
    std::string sim_out, sim_format = "json";
    simulate->add_option("--n", sim.n_digits, "digits per trial")->required();
    simulate->add_option("--trials", sim.trials, "number of trials")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "64-bit seed")->capture_default_str();
    simulate->add_option("--precision", sim.precision_bits, "working bits (default 4n+64)");
    simulate->add_option("--workers", sim.workers, "worker threads")->capture_default_str();
    simulate->add_option("--y", ys_text, "comma-separated y values")->capture_default_str();
    simulate->add_option("--out", sim_out, "write PREFIX.csv and PREFIX.json");
    simulate->add_option("--format", sim_format, "stdout format without --out")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    // levelset
    auto* levelset = app.add_subcommand("levelset", "nested construction: tree or log-domain counts");
    SpecArgs level_spec;
    level_spec.attach(levelset);
    std::size_t level_N = 0, level_depth = 2, level_budget = kDefaultNodeBudget, level_nmax = 20;
    std::string level_mode = "exact";
    bool level_prune = false;
    levelset->add_option("--N", level_N, "threshold index (default: computed)");
    levelset->add_option("--mode", level_mode, "exact or log_only")
        ->check(CLI::IsMember({"exact", "log_only"}))
        ->capture_default_str();
    levelset->add_option("--depth", level_depth, "tree depth (exact mode)")->capture_default_str();
    levelset->add_option("--budget", level_budget, "node budget")->capture_default_str();
    levelset->add_flag("--prune", level_prune, "keep m_n children per node");
    levelset->add_option("--n-max", level_nmax, "levels (log_only mode)")->capture_default_str();

    // dim
    auto* dim = app.add_subcommand("dim", "dimension table and numeric bounds for one spec");
    SpecArgs dim_spec;
    dim_spec.attach(dim);
    std::size_t dim_nmax = 200;
    bool dim_partials = false;
    dim->add_option("--n-max", dim_nmax, "horizon for the numeric bounds")->capture_default_str();
    dim->add_flag("--partials", dim_partials, "include partial ratios");

    // dim-curve
    auto* curve = app.add_subcommand("dim-curve", "closed-form dimension over a parameter sweep (CSV)");
    SpecArgs curve_spec;
    curve_spec.attach(curve);
    std::string curve_param, curve_values;
    curve->add_option("--param", curve_param, "alpha, b, c, beta or power (default: figure data)");
    curve->add_option("--values", curve_values, "comma-separated parameter values");

    // boxcount
    auto* boxcount = app.add_subcommand("boxcount", "box-counting estimate for a tree level");
    std::string box_tree;
    std::size_t box_level = 0;
    unsigned box_base = 2, box_from = 2, box_to = 10;
    boxcount->add_option("--tree", box_tree, "tree JSON from levelset")->required();
    boxcount->add_option("--level", box_level, "level (default: deepest)");
    boxcount->add_option("--base", box_base, "grid base")->capture_default_str();
    boxcount->add_option("--from", box_from, "coarsest exponent")->capture_default_str();
    boxcount->add_option("--to", box_to, "finest exponent")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw UsageError{app.help(), 0};
    } catch (const CLI::CallForAllHelp&) {
        throw UsageError{app.help("", CLI::AppFormatMode::All), 0};
    } catch (const CLI::CallForVersion&) {
        throw UsageError{std::string(kToolVersion) + "\n", 0};
    } catch (const CLI::ParseError& e) {
        throw UsageError{std::string(e.what()) + "\nRun with --help for usage."};
    }

    if (expand->parsed()) {
        result.subcommand = "expand";
        Json out = header("expand");
        if (!rational_text.empty()) {
            const Rational r = Rational::parse(rational_text);
            CFWord word = expand_rational(r);
            bool truncated = false;
            if (expand_n > 0 && expand_n < word.size()) {
                word = word.prefix(expand_n);
            } else if (expand_n > word.size()) {
                truncated = true;
            }
            out["method"] = "exact_euclid";
            out["input"] = r.str();
            add_word_stats(out, word);
            out["truncated"] = truncated;
        } else if (!real_text.empty()) {
            if (expand_n == 0) throw UsageError{"--real requires --n"};
            const std::size_t precision =
                expand_precision == 0 ? required_precision_bits(expand_n) : expand_precision;
            const BigFloat x = BigFloat::parse(real_text, static_cast<mpfr_prec_t>(precision));
            const RealExpansion expansion = expand_real(x, expand_n, precision);
            out["method"] = "interval_gauss_map";
            out["input"] = real_text;
            out["precision_bits"] = precision;
            add_word_stats(out, expansion.word);
            out["truncated"] = expansion.truncated;
        } else {
            throw UsageError{"expand requires --rational or --real"};
        }
        result.outputs.push_back({"-", dump(out)});
    } else if (cylinder->parsed()) {
        result.subcommand = "cylinder";
        const CFWord word = CFWord::parse(cylinder_digits);
        const CylinderInfo info = cylinder_interval(word);
        Json out = header("cylinder");
        out["method"] = "exact_convergents";
        out["digits"] = word.str();
        out["interval"] = to_json(info.interval);
        out["length"] = info.length.str();
        out["gauss_measure"] = {{"method", "log_ratio_mpfr"}, {"value", gauss_measure(info.interval)}};
        result.outputs.push_back({"-", dump(out)});
    } else if (simulate->parsed()) {
        result.subcommand = "simulate";
        result.seed = sim.seed;
        const std::vector<double> ys = parse_list(ys_text);
        const SimResult sr = simulate_extremes(sim);
        Json out = header("simulate");
        out["config"] = {{"n", sr.config.n_digits},
                         {"trials", sr.config.trials},
                         {"seed", sr.config.seed},
                         {"precision_bits", sr.config.precision_bits}};
        out["failed_trials"] = sr.failed_trials;
        if (!sr.samples.empty()) {
            out["galambos"] = {{"method", "empirical_cdf_vs_exp_minus_inverse_y"},
                               {"rows", to_json(galambos_cdf_compare(sr.samples, ys))}};
            if (sim.n_digits >= 2) {
                std::vector<double> trimmed;
                for (const auto& s : sr.samples) trimmed.push_back(trimmed_sum_stat(s));
                const double target = 1.0 / std::log(2.0);
                const double med = median(trimmed);
                out["trimmed_sum"] = {{"method", "median"},
                                      {"value", med},
                                      {"target", target},
                                      {"relative_error", std::abs(med - target) / target}};
            }
            if (sim.n_digits >= 3) {
                std::vector<double> ratios;
                for (const auto& s : sr.samples) ratios.push_back(log_ratio_stat(s));
                out["log_ratio"] = {{"method", "median"}, {"value", median(ratios)}};
            }
            if (sim.n_digits >= 16) {
                std::vector<double> pm, ilmax, ilmin;
                for (const auto& s : sr.samples) {
                    pm.push_back(s.diagnostics.philipp_min);
                    ilmax.push_back(s.diagnostics.iterated_log_max);
                    ilmin.push_back(s.diagnostics.iterated_log_min);
                }
                out["law_diagnostics"] = {{"method", "median_over_trials"},
                                          {"philipp_min", median(pm)},
                                          {"iterated_log_max", median(ilmax)},
                                          {"iterated_log_min", median(ilmin)}};
            }
        }
        std::ostringstream csv;
        write_samples_csv(csv, sr.samples);
        if (!sim_out.empty()) {
            result.outputs.push_back({sim_out + ".csv", csv.str()});
            result.outputs.push_back({sim_out + ".json", dump(out)});
        } else {
            result.outputs.push_back({"-", sim_format == "csv" ? csv.str() : dump(out)});
        }
    } else if (levelset->parsed()) {
        result.subcommand = "levelset";
        const GrowthSpec spec = level_spec.build();
        ConstructionParams params{spec};
        params.N = level_N == 0 ? threshold_N(spec) : level_N;
        params.mode = level_mode == "exact" ? ConstructionMode::exact : ConstructionMode::log_only;
        Json out;
        if (params.mode == ConstructionMode::exact) {
            LevelTree tree = build_levels(params, level_depth, level_budget);
            if (level_prune) tree = prune_to_counts(tree);
            out = tree_to_json(tree);
            out["subcommand"] = "levelset";
            out["mode"] = "exact";
        } else {
            out = header("levelset");
            out["mode"] = "log_only";
            out["spec"] = to_json(spec);
            out["N"] = params.N;
            out["levels"] = to_json(construction_sequences(params, level_nmax), params.N);
        }
        result.outputs.push_back({"-", dump(out)});
    } else if (dim->parsed()) {
        result.subcommand = "dim";
        const GrowthSpec spec = dim_spec.build();
        Json out = header("dim");
        out["spec"] = to_json(spec);
        out["n_max"] = dim_nmax;
        Json estimates = Json::array();
        estimates.push_back(estimate_entry([&] { return closed_form_dim(spec); }, "closed_form", false));
        estimates.push_back(
            estimate_entry([&] { return remark_bound(spec, dim_nmax); }, "remark", dim_partials));
        estimates.push_back(estimate_entry(
            [&] {
                const auto params = ConstructionParams::with_threshold(spec, ConstructionMode::log_only);
                const auto seq = construction_sequences(params, dim_nmax);
                return lemma46_bound(seq.log_m, seq.log_eps, dim_nmax);
            },
            "lemma46", dim_partials));
        if (spec.doubly() != nullptr) {
            estimates.push_back(estimate_entry([&] { return wang_wu_upper(spec); }, "wang_wu_upper", false));
        }
        out["estimates"] = std::move(estimates);
        result.outputs.push_back({"-", dump(out)});
    } else if (curve->parsed()) {
        result.subcommand = "dim-curve";
        std::vector<CurvePoint> points;
        if (curve_param.empty()) {
            points = figure_one_curve();
        } else {
            if (curve_values.empty()) throw UsageError{"--param requires --values"};
            points = dim_curve({curve_spec.build(), parse_sweep_param(curve_param), parse_list(curve_values)});
        }
        std::ostringstream csv;
        write_curve_csv(csv, points);
        result.outputs.push_back({"-", csv.str()});
    } else if (boxcount->parsed()) {
        result.subcommand = "boxcount";
        std::ifstream in(box_tree);
        if (!in) throw DomainError("cannot read tree file '" + box_tree + "'");
        Json tree;
        try {
            tree = Json::parse(in);
        } catch (const Json::exception& e) {
            throw DomainError(std::string("malformed tree JSON: ") + e.what());
        }
        const std::size_t level = box_level == 0 ? tree.at("depth").get<std::size_t>() : box_level;
        const auto intervals = level_intervals_from_json(tree, level);
        const auto scales = geometric_scales(box_base, box_from, box_to);
        Json out = header("boxcount");
        out["level"] = level;
        out["intervals"] = intervals.size();
        Json counts = Json::array();
        for (const auto& delta : scales) {
            counts.push_back({{"delta", delta.str()}, {"boxes", count_boxes(intervals, delta)}});
        }
        out["counts"] = std::move(counts);
        out["estimate"] = to_json(box_count_dim(intervals, scales));
        result.outputs.push_back({"-", dump(out)});
    }
    return result;
}

}  // namespace cfx::cli
