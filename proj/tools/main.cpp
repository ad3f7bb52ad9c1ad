#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfx/errors.hpp"
#include "cfx/io.hpp"
#include "commands.hpp"

namespace {

using cfx::Json;
using cfx::cli::Output;
using cfx::cli::RunResult;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

Json manifest_for(const std::vector<std::string>& args, const RunResult& result) {
    Json out;
    out["schema_version"] = cfx::kSchemaVersion;
    out["tool"] = "cfx";
    out["tool_version"] = cfx::cli::kToolVersion;
    out["subcommand"] = result.subcommand;
    out["args"] = args;
    out["seed"] = result.seed ? Json(*result.seed) : Json(nullptr);
    Json paths = Json::array();
    for (const auto& o : result.outputs) paths.push_back(o.path);
    out["outputs"] = std::move(paths);
    out["output_sha256"] = cfx::cli::outputs_checksum(result.outputs);
    return out;
}

void write_outputs(const std::vector<Output>& outputs) {
    for (const auto& o : outputs) {
        if (o.path == "-") {
            std::cout << o.content;
            continue;
        }
        std::ofstream file(o.path, std::ios::binary);
        if (!file || !(file << o.content)) {
            throw cfx::DomainError("cannot write '" + o.path + "'");
        }
    }
    std::cout.flush();
}

int replay(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw cfx::DomainError("cannot read manifest '" + manifest_path + "'");
    const Json manifest = Json::parse(in);
    const auto args = manifest.at("args").get<std::vector<std::string>>();
    const RunResult result = cfx::cli::execute(args);
    const std::string expected = manifest.at("output_sha256").get<std::string>();
    const std::string actual = cfx::cli::outputs_checksum(result.outputs);
    Json report;
    report["schema_version"] = cfx::kSchemaVersion;
    report["subcommand"] = "replay";
    report["replayed"] = result.subcommand;
    report["expected_sha256"] = expected;
    report["actual_sha256"] = actual;
    report["status"] = expected == actual ? "match" : "mismatch";
    std::cout << report.dump(2) << '\n';
    return expected == actual ? 0 : kExitDomain;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);

    // --manifest PATH is a sink choice, not part of the run.
    std::string manifest_path;
    for (auto it = args.begin(); it != args.end();) {
        if (*it == "--manifest" && it + 1 != args.end()) {
            manifest_path = *(it + 1);
            it = args.erase(it, it + 2);
        } else if (it->rfind("--manifest=", 0) == 0) {
            manifest_path = it->substr(11);
            it = args.erase(it);
        } else {
            ++it;
        }
    }

    try {
        if (!args.empty() && args.front() == "replay") {
            if (manifest_path.empty() || args.size() != 1) {
                std::cerr << "usage: cfx replay --manifest PATH\n";
                return kExitUsage;
            }
            return replay(manifest_path);
        }
        const RunResult result = cfx::cli::execute(args);
        write_outputs(result.outputs);
        const std::string manifest = manifest_for(args, result).dump(2) + "\n";
        if (manifest_path.empty()) {
            std::cerr << manifest;
        } else {
            std::ofstream file(manifest_path);
            if (!file || !(file << manifest)) {
                throw cfx::DomainError("cannot write manifest '" + manifest_path + "'");
            }
        }
        return 0;
    } catch (const cfx::cli::UsageError& e) {
        (e.exit_code == 0 ? std::cout : std::cerr) << e.message;
        if (!e.message.empty() && e.message.back() != '\n') std::cerr << '\n';
        return e.exit_code;
    } catch (const std::logic_error& e) {
        // DomainError derives from std::domain_error.
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    }
}
