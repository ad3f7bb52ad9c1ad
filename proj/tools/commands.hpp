#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cfx::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// One produced artifact; path "-" is standard output.
struct Output {
    std::string path;
    std::string content;
};

struct RunResult {
    std::string subcommand;
    std::optional<std::uint64_t> seed;
    std::vector<Output> outputs;
};

/// Thrown for malformed command lines; maps to exit code 2.
struct UsageError {
    std::string message;
    int exit_code = 2;
};

/// Parses and executes one subcommand without touching the filesystem
/// (except to read inputs). Module errors propagate as exceptions.
RunResult execute(const std::vector<std::string>& args);

/// Lowercase hex SHA-256 over all outputs in order.
std::string outputs_checksum(const std::vector<Output>& outputs);

}  // namespace cfx::cli
