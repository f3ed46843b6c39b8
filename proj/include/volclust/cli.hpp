#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "volclust/io.hpp"

namespace volclust::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;    // usage, validation, or input-data error
inline constexpr int kExitRuntime = 2;  // numeric breakdown or I/O failure

/// Entry point for the `volclust` tool. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// {command, version, config{}, seeds[], inputs[{path, sha256}]}
Json make_manifest(const std::string& command, Json config, const std::vector<std::uint64_t>& seeds,
                   const std::vector<std::filesystem::path>& inputs);

}  // namespace volclust::cli
