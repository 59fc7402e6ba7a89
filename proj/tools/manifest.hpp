#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

namespace gsk::cli {

std::string sha256_file(const std::filesystem::path& path);

// Options whose values are input files; their contents are digested.
void mark_input(CLI::Option* opt);

// Subcommand chain, every flag with its effective value, seed and input digests.
nlohmann::ordered_json build_manifest(const CLI::App& root, const std::optional<std::uint64_t>& seed,
                                      const std::string& version);

}  // namespace gsk::cli
