#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "reebfol/profile.hpp"

namespace reebfol {

using Json = nlohmann::json;

inline constexpr int kProfileSchemaVersion = 1;

/// Serializes with every floating-point number printed as %.17g.
std::string dump_json(const Json& j, int indent = 2);

Json profile_to_json(const Profile& profile);

/// Throws Error(Input) for a malformed document and Error(Structural) for a
/// document that parses but violates a profile invariant.
Profile profile_from_json(const Json& j);

Profile load_profile(const std::filesystem::path& path);
void save_profile(const std::filesystem::path& path, const Profile& profile);

/// Reads a whole file as JSON; throws Error(Input) on I/O or parse failure.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace reebfol
