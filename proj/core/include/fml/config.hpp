#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fml/choquet.hpp"
#include "fml/ifs.hpp"
#include "fml/word.hpp"

namespace fml {

/// IFS configuration (JSON):
///   { "name": "...", "ratios": [...], "probabilities": [...],
///     "translations": [[...], ...], "rotations": [[[...]...]...], "ssc": true }
/// translations, rotations, name and ssc are optional. Unknown keys are
/// rejected. Throws ConfigError.
IteratedFunctionSystem parse_ifs_config(std::string_view json_text, std::string default_name = {});
IteratedFunctionSystem load_ifs_config(const std::filesystem::path& path);

/// One word per line; blank lines and lines starting with '#' are skipped.
std::vector<Word> parse_cells(std::string_view text, int arity);
std::vector<Word> load_cells(const std::filesystem::path& path, int arity);

/// { "depth": n, "values": { "word": v, ... } }
CylinderFunction parse_function(std::string_view json_text, int arity);
CylinderFunction load_function(const std::filesystem::path& path, int arity);
std::string function_to_json(const CylinderFunction& f);

}  // namespace fml
