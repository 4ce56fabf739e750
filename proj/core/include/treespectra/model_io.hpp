#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "treespectra/tree.hpp"

namespace treespectra {

// Model document schema (JSON):
//   { "degree_bound": int, "origin": id,
//     "vertices": [ { "id", "potential", "diagonal"? } ],
//     "edges":    [ { "a", "b", "weight"? } ],
//     "tail"?:    { "frontier": [id], "branching": int, "potential": real, "weight"?: real } }
// Ids may be strings or integers.  Missing weight = 1, missing diagonal =
// potential, missing degree_bound = 16.
ModelDescription parse_model_description(std::string_view document);
TreeModel load_model(std::string_view document);
TreeModel load_model_file(const std::filesystem::path& path);

std::string to_document(const ModelDescription& description);

}  // namespace treespectra
