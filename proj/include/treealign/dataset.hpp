#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "treealign/points.hpp"

namespace treealign {

// A collection of weighted point sets with optional class labels or
// regression targets, described by a JSON manifest:
//   {"weighted": false,
//    "measures": [{"file": "m0.txt", "label": 0, "target": 1.5, "weighted": true}, ...]}
// File paths are relative to the manifest. "weighted" (per measure or as a
// default for all) means the first column of every row is a weight.
struct Dataset {
    std::vector<WeightedPoints> measures;
    std::optional<std::vector<int>> labels;
    std::optional<std::vector<double>> targets;
    std::filesystem::path manifest_path;

    std::size_t size() const { return measures.size(); }
};

// Accepts a manifest file or a directory containing manifest.json.
Dataset load_dataset(const std::filesystem::path& path);

// Writes measure_NNNN.txt files with a weight column plus manifest.json into dir.
void write_dataset(const Dataset& ds, const std::filesystem::path& dir);

}  // namespace treealign
