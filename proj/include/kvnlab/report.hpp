#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "kvnlab/field.hpp"

namespace kvnlab {

/// One experiment's outputs: report.json plus one CSV per density/table.
/// Scalars live under the spec'd keys (params / moments / closed_form /
/// max_abs_error); verify addresses them as "moments.<name>" etc.
struct ExperimentReport {
    std::string experiment;
    nlohmann::json params;                       // resolved configuration echo
    std::map<std::string, std::string> info;     // method notes (shift method, boxes)
    std::map<std::string, double> moments;
    std::map<std::string, double> closed_form;
    double max_abs_error = 0.0;
    nlohmann::json extra;                        // e.g. extrema tables

    std::vector<std::pair<std::string, std::variant<RealField1D, RealField2D>>> densities;
    std::vector<std::pair<std::string, std::string>> tables; // name -> csv body

    /// Writes report.json and the CSVs into dir (created if needed).
    void write(const std::filesystem::path& dir) const;
};

/// Deterministic FNV-1a 64 over a file's bytes, as a fixed-width hex string.
std::string fnv1a64_file_hex(const std::filesystem::path& path);

} // namespace kvnlab
