#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sosgap/models.hpp"

namespace sosgap {

/// Ground truth attached to a matrix file.
struct GroundTruth {
  std::vector<int> support;
  ModelParams params;
};

struct MatrixFile {
  NoisyMatrix matrix;
  std::optional<GroundTruth> ground_truth;
};

nlohmann::json params_to_json(const ModelParams& params);
ModelParams params_from_json(const nlohmann::json& j);

/// {"d", "format": "upper-tri-row-major", "entries", ["ground_truth"]}.
/// Doubles are written in shortest round-trip form, so reading back is
/// bit-exact.
nlohmann::json matrix_to_json(const NoisyMatrix& matrix,
                              const std::optional<GroundTruth>& truth = {});
MatrixFile matrix_from_json(const nlohmann::json& j);

void write_matrix_file(const std::filesystem::path& path,
                       const NoisyMatrix& matrix,
                       const std::optional<GroundTruth>& truth = {});
MatrixFile read_matrix_file(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sosgap
