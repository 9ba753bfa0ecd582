#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "hatepipe/adaboost.hpp"
#include "hatepipe/cnn.hpp"
#include "hatepipe/feature_matrix.hpp"
#include "hatepipe/svm.hpp"

namespace hatepipe {

// Model files are JSON: {"format_version": N, "model_kind": "...", ...body}.
inline constexpr int kModelFormatVersion = 1;

using ClassifierModel = std::variant<SvmModel, AdaBoostModel, CnnModel>;

std::string model_kind(const ClassifierModel& model);

nlohmann::json to_json(const FeatureMatrix& m);
FeatureMatrix feature_matrix_from_json(const nlohmann::json& j);
nlohmann::json to_json(const KernelSpec& k);
KernelSpec kernel_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CnnConfig& c);
CnnConfig cnn_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ClassifierModel& model);
ClassifierModel classifier_from_json(const nlohmann::json& j);

// Adds format_version and model_kind to `body`.
nlohmann::json make_envelope(const std::string& kind, nlohmann::json body);
// Parses text and checks the version; throws ParseError / VersionError.
nlohmann::json open_envelope(const std::string& text, const std::string& source);

std::string dump_json(const nlohmann::json& j);

void save_model(const ClassifierModel& model, const std::filesystem::path& path);
ClassifierModel load_model(const std::filesystem::path& path);

}  // namespace hatepipe
