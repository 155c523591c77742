#pragma once

#include <filesystem>

#include "json.hpp"

#include "ftwnb/classifiers.hpp"
#include "ftwnb/synth.hpp"

namespace ftwnb {

using Json = nlohmann::json;

/// Model file: priors, per-feature bin edges, per-feature per-class
/// probability vectors, attribute weights and fine-tuning settings.
Json model_to_json(const FtWnbModel& model);
FtWnbModel model_from_json(const Json& j);
void save_model(const FtWnbModel& model, const std::filesystem::path& path);
FtWnbModel load_model(const std::filesystem::path& path);

Json scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const Json& j);

Json ftwnb_config_to_json(const FtWnbConfig& cfg);
FtWnbConfig ftwnb_config_from_json(const Json& j);

}  // namespace ftwnb
