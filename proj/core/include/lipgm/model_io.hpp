#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "lipgm/factor_graph.hpp"
#include "lipgm/gaussian_model.hpp"
#include "lipgm/synth.hpp"

namespace lipgm {

inline constexpr int kModelSchemaVersion = 1;

using AnyModel = std::variant<GaussianModel, DiscreteFactorGraph, ContinuousFactorGraph>;

struct Provenance {
  std::string source;              // e.g. "random_ggm", "graphical_lasso"
  std::optional<GenSpec> spec;     // generator spec when synthetic
  std::map<std::string, std::string> notes;
};

struct ModelDocument {
  AnyModel model;
  Provenance provenance;
};

/// Kind discriminator: "ggm", "dfg" or "cfg".
std::string_view model_kind(const AnyModel& m) noexcept;

/// JSON with schema_version, kind, dimensions, row-major weights, declared
/// bounds, feature-map kind and provenance. Doubles use the shortest decimal
/// form that parses back to the same value.
std::string model_to_json(const ModelDocument& doc);
/// Throws SchemaVersionMismatch or MalformedField.
ModelDocument model_from_json(std::string_view text);

void save_model(const std::filesystem::path& path, const ModelDocument& doc);
ModelDocument load_model(const std::filesystem::path& path);

}  // namespace lipgm
