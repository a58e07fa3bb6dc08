#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlstrain/nonlinearity.hpp"
#include "nlstrain/train.hpp"

namespace nlstrain {

enum class Command { BoundState, Kink, TrainDiagnostics, SourceDecay, EvolveTrain, Duhamel, VerifyAll };

std::string to_string(Command command);
/// Throws Validation for unknown names.
Command parse_command(std::string_view name);

struct PresetRef {
  PresetKind kind = PresetKind::A;
  int J = 3;
  double vbar = 20.0;
  double h = 1.0;

  bool operator==(const PresetRef&) const = default;
};

/// Either a preset reference or explicit waves plus an optional kink.
struct TrainConfig {
  std::optional<PresetRef> preset;
  std::vector<SolitonParam> waves;
  std::optional<KinkWave> kink;

  bool operator==(const TrainConfig&) const = default;
};

struct GridConfig {
  double L = 0.0;
  std::size_t N = 0;

  bool operator==(const GridConfig&) const = default;
};

/// Everything a run needs; there are no random seeds anywhere.
struct RunConfig {
  Command command = Command::VerifyAll;
  Nonlinearity nl = Nonlinearity::pure_power(1.0);
  double omega = 1.0;  // bound-state
  int d = 1;           // bound-state
  std::optional<TrainConfig> train;
  std::optional<GridConfig> grid;
  double T = 4.0;
  double dt = 1e-3;
  double dt_q = 1e-3;
  std::vector<double> sample_times;
  std::size_t iterations = 4;
  std::optional<double> frame_velocity;
  std::string output_dir = ".";

  bool operator==(const RunConfig&) const = default;
};

nlohmann::json nonlinearity_to_json(const Nonlinearity& nl);
/// {"kind":"double_power","alpha":..,"beta":..}, {"kind":"pure_power","alpha":..} or {"kind":"sine_example"}.
Nonlinearity nonlinearity_from_json(const nlohmann::json& j);

/// Canonical form: every field written, keys sorted.
nlohmann::json to_json(const RunConfig& config);
/// Strict parse: unknown keys, wrong types and missing command inputs throw Validation.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig parse_run_config(std::string_view text);

/// Builds the train of a config (Validation when it has none).
TrainSpec train_spec(const RunConfig& config);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
/// FNV-1a of the canonical JSON dump without output_dir, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace nlstrain
