#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctfb/sim.hpp"

namespace ctfb {

/// A fully specified simulation run as read from a TOML scenario file.
///
/// Layout (every table except [plant], [controller], [gain] and
/// [simulation] is optional; unknown keys are rejected):
///
///   [plant]       model = "electromechanical" | "chain", order, g_min, x0
///   [plant.parameters]  M, N, B, Km, H, L   (electromechanical only)
///   [reference]   kind = "sinusoid" | "constant", value
///   [controller]  k, l, delta, sigma_amplitude, sigma_decay
///   [gain]        T, epsilon
///   [simulation]  step, horizon, variant, mu_const
///   [output]      path
struct Scenario {
  std::string name;

  std::string plant_model = "electromechanical";
  ElectromechanicalParams electromechanical;
  double g_min = PlantModel::kDefaultGMin;
  std::vector<double> x0;

  std::string reference_kind = "sinusoid";
  double reference_value = 0.0;

  std::vector<double> k;
  std::vector<double> l;
  std::vector<double> delta;
  std::vector<double> sigma_amplitude;
  std::vector<double> sigma_decay;

  double prescribed_time = 2.0;
  double epsilon = 0.5;

  double step = 1e-3;
  double horizon = 10.0;
  Variant variant = Variant::proposed;
  std::optional<double> mu_const;

  std::string output_path;

  std::size_t order() const { return x0.size(); }

  /// Builds the simulation config. Throws ValidationError naming the first
  /// violated constraint.
  SimConfig to_sim_config() const;
  void validate() const { (void)to_sim_config(); }
};

/// Throws Error if the file cannot be opened, ParseError (malformed TOML,
/// wrong types, unknown or missing keys) or ValidationError.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_string(std::string_view text,
                               std::string_view source = "<string>");

/// TOML text that parse_scenario_string maps back to an equal scenario.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace ctfb
