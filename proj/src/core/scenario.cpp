#include "ctfb/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "ctfb/errors.hpp"

namespace ctfb {

namespace {

std::size_t line_of(const toml::node& node) {
  return static_cast<std::size_t>(node.source().begin.line);
}

std::string at_line(std::size_t line) {
  return line > 0 ? " (line " + std::to_string(line) + ")" : "";
}

// Rejects keys of `table` outside `allowed`.
void expect_keys(const toml::table& table, std::string_view prefix,
                 const std::set<std::string_view>& allowed) {
  for (const auto& [key, node] : table) {
    if (!allowed.contains(key.str())) {
      std::string full(prefix);
      if (!full.empty()) full += '.';
      full += key.str();
      throw ParseError("unknown key '" + full + "'" + at_line(line_of(node)),
                       line_of(node));
    }
  }
}

const toml::table* subtable(const toml::table& root, std::string_view name,
                            bool required) {
  const toml::node* node = root.get(name);
  if (node == nullptr) {
    if (required) {
      throw ParseError("missing table [" + std::string(name) + "]");
    }
    return nullptr;
  }
  const toml::table* t = node->as_table();
  if (t == nullptr) {
    throw ParseError("'" + std::string(name) + "' must be a table" +
                         at_line(line_of(*node)),
                     line_of(*node));
  }
  return t;
}

std::optional<double> number(const toml::table& t, std::string_view table_name,
                             std::string_view key, bool required) {
  const toml::node* node = t.get(key);
  const std::string full = std::string(table_name) + "." + std::string(key);
  if (node == nullptr) {
    if (required) throw ParseError("missing key '" + full + "'");
    return std::nullopt;
  }
  if (auto v = node->value<double>(); v && (node->is_floating_point() ||
                                            node->is_integer())) {
    return *v;
  }
  throw ParseError("key '" + full + "' must be a number" +
                       at_line(line_of(*node)),
                   line_of(*node));
}

std::optional<std::string> string(const toml::table& t,
                                  std::string_view table_name,
                                  std::string_view key, bool required) {
  const toml::node* node = t.get(key);
  const std::string full = std::string(table_name) + "." + std::string(key);
  if (node == nullptr) {
    if (required) throw ParseError("missing key '" + full + "'");
    return std::nullopt;
  }
  if (auto v = node->value<std::string>(); v && node->is_string()) return *v;
  throw ParseError("key '" + full + "' must be a string" +
                       at_line(line_of(*node)),
                   line_of(*node));
}

std::vector<double> numbers(const toml::table& t, std::string_view table_name,
                            std::string_view key) {
  const toml::node* node = t.get(key);
  const std::string full = std::string(table_name) + "." + std::string(key);
  if (node == nullptr) throw ParseError("missing key '" + full + "'");
  const toml::array* arr = node->as_array();
  if (arr == nullptr) {
    throw ParseError("key '" + full + "' must be an array of numbers" +
                         at_line(line_of(*node)),
                     line_of(*node));
  }
  std::vector<double> out;
  for (const auto& el : *arr) {
    if (!(el.is_floating_point() || el.is_integer())) {
      throw ParseError("key '" + full + "' must be an array of numbers" +
                           at_line(line_of(el)),
                       line_of(el));
    }
    out.push_back(*el.value<double>());
  }
  return out;
}

Scenario from_table(const toml::table& root, std::string_view source) {
  expect_keys(root, "",
              {"plant", "reference", "controller", "gain", "simulation",
               "output"});
  Scenario sc;
  sc.name = std::filesystem::path(source).stem().string();

  const toml::table& plant = *subtable(root, "plant", true);
  expect_keys(plant, "plant", {"model", "order", "g_min", "x0", "parameters"});
  sc.plant_model = *string(plant, "plant", "model", true);
  sc.x0 = numbers(plant, "plant", "x0");
  if (auto v = number(plant, "plant", "g_min", false)) sc.g_min = *v;
  if (auto v = number(plant, "plant", "order", false)) {
    if (*v != static_cast<double>(sc.x0.size())) {
      throw ValidationError("plant.order must equal the length of plant.x0");
    }
  }
  if (sc.plant_model == "electromechanical") {
    if (const toml::table* p = subtable(plant, "parameters", false)) {
      expect_keys(*p, "plant.parameters", {"M", "N", "B", "Km", "H", "L"});
      auto& e = sc.electromechanical;
      const char* tn = "plant.parameters";
      if (auto v = number(*p, tn, "M", false)) e.M = *v;
      if (auto v = number(*p, tn, "N", false)) e.N = *v;
      if (auto v = number(*p, tn, "B", false)) e.B = *v;
      if (auto v = number(*p, tn, "Km", false)) e.Km = *v;
      if (auto v = number(*p, tn, "H", false)) e.H = *v;
      if (auto v = number(*p, tn, "L", false)) e.L = *v;
    }
  } else if (sc.plant_model == "chain") {
    if (plant.get("parameters") != nullptr) {
      throw ParseError("plant.parameters is only valid for the "
                       "electromechanical model");
    }
  } else {
    throw ValidationError("plant.model must be \"electromechanical\" or "
                          "\"chain\", got \"" + sc.plant_model + "\"");
  }

  if (const toml::table* ref = subtable(root, "reference", false)) {
    expect_keys(*ref, "reference", {"kind", "value"});
    if (auto v = string(*ref, "reference", "kind", false)) sc.reference_kind = *v;
    if (auto v = number(*ref, "reference", "value", false)) {
      sc.reference_value = *v;
    }
  }

  const toml::table& ctl = *subtable(root, "controller", true);
  expect_keys(ctl, "controller",
              {"k", "l", "delta", "sigma_amplitude", "sigma_decay"});
  sc.k = numbers(ctl, "controller", "k");
  sc.l = numbers(ctl, "controller", "l");
  sc.delta = numbers(ctl, "controller", "delta");
  sc.sigma_amplitude = numbers(ctl, "controller", "sigma_amplitude");
  sc.sigma_decay = numbers(ctl, "controller", "sigma_decay");

  const toml::table& gain = *subtable(root, "gain", true);
  expect_keys(gain, "gain", {"T", "epsilon"});
  sc.prescribed_time = *number(gain, "gain", "T", true);
  sc.epsilon = *number(gain, "gain", "epsilon", true);

  const toml::table& sim = *subtable(root, "simulation", true);
  expect_keys(sim, "simulation", {"step", "horizon", "variant", "mu_const"});
  sc.step = *number(sim, "simulation", "step", true);
  sc.horizon = *number(sim, "simulation", "horizon", true);
  if (auto v = string(sim, "simulation", "variant", false)) {
    auto parsed = parse_variant(*v);
    if (!parsed) {
      throw ValidationError("simulation.variant must be one of proposed, dsc, "
                            "constant_gain_cfb; got \"" + *v + "\"");
    }
    sc.variant = *parsed;
  }
  sc.mu_const = number(sim, "simulation", "mu_const", false);

  if (const toml::table* out = subtable(root, "output", false)) {
    expect_keys(*out, "output", {"path"});
    if (auto v = string(*out, "output", "path", false)) sc.output_path = *v;
  }

  sc.validate();
  return sc;
}

toml::array to_array(const std::vector<double>& v) {
  toml::array a;
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

SimConfig Scenario::to_sim_config() const {
  const std::size_t n = x0.size();
  if (n < 2) {
    throw ValidationError("plant.x0 must have at least 2 entries");
  }
  std::optional<PlantModel> plant;
  if (plant_model == "electromechanical") {
    if (n != 3) {
      throw ValidationError("electromechanical plant has order 3; plant.x0 "
                            "must have 3 entries");
    }
    plant.emplace(electromechanical_model(electromechanical, g_min));
  } else if (plant_model == "chain") {
    plant.emplace(integrator_chain(n, g_min));
  } else {
    throw ValidationError("unknown plant model \"" + plant_model + "\"");
  }

  Reference ref;
  if (reference_kind == "sinusoid") {
    ref = sinusoid_reference();
  } else if (reference_kind == "constant") {
    ref = constant_reference(reference_value);
  } else {
    throw ValidationError("reference.kind must be \"sinusoid\" or "
                          "\"constant\", got \"" + reference_kind + "\"");
  }

  ControllerConfig ctl;
  ctl.k = k;
  ctl.l = l;
  ctl.delta = delta;
  if (sigma_amplitude.size() != n || sigma_decay.size() != n) {
    throw ValidationError("sigma_amplitude and sigma_decay must have " +
                          std::to_string(n) + " entries");
  }
  ctl.sigma = SigmaSchedule(sigma_amplitude, sigma_decay);

  SimConfig cfg{std::move(*plant),
                std::move(ref),
                std::move(ctl),
                GainSchedule(prescribed_time, epsilon),
                x0,
                step,
                horizon,
                variant,
                mu_const};
  cfg.validate();
  return cfg;
}

Scenario parse_scenario_string(std::string_view text, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& err) {
    const auto line = static_cast<std::size_t>(err.source().begin.line);
    std::ostringstream msg;
    msg << source << ":" << line << ": " << err.description();
    throw ParseError(msg.str(), line);
  }
  return from_table(root, source);
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open scenario file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_string(buf.str(), path.string());
}

std::string serialize_scenario(const Scenario& sc) {
  toml::table plant{{"model", sc.plant_model},
                    {"g_min", sc.g_min},
                    {"x0", to_array(sc.x0)}};
  if (sc.plant_model == "electromechanical") {
    const auto& e = sc.electromechanical;
    plant.insert("parameters", toml::table{{"M", e.M},
                                           {"N", e.N},
                                           {"B", e.B},
                                           {"Km", e.Km},
                                           {"H", e.H},
                                           {"L", e.L}});
  }
  toml::table reference{{"kind", sc.reference_kind}};
  if (sc.reference_kind == "constant") {
    reference.insert("value", sc.reference_value);
  }
  toml::table sim{{"step", sc.step},
                  {"horizon", sc.horizon},
                  {"variant", std::string(variant_name(sc.variant))}};
  if (sc.mu_const) sim.insert("mu_const", *sc.mu_const);

  toml::table root{
      {"plant", std::move(plant)},
      {"reference", std::move(reference)},
      {"controller", toml::table{{"k", to_array(sc.k)},
                                 {"l", to_array(sc.l)},
                                 {"delta", to_array(sc.delta)},
                                 {"sigma_amplitude", to_array(sc.sigma_amplitude)},
                                 {"sigma_decay", to_array(sc.sigma_decay)}}},
      {"gain", toml::table{{"T", sc.prescribed_time}, {"epsilon", sc.epsilon}}},
      {"simulation", std::move(sim)}};
  if (!sc.output_path.empty()) {
    root.insert("output", toml::table{{"path", sc.output_path}});
  }
  std::ostringstream out;
  out << root << "\n";
  return out.str();
}

}  // namespace ctfb
