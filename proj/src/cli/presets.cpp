#include "nexlab/cli/presets.hpp"

#include "nexlab/core/error.hpp"

namespace nexlab::cli {

using nlohmann::json;

namespace {

json translation() {
  return {{"name", "translation"},
          {"operator", {{"type", "translation"}, {"c", {1.0}}}},
          {"N", 50},
          {"T", 100.0},
          {"lambdas", {1.0, 0.5, 0.1, 0.001}},
          {"x0", {0.0}},
          {"steps", {{"type", "harmonic"}, {"N", 100}}}};
}

json rotation30() {
  return {{"name", "rotation30"},
          {"operator", {{"type", "rotation"}, {"degrees", 30.0}}},
          {"N", 50},
          {"T", 10.0},
          {"lambdas", {0.5, 0.1, 0.01}},
          {"x0", {1.0, 0.0}},
          {"steps", {{"type", "harmonic"}, {"N", 100}}}};
}

json matching_pennies() {
  return {{"name", "matching-pennies"},
          {"operator", {{"type", "matching_pennies"}}},
          {"N", 50},
          {"T", 10.0},
          {"lambdas", {0.5, 0.1, 0.01}},
          {"x0", {0.0}},
          {"steps", {{"type", "harmonic"}, {"N", 100}}}};
}

json random3() {
  return {{"name", "random3"},
          {"operator",
           {{"type", "random_game"}, {"states", 3}, {"m", 2}, {"n", 2}, {"range", {-1.0, 1.0}}, {"seed", 7}}},
          {"N", 100},
          {"T", 10.0},
          {"lambdas", {0.5, 0.1, 0.01}},
          {"x0", {0.0, 0.0, 0.0}},
          {"steps", {{"type", "harmonic"}, {"N", 100}}},
          {"game", {{"states", 3}, {"m", 2}, {"n", 2}, {"range", {-1.0, 1.0}}, {"seed", 7}}}};
}

json scenario_of(const json& p) { return {{"name", p.at("name")}, {"operator", p.at("operator")}}; }

json paper_suite() {
  return {{"name", "paper-suite"},
          {"checks", "all"},
          {"scenarios", {scenario_of(translation()), scenario_of(rotation30()), scenario_of(matching_pennies()),
                         scenario_of(random3())}}};
}

}  // namespace

std::vector<std::string> preset_names() { return {"translation", "rotation30", "matching-pennies", "random3", "paper-suite"}; }

json preset(const std::string& name) {
  json doc;
  if (name == "translation") doc = translation();
  else if (name == "rotation30") doc = rotation30();
  else if (name == "matching-pennies") doc = matching_pennies();
  else if (name == "random3") doc = random3();
  else if (name == "paper-suite") doc = paper_suite();
  else throw ConfigError("preset: unknown preset '" + name + "'");
  doc["preset"] = name;
  doc["preset_version"] = kPresetVersion;
  return doc;
}

}  // namespace nexlab::cli
