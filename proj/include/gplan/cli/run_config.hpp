#pragma once

#include "gplan/worldsim/mission.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace gplan {

/// Bad configuration. `what()` is "<source>:<line>: <message>" when the line is known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct WorldSource {
  std::string kind;  // generator name; empty when `file` is used
  std::string file;
  WorldParams params;
  std::uint64_t seed = 0;

  bool operator==(const WorldSource&) const = default;
};

struct RunConfig {
  std::string preset;  // applied before every other key
  WorldSource world;
  MissionConfig mission;
  std::uint64_t seed = 1;
  int trials = 1;
  std::string out_dir = "out";
};

/// Sensor, embodiment and resolution defaults: aerial_cave, aerial_confined,
/// ground_mine, underwater.
void apply_preset(MissionConfig& config, const std::string& name);

/// INI text. `overrides` are `section.key=value` assignments applied on top of
/// the file. Relative world files resolve against `base_dir`.
RunConfig parse_run_config(std::istream& is, const std::string& source = "<config>",
                           const std::vector<std::string>& overrides = {}, const std::string& base_dir = "");
RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides = {});
/// Defaults plus overrides, no file.
RunConfig default_run_config(const std::vector<std::string>& overrides = {});

/// Every key, in a form parse_run_config reads back to an identical config.
void write_run_config(std::ostream& os, const RunConfig& config);

World load_world(const WorldSource& source);

}  // namespace gplan
