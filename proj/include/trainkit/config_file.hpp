// Plain-text run configuration: `[section]` headers and `key = value` lines,
// '#' comments. Section names are fixed ([machine], [model], [schedule],
// [layout], [paths], [env]); keys use the same variable names the generated
// scripts do. Parsing is strict: unknown sections, unknown keys and duplicate
// keys are errors.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "trainkit/machine.hpp"
#include "trainkit/model_config.hpp"
#include "trainkit/script.hpp"

namespace trainkit {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  explicit ConfigError(const std::string& message)
      : std::runtime_error(message), line_(0) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ConfigFile {
  // section -> key -> (value, source line)
  std::map<std::string, std::map<std::string, std::pair<std::string,
                                                        std::size_t>>>
      sections;

  bool has(const std::string& section) const {
    return sections.count(section) != 0;
  }
};

// Syntax plus section-name check. Throws ConfigError with the line number.
ConfigFile parse_config_text(const std::string& text);
ConfigFile load_config_file(const std::string& path);

// Typed section loaders. Absent section = stated default (the built-in
// machine, the reference model/schedule). Each rejects unknown keys and
// value types via ConfigError and gates the result through its check_*.
MachineSpec machine_from_config(const ConfigFile& config);
ModelSpec model_from_config(const ConfigFile& config);
ScheduleSpec schedule_from_config(const ConfigFile& config);
EnvProfile env_from_config(const ConfigFile& config);

struct PathsConfig {
  DataPaths data;
  std::string container_image = "ngc_torch.sif";
};

PathsConfig paths_from_config(const ConfigFile& config);

// [layout] carries the degrees the operator pins; dp and gas are derived,
// never written. gpus_per_node defaults to the machine's.
struct LayoutInputs {
  std::uint64_t nodes = 1;
  std::uint64_t tp = 1;
  std::uint64_t pp = 1;
  std::uint64_t micro_batch = 1;
  std::uint64_t global_batch = 1;
  std::optional<std::uint64_t> gpus_per_node;
};

LayoutInputs layout_from_config(const ConfigFile& config);

// Everything needed to derive, validate and render: dp = ngpus/(tp*pp) and
// gas = global/(micro*dp) computed here. LayoutError propagates when the
// arithmetic cannot work out.
ParallelLayout resolve_layout(const LayoutInputs& inputs,
                              const MachineSpec& machine);

// Slurm submission identity ([schedule] keys beyond ScheduleSpec).
struct JobIdentity {
  std::string job_name = "800M_model";
  std::string account = "account";
  std::string partition = "booster";
  std::uint64_t master_port = 6000;
  bool load_checkpoints = false;
};

JobIdentity job_from_config(const ConfigFile& config);

// Full plan assembly from one config (the render subcommand's path).
ScriptPlan plan_from_config(const ConfigFile& config);

}  // namespace trainkit
