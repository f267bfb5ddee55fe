// Batch-script rendering and the inverse extraction.
//
// render() turns a complete plan into a Slurm submission script
// byte-deterministically; extract() parses such a script back into a plan.
// The two are inverses over every field the renderer emits.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "trainkit/layout.hpp"
#include "trainkit/model_config.hpp"

namespace trainkit {

struct EnvVar {
  std::string name;
  std::string value;
};

// Environment exports grouped by purpose. The timeout group is the load-
// bearing one: those three variables keep collective operations alive across
// transient fabric events (link retraining), and check_env_profile pins the
// set exactly. The debug group renders only when debug_enabled.
struct EnvProfile {
  std::vector<EnvVar> error_handling;
  std::vector<EnvVar> timeout_mitigation;
  std::vector<EnvVar> interface_selection;
  std::vector<EnvVar> debug;
  bool debug_enabled = false;

  static EnvProfile defaults();
};

// Throws std::invalid_argument unless timeout_mitigation is exactly
// {NCCL_IB_TIMEOUT, UCX_RC_TIMEOUT, NCCL_IB_RETRY_CNT} in that order.
void check_env_profile(const EnvProfile& profile);

struct DataPaths {
  std::string vocab;
  std::string merges;
  std::string dataset;
  std::string output_root;
};

struct ScriptPlan {
  std::string job_name;
  std::string account;
  std::string partition;
  ParallelLayout layout;
  ModelSpec model;
  ScheduleSpec schedule;
  EnvProfile env = EnvProfile::defaults();
  std::string container_image;
  DataPaths paths;
  bool load_checkpoints = false;
  std::uint64_t master_port = 6000;
  std::uint64_t cpus_per_task = 48;
};

// The worked 800M two-node example plan; also the golden-fixture source.
ScriptPlan reference_plan();

// Thrown by render() when the plan's layout has validation errors. The
// violations are carried for reporting.
class RenderError : public std::runtime_error {
 public:
  RenderError(std::string message, std::vector<Violation> violations)
      : std::runtime_error(std::move(message)),
        violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Deterministic POSIX shell output, LF line endings, trailing newline.
// Sections in fixed order: scheduler directives, path setup, environment
// exports, master-address resolution, parallel layout variables, argument
// groups, launcher, container-wrapped srun line. Refuses (RenderError) plans
// whose layout carries error-severity violations.
std::string render(const ScriptPlan& plan);

class ScriptParseError : public std::runtime_error {
 public:
  ScriptParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Inverse of render: recovers every plan field from script text. Unknown
// lines are skipped (scripts carry boilerplate); missing or malformed
// required fields raise ScriptParseError with a line number. Empty input
// fails at line 1.
ScriptPlan extract(const std::string& script_text);

}  // namespace trainkit
