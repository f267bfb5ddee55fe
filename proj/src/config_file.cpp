#include "trainkit/config_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "trainkit/text.hpp"

namespace trainkit {

namespace {

const std::set<std::string> kSections = {"machine", "model",  "schedule",
                                         "layout",  "paths",  "env"};

using Section = std::map<std::string, std::pair<std::string, std::size_t>>;

// Access wrapper that tracks which keys a loader consumed so leftovers can
// be rejected as unknown.
class SectionReader {
 public:
  SectionReader(const ConfigFile& config, const std::string& name) {
    auto it = config.sections.find(name);
    if (it != config.sections.end()) section_ = &it->second;
    name_ = name;
  }

  bool present() const { return section_ != nullptr; }

  std::optional<std::string> take(const std::string& key) {
    if (!section_) return std::nullopt;
    auto it = section_->find(key);
    if (it == section_->end()) return std::nullopt;
    seen_.insert(key);
    return it->second.first;
  }

  std::optional<std::uint64_t> take_u64(const std::string& key) {
    auto raw = take(key);
    if (!raw) return std::nullopt;
    auto value = parse_u64(*raw);
    if (!value)
      throw ConfigError(line_of(key), "[" + name_ + "] " + key +
                                          " is not an unsigned integer");
    return value;
  }

  std::optional<double> take_f64(const std::string& key) {
    auto raw = take(key);
    if (!raw) return std::nullopt;
    auto value = parse_f64(*raw);
    if (!value)
      throw ConfigError(line_of(key),
                        "[" + name_ + "] " + key + " is not a number");
    return value;
  }

  std::optional<bool> take_bool(const std::string& key) {
    auto raw = take(key);
    if (!raw) return std::nullopt;
    if (*raw == "true") return true;
    if (*raw == "false") return false;
    throw ConfigError(line_of(key),
                      "[" + name_ + "] " + key + " must be true or false");
  }

  // Strict mode: every key the loader did not consume is unknown.
  void reject_unknown() const {
    if (!section_) return;
    for (const auto& [key, value] : *section_)
      if (seen_.count(key) == 0)
        throw ConfigError(value.second,
                          "unknown key '" + key + "' in [" + name_ + "]");
  }

  std::size_t line_of(const std::string& key) const {
    auto it = section_->find(key);
    return it == section_->end() ? 0 : it->second.second;
  }

 private:
  const Section* section_ = nullptr;
  std::string name_;
  std::set<std::string> seen_;
};

}  // namespace

ConfigFile parse_config_text(const std::string& text) {
  ConfigFile config;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  std::string current;
  while (std::getline(stream, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.starts_with("#")) continue;
    if (body.starts_with("[")) {
      if (!body.ends_with("]"))
        throw ConfigError(line_no, "unterminated section header");
      std::string name(trim(body.substr(1, body.size() - 2)));
      if (kSections.count(name) == 0)
        throw ConfigError(line_no, "unknown section [" + name + "]");
      if (config.sections.count(name) != 0)
        throw ConfigError(line_no, "duplicate section [" + name + "]");
      config.sections[name];
      current = name;
      continue;
    }
    std::size_t eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(line_no, "expected 'key = value'");
    if (current.empty())
      throw ConfigError(line_no, "key outside any [section]");
    std::string key(trim(body.substr(0, eq)));
    std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) throw ConfigError(line_no, "empty key");
    auto [it, inserted] =
        config.sections[current].emplace(key, std::make_pair(value, line_no));
    if (!inserted)
      throw ConfigError(line_no,
                        "duplicate key '" + key + "' in [" + current + "]");
  }
  return config;
}

ConfigFile load_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_config_text(buffer.str());
}

MachineSpec machine_from_config(const ConfigFile& config) {
  SectionReader machine(config, "machine");
  MachineSpec spec = builtin_booster();
  if (machine.present()) {
    if (auto v = machine.take("name")) spec.name = *v;
    if (auto v = machine.take_u64("num_nodes")) spec.num_nodes = *v;
    if (auto v = machine.take_u64("gpus_per_node")) spec.gpus_per_node = *v;
    if (auto v = machine.take_f64("gpu_memory"))  // GiB
      spec.gpu_memory_bytes =
          static_cast<std::uint64_t>(*v * static_cast<double>(1ull << 30));
    if (auto v = machine.take_u64("cpu_cores_per_node"))
      spec.cpu_cores_per_node = *v;
    if (auto v = machine.take_u64("cell_size_nodes")) spec.cell_size_nodes = *v;
    if (auto v = machine.take_f64("intra_cell_bisection"))  // Tbit/s
      spec.intra_cell_bisection = *v * 1e12;
    if (auto v = machine.take_f64("inter_cell_pair_bisection"))
      spec.inter_cell_pair_bisection = *v * 1e12;
    if (auto v = machine.take_f64("system_bisection"))
      spec.system_bisection = *v * 1e12;
    machine.reject_unknown();
  }
  check_machine(spec);
  return spec;
}

ModelSpec model_from_config(const ConfigFile& config) {
  SectionReader model(config, "model");
  ModelSpec spec;
  if (model.present()) {
    if (auto v = model.take_u64("NLAYERS")) spec.num_layers = *v;
    if (auto v = model.take_u64("NHIDDEN")) spec.hidden_size = *v;
    if (auto v = model.take_u64("NHEADS")) spec.num_heads = *v;
    if (auto v = model.take_u64("SEQ_LEN")) spec.seq_len = *v;
    if (auto v = model.take_u64("VOCAB_SIZE")) spec.vocab_size = *v;
    model.reject_unknown();
  }
  check_model(spec);
  return spec;
}

ScheduleSpec schedule_from_config(const ConfigFile& config) {
  SectionReader sched(config, "schedule");
  ScheduleSpec spec;
  if (sched.present()) {
    if (auto v = sched.take_u64("SAVE_INTERVAL")) spec.save_interval = *v;
    if (auto v = sched.take_u64("LOG_INTERVAL")) spec.log_interval = *v;
    if (auto v = sched.take_u64("EVAL_INTERVAL")) spec.eval_interval = *v;
    if (auto v = sched.take_u64("TRAIN_SAMPLES")) spec.train_samples = *v;
    if (auto v = sched.take_u64("TRAIN_TOKENS")) spec.train_tokens = *v;
    if (auto v = sched.take_f64("LR")) spec.lr = *v;
    if (auto v = sched.take_f64("MIN_LR")) spec.min_lr = *v;
    if (auto v = sched.take_u64("LR_DECAY_SAMPLES")) spec.lr_decay_samples = *v;
    if (auto v = sched.take_u64("LR_WARMUP_SAMPLES"))
      spec.lr_warmup_samples = *v;
    if (auto v = sched.take("TIME")) {
      auto seconds = parse_hms(*v);
      if (!seconds)
        throw ConfigError(sched.line_of("TIME"),
                          "[schedule] TIME must be HH:MM:SS");
      spec.walltime_limit = *seconds;
    }
    if (auto v = sched.take_u64("EXIT_DURATION_MINS"))
      spec.exit_duration_minutes = *v;
    // Submission identity shares the section; consume so strict mode holds.
    sched.take("JOB_NAME");
    sched.take("ACCOUNT");
    sched.take("PARTITION");
    sched.take_u64("MASTER_PORT");
    sched.take_bool("LOAD_CHECKPOINTS");
    sched.reject_unknown();
  }
  check_schedule(spec);
  return spec;
}

JobIdentity job_from_config(const ConfigFile& config) {
  SectionReader sched(config, "schedule");
  JobIdentity job;
  if (sched.present()) {
    if (auto v = sched.take("JOB_NAME")) job.job_name = *v;
    if (auto v = sched.take("ACCOUNT")) job.account = *v;
    if (auto v = sched.take("PARTITION")) job.partition = *v;
    if (auto v = sched.take_u64("MASTER_PORT")) job.master_port = *v;
    if (auto v = sched.take_bool("LOAD_CHECKPOINTS")) job.load_checkpoints = *v;
    // Key validation happens in schedule_from_config; this reader only picks
    // out the identity keys.
  }
  return job;
}

PathsConfig paths_from_config(const ConfigFile& config) {
  SectionReader paths(config, "paths");
  PathsConfig result;
  result.data.vocab = "gpt2-vocab.json";
  result.data.merges = "gpt2-merges.txt";
  result.data.dataset = "oscar/oscar_text_document";
  result.data.output_root = "runs";
  if (paths.present()) {
    if (auto v = paths.take("VOCAB_FILE")) result.data.vocab = *v;
    if (auto v = paths.take("MERGE_FILE")) result.data.merges = *v;
    if (auto v = paths.take("DATA_PATH")) result.data.dataset = *v;
    if (auto v = paths.take("OUTPUT_ROOT")) result.data.output_root = *v;
    if (auto v = paths.take("CONTAINER_IMAGE")) result.container_image = *v;
    paths.reject_unknown();
  }
  return result;
}

EnvProfile env_from_config(const ConfigFile& config) {
  SectionReader env(config, "env");
  EnvProfile profile = EnvProfile::defaults();
  if (env.present()) {
    if (auto v = env.take_bool("debug")) profile.debug_enabled = *v;
    auto override_group = [&](std::vector<EnvVar>& group) {
      for (EnvVar& var : group)
        if (auto v = env.take(var.name)) var.value = *v;
    };
    override_group(profile.error_handling);
    override_group(profile.timeout_mitigation);
    override_group(profile.interface_selection);
    override_group(profile.debug);
    env.reject_unknown();
  }
  check_env_profile(profile);
  return profile;
}

LayoutInputs layout_from_config(const ConfigFile& config) {
  SectionReader layout(config, "layout");
  LayoutInputs inputs;
  inputs.nodes = 2;
  inputs.micro_batch = 4;
  inputs.global_batch = 512;
  if (layout.present()) {
    if (auto v = layout.take_u64("NNODES")) inputs.nodes = *v;
    if (auto v = layout.take_u64("TP_SIZE")) inputs.tp = *v;
    if (auto v = layout.take_u64("PP_SIZE")) inputs.pp = *v;
    if (auto v = layout.take_u64("MICRO_BATCH_SIZE")) inputs.micro_batch = *v;
    if (auto v = layout.take_u64("GLOBAL_BATCH_SIZE")) inputs.global_batch = *v;
    if (auto v = layout.take_u64("GPUS_PER_NODE")) inputs.gpus_per_node = *v;
    layout.reject_unknown();
  }
  return inputs;
}

ParallelLayout resolve_layout(const LayoutInputs& inputs,
                              const MachineSpec& machine) {
  ParallelLayout layout;
  layout.nodes = inputs.nodes;
  layout.gpus_per_node =
      inputs.gpus_per_node ? *inputs.gpus_per_node : machine.gpus_per_node;
  layout.tp = inputs.tp;
  layout.pp = inputs.pp;
  layout.micro_batch = inputs.micro_batch;
  layout.global_batch = inputs.global_batch;
  layout.dp =
      derive_dp(layout.nodes * layout.gpus_per_node, layout.tp, layout.pp);
  layout.gas = derive_gas(layout.global_batch, layout.micro_batch, layout.dp);
  return layout;
}

ScriptPlan plan_from_config(const ConfigFile& config) {
  const MachineSpec machine = machine_from_config(config);
  const JobIdentity job = job_from_config(config);
  const PathsConfig paths = paths_from_config(config);

  ScriptPlan plan;
  plan.job_name = job.job_name;
  plan.account = job.account;
  plan.partition = job.partition;
  plan.master_port = job.master_port;
  plan.load_checkpoints = job.load_checkpoints;
  plan.model = model_from_config(config);
  plan.schedule = schedule_from_config(config);
  plan.env = env_from_config(config);
  plan.container_image = paths.container_image;
  plan.paths = paths.data;
  plan.cpus_per_task = machine.cpu_cores_per_node;
  plan.layout = resolve_layout(layout_from_config(config), machine);
  return plan;
}

}  // namespace trainkit
