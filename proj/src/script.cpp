#include "trainkit/script.hpp"

#include <algorithm>
#include <map>

#include "trainkit/text.hpp"

namespace trainkit {

EnvProfile EnvProfile::defaults() {
  EnvProfile profile;
  profile.error_handling = {{"NCCL_ASYNC_ERROR_HANDLING", "1"}};
  profile.timeout_mitigation = {{"NCCL_IB_TIMEOUT", "50"},
                                {"UCX_RC_TIMEOUT", "4s"},
                                {"NCCL_IB_RETRY_CNT", "10"}};
  profile.interface_selection = {{"NCCL_SOCKET_IFNAME", "ib0"},
                                 {"GLOO_SOCKET_IFNAME", "ib0"}};
  profile.debug = {{"LOGLEVEL", "INFO"},
                   {"CUDA_LAUNCH_BLOCKING", "1"},
                   {"NCCL_DEBUG", "INFO"},
                   {"NCCL_DEBUG_SUBSYS", "ALL"},
                   {"TORCH_DISTRIBUTED_DEBUG", "INFO"}};
  profile.debug_enabled = false;
  return profile;
}

void check_env_profile(const EnvProfile& profile) {
  static const char* const expected[] = {"NCCL_IB_TIMEOUT", "UCX_RC_TIMEOUT",
                                         "NCCL_IB_RETRY_CNT"};
  if (profile.timeout_mitigation.size() != 3)
    throw std::invalid_argument(
        "timeout mitigation group must hold exactly three variables");
  for (std::size_t i = 0; i < 3; ++i)
    if (profile.timeout_mitigation[i].name != expected[i])
      throw std::invalid_argument(
          "timeout mitigation group must be NCCL_IB_TIMEOUT, UCX_RC_TIMEOUT, "
          "NCCL_IB_RETRY_CNT");
}

ScriptPlan reference_plan() {
  ScriptPlan plan;
  plan.job_name = "800M_model";
  plan.account = "account";
  plan.partition = "booster";
  plan.layout.nodes = 2;
  plan.layout.gpus_per_node = 4;
  plan.layout.tp = 1;
  plan.layout.pp = 1;
  plan.layout.dp = 8;
  plan.layout.micro_batch = 4;
  plan.layout.gas = 16;
  plan.layout.global_batch = 512;
  plan.model = ModelSpec{};       // 16 x 2048, 8 heads, 2048 ctx, 50257 vocab
  plan.schedule = ScheduleSpec{};  // 500M-token short run
  plan.container_image = "ngc_torch.sif";
  plan.paths.vocab = "gpt2-vocab.json";
  plan.paths.merges = "gpt2-merges.txt";
  plan.paths.dataset = "oscar/oscar_text_document";
  plan.paths.output_root = "runs";
  plan.load_checkpoints = false;
  plan.master_port = 6000;
  plan.cpus_per_task = 48;
  return plan;
}

namespace {

class Lines {
 public:
  void add(std::string line) { lines_.push_back(std::move(line)); }
  void blank() { lines_.emplace_back(); }
  std::string join() const {
    std::string out;
    for (const std::string& line : lines_) {
      out += line;
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::string> lines_;
};

void add_exports(Lines& out, const std::vector<EnvVar>& group) {
  for (const EnvVar& var : group)
    out.add("export " + var.name + "=" + var.value);
}

}  // namespace

std::string render(const ScriptPlan& plan) {
  check_env_profile(plan.env);
  if (plan.master_port == 0 || plan.master_port > 65535)
    throw std::invalid_argument("master_port must be a valid TCP port");

  std::vector<Violation> errors;
  for (const Violation& v : validate(plan.layout, plan.model))
    if (v.severity == Severity::error) errors.push_back(v);
  if (!errors.empty()) {
    std::string message = "plan fails validation:";
    for (const Violation& v : errors)
      message += std::string("\n  ") + to_string(v.code) + ": " + v.message;
    throw RenderError(message, errors);
  }

  const ParallelLayout& lay = plan.layout;
  const ModelSpec& model = plan.model;
  const ScheduleSpec& sched = plan.schedule;

  Lines out;
  out.add("#!/bin/bash");
  out.add("#SBATCH --job-name=" + plan.job_name);
  out.add("#SBATCH --account=" + plan.account);
  out.add("#SBATCH --partition=" + plan.partition);
  out.add("#SBATCH --nodes=" + std::to_string(lay.nodes));
  out.add("#SBATCH --gres=gpu:" + std::to_string(lay.gpus_per_node));
  out.add("#SBATCH --ntasks-per-node=1");
  out.add("#SBATCH --cpus-per-task=" + std::to_string(plan.cpus_per_task));
  out.add("#SBATCH --time=" + fmt_hms(sched.walltime_limit));
  out.add("#SBATCH --threads-per-core=1");
  out.blank();
  out.add("# srun does not inherit cpus-per-task from sbatch.");
  out.add("export SRUN_CPUS_PER_TASK=${SLURM_CPUS_PER_TASK}");
  out.blank();
  out.add("set -euo pipefail");
  out.blank();
  out.add("echo \"START TIME: $(date)\"");
  out.blank();
  out.add("#### Input data ####");
  out.add("VOCAB_FILE=" + plan.paths.vocab);
  out.add("MERGE_FILE=" + plan.paths.merges);
  out.add("DATA_PATH=" + plan.paths.dataset);
  out.blank();
  out.add("#### Output paths ####");
  out.add("DATA_OUTPUT_PATH=\"" + plan.paths.output_root +
          "/${SLURM_JOB_ID}_${SLURM_JOB_NAME}\"");
  out.add("CHECKPOINT_PATH=\"$DATA_OUTPUT_PATH\"/checkpoints");
  out.add("TENSORBOARD_PATH=\"$DATA_OUTPUT_PATH\"/tensorboard");
  out.add("LOGS_PATH=\"$DATA_OUTPUT_PATH\"/logs");
  out.add("mkdir -p \"$LOGS_PATH\"");
  out.blank();
  out.add("#### Environment ####");
  out.add(std::string("export LOAD_CHECKPOINTS=") +
          (plan.load_checkpoints ? "true" : "false"));
  out.add("export HF_DATASETS_OFFLINE=1");
  out.add("export TRANSFORMERS_OFFLINE=1");
  out.add("export CUDA_DEVICE_MAX_CONNECTIONS=1");
  out.add("export CXX=g++");
  out.add("export CC=gcc");
  out.add("# Crash on collective errors instead of hanging.");
  add_exports(out, plan.env.error_handling);
  out.add("# Ride out transient fabric events (link retraining) instead of");
  out.add("# tearing the job down.");
  add_exports(out, plan.env.timeout_mitigation);
  out.add("# Out-of-band traffic stays on InfiniBand.");
  add_exports(out, plan.env.interface_selection);
  if (plan.env.debug_enabled) {
    out.add("# Verbose runtime diagnostics.");
    add_exports(out, plan.env.debug);
  }
  out.blank();
  out.add("#### Network ####");
  out.add("MASTER_ADDR=$(scontrol show hostnames $SLURM_JOB_NODELIST | head "
          "-n 1)");
  out.add("# Use the InfiniBand-facing address of the head node.");
  out.add("MASTER_ADDR=\"${MASTER_ADDR}i\"");
  out.add("# Resolve hostname to IP.");
  out.add("MASTER_ADDR=\"$(nslookup \"$MASTER_ADDR\" | grep -oP '(?<=Address: "
          ").*')\"");
  out.add("MASTER_PORT=" + std::to_string(plan.master_port));
  out.blank();
  out.add("#### Parallel layout ####");
  out.add("GPUS_PER_NODE=" + std::to_string(lay.gpus_per_node));
  out.add("NNODES=$SLURM_JOB_NUM_NODES");
  out.add("TP_SIZE=" + std::to_string(lay.tp));
  out.add("PP_SIZE=" + std::to_string(lay.pp));
  out.add("GAS=" + std::to_string(lay.gas));
  out.add("MICRO_BATCH_SIZE=" + std::to_string(lay.micro_batch));
  out.add("GLOBAL_BATCH_SIZE=" + std::to_string(lay.global_batch));
  out.blank();
  out.add("#### Model and schedule ####");
  out.add("NLAYERS=" + std::to_string(model.num_layers));
  out.add("NHIDDEN=" + std::to_string(model.hidden_size));
  out.add("NHEADS=" + std::to_string(model.num_heads));
  out.add("SEQ_LEN=" + std::to_string(model.seq_len));
  out.add("VOCAB_SIZE=" + std::to_string(model.vocab_size));
  out.blank();
  out.add("SAVE_INTERVAL=" + std::to_string(sched.save_interval));
  out.add("LOG_INTERVAL=" + std::to_string(sched.log_interval));
  out.add("EVAL_INTERVAL=" + std::to_string(sched.eval_interval));
  out.blank();
  out.add("TRAIN_SAMPLES=" + fmt_grouped(sched.train_samples));
  out.add("TRAIN_TOKENS=" + fmt_grouped(sched.train_tokens));
  out.blank();
  out.add("LR_DECAY_SAMPLES=" + fmt_grouped(sched.lr_decay_samples));
  out.add("LR_WARMUP_SAMPLES=" + fmt_grouped(sched.lr_warmup_samples));
  out.blank();
  out.add("OPTIMIZER_ARGS=\" \\");
  out.add("    --optimizer adam \\");
  out.add("    --adam-beta1 0.9 \\");
  out.add("    --adam-beta2 0.95 \\");
  out.add("    --adam-eps 1e-8 \\");
  out.add("    --lr " + fmt_double_fixed(sched.lr) + " \\");
  out.add("    --min-lr " + fmt_double_fixed(sched.min_lr) + " \\");
  out.add("    --lr-decay-style cosine \\");
  out.add("    --lr-decay-samples $LR_DECAY_SAMPLES \\");
  out.add("    --lr-warmup-samples $LR_WARMUP_SAMPLES \\");
  out.add("    --clip-grad 1.0 \\");
  out.add("    --weight-decay 1e-1 \\");
  out.add("    --use-distributed-optimizer \\");
  out.add("    \"");
  out.blank();
  out.add("EXIT_OPTS=\" \\");
  out.add("    --exit-duration-in-mins " +
          std::to_string(sched.exit_duration_minutes) + " \\");
  out.add("    \"");
  out.blank();
  out.add("GPT_ARGS=\" \\");
  out.add("    --num-layers $NLAYERS \\");
  out.add("    --hidden-size $NHIDDEN \\");
  out.add("    --num-attention-heads $NHEADS \\");
  out.add("    --seq-length $SEQ_LEN \\");
  out.add("    --max-position-embeddings $SEQ_LEN \\");
  out.add("    --micro-batch-size $MICRO_BATCH_SIZE \\");
  out.add("    --global-batch-size $GLOBAL_BATCH_SIZE \\");
  out.add("    --train-samples $TRAIN_SAMPLES \\");
  out.add("    --vocab-file $VOCAB_FILE \\");
  out.add("    --merge-file $MERGE_FILE \\");
  out.add("    --bf16 \\");
  out.add("    --seed 42 \\");
  out.add("    --recompute-activations \\");
  out.add("    --init-method-std 0.0048 \\");
  out.add("    --position-embedding-type rope \\");
  out.add("    --use-flash-attn \\");
  out.add("    --sequence-parallel \\");
  out.add("    $OPTIMIZER_ARGS \\");
  out.add("    $EXIT_OPTS \\");
  out.add("    \"");
  out.blank();
  out.add("OUTPUT_ARGS=\" \\");
  out.add("    --log-interval $LOG_INTERVAL \\");
  out.add("    --save-interval $SAVE_INTERVAL \\");
  out.add("    --eval-interval $EVAL_INTERVAL \\");
  out.add("    --eval-iters 10 \\");
  out.add("    --tensorboard-dir $TENSORBOARD_PATH \\");
  out.add("    --tensorboard-queue-size 5 \\");
  out.add("    --log-timers-to-tensorboard \\");
  out.add("    --log-batch-size-to-tensorboard \\");
  out.add("    --log-validation-ppl-to-tensorboard \\");
  out.add("    \"");
  out.blank();
  out.add("export LAUNCHER=\"python -u -m torch.distributed.run \\");
  out.add("    --nproc_per_node $GPUS_PER_NODE \\");
  out.add("    --nnodes $NNODES \\");
  out.add("    --rdzv_endpoint $MASTER_ADDR:$MASTER_PORT \\");
  out.add("    --rdzv_backend c10d \\");
  out.add("    --max_restarts 0 \\");
  out.add("    --tee 3 \\");
  out.add("    \"");
  out.blank();
  out.add("export CMD=\" \\");
  out.add("    pretrain_gpt.py \\");
  out.add("    --tensor-model-parallel-size $TP_SIZE \\");
  out.add("    --pipeline-model-parallel-size $PP_SIZE \\");
  out.add("    $GPT_ARGS \\");
  out.add("    $OUTPUT_ARGS \\");
  out.add("    --save $CHECKPOINT_PATH \\");
  out.add("    --data-path $DATA_PATH \\");
  out.add("    --data-impl mmap \\");
  out.add("    --split 949,50,1 \\");
  out.add("    --distributed-backend nccl \\");
  out.add("    \"");
  out.blank();
  if (plan.load_checkpoints) {
    out.add("if [ \"$LOAD_CHECKPOINTS\" = true ] ; then");
    out.add("    CMD=\"$CMD --load $CHECKPOINT_PATH\"");
    out.add("fi");
    out.blank();
  }
  out.add("echo $CMD");
  out.blank();
  out.add("SINGULARITY_FILE=" + plan.container_image);
  out.blank();
  out.add("srun --jobid $SLURM_JOBID --cpu-bind=v --mpi=pmi2 \\");
  out.add("    apptainer exec --bind=\"$DATA_OUTPUT_PATH\" --nv "
          "\"$SINGULARITY_FILE\" \\");
  out.add("    bash -c \"$LAUNCHER $CMD\" 2>&1 | tee -a "
          "\"$LOGS_PATH\"/main_log.txt");
  out.blank();
  out.add("echo \"END TIME: $(date)\"");
  return out.join();
}

namespace {

struct Sourced {
  std::string value;
  std::size_t line = 0;
};

struct Scan {
  std::map<std::string, Sourced> sbatch;   // directive -> value
  std::map<std::string, Sourced> exports;  // export NAME=VALUE
  std::map<std::string, Sourced> vars;     // NAME=VALUE
  std::map<std::string, Sourced> args;     // --flag [value] inside "..." blocks
  std::size_t last_line = 0;
};

bool is_var_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(c == '_' || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')))
      return false;
  return !(s[0] >= '0' && s[0] <= '9');
}

// Argument lines inside a quoted block: "--flag", "--flag value" or a group
// reference "$NAME"; a trailing " \" continuation is already stripped.
void scan_arg_line(Scan& scan, std::string_view body, std::size_t line_no) {
  if (body.empty() || body[0] != '-') return;
  std::size_t space = body.find(' ');
  std::string flag(body.substr(0, space));
  std::string value =
      space == std::string_view::npos ? "" : std::string(body.substr(space + 1));
  scan.args[flag] = {value, line_no};
}

Scan scan_script(const std::string& text) {
  Scan scan;
  std::vector<std::string> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != "#!/bin/bash")
    throw ScriptParseError(1, "expected '#!/bin/bash'");
  scan.last_line = lines.size();

  bool in_block = false;       // inside NAME=" \ ... " argument block
  bool skip_block = false;     // inside export NAME=" ... " opaque block
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line(lines[i]);

    if (skip_block) {
      if (trim(line) == "\"") skip_block = false;
      continue;
    }
    if (in_block) {
      std::string_view body = trim(line);
      if (body == "\"") {
        in_block = false;
        continue;
      }
      if (body.ends_with(" \\")) body.remove_suffix(2);
      scan_arg_line(scan, body, line_no);
      continue;
    }

    if (line.starts_with("#SBATCH --")) {
      std::string_view rest = line.substr(10);
      std::size_t eq = rest.find('=');
      if (eq == std::string_view::npos)
        throw ScriptParseError(line_no, "malformed scheduler directive");
      scan.sbatch[std::string(rest.substr(0, eq))] = {
          std::string(rest.substr(eq + 1)), line_no};
      continue;
    }
    if (line.starts_with("#")) continue;

    std::string_view assign = line;
    bool exported = false;
    if (assign.starts_with("export ")) {
      exported = true;
      assign.remove_prefix(7);
    }
    std::size_t eq = assign.find('=');
    if (eq == std::string_view::npos) continue;
    std::string_view name = assign.substr(0, eq);
    if (!is_var_name(name)) continue;
    std::string_view value = assign.substr(eq + 1);

    if (value == "\" \\") {
      // Multi-line argument group; exported ones (LAUNCHER, CMD) only carry
      // variable references, so their contents are opaque.
      if (exported)
        skip_block = true;
      else
        in_block = true;
      continue;
    }
    if (exported && value.starts_with("\"") && !value.ends_with("\"")) {
      skip_block = true;
      continue;
    }
    auto& bucket = exported ? scan.exports : scan.vars;
    bucket[std::string(name)] = {std::string(value), line_no};
  }
  return scan;
}

const Sourced& require(const std::map<std::string, Sourced>& map,
                       const std::string& key, std::size_t eof_line,
                       const char* what) {
  auto it = map.find(key);
  if (it == map.end())
    throw ScriptParseError(eof_line,
                           std::string("missing ") + what + " '" + key + "'");
  return it->second;
}

std::uint64_t require_u64(const std::map<std::string, Sourced>& map,
                          const std::string& key, std::size_t eof_line,
                          const char* what) {
  const Sourced& s = require(map, key, eof_line, what);
  auto v = parse_u64(s.value);
  if (!v)
    throw ScriptParseError(s.line, "'" + key + "' is not an unsigned integer");
  return *v;
}

// Argument values may reference a shell variable set earlier in the script.
std::string resolve_arg(const Scan& scan, const std::string& flag,
                        std::size_t eof_line) {
  const Sourced& s = require(scan.args, flag, eof_line, "argument");
  if (s.value.starts_with("$")) {
    auto it = scan.vars.find(s.value.substr(1));
    if (it == scan.vars.end())
      throw ScriptParseError(s.line, "'" + flag + "' references undefined "
                                     "variable " + s.value);
    return it->second.value;
  }
  return s.value;
}

double arg_f64(const Scan& scan, const std::string& flag,
               std::size_t eof_line) {
  const Sourced& s = require(scan.args, flag, eof_line, "argument");
  std::string raw = resolve_arg(scan, flag, eof_line);
  auto v = parse_f64(raw);
  if (!v) throw ScriptParseError(s.line, "'" + flag + "' is not a number");
  return *v;
}

std::uint64_t arg_u64(const Scan& scan, const std::string& flag,
                      std::size_t eof_line) {
  const Sourced& s = require(scan.args, flag, eof_line, "argument");
  std::string raw = resolve_arg(scan, flag, eof_line);
  auto v = parse_u64(raw);
  if (!v)
    throw ScriptParseError(s.line, "'" + flag + "' is not an unsigned "
                                   "integer");
  return *v;
}

void restore_env_group(std::vector<EnvVar>& group,
                       const std::map<std::string, Sourced>& exports) {
  for (EnvVar& var : group) {
    auto it = exports.find(var.name);
    if (it != exports.end()) var.value = it->second.value;
  }
}

}  // namespace

ScriptPlan extract(const std::string& script_text) {
  Scan scan = scan_script(script_text);
  const std::size_t eof = scan.last_line;

  ScriptPlan plan;
  plan.job_name = require(scan.sbatch, "job-name", eof, "directive").value;
  plan.account = require(scan.sbatch, "account", eof, "directive").value;
  plan.partition = require(scan.sbatch, "partition", eof, "directive").value;
  plan.cpus_per_task = require_u64(scan.sbatch, "cpus-per-task", eof,
                                   "directive");
  plan.layout.nodes = require_u64(scan.sbatch, "nodes", eof, "directive");

  const Sourced& time = require(scan.sbatch, "time", eof, "directive");
  auto walltime = parse_hms(time.value);
  if (!walltime)
    throw ScriptParseError(time.line, "'time' is not HH:MM:SS");
  plan.schedule.walltime_limit = *walltime;

  const Sourced& gres = require(scan.sbatch, "gres", eof, "directive");
  if (!gres.value.starts_with("gpu:") || !parse_u64(gres.value.substr(4)))
    throw ScriptParseError(gres.line, "'gres' is not gpu:<count>");
  const std::uint64_t gres_gpus = *parse_u64(gres.value.substr(4));

  plan.layout.gpus_per_node =
      require_u64(scan.vars, "GPUS_PER_NODE", eof, "variable");
  if (plan.layout.gpus_per_node != gres_gpus)
    throw ScriptParseError(gres.line,
                           "gres GPU count disagrees with GPUS_PER_NODE");
  plan.layout.tp = require_u64(scan.vars, "TP_SIZE", eof, "variable");
  plan.layout.pp = require_u64(scan.vars, "PP_SIZE", eof, "variable");
  plan.layout.gas = require_u64(scan.vars, "GAS", eof, "variable");
  plan.layout.micro_batch =
      require_u64(scan.vars, "MICRO_BATCH_SIZE", eof, "variable");
  plan.layout.global_batch =
      require_u64(scan.vars, "GLOBAL_BATCH_SIZE", eof, "variable");
  // The data-parallel degree is never written out; it is implied by the GPU
  // count and the model-parallel degrees, exactly as the training launcher
  // infers it.
  const std::uint64_t ngpus = plan.layout.nodes * plan.layout.gpus_per_node;
  const std::uint64_t model_parallel = plan.layout.tp * plan.layout.pp;
  if (model_parallel == 0 || ngpus % model_parallel != 0)
    throw ScriptParseError(require(scan.vars, "TP_SIZE", eof, "variable").line,
                           "TP_SIZE*PP_SIZE does not divide the GPU count");
  plan.layout.dp = ngpus / model_parallel;

  plan.model.num_layers = require_u64(scan.vars, "NLAYERS", eof, "variable");
  plan.model.hidden_size = require_u64(scan.vars, "NHIDDEN", eof, "variable");
  plan.model.num_heads = require_u64(scan.vars, "NHEADS", eof, "variable");
  plan.model.seq_len = require_u64(scan.vars, "SEQ_LEN", eof, "variable");
  plan.model.vocab_size =
      require_u64(scan.vars, "VOCAB_SIZE", eof, "variable");

  plan.schedule.save_interval =
      require_u64(scan.vars, "SAVE_INTERVAL", eof, "variable");
  plan.schedule.log_interval =
      require_u64(scan.vars, "LOG_INTERVAL", eof, "variable");
  plan.schedule.eval_interval =
      require_u64(scan.vars, "EVAL_INTERVAL", eof, "variable");
  plan.schedule.train_samples =
      require_u64(scan.vars, "TRAIN_SAMPLES", eof, "variable");
  plan.schedule.train_tokens =
      require_u64(scan.vars, "TRAIN_TOKENS", eof, "variable");
  plan.schedule.lr_decay_samples =
      require_u64(scan.vars, "LR_DECAY_SAMPLES", eof, "variable");
  plan.schedule.lr_warmup_samples =
      require_u64(scan.vars, "LR_WARMUP_SAMPLES", eof, "variable");
  plan.schedule.lr = arg_f64(scan, "--lr", eof);
  plan.schedule.min_lr = arg_f64(scan, "--min-lr", eof);
  plan.schedule.exit_duration_minutes =
      arg_u64(scan, "--exit-duration-in-mins", eof);

  plan.master_port = require_u64(scan.vars, "MASTER_PORT", eof, "variable");
  plan.container_image =
      require(scan.vars, "SINGULARITY_FILE", eof, "variable").value;

  plan.paths.vocab = require(scan.vars, "VOCAB_FILE", eof, "variable").value;
  plan.paths.merges = require(scan.vars, "MERGE_FILE", eof, "variable").value;
  plan.paths.dataset = require(scan.vars, "DATA_PATH", eof, "variable").value;

  const Sourced& out_path =
      require(scan.vars, "DATA_OUTPUT_PATH", eof, "variable");
  static const std::string kSuffix = "/${SLURM_JOB_ID}_${SLURM_JOB_NAME}\"";
  if (!out_path.value.starts_with("\"") || !out_path.value.ends_with(kSuffix))
    throw ScriptParseError(out_path.line,
                           "DATA_OUTPUT_PATH does not follow the "
                           "<root>/<job id>_<job name> convention");
  plan.paths.output_root = out_path.value.substr(
      1, out_path.value.size() - 1 - kSuffix.size());

  const Sourced& load =
      require(scan.exports, "LOAD_CHECKPOINTS", eof, "export");
  if (load.value != "true" && load.value != "false")
    throw ScriptParseError(load.line, "LOAD_CHECKPOINTS must be true/false");
  plan.load_checkpoints = load.value == "true";

  plan.env = EnvProfile::defaults();
  restore_env_group(plan.env.error_handling, scan.exports);
  restore_env_group(plan.env.timeout_mitigation, scan.exports);
  restore_env_group(plan.env.interface_selection, scan.exports);
  restore_env_group(plan.env.debug, scan.exports);
  plan.env.debug_enabled =
      std::any_of(plan.env.debug.begin(), plan.env.debug.end(),
                  [&](const EnvVar& var) {
                    return scan.exports.count(var.name) != 0;
                  });
  return plan;
}

}  // namespace trainkit
