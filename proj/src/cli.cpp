#include "trainkit/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trainkit/analyzer.hpp"
#include "trainkit/chain.hpp"
#include "trainkit/chain_replay.hpp"
#include "trainkit/config_file.hpp"
#include "trainkit/layout.hpp"
#include "trainkit/machine.hpp"
#include "trainkit/model_config.hpp"
#include "trainkit/rng.hpp"
#include "trainkit/script.hpp"
#include "trainkit/simulator.hpp"
#include "trainkit/text.hpp"

namespace trainkit {

namespace {

std::string fmt_gib(double bytes) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf,
                               bytes / static_cast<double>(1ull << 30),
                               std::chars_format::fixed, 2);
  if (ec != std::errc()) return fmt_double(bytes);
  return std::string(buf, p);
}

// Hands back the file stream when --out was given, stdout otherwise.
std::ostream& select_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw ConfigError("cannot open output file: " + path);
  return file;
}

void print_violation(std::ostream& out, const Violation& v) {
  const char* label = v.severity == Severity::error ? "violation" : "warning";
  out << label << ": " << to_string(v.code) << ": " << v.message << "\n";
}

// ---------------------------------------------------------------- plan --

int cmd_plan(const std::string& config_path, const std::string& out_path) {
  const ConfigFile config = load_config_file(config_path);
  const MachineSpec machine = machine_from_config(config);
  const ModelSpec model = model_from_config(config);
  const ScheduleSpec schedule = schedule_from_config(config);
  const LayoutInputs inputs = layout_from_config(config);
  const ParallelLayout layout = resolve_layout(inputs, machine);

  const auto violations = validate(layout, model, machine);
  bool fatal = false;
  for (const Violation& v : violations) {
    print_violation(std::cout, v);
    if (v.severity == Severity::error) fatal = true;
  }
  if (fatal) return 1;
  for (const std::string& w : schedule_warnings(schedule))
    std::cout << "warning: " << w << "\n";

  const ParamCount params = param_count(model);
  std::cout << "model: " << model.num_layers << " layers, hidden "
            << model.hidden_size << ", heads " << model.num_heads << ", seq "
            << model.seq_len << ", vocab " << model.vocab_size << "\n";
  std::cout << "parameters: " << fmt_grouped(params.total) << " total ("
            << fmt_grouped(params.block) << " block, "
            << fmt_grouped(params.embedding) << " embedding)\n";
  std::cout << "tokens per step: "
            << fmt_grouped(tokens_per_step(model, layout.global_batch))
            << "\n";
  std::cout << "configured layout: tp=" << layout.tp << " pp=" << layout.pp
            << " dp=" << layout.dp << " micro=" << layout.micro_batch
            << " gas=" << layout.gas << " global_batch=" << layout.global_batch
            << " (" << layout.nodes << " nodes x " << layout.gpus_per_node
            << " gpus)\n";

  const MemoryEstimate mem = memory_estimate(layout, model);
  std::cout << "per-gpu memory: " << fmt_gib(mem.total) << " GiB of "
            << fmt_gib(static_cast<double>(machine.gpu_memory_bytes))
            << " GiB\n";
  std::cout << "  weights " << fmt_gib(mem.weights) << " GiB, gradients "
            << fmt_gib(mem.gradients) << " GiB, optimizer "
            << fmt_gib(mem.optimizer_states) << " GiB, activations "
            << fmt_gib(mem.activations) << " GiB\n";

  // Same node count and batch, every feasible (tp, pp, micro) combination.
  std::vector<std::uint64_t> micros = {1, 2, 4, 8, 16, 32};
  if (std::find(micros.begin(), micros.end(), layout.micro_batch) ==
      micros.end())
    micros.push_back(layout.micro_batch);
  std::sort(micros.begin(), micros.end());
  const auto ranked = enumerate_layouts(model, machine, layout.nodes,
                                        layout.global_batch, micros);

  std::cout << "\nfeasible layouts for " << layout.nodes
            << " nodes, global batch " << layout.global_batch << ":\n";
  std::cout << "  tp    pp    dp    micro  gas    mem_gib\n";
  for (const RankedLayout& r : ranked) {
    std::ostringstream row;
    row << "  " << std::left << std::setw(6) << r.layout.tp << std::setw(6)
        << r.layout.pp << std::setw(6) << r.layout.dp << std::setw(7)
        << r.layout.micro_batch << std::setw(7) << r.layout.gas
        << fmt_gib(r.memory.total);
    std::cout << row.str() << "\n";
  }

  std::ofstream file;
  std::ostream& csv = select_output(out_path, file);
  if (out_path.empty()) std::cout << "\n";
  csv << "tp,pp,dp,micro,gas,global_batch,nodes,gpus_per_node,"
         "weights_bytes,gradients_bytes,optimizer_bytes,activations_bytes,"
         "total_bytes\n";
  for (const RankedLayout& r : ranked) {
    csv << r.layout.tp << ',' << r.layout.pp << ',' << r.layout.dp << ','
        << r.layout.micro_batch << ',' << r.layout.gas << ','
        << r.layout.global_batch << ',' << r.layout.nodes << ','
        << r.layout.gpus_per_node << ',' << fmt_double(r.memory.weights)
        << ',' << fmt_double(r.memory.gradients) << ','
        << fmt_double(r.memory.optimizer_states) << ','
        << fmt_double(r.memory.activations) << ','
        << fmt_double(r.memory.total) << "\n";
  }
  return 0;
}

// -------------------------------------------------------------- render --

int cmd_render(const std::string& config_path, const std::string& out_path,
               const std::string& profile) {
  const ConfigFile config = load_config_file(config_path);
  ScriptPlan plan = plan_from_config(config);
  if (profile == "debug") plan.env.debug_enabled = true;

  // Warnings go to stderr so a script on stdout stays a clean script.
  for (const Violation& v : validate(plan.layout, plan.model))
    if (v.severity == Severity::warning) print_violation(std::cerr, v);

  const std::string script = render(plan);
  std::ofstream file;
  std::ostream& out = select_output(out_path, file);
  out << script;
  return 0;
}

// --------------------------------------------------------------- chain --

EventKind event_kind_from(const std::string& name, std::size_t line) {
  static const EventKind kinds[] = {
      EventKind::job_started,       EventKind::step_progress,
      EventKind::checkpoint_written, EventKind::walltime_imminent,
      EventKind::scheduler_error,    EventKind::hardware_failure,
      EventKind::job_completed,
  };
  for (EventKind kind : kinds)
    if (name == to_string(kind)) return kind;
  throw ConfigError(line, "unknown event kind '" + name + "'");
}

// One event per line: `kind step timestamp`. Blank lines and # comments are
// skipped.
std::vector<ChainEvent> load_events(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open events file: " + path);
  std::vector<ChainEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.starts_with("#")) continue;
    std::istringstream fields{std::string(body)};
    std::string kind, step, at;
    if (!(fields >> kind >> step >> at))
      throw ConfigError(line_no, "expected 'kind step timestamp'");
    std::string extra;
    if (fields >> extra)
      throw ConfigError(line_no, "trailing text after timestamp");
    ChainEvent event;
    event.kind = event_kind_from(kind, line_no);
    auto value = parse_u64(step);
    if (!value) throw ConfigError(line_no, "step is not an unsigned integer");
    event.value = *value;
    auto stamp = parse_f64(at);
    if (!stamp) throw ConfigError(line_no, "timestamp is not a number");
    event.at = *stamp;
    events.push_back(event);
  }
  return events;
}

void write_chain_csv(std::ostream& out,
                     const std::vector<ChainTransition>& log) {
  out << "event,action,step,job_index\n";
  for (const ChainTransition& t : log)
    out << to_string(t.event.kind) << ',' << to_string(t.action.kind) << ','
        << t.step_after << ',' << t.job_index_after << "\n";
}

void print_chain_summary(const ChainState& state) {
  std::cout << "final phase: " << to_string(state.phase) << "\n";
  std::cout << "steps: " << state.current_step << " / " << state.target_steps
            << "\n";
  std::cout << "jobs: " << state.job_index << "\n";
  std::cout << "dependency edges: " << state.dependencies.size() << "\n";
  std::cout << "failures: " << state.failures << "\n";
  std::cout << "checkpoints: " << state.registry.size() << "\n";
}

struct ChainArgs {
  std::uint64_t target = 0;
  std::uint64_t budget = 3;
  std::string events_path;
  bool use_sim = false;
  double walltime = 86400;
  double interval = 3600;
  double cost = 60;
  double restart = 0;
  double mtbf = 1e9;
  std::uint64_t seed = 42;
  std::string out_path;
};

int cmd_chain(const ChainArgs& args) {
  std::vector<ChainTransition> log;
  ChainState final_state;

  if (args.use_sim) {
    SimConfig sim;
    sim.total_work = static_cast<double>(args.target);
    sim.walltime = args.walltime;
    sim.checkpoint_interval = args.interval;
    sim.checkpoint_cost = args.cost;
    sim.restart_cost = args.restart;
    sim.failure.mtbf = args.mtbf;
    sim.failure.seed = args.seed;
    ChainReplay replay(args.target, args.budget);
    simulate(sim, &replay);
    log = replay.log();
    final_state = replay.state();
  } else {
    ChainState state = initial_chain(args.target);
    state.failure_budget = args.budget;
    log = run_chain(state, load_events(args.events_path));
    final_state = state;
  }

  std::ofstream file;
  std::ostream& csv = select_output(args.out_path, file);
  write_chain_csv(csv, log);
  print_chain_summary(final_state);
  return 0;
}

// ------------------------------------------------------------ simulate --

struct SimulateArgs {
  std::vector<double> intervals;
  double cost = 60;
  double mtbf = 1e9;
  double walltime = 86400;
  double work = 0;
  std::uint64_t runs = 1000;
  std::uint64_t seed = 42;
  std::string out_path;
};

int cmd_simulate(const SimulateArgs& args) {
  std::ofstream file;
  std::ostream& csv = select_output(args.out_path, file);
  csv << "interval,analytic_goodput,simulated_mean,stddev,jobs,failures\n";

  for (std::size_t k = 0; k < args.intervals.size(); ++k) {
    const double interval = args.intervals[k];
    SimConfig config;
    config.total_work = args.work;
    config.walltime = args.walltime;
    config.checkpoint_interval = interval;
    config.checkpoint_cost = args.cost;
    config.failure.mtbf = args.mtbf;

    const Goodput analytic = expected_goodput(interval, args.cost, args.mtbf);
    if (analytic.outside_regime)
      std::cerr << "note: interval " << fmt_double(interval)
                << " is outside the first-order regime\n";

    // One independent failure-stream seed per run, derived from the sweep
    // seed and the interval's position so rows never share randomness.
    SplitMix64 seeds = stream_rng(args.seed, static_cast<std::uint64_t>(k));
    std::vector<double> goodputs;
    goodputs.reserve(args.runs);
    std::uint64_t total_jobs = 0;
    std::uint64_t total_failures = 0;
    bool diverged = false;
    for (std::uint64_t r = 0; r < args.runs; ++r) {
      config.failure.seed = seeds.next_u64();
      const SimReport report = simulate(config);
      goodputs.push_back(report.goodput);
      total_jobs += report.jobs;
      total_failures += report.failures;
      diverged = diverged || report.diverging;
    }
    if (diverged)
      std::cerr << "note: interval " << fmt_double(interval)
                << " produced capped diverging runs\n";

    double mean = 0;
    for (double g : goodputs) mean += g;
    mean /= static_cast<double>(goodputs.size());
    double var = 0;
    for (double g : goodputs) var += (g - mean) * (g - mean);
    const double stddev =
        goodputs.size() > 1
            ? std::sqrt(var / static_cast<double>(goodputs.size() - 1))
            : 0.0;

    csv << fmt_double(interval) << ',' << fmt_double(analytic.value) << ','
        << fmt_double(mean) << ',' << fmt_double(stddev) << ','
        << fmt_double(static_cast<double>(total_jobs) /
                      static_cast<double>(args.runs))
        << ','
        << fmt_double(static_cast<double>(total_failures) /
                      static_cast<double>(args.runs))
        << "\n";
  }

  if (!args.out_path.empty())
    std::cout << "analytic optimal interval: "
              << fmt_double(optimal_interval(args.cost, args.mtbf))
              << " s\n";
  return 0;
}

// ------------------------------------------------------------- analyze --

std::vector<LogRecord> load_log(const std::string& path,
                                std::vector<ParseDiagnostic>* diagnostics) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open log file: " + path);
  ParsedLog parsed = parse_log(file);
  if (diagnostics) *diagnostics = parsed.diagnostics;
  return parsed.records;
}

std::vector<PowerSample> load_power(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open power file: " + path);
  std::vector<PowerSample> samples;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(file, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty()) continue;
    if (!saw_header) {
      if (body != "t_seconds,watts")
        throw ConfigError(line_no, "expected header 't_seconds,watts'");
      saw_header = true;
      continue;
    }
    const auto fields = split(body, ',');
    if (fields.size() != 2)
      throw ConfigError(line_no, "expected 't,watts' row");
    auto t = parse_f64(trim(fields[0]));
    auto w = parse_f64(trim(fields[1]));
    if (!t || !w) throw ConfigError(line_no, "power row is not numeric");
    samples.push_back({*t, *w});
  }
  if (!saw_header) throw ConfigError(1, "empty power file");
  return samples;
}

std::vector<ScalingPoint> load_scaling(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open scaling file: " + path);
  std::vector<ScalingPoint> points;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(file, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty()) continue;
    if (!saw_header) {
      if (body != "nodes,tokens_per_second")
        throw ConfigError(line_no, "expected header 'nodes,tokens_per_second'");
      saw_header = true;
      continue;
    }
    const auto fields = split(body, ',');
    if (fields.size() != 2)
      throw ConfigError(line_no, "expected 'nodes,rate' row");
    auto nodes = parse_u64(trim(fields[0]));
    auto rate = parse_f64(trim(fields[1]));
    if (!nodes || !rate) throw ConfigError(line_no, "scaling row is invalid");
    points.push_back({*nodes, *rate});
  }
  if (!saw_header) throw ConfigError(1, "empty scaling file");
  return points;
}

struct AnalyzeArgs {
  std::string log_path;
  std::string compare_path;
  std::string power_path;
  std::string scaling_path;
  std::string model_config_path;
  std::string out_path;
  std::uint64_t tokens = 0;
  std::uint64_t global_batch = 0;
  std::uint64_t seq_len = 0;
  std::uint64_t warmup = 3;
};

int cmd_analyze(const AnalyzeArgs& args) {
  std::vector<std::pair<std::string, std::string>> metrics;
  auto metric = [&](const std::string& name, double value) {
    metrics.emplace_back(name, fmt_double(value));
  };

  // Batch geometry: flags win over the model config, which wins over nothing.
  std::uint64_t global_batch = args.global_batch;
  std::uint64_t seq_len = args.seq_len;
  std::optional<ModelSpec> model;
  if (!args.model_config_path.empty()) {
    const ConfigFile config = load_config_file(args.model_config_path);
    model = model_from_config(config);
    if (seq_len == 0) seq_len = model->seq_len;
    if (global_batch == 0)
      global_batch = layout_from_config(config).global_batch;
  }

  std::vector<LogRecord> records;
  if (!args.log_path.empty()) {
    std::vector<ParseDiagnostic> diagnostics;
    records = load_log(args.log_path, &diagnostics);
    std::cout << "log: " << records.size() << " records";
    if (!diagnostics.empty())
      std::cout << " (" << diagnostics.size() << " lines dropped)";
    std::cout << "\n";
    for (const ParseDiagnostic& d : diagnostics)
      std::cerr << "note: line " << d.line << ": " << d.message << "\n";
    metric("records", static_cast<double>(records.size()));

    double mean = 0;
    for (const LogRecord& r : records) mean += r.elapsed_ms;
    mean /= static_cast<double>(records.size());
    std::cout << "mean iteration time: " << fmt_double(mean) << " ms\n";
    metric("mean_iter_ms", mean);

    if (global_batch > 0 && seq_len > 0) {
      const double rate = throughput(records, global_batch, seq_len,
                                     static_cast<std::size_t>(args.warmup));
      std::cout << "throughput: " << fmt_double(rate)
                << " tokens/s (global batch " << global_batch << ", seq "
                << seq_len << ", warmup " << args.warmup << ")\n";
      metric("tokens_per_second", rate);
      if (model) {
        const double flops = flops_rate(*model, rate);
        std::cout << "model flops: " << fmt_double(flops) << " /s\n";
        metric("model_flops", flops);
      }
    }
  }

  if (!args.compare_path.empty()) {
    std::vector<LogRecord> other = load_log(args.compare_path, nullptr);
    const CompareResult result = compare(records, other);
    double mean_a = 0;
    for (const LogRecord& r : records) mean_a += r.elapsed_ms;
    mean_a /= static_cast<double>(records.size());
    double mean_b = 0;
    for (const LogRecord& r : other) mean_b += r.elapsed_ms;
    mean_b /= static_cast<double>(other.size());
    std::cout << "compare: " << fmt_double(mean_a) << " ms vs "
              << fmt_double(mean_b) << " ms per iteration\n";
    std::cout << "speedup: " << fmt_double(result.speedup) << "\n";
    std::cout << "iteration-time reduction: "
              << fmt_double(result.reduction_percent) << "%\n";
    metric("compare_mean_a_ms", mean_a);
    metric("compare_mean_b_ms", mean_b);
    metric("speedup", result.speedup);
    metric("reduction_percent", result.reduction_percent);
  }

  if (!args.power_path.empty()) {
    const auto samples = load_power(args.power_path);
    const double joules = energy_per_token(samples, args.tokens);
    std::cout << "energy per token: " << fmt_double(joules) << " J ("
              << samples.size() << " power samples, "
              << fmt_grouped(args.tokens) << " tokens)\n";
    metric("energy_j_per_token", joules);
  }

  if (!args.scaling_path.empty()) {
    const auto table = scaling_efficiency(load_scaling(args.scaling_path));
    std::cout << "scaling efficiency (baseline " << table.front().nodes
              << " nodes):\n";
    for (const ScalingEfficiency& e : table) {
      std::cout << "  " << e.nodes << " nodes: " << fmt_double(e.efficiency)
                << "\n";
      metric("scaling_" + std::to_string(e.nodes), e.efficiency);
    }
  }

  if (!args.out_path.empty()) {
    std::ofstream file;
    std::ostream& csv = select_output(args.out_path, file);
    csv << "metric,value\n";
    for (const auto& [name, value] : metrics)
      csv << name << ',' << value << "\n";
  }
  return 0;
}

// -------------------------------------------------------- machine-info --

int cmd_machine_info(const std::string& config_path) {
  MachineSpec spec = builtin_booster();
  if (!config_path.empty())
    spec = machine_from_config(load_config_file(config_path));

  std::cout << "machine: " << spec.name << "\n";
  std::cout << "nodes: " << spec.num_nodes << " in " << num_cells(spec)
            << " cells of " << spec.cell_size_nodes << "\n";
  std::cout << "gpus: " << total_gpus(spec) << " (" << spec.gpus_per_node
            << " per node)\n";
  std::cout << "gpu memory: "
            << fmt_gib(static_cast<double>(spec.gpu_memory_bytes))
            << " GiB\n";
  std::cout << "cpu cores: " << spec.cpu_cores_per_node << " per node\n";

  auto tbit = [&](const NodeSet& nodes) {
    return fmt_double(allocation_bisection(spec, nodes) / 1e12);
  };
  std::cout << "bisection one cell: "
            << tbit(NodeSet::range(0, spec.cell_size_nodes)) << " Tbit/s\n";
  if (spec.num_nodes >= 2 * spec.cell_size_nodes)
    std::cout << "bisection cell pair: "
              << tbit(NodeSet::range(0, 2 * spec.cell_size_nodes))
              << " Tbit/s\n";
  std::cout << "bisection full system: "
            << tbit(NodeSet::range(0, spec.num_nodes)) << " Tbit/s\n";
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"planning, validation and simulation for large training runs"};
  app.name("trainkit");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string config_path;
  std::string out_path;
  std::string profile;

  CLI::App* plan = app.add_subcommand(
      "plan", "derive, validate and enumerate parallel layouts");
  plan->add_option("--config", config_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  plan->add_option("--out", out_path, "write the layout CSV here");

  CLI::App* render =
      app.add_subcommand("render", "render the scheduler job script");
  render->add_option("--config", config_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  render->add_option("--out", out_path, "write the script here");
  render->add_option("--profile", profile, "enable an env profile")
      ->check(CLI::IsMember({"debug"}));

  ChainArgs chain_args;
  CLI::App* chain =
      app.add_subcommand("chain", "replay the job-chain state machine");
  chain->add_option("--target", chain_args.target, "total steps to complete")
      ->required();
  chain->add_option("--budget", chain_args.budget,
                    "consecutive failures before the chain halts");
  CLI::Option* events_opt =
      chain
          ->add_option("--events", chain_args.events_path,
                       "scripted event file (kind step timestamp per line)")
          ->check(CLI::ExistingFile);
  CLI::Option* sim_opt = chain->add_flag(
      "--sim", chain_args.use_sim, "drive events from the failure simulator");
  events_opt->excludes(sim_opt);
  chain->add_option("--walltime", chain_args.walltime,
                    "per-job walltime, seconds (sim mode)");
  chain->add_option("--interval", chain_args.interval,
                    "checkpoint interval, seconds (sim mode)");
  chain->add_option("--cost", chain_args.cost,
                    "checkpoint write cost, seconds (sim mode)");
  chain->add_option("--restart", chain_args.restart,
                    "post-failure restart cost, seconds (sim mode)");
  chain->add_option("--mtbf", chain_args.mtbf,
                    "mean seconds between failures (sim mode)");
  chain->add_option("--seed", chain_args.seed, "failure stream seed");
  chain->add_option("--out", chain_args.out_path,
                    "write the transition CSV here");

  SimulateArgs sim_args;
  CLI::App* simulate =
      app.add_subcommand("simulate", "sweep checkpoint intervals for goodput");
  simulate
      ->add_option("--interval", sim_args.intervals,
                   "checkpoint intervals, seconds (comma separated)")
      ->required()
      ->delimiter(',');
  simulate->add_option("--cost", sim_args.cost, "checkpoint cost, seconds");
  simulate->add_option("--mtbf", sim_args.mtbf,
                       "mean seconds between failures");
  simulate->add_option("--walltime", sim_args.walltime,
                       "per-job walltime, seconds");
  simulate->add_option("--work", sim_args.work, "total work, seconds")
      ->required();
  simulate->add_option("--runs", sim_args.runs, "runs per interval")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_args.seed, "sweep seed");
  simulate->add_option("--out", sim_args.out_path, "write the sweep CSV here");

  AnalyzeArgs analyze_args;
  CLI::App* analyze =
      app.add_subcommand("analyze", "report throughput, energy and scaling");
  CLI::Option* log_opt =
      analyze->add_option("--log", analyze_args.log_path, "iteration log")
          ->check(CLI::ExistingFile);
  analyze
      ->add_option("--compare", analyze_args.compare_path,
                   "second log to compare against")
      ->check(CLI::ExistingFile)
      ->needs(log_opt);
  CLI::Option* power_opt =
      analyze
          ->add_option("--power", analyze_args.power_path,
                       "power samples CSV (t_seconds,watts)")
          ->check(CLI::ExistingFile);
  CLI::Option* tokens_opt = analyze->add_option(
      "--tokens", analyze_args.tokens, "tokens processed in the power window");
  power_opt->needs(tokens_opt);
  analyze
      ->add_option("--scaling", analyze_args.scaling_path,
                   "scaling CSV (nodes,tokens_per_second)")
      ->check(CLI::ExistingFile);
  analyze
      ->add_option("--model-config", analyze_args.model_config_path,
                   "config supplying model shape and batch geometry")
      ->check(CLI::ExistingFile);
  analyze->add_option("--global-batch", analyze_args.global_batch,
                      "sequences per optimizer step");
  analyze->add_option("--seq-len", analyze_args.seq_len, "tokens per sequence");
  analyze->add_option("--warmup", analyze_args.warmup,
                      "iterations excluded from throughput");
  analyze->add_option("--out", analyze_args.out_path,
                      "write the metrics CSV here");

  CLI::App* machine_info =
      app.add_subcommand("machine-info", "describe the target machine");
  machine_info->add_option("--config", config_path, "run configuration file")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(plan)) return cmd_plan(config_path, out_path);
    if (app.got_subcommand(render))
      return cmd_render(config_path, out_path, profile);
    if (app.got_subcommand(chain)) {
      if (!chain_args.use_sim && chain_args.events_path.empty()) {
        std::cerr << "chain needs --events or --sim\n";
        return 2;
      }
      return cmd_chain(chain_args);
    }
    if (app.got_subcommand(simulate)) return cmd_simulate(sim_args);
    if (app.got_subcommand(analyze)) {
      if (analyze_args.log_path.empty() && analyze_args.power_path.empty() &&
          analyze_args.scaling_path.empty()) {
        std::cerr << "analyze needs at least one of --log, --power, "
                     "--scaling\n";
        return 2;
      }
      return cmd_analyze(analyze_args);
    }
    if (app.got_subcommand(machine_info)) return cmd_machine_info(config_path);
  } catch (const RenderError& e) {
    std::cerr << "refusing to render:\n";
    for (const Violation& v : e.violations()) print_violation(std::cerr, v);
    return 1;
  } catch (const LayoutError& e) {
    std::cerr << "violation: " << to_string(e.code()) << ": " << e.what()
              << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ScriptParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const AnalyzeError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace trainkit
