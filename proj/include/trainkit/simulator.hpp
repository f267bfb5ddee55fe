// Discrete-event goodput simulator for checkpointed training under random
// failures and walltime-limited job chains, plus the first-order analytic
// model it is calibrated against.
#pragma once

#include <cstdint>

#include "trainkit/layout.hpp"
#include "trainkit/model_config.hpp"

namespace trainkit {

struct FailureModel {
  double mtbf = 1e9;          // mean seconds between failures; +inf = none
  std::uint64_t seed = 42;    // substream root for the failure process
};

struct SimConfig {
  double total_work = 0;          // seconds of useful compute to finish
  double walltime = 86400;        // scheduler limit per job, seconds
  double checkpoint_interval = 3600;  // compute seconds between saves
  double checkpoint_cost = 60;        // seconds per save (0 allowed)
  double restart_cost = 0;            // seconds to recover after a failure
  FailureModel failure;
};

// Throws std::invalid_argument on non-positive work/walltime/interval/mtbf,
// negative costs, or checkpoint_cost >= checkpoint_interval.
void check_sim_config(const SimConfig& config);

struct SimReport {
  double wall_time = 0;    // total seconds consumed, all jobs
  double useful_time = 0;  // committed compute seconds (== total_work when
                           // completed)
  double goodput = 0;      // useful_time / wall_time, in (0, 1]
  std::uint64_t failures = 0;
  std::uint64_t checkpoints = 0;  // completed writes, periodic + final
  std::uint64_t jobs = 0;
  bool completed = false;
  // The configuration cannot make progress under the analytic model (or has
  // no compute window per job); the report is a capped partial run.
  bool diverging = false;
};

// Callbacks fired as the simulated timeline unfolds; used to replay a run
// through the chain orchestrator. Work is reported in compute seconds.
class SimObserver {
 public:
  virtual ~SimObserver() = default;
  virtual void on_job_start(double /*t*/, std::uint64_t /*job*/) {}
  virtual void on_progress(double /*t*/, double /*work_delta*/) {}
  virtual void on_checkpoint(double /*t*/, double /*work_done*/) {}
  virtual void on_walltime_imminent(double /*t*/) {}
  virtual void on_failure(double /*t*/) {}
  virtual void on_job_end(double /*t*/) {}
  virtual void on_complete(double /*t*/) {}
};

// Deterministic per seed, bitwise: a fixed (config, seed) pair always
// produces the identical report.
SimReport simulate(const SimConfig& config, SimObserver* observer = nullptr);

struct Goodput {
  double value = 0;
  // First-order theory only holds when interval+cost is small against mtbf;
  // set when (interval + cost) > 0.2 * mtbf.
  bool outside_regime = false;
};

// Expected fraction of wall time doing useful work for a given checkpoint
// interval: i/(i+c) * (1 - (i+c)/(2m)).
Goodput expected_goodput(double interval, double cost, double mtbf);

// Interval maximizing expected goodput to first order: sqrt(2*cost*mtbf).
double optimal_interval(double cost, double mtbf);

// Seconds to write one full checkpoint: bf16 weights plus fp32 optimizer
// state, (2P + 12P) bytes, onto shared storage at storage_bandwidth bytes/s.
// Every byte lands once regardless of how ranks shard the write, so the
// layout does not change the total.
double checkpoint_cost_model(const ModelSpec& model,
                             const ParallelLayout& layout,
                             double storage_bandwidth);

}  // namespace trainkit
