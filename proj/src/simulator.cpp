#include "trainkit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trainkit/rng.hpp"

namespace trainkit {

void check_sim_config(const SimConfig& config) {
  if (!(config.total_work > 0))
    throw std::invalid_argument("total_work must be > 0");
  if (!(config.walltime > 0))
    throw std::invalid_argument("walltime must be > 0");
  if (!(config.checkpoint_interval > 0))
    throw std::invalid_argument("checkpoint_interval must be > 0");
  if (config.checkpoint_cost < 0)
    throw std::invalid_argument("checkpoint_cost must be >= 0");
  if (!(config.checkpoint_cost < config.checkpoint_interval))
    throw std::invalid_argument(
        "checkpoint_cost must be < checkpoint_interval");
  if (config.restart_cost < 0)
    throw std::invalid_argument("restart_cost must be >= 0");
  if (!(config.failure.mtbf > 0))
    throw std::invalid_argument("mtbf must be > 0");
}

namespace {

class NullObserver : public SimObserver {};

}  // namespace

SimReport simulate(const SimConfig& config, SimObserver* observer) {
  check_sim_config(config);
  NullObserver null_observer;
  SimObserver& obs = observer ? *observer : null_observer;

  SimReport report;
  // A run that cannot commit work per the analytic model (or has no compute
  // window inside a job) would chain forever; run it capped and say so.
  report.diverging =
      expected_goodput(config.checkpoint_interval, config.checkpoint_cost,
                       config.failure.mtbf)
              .value <= 0 ||
      config.walltime - config.checkpoint_cost - config.restart_cost <= 0;

  SplitMix64 rng = stream_rng(config.failure.seed, 0);
  double t = 0;
  double next_failure = sample_exponential(rng, config.failure.mtbf);
  double committed = 0;  // checkpointed work
  double run = 0;        // compute since the last completed checkpoint
  bool recovering = false;
  bool done = false;
  std::int64_t budget = 10'000'000;  // activity cap for diverging configs

  // Advances the clock by at most `duration`; a failure arrival cuts the
  // activity short. Returns {elapsed, interrupted}.
  auto advance = [&](double duration) -> std::pair<double, bool> {
    if (t + duration > next_failure) {
      double elapsed = next_failure - t;
      t = next_failure;
      return {elapsed, true};
    }
    t += duration;
    return {duration, false};
  };
  auto fail = [&] {
    report.failures += 1;
    obs.on_failure(t);
    run = 0;  // everything since the last completed checkpoint is lost
    recovering = true;
    next_failure = t + sample_exponential(rng, config.failure.mtbf);
  };

  while (!done && budget > 0) {
    report.jobs += 1;
    obs.on_job_start(t, report.jobs);
    double job_t = 0;

    if (recovering && config.restart_cost > 0) {
      auto [elapsed, interrupted] = advance(config.restart_cost);
      job_t += elapsed;
      if (interrupted) {
        fail();
        continue;
      }
    }
    recovering = false;

    while (budget-- > 0) {
      const double remaining = config.total_work - committed - run;
      if (remaining <= 0) {
        done = true;
        obs.on_complete(t);
        break;
      }
      // The tail of every job window is reserved for one final save so
      // walltime expiry never abandons in-flight work.
      const double window = config.walltime - config.checkpoint_cost;
      if (window - job_t <= 0) {
        if (run > 0) {
          obs.on_walltime_imminent(t);
          auto [elapsed, interrupted] = advance(config.checkpoint_cost);
          job_t += elapsed;
          if (interrupted) {
            fail();
            break;
          }
          committed += run;
          run = 0;
          report.checkpoints += 1;
          obs.on_checkpoint(t, committed);
        }
        obs.on_job_end(t);
        break;
      }

      const double to_save = config.checkpoint_interval - run;
      const double to_wall = window - job_t;
      // Tie-break order matters: finishing beats saving beats hitting the
      // wall, so exact boundaries are handled once, not twice.
      int branch;  // 0 finish, 1 periodic save, 2 wall boundary
      double segment;
      if (remaining <= to_save && remaining <= to_wall) {
        branch = 0;
        segment = remaining;
      } else if (to_save <= to_wall) {
        branch = 1;
        segment = to_save;
      } else {
        branch = 2;
        segment = to_wall;
      }

      auto [elapsed, interrupted] = advance(segment);
      job_t += elapsed;
      if (elapsed > 0) obs.on_progress(t, elapsed);
      if (interrupted) {
        fail();
        break;
      }
      // Snap accumulators at branch boundaries so float drift cannot split
      // one boundary into two events.
      if (branch == 0) {
        run = config.total_work - committed;
      } else if (branch == 1) {
        run = config.checkpoint_interval;
        auto [save_elapsed, save_interrupted] = advance(config.checkpoint_cost);
        job_t += save_elapsed;
        if (save_interrupted) {
          fail();
          break;
        }
        committed += run;
        run = 0;
        report.checkpoints += 1;
        obs.on_checkpoint(t, committed);
      } else {
        run += elapsed;
        job_t = window;
      }
    }
  }

  report.wall_time = t;
  report.useful_time = done ? config.total_work : committed + run;
  report.completed = done;
  report.goodput =
      report.wall_time > 0
          ? std::min(1.0, report.useful_time / report.wall_time)
          : 0.0;
  return report;
}

Goodput expected_goodput(double interval, double cost, double mtbf) {
  if (!(interval > 0)) throw std::invalid_argument("interval must be > 0");
  if (cost < 0) throw std::invalid_argument("cost must be >= 0");
  if (!(mtbf > 0)) throw std::invalid_argument("mtbf must be > 0");
  const double cycle = interval + cost;
  Goodput result;
  result.value = interval / cycle * (1.0 - cycle / (2.0 * mtbf));
  result.outside_regime = cycle > 0.2 * mtbf;
  return result;
}

double optimal_interval(double cost, double mtbf) {
  if (cost < 0) throw std::invalid_argument("cost must be >= 0");
  if (!(mtbf > 0)) throw std::invalid_argument("mtbf must be > 0");
  return std::sqrt(2.0 * cost * mtbf);
}

double checkpoint_cost_model(const ModelSpec& model,
                             const ParallelLayout& layout,
                             double storage_bandwidth) {
  if (!(storage_bandwidth > 0))
    throw std::invalid_argument("storage_bandwidth must be > 0");
  (void)layout;  // every byte lands on shared storage once, however sharded
  const double params = static_cast<double>(param_count(model).total);
  return (2.0 * params + 12.0 * params) / storage_bandwidth;
}

}  // namespace trainkit
