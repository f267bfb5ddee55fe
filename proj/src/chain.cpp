#include "trainkit/chain.hpp"

#include <algorithm>
#include <stdexcept>

namespace trainkit {

std::optional<CheckpointRecord> latest_checkpoint(
    const std::vector<CheckpointRecord>& registry) {
  std::optional<CheckpointRecord> best;
  for (const CheckpointRecord& record : registry) {
    if (!record.valid) continue;
    if (!best || record.step > best->step) best = record;
  }
  return best;
}

const char* to_string(ChainPhase phase) {
  switch (phase) {
    case ChainPhase::idle: return "idle";
    case ChainPhase::submitted: return "submitted";
    case ChainPhase::running: return "running";
    case ChainPhase::checkpointing: return "checkpointing";
    case ChainPhase::resubmitting: return "resubmitting";
    case ChainPhase::halted: return "halted";
  }
  return "unknown";
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::job_started: return "job_started";
    case EventKind::step_progress: return "step_progress";
    case EventKind::checkpoint_written: return "checkpoint_written";
    case EventKind::walltime_imminent: return "walltime_imminent";
    case EventKind::scheduler_error: return "scheduler_error";
    case EventKind::hardware_failure: return "hardware_failure";
    case EventKind::job_completed: return "job_completed";
  }
  return "unknown";
}

const char* to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::none: return "none";
    case ActionKind::immediate_checkpoint: return "immediate_checkpoint";
    case ActionKind::submit_dependent: return "submit_dependent";
    case ActionKind::halt: return "halt";
    case ActionKind::protocol_error: return "protocol_error";
  }
  return "unknown";
}

ChainState initial_chain(std::uint64_t target_steps) {
  ChainState state;
  state.target_steps = target_steps;
  return state;
}

namespace {

Action protocol_error(const ChainState& state, const ChainEvent& event) {
  Action action;
  action.kind = ActionKind::protocol_error;
  action.message = std::string(to_string(event.kind)) + " is illegal in phase " +
                   to_string(state.phase);
  return action;
}

// Appends or revalidates; the registry holds at most one record per step.
void record_checkpoint(ChainState& state, std::uint64_t step, double at) {
  for (CheckpointRecord& record : state.registry) {
    if (record.step == step) {
      record.valid = true;
      record.written_at = at;
      return;
    }
  }
  state.registry.push_back({step, at, true});
}

Action halt_action(ChainState& state, std::string why) {
  state.phase = ChainPhase::halted;
  Action action;
  action.kind = ActionKind::halt;
  action.message = std::move(why);
  return action;
}

// Chain the follow-up job: it depends on the job that just ended and resumes
// from the newest valid checkpoint (step 0 when none exists).
Action submit_dependent(ChainState& state) {
  auto resume = latest_checkpoint(state.registry);
  const std::uint64_t resume_step = resume ? resume->step : 0;
  const std::uint64_t predecessor = state.job_index;
  state.job_index += 1;
  state.dependencies.emplace_back(predecessor, state.job_index);
  state.job_resume_step = resume_step;
  state.job_progress = 0;
  state.phase = ChainPhase::resubmitting;
  Action action;
  action.kind = ActionKind::submit_dependent;
  action.resume_step = resume_step;
  action.message = "resume from step " + std::to_string(resume_step);
  return action;
}

// A job ended (completed, or died on a failure). Decide: done, over budget,
// or chain the next job.
Action job_over(ChainState& state, bool failed) {
  if (failed) {
    state.failures += 1;
    state.consecutive_failures += 1;
  }
  if (state.current_step >= state.target_steps)
    return halt_action(state, "target reached");
  if (state.consecutive_failures >= state.failure_budget)
    return halt_action(state, std::to_string(state.consecutive_failures) +
                                  " consecutive failures without progress");
  return submit_dependent(state);
}

}  // namespace

std::pair<ChainState, Action> next_action(const ChainState& state,
                                          const ChainEvent& event) {
  ChainState next = state;
  Action action;

  switch (state.phase) {
    case ChainPhase::idle:
    case ChainPhase::submitted:
    case ChainPhase::resubmitting:
      if (event.kind != EventKind::job_started)
        return {state, protocol_error(state, event)};
      if (next.job_index == 0) next.job_index = 1;
      next.phase = ChainPhase::running;
      next.job_progress = 0;
      return {next, action};

    case ChainPhase::running:
      switch (event.kind) {
        case EventKind::step_progress: {
          next.job_progress += event.value;
          const std::uint64_t reached = next.job_resume_step + next.job_progress;
          // Only fresh ground (beyond the high-water mark) counts as real
          // progress; redone work neither advances the step nor resets the
          // failure budget.
          if (reached > next.current_step) {
            next.current_step = std::min(reached, next.target_steps);
            if (event.value > 0) next.consecutive_failures = 0;
          }
          if (next.current_step >= next.target_steps)
            return {next, halt_action(next, "target reached")};
          return {next, action};
        }
        case EventKind::checkpoint_written:
          record_checkpoint(next, event.value, event.at);
          return {next, action};
        case EventKind::walltime_imminent:
        case EventKind::scheduler_error:
          // Same response either way: salvage the in-flight work before the
          // allocation disappears.
          next.phase = ChainPhase::checkpointing;
          if (event.kind == EventKind::scheduler_error) {
            next.failures += 1;
            next.consecutive_failures += 1;
          }
          action.kind = ActionKind::immediate_checkpoint;
          return {next, action};
        case EventKind::hardware_failure:
          return {next, job_over(next, true)};
        case EventKind::job_completed:
          return {next, job_over(next, false)};
        case EventKind::job_started:
          return {state, protocol_error(state, event)};
      }
      return {state, protocol_error(state, event)};

    case ChainPhase::checkpointing:
      switch (event.kind) {
        case EventKind::checkpoint_written:
          record_checkpoint(next, event.value, event.at);
          return {next, action};
        case EventKind::walltime_imminent:
        case EventKind::scheduler_error:
          // Checkpoint already in flight; repeated alarms change nothing.
          return {next, action};
        case EventKind::hardware_failure:
          return {next, job_over(next, true)};
        case EventKind::job_completed:
          return {next, job_over(next, false)};
        default:
          return {state, protocol_error(state, event)};
      }

    case ChainPhase::halted:
      return {state, protocol_error(state, event)};
  }
  return {state, protocol_error(state, event)};
}

std::uint64_t plan_chain(std::uint64_t target_steps,
                         std::uint64_t steps_per_walltime) {
  if (steps_per_walltime == 0)
    throw std::invalid_argument("steps_per_walltime must be >= 1");
  return (target_steps + steps_per_walltime - 1) / steps_per_walltime;
}

std::vector<ChainTransition> run_chain(ChainState& state,
                                       const std::vector<ChainEvent>& events) {
  std::vector<ChainTransition> log;
  log.reserve(events.size());
  for (const ChainEvent& event : events) {
    if (state.phase == ChainPhase::halted) break;
    auto [next, action] = next_action(state, event);
    state = std::move(next);
    log.push_back({event, action, state.current_step, state.job_index});
  }
  return log;
}

}  // namespace trainkit
