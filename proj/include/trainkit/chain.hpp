// Chained-job orchestration: a pure state machine that turns executor events
// (progress, checkpoints, walltime warnings, failures) into actions
// (checkpoint now, submit the dependent follow-up job, halt).
//
// Long runs never fit one scheduler allocation, so training proceeds as a
// chain of jobs, each depending on its predecessor and resuming from the
// newest valid checkpoint. The transition function is total: events that make
// no sense in the current phase yield a protocol_error action and leave the
// state untouched.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace trainkit {

struct CheckpointRecord {
  std::uint64_t step = 0;
  double written_at = 0.0;  // executor timestamp, seconds
  bool valid = true;        // false: write never completed
};

// Newest valid checkpoint, or nullopt when nothing can be resumed.
std::optional<CheckpointRecord> latest_checkpoint(
    const std::vector<CheckpointRecord>& registry);

enum class ChainPhase {
  idle,
  submitted,
  running,
  checkpointing,  // immediate checkpoint requested, job still alive
  resubmitting,   // dependent job submitted, waiting for it to start
  halted,
};

const char* to_string(ChainPhase phase);

enum class EventKind {
  job_started,
  step_progress,       // value = newly completed optimizer steps
  checkpoint_written,  // value = step the checkpoint captures
  walltime_imminent,
  scheduler_error,
  hardware_failure,
  job_completed,
};

const char* to_string(EventKind kind);

struct ChainEvent {
  EventKind kind = EventKind::job_started;
  std::uint64_t value = 0;
  double at = 0.0;  // executor timestamp, seconds
};

enum class ActionKind {
  none,
  immediate_checkpoint,
  submit_dependent,
  halt,
  protocol_error,
};

const char* to_string(ActionKind kind);

struct Action {
  ActionKind kind = ActionKind::none;
  std::uint64_t resume_step = 0;  // submit_dependent only
  std::string message;
};

struct ChainState {
  ChainPhase phase = ChainPhase::idle;
  // High-water mark of globally completed steps. Never decreases; redone
  // work after a rollback does not double-count because per-job progress is
  // tracked against the job's resume point.
  std::uint64_t current_step = 0;
  std::uint64_t target_steps = 0;
  std::uint64_t job_index = 0;  // >= 1 once anything was submitted
  std::vector<CheckpointRecord> registry;
  std::uint64_t failures = 0;              // total failure events
  std::uint64_t consecutive_failures = 0;  // reset by real progress
  std::uint64_t failure_budget = 3;        // halt threshold
  // Bookkeeping for the job currently running.
  std::uint64_t job_resume_step = 0;
  std::uint64_t job_progress = 0;
  // (predecessor, successor) job indices; always a single path.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> dependencies;
};

// Fresh chain that still needs a job_started event.
ChainState initial_chain(std::uint64_t target_steps);

// Pure transition: returns the successor state and the action the executor
// must take. protocol_error returns the input state unchanged.
std::pair<ChainState, Action> next_action(const ChainState& state,
                                          const ChainEvent& event);

// ceil(target_steps / steps_per_walltime): jobs needed when every allocation
// completes its full share. Throws std::invalid_argument if
// steps_per_walltime == 0.
std::uint64_t plan_chain(std::uint64_t target_steps,
                         std::uint64_t steps_per_walltime);

// One transition of a replayed event stream, for the CSV log.
struct ChainTransition {
  ChainEvent event;
  Action action;
  std::uint64_t step_after = 0;
  std::uint64_t job_index_after = 0;
};

// Applies events in order until exhausted or the chain halts.
std::vector<ChainTransition> run_chain(ChainState& state,
                                       const std::vector<ChainEvent>& events);

}  // namespace trainkit
