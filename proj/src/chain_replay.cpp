#include "trainkit/chain_replay.hpp"

#include <cmath>
#include <utility>

namespace trainkit {

ChainReplay::ChainReplay(std::uint64_t target_steps,
                         std::uint64_t failure_budget) {
  state_ = initial_chain(target_steps);
  state_.failure_budget = failure_budget;
}

void ChainReplay::on_job_start(double t, std::uint64_t) {
  feed({EventKind::job_started, 0, t});
}

void ChainReplay::on_checkpoint(double t, double work_done) {
  const auto step = static_cast<std::uint64_t>(std::llround(work_done));
  // A save during the run carries fresh progress; the walltime save happens
  // after the imminent alarm, when the chain is already checkpointing and
  // progress reports would be out of protocol. The registry still captures
  // the step either way, which is what resume reads.
  if (state_.phase == ChainPhase::running) {
    const std::uint64_t seen = state_.job_resume_step + state_.job_progress;
    if (step > seen) feed({EventKind::step_progress, step - seen, t});
  }
  feed({EventKind::checkpoint_written, step, t});
}

void ChainReplay::on_walltime_imminent(double t) {
  feed({EventKind::walltime_imminent, 0, t});
}

void ChainReplay::on_failure(double t) {
  feed({EventKind::hardware_failure, 0, t});
}

void ChainReplay::on_job_end(double t) {
  feed({EventKind::job_completed, 0, t});
}

void ChainReplay::on_complete(double t) {
  // The last stretch finishes without a checkpoint behind it.
  const std::uint64_t seen = state_.job_resume_step + state_.job_progress;
  const std::uint64_t tail =
      state_.target_steps > seen ? state_.target_steps - seen : 0;
  feed({EventKind::step_progress, tail, t});
}

void ChainReplay::feed(const ChainEvent& event) {
  if (state_.phase == ChainPhase::halted) return;
  auto [next, action] = next_action(state_, event);
  state_ = std::move(next);
  log_.push_back({event, action, state_.current_step, state_.job_index});
}

}  // namespace trainkit
