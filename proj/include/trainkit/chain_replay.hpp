// Bridge from the failure simulator to the chain orchestrator: each simulator
// callback becomes a chain event, one simulated second per optimizer step.
//
// The chain only ever learns of work a checkpoint committed (plus the final
// uncheckpointed stretch when the campaign completes); partial work a failure
// destroys is never reported as progress, so the orchestrator's step counter
// cannot run ahead of anything resumable.
#pragma once

#include <cstdint>
#include <vector>

#include "trainkit/chain.hpp"
#include "trainkit/simulator.hpp"

namespace trainkit {

class ChainReplay : public SimObserver {
 public:
  ChainReplay(std::uint64_t target_steps, std::uint64_t failure_budget);

  void on_job_start(double t, std::uint64_t job) override;
  void on_checkpoint(double t, double work_done) override;
  void on_walltime_imminent(double t) override;
  void on_failure(double t) override;
  void on_job_end(double t) override;
  void on_complete(double t) override;

  // Events arriving after the chain halts are dropped, so the transition log
  // always ends at the halt.
  const ChainState& state() const { return state_; }
  const std::vector<ChainTransition>& log() const { return log_; }

 private:
  void feed(const ChainEvent& event);

  ChainState state_;
  std::vector<ChainTransition> log_;
};

}  // namespace trainkit
