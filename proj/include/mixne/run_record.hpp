#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mixne {

struct RunRecordRow {
  std::size_t step = 0;
  double episode_return = 0.0;
  std::optional<double> critic_loss;  ///< DDPG only
  double sigma_t = 0.0;
  std::size_t warmup_k = 1;

  friend bool operator==(const RunRecordRow&, const RunRecordRow&) = default;
};

/// Per-run training trace. VPG rows are written once per policy update (the
/// return is the mean discounted return of that update's trajectories); DDPG
/// rows once per finished episode.
struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<RunRecordRow> rows;
  /// DDPG: held-out-batch critic loss before the first update and at the end.
  std::optional<double> initial_critic_loss;
  std::optional<double> final_critic_loss;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// CSV columns: step,episode_return,critic_loss,sigma_t,K_t. critic_loss is
/// left empty when absent.
void write_run_record_csv(const RunRecord& record, std::ostream& out);

}  // namespace mixne
