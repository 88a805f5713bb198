#include "mixne/run_record.hpp"

#include <ostream>

#include <fmt/format.h>

namespace mixne {

void write_run_record_csv(const RunRecord& record, std::ostream& out) {
  out << "step,episode_return,critic_loss,sigma_t,K_t\n";
  for (const auto& row : record.rows) {
    const std::string loss = row.critic_loss ? fmt::format("{:.17g}", *row.critic_loss) : "";
    out << fmt::format("{},{:.17g},{},{:.17g},{}\n", row.step, row.episode_return, loss, row.sigma_t,
                       row.warmup_k);
  }
}

}  // namespace mixne
