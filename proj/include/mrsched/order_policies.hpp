#pragma once

#include <optional>

#include "mrsched/cp_fixed_order.hpp"
#include "mrsched/model.hpp"

namespace mrsched {

// Release date ascending, ties by job id.
JobOrder fcfs_order(const Instance &inst);
// w_j / (total volume of j) descending, ties by job id. A job without work
// ranks first.
JobOrder smith_order(const Instance &inst);

bool is_total_order(const Instance &inst, const JobOrder &order);

// m = n processors; job j is released at (j-1) eps, has a unit Map task on
// processor j and Reduce tasks of volume eps on every other processor.
// beta = 2, E = 1.
Instance gen_fcfs_gap_instance(int n, double eps = 1e-4);

// One processor: n-1 unit jobs released at 0 and a job of volume 1-eps
// released at r (default 1000 n). Each job also owns a zero-volume Reduce
// task on a second processor. beta = 2, E = 1.
Instance gen_sr_gap_instance(int n, double eps = 1e-4,
                             std::optional<double> release = std::nullopt);

// One processor, n unit jobs released at 0, unit weights, with zero-volume
// Reduce tasks on a second processor.
Instance gen_chain_instance(int n, double energy_budget = 1.0, double beta = 2.0);

} // namespace mrsched
