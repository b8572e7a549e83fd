#pragma once

#include <cstddef>
#include <vector>

#include "mrsched/model.hpp"

namespace mrsched {

// Event-driven non-preemptive list scheduling. Whenever a processor is idle
// it starts the first task of its priority list (flat task indices) that is
// available (availability[f] <= now), not yet started and, for a Reduce task,
// whose positive-volume sibling Map tasks have completed. Zero-volume tasks
// are not listed; they are placed at their job's release, or after the
// sibling Maps for a Reduce task.
Schedule list_dispatch(const Instance &inst,
                       const std::vector<std::vector<std::size_t>> &priority,
                       const std::vector<double> &availability,
                       const std::vector<double> &p);

} // namespace mrsched
