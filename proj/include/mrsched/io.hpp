#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mrsched/discretization.hpp"
#include "mrsched/model.hpp"

namespace mrsched {

// Instance documents:
// {"beta", "energy_budget", "num_processors",
//  "jobs": [{"id", "weight", "release",
//            "tasks": [{"processor", "kind": "map"|"reduce", "volume"}]}]}
nlohmann::json instance_to_json(const Instance &inst);
Instance instance_from_json(const nlohmann::json &doc);

Instance read_instance(const std::string &path);
void write_instance(const std::string &path, const Instance &inst);

// Schedule CSV: job_id,kind,processor,start,duration,speed,energy,completion,
// rows sorted by start then processor.
void write_schedule_csv(std::ostream &os, const Instance &inst,
                        const Schedule &sched);
// Reads a schedule back. Rows are matched to tasks by (job id, processor);
// the kind column must agree.
Schedule read_schedule_csv(std::istream &is, const Instance &inst);

void write_grid_csv(std::ostream &os, const std::vector<double> &values);

// Shortest round-trip decimal form of a double.
std::string format_double(double x);

} // namespace mrsched
