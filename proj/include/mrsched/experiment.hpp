#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrsched/cp_fixed_order.hpp"
#include "mrsched/generator.hpp"

namespace mrsched {

inline constexpr const char *kVersion = "0.1.0";

// FCFS / SR: the order with equal-energy-split processing times.
// CP(FCFS) / CP(SR): the order with the convex program's processing times.
enum class Policy { Fcfs, Sr, CpFcfs, CpSr };

const char *to_string(Policy p);
Policy policy_from_string(const std::string &text);

struct ExperimentConfig {
  GenConfig gen;
  std::vector<int> ns{3, 5, 8};
  int repetitions = 10;
  CpConfig cp;
  // List: tasks start as soon as released and their processor is idle,
  // highest priority first. FixedOrder: strict per-processor job order.
  Dispatch dispatch = Dispatch::List;
  std::vector<Policy> policies{Policy::Fcfs, Policy::Sr, Policy::CpFcfs,
                               Policy::CpSr};
};

GenConfig gen_config_from_json(const nlohmann::json &doc, GenConfig base = {});
ExperimentConfig experiment_config_from_json(const nlohmann::json &doc);
nlohmann::json to_json(const ExperimentConfig &cfg);

struct ResultRow {
  int n = 0;
  std::uint64_t seed = 0;
  Policy policy = Policy::Fcfs;
  double objective = 0.0;
  double energy = 0.0;
  double lb = 0.0; // CP lower bound for the policy's order
  double ratio = 0.0;
  bool feasible = true; // passes validate_schedule within the budget
  bool lb_holds = true; // lb <= objective (guaranteed only for FixedOrder)
  bool cp_converged = true;
};

struct SummaryRow {
  int n = 0;
  Policy policy = Policy::Fcfs;
  std::size_t count = 0;
  double mean_objective = 0.0;
  double mean_lb = 0.0;
  double mean_ratio = 0.0;
  std::size_t infeasible = 0;
  std::size_t lb_violations = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows; // sorted by (n, seed, policy)
  std::vector<SummaryRow> summary;
};

ExperimentResult run_experiment(const ExperimentConfig &cfg);

void write_results_csv(std::ostream &os, const ExperimentConfig &cfg,
                       const ExperimentResult &res);
void write_summary_csv(std::ostream &os, const ExperimentResult &res);

} // namespace mrsched
