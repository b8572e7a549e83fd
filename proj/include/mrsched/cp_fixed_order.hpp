#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mrsched/model.hpp"

namespace mrsched {

// A total order over the jobs of an instance, as a list of job ids.
struct JobOrder {
  std::vector<int> ids;

  // rank[j] = position of job storage index j; throws ParameterError unless
  // `ids` is a permutation of the instance's job ids.
  std::vector<std::size_t> ranks(const Instance &inst) const;
  bool precedes(int a, int b) const;
};

struct Completions {
  std::vector<double> task; // per flat task
  std::vector<double> job;  // per job storage index
};

// Smallest completions satisfying the fixed-order lower-bound rows for
// processing times `p` (per flat task; ignored for zero-volume tasks):
// C_ij >= r_j' + sum of p on processor i over jobs j' .. j in the order,
// C_ij >= C_i'j + p_ij for a Reduce task and each sibling Map task,
// C_j = max_i C_ij.
Completions evaluate_completions(const Instance &inst, const JobOrder &order,
                                 const std::vector<double> &p);

// Processing times that give each positive-volume task an equal share of E.
std::vector<double> equal_energy_split(const Instance &inst);

struct CpConfig {
  double tol = 1e-7; // relative gap between objective and lower bound
  std::size_t max_iterations = 100000; // Newton steps over all rounds
  std::size_t max_rounds = 500;        // cutting-plane rounds
};

struct CpSolution {
  std::vector<double> p; // per flat task, 0 for zero-volume tasks
  Completions completions;
  double objective = 0.0;   // sum w_j C_j at p
  double lower_bound = 0.0; // dual bound on the optimum
  double energy = 0.0;
  std::size_t iterations = 0; // Newton steps
  std::size_t rounds = 0;
  double gap = 0.0; // (objective - lower_bound) / max(1, objective)
  bool converged = false;
  std::string message;
};

// Minimizes sum w_j C_j(p) subject to sum v^beta / p^(beta-1) <= E.
CpSolution solve_cp(const Instance &inst, const JobOrder &order,
                    const CpConfig &cfg = {});

struct ChainSolution {
  std::vector<double> speeds;
  double objective = 0.0;
};

// Single processor, n unit jobs, zero releases, unit weights, beta = 2: the
// KKT solution s_j = E sqrt(n-j+1) / sum_i sqrt(i).
ChainSolution closed_form_chain(int n, double energy_budget, double beta = 2.0);

enum class Dispatch {
  // Each processor runs its positive-volume tasks strictly in job order; a
  // task starts once its processor is free, its job is released and, for a
  // Reduce task, all sibling Map tasks have completed.
  FixedOrder,
  // An idle processor starts the highest-priority task that is released,
  // not yet run and, for a Reduce task, has all sibling Maps completed.
  List,
};

// Zero-volume tasks take no processor time under either rule.
Schedule schedule_from_order(const Instance &inst, const JobOrder &order,
                             const std::vector<double> &p,
                             Dispatch rule = Dispatch::FixedOrder);

} // namespace mrsched
