#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace mrsched {

enum class RowSense { LessEqual, GreaterEqual, Equal };

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

// min c^T x  s.t.  A x (<=, >=, =) b,  0 <= x <= upper.
struct LpProblem {
  std::vector<double> cost;
  std::vector<double> upper; // +inf when unbounded above
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<Triplet> entries;

  std::size_t num_cols() const { return cost.size(); }
  std::size_t num_rows() const { return rhs.size(); }

  std::size_t add_col(double c, double ub = std::numeric_limits<double>::infinity());
  std::size_t add_row(RowSense sense, double b);
  void add_entry(std::size_t row, std::size_t col, double value);
};

enum class LpStatus { Optimal, Infeasible, Unbounded, ToleranceFailure, IterationLimit };

const char *to_string(LpStatus status);

struct LpSolverConfig {
  double rel_tol = 1e-6;          // accepted relative duality gap
  double feasibility_tol = 1e-9;  // primal feasibility (scaled problem)
  double optimality_tol = 1e-9;   // reduced-cost threshold (scaled problem)
  std::size_t max_iterations = 0; // 0 = automatic
  bool scale = true;
};

struct LpResult {
  LpStatus status = LpStatus::ToleranceFailure;
  std::vector<double> x;
  std::vector<double> duals; // one per row, sign convention of min problems
  double objective = 0.0;
  double dual_objective = 0.0;
  std::size_t iterations = 0;
  double max_primal_residual = 0.0;
  double max_dual_infeasibility = 0.0;
  double relative_gap = 0.0;
  std::string message;
};

class LpSolver {
public:
  virtual ~LpSolver() = default;
  virtual LpResult solve(const LpProblem &problem,
                         const LpSolverConfig &config) const = 0;
  virtual std::string name() const = 0;
};

// Two-phase primal simplex on a dense tableau, suited to models with a few
// hundred rows and some thousands of columns.
class DenseSimplexSolver final : public LpSolver {
public:
  LpResult solve(const LpProblem &problem,
                 const LpSolverConfig &config) const override;
  std::string name() const override { return "dense-simplex"; }
};

// Largest violation of the rows and bounds of `problem` by `x`.
double primal_residual(const LpProblem &problem, const std::vector<double> &x);

// Free-format MPS export. Column and row names are generated when the
// corresponding name vectors are empty.
void write_free_mps(std::ostream &os, const LpProblem &problem,
                    const std::vector<std::string> &row_names = {},
                    const std::vector<std::string> &col_names = {},
                    const std::string &model_name = "MRSCHED");

} // namespace mrsched
