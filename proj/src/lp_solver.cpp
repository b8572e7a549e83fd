#include "mrsched/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>

namespace mrsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Presolved, scaled problem in the row-oriented form used to fill the
// tableau. Rows keep their senses; the right-hand sides may be negative.
struct Reduced {
  std::size_t n = 0;
  std::vector<std::size_t> col_orig;
  std::vector<double> col_scale; // x_orig = col_scale * x_scaled
  std::vector<std::size_t> row_orig; // npos for bound rows
  std::vector<std::size_t> row_bound_col; // reduced col for bound rows
  std::vector<double> row_scale;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  std::vector<RowSense> sense;
  std::vector<double> b;
  std::vector<double> c;
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

double pow2_round(double x) {
  return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(x))));
}

bool presolve(const LpProblem &p, const LpSolverConfig &cfg, Reduced &r,
              std::string &why) {
  const std::size_t ncols = p.num_cols();
  std::vector<std::size_t> col_new(ncols, npos);
  for (std::size_t j = 0; j < ncols; ++j) {
    if (p.upper[j] < 0.0) {
      why = "column with negative upper bound";
      return false;
    }
    if (p.upper[j] == 0.0)
      continue;
    col_new[j] = r.col_orig.size();
    r.col_orig.push_back(j);
    r.c.push_back(p.cost[j]);
  }
  r.n = r.col_orig.size();

  std::vector<std::map<std::size_t, double>> acc(p.num_rows());
  for (const Triplet &t : p.entries) {
    if (t.row >= p.num_rows() || t.col >= ncols)
      throw std::out_of_range("LP entry outside the problem dimensions");
    if (col_new[t.col] == npos || t.value == 0.0)
      continue;
    acc[t.row][col_new[t.col]] += t.value;
  }

  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    RowSense s = p.senses[i];
    double b = p.rhs[i];
    if ((s == RowSense::LessEqual && b == kInf) ||
        (s == RowSense::GreaterEqual && b == -kInf))
      continue;
    if (!std::isfinite(b)) {
      why = "row " + std::to_string(i) + " has an unsatisfiable infinite rhs";
      return false;
    }
    std::vector<std::pair<std::size_t, double>> row;
    for (auto [j, v] : acc[i])
      if (v != 0.0)
        row.emplace_back(j, v);
    if (row.empty()) {
      bool ok = (s == RowSense::LessEqual && 0.0 <= b + cfg.feasibility_tol) ||
                (s == RowSense::GreaterEqual && 0.0 >= b - cfg.feasibility_tol) ||
                (s == RowSense::Equal && std::abs(b) <= cfg.feasibility_tol);
      if (!ok) {
        why = "empty row " + std::to_string(i) + " is violated";
        return false;
      }
      continue;
    }
    r.rows.push_back(std::move(row));
    r.sense.push_back(s);
    r.b.push_back(b);
    r.row_orig.push_back(i);
    r.row_bound_col.push_back(npos);
  }
  for (std::size_t jn = 0; jn < r.n; ++jn) {
    double ub = p.upper[r.col_orig[jn]];
    if (std::isfinite(ub)) {
      r.rows.push_back({{jn, 1.0}});
      r.sense.push_back(RowSense::LessEqual);
      r.b.push_back(ub);
      r.row_orig.push_back(npos);
      r.row_bound_col.push_back(jn);
    }
  }

  const std::size_t m = r.rows.size();
  r.row_scale.assign(m, 1.0);
  r.col_scale.assign(r.n, 1.0);
  if (cfg.scale && m > 0 && r.n > 0) {
    for (int pass = 0; pass < 6; ++pass) {
      for (std::size_t i = 0; i < m; ++i) {
        double lo = kInf, hi = 0.0;
        for (auto [j, v] : r.rows[i]) {
          double a = std::abs(v) * r.row_scale[i] * r.col_scale[j];
          lo = std::min(lo, a);
          hi = std::max(hi, a);
        }
        r.row_scale[i] *= pow2_round(1.0 / std::sqrt(lo * hi));
      }
      std::vector<double> lo(r.n, kInf), hi(r.n, 0.0);
      for (std::size_t i = 0; i < m; ++i)
        for (auto [j, v] : r.rows[i]) {
          double a = std::abs(v) * r.row_scale[i] * r.col_scale[j];
          lo[j] = std::min(lo[j], a);
          hi[j] = std::max(hi[j], a);
        }
      for (std::size_t j = 0; j < r.n; ++j)
        if (hi[j] > 0.0)
          r.col_scale[j] *= pow2_round(1.0 / std::sqrt(lo[j] * hi[j]));
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (auto &[j, v] : r.rows[i])
        v *= r.row_scale[i] * r.col_scale[j];
      r.b[i] *= r.row_scale[i];
    }
    for (std::size_t j = 0; j < r.n; ++j)
      r.c[j] *= r.col_scale[j];
  }
  return true;
}

// Dense tableau with rows of standard-form columns:
// [structural | slack/surplus | artificial | rhs].
class Tableau {
public:
  Tableau(const Reduced &r, const LpSolverConfig &cfg) : cfg_(cfg) {
    m_ = r.rows.size();
    n_ = r.n;
    flip_.assign(m_, 1.0);
    slack_of_.assign(m_, npos);
    art_of_.assign(m_, npos);
    std::vector<RowSense> sense = r.sense;
    for (std::size_t i = 0; i < m_; ++i) {
      if (r.b[i] < 0.0) {
        flip_[i] = -1.0;
        if (sense[i] == RowSense::LessEqual)
          sense[i] = RowSense::GreaterEqual;
        else if (sense[i] == RowSense::GreaterEqual)
          sense[i] = RowSense::LessEqual;
      }
    }
    std::size_t next = n_;
    for (std::size_t i = 0; i < m_; ++i)
      if (sense[i] != RowSense::Equal)
        slack_of_[i] = next++;
    art_begin_ = next;
    for (std::size_t i = 0; i < m_; ++i)
      if (sense[i] != RowSense::LessEqual)
        art_of_[i] = next++;
    cols_ = next;
    w_ = cols_ + 1;
    t_.assign(m_ * w_, 0.0);
    obj_.assign(w_, 0.0);
    basis_.assign(m_, npos);
    std_cols_.assign(cols_, {});
    for (std::size_t i = 0; i < m_; ++i) {
      double *row = &t_[i * w_];
      for (auto [j, v] : r.rows[i]) {
        row[j] = flip_[i] * v;
        std_cols_[j].emplace_back(i, flip_[i] * v);
      }
      row[cols_] = flip_[i] * r.b[i];
      if (slack_of_[i] != npos) {
        double s = sense[i] == RowSense::LessEqual ? 1.0 : -1.0;
        row[slack_of_[i]] = s;
        std_cols_[slack_of_[i]].emplace_back(i, s);
      }
      if (art_of_[i] != npos) {
        row[art_of_[i]] = 1.0;
        std_cols_[art_of_[i]].emplace_back(i, 1.0);
        basis_[i] = art_of_[i];
      } else {
        basis_[i] = slack_of_[i];
      }
    }
    cost_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < n_; ++j)
      cost_[j] = r.c[j];
    b_std_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i)
      b_std_[i] = t_[i * w_ + cols_];
  }

  std::size_t iterations() const { return iterations_; }

  // Returns the phase-one infeasibility (sum of artificials).
  LpStatus phase_one(double &infeasibility, std::size_t max_iter) {
    std::fill(obj_.begin(), obj_.end(), 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (art_of_[i] == npos)
        continue;
      const double *row = &t_[i * w_];
      for (std::size_t j = 0; j < w_; ++j)
        obj_[j] -= row[j];
    }
    for (std::size_t i = 0; i < m_; ++i)
      if (art_of_[i] != npos)
        obj_[art_of_[i]] = 0.0;
    LpStatus st = iterate(max_iter);
    infeasibility = -obj_[cols_];
    return st;
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < art_begin_)
        continue;
      const double *row = &t_[i * w_];
      std::size_t best = npos;
      double best_abs = 1e-7;
      for (std::size_t j = 0; j < art_begin_; ++j)
        if (std::abs(row[j]) > best_abs) {
          best_abs = std::abs(row[j]);
          best = j;
        }
      if (best != npos)
        pivot(i, best);
    }
  }

  LpStatus phase_two(std::size_t max_iter) {
    std::fill(obj_.begin(), obj_.end(), 0.0);
    for (std::size_t j = 0; j < cols_; ++j)
      obj_[j] = cost_[j];
    for (std::size_t i = 0; i < m_; ++i) {
      double cb = cost_[basis_[i]];
      if (cb == 0.0)
        continue;
      const double *row = &t_[i * w_];
      for (std::size_t j = 0; j < w_; ++j)
        if (row[j] != 0.0)
          obj_[j] -= cb * row[j];
    }
    for (std::size_t i = 0; i < m_; ++i)
      obj_[basis_[i]] = 0.0;
    return iterate(max_iter);
  }

  // Basic solution of the standard-form problem, refined by refactoring the
  // final basis. Also yields duals (standard form) and the reduced costs.
  void extract(std::vector<double> &x_std, std::vector<double> &y_std,
               double &dual_infeasibility) const {
    x_std.assign(cols_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      x_std[basis_[i]] = t_[i * w_ + cols_];
    y_std.assign(m_, 0.0);
    dual_infeasibility = 0.0;
    if (m_ == 0) {
      for (std::size_t j = 0; j < art_begin_; ++j)
        dual_infeasibility = std::max(dual_infeasibility, -cost_[j]);
      return;
    }
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_),
                                              static_cast<Eigen::Index>(m_));
    Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
    for (std::size_t k = 0; k < m_; ++k) {
      for (auto [i, v] : std_cols_[basis_[k]])
        B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v;
      cb(static_cast<Eigen::Index>(k)) = cost_[basis_[k]];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(
        b_std_.data(), static_cast<Eigen::Index>(m_));
    Eigen::VectorXd xb = lu.solve(b);
    bool finite = xb.allFinite();
    double worst = finite ? xb.minCoeff() : -kInf;
    if (finite && worst >= -10.0 * cfg_.feasibility_tol) {
      for (std::size_t k = 0; k < m_; ++k)
        x_std[basis_[k]] = std::max(0.0, xb(static_cast<Eigen::Index>(k)));
    } else {
      for (std::size_t k = 0; k < m_; ++k)
        x_std[basis_[k]] = std::max(0.0, x_std[basis_[k]]);
    }
    Eigen::VectorXd y = lu.transpose().solve(cb);
    if (!y.allFinite()) {
      // fall back on tableau reduced costs
      dual_infeasibility = 0.0;
      for (std::size_t j = 0; j < art_begin_; ++j)
        dual_infeasibility = std::max(dual_infeasibility, -obj_[j]);
      return;
    }
    for (std::size_t i = 0; i < m_; ++i)
      y_std[i] = y(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < art_begin_; ++j) {
      double d = cost_[j];
      for (auto [i, v] : std_cols_[j])
        d -= y_std[i] * v;
      dual_infeasibility = std::max(dual_infeasibility, -d);
    }
  }

  double flip(std::size_t i) const { return flip_[i]; }
  std::size_t rows() const { return m_; }

private:
  std::size_t choose_entering(bool bland) const {
    std::size_t q = npos;
    double best = -cfg_.optimality_tol;
    for (std::size_t j = 0; j < art_begin_; ++j) {
      double d = obj_[j];
      if (d < best) {
        q = j;
        if (bland)
          return q;
        best = d;
      }
    }
    return q;
  }

  std::size_t choose_leaving(std::size_t q, bool bland, double &theta) const {
    constexpr double piv_tol = 1e-9;
    double bound = kInf;
    for (std::size_t i = 0; i < m_; ++i) {
      double a = t_[i * w_ + q];
      if (a > piv_tol)
        bound = std::min(bound,
                         (t_[i * w_ + cols_] + cfg_.feasibility_tol) / a);
    }
    if (bound == kInf)
      return npos;
    std::size_t p = npos;
    double best_a = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      double a = t_[i * w_ + q];
      if (a <= piv_tol)
        continue;
      double ratio = t_[i * w_ + cols_] / a;
      if (ratio > bound)
        continue;
      if (bland) {
        if (p == npos || basis_[i] < basis_[p])
          p = i;
      } else if (a > best_a) {
        best_a = a;
        p = i;
      }
    }
    theta = std::max(0.0, t_[p * w_ + cols_] / t_[p * w_ + q]);
    return p;
  }

  void pivot(std::size_t p, std::size_t q) {
    double *prow = &t_[p * w_];
    const double piv = prow[q];
    nz_.clear();
    for (std::size_t j = 0; j < w_; ++j) {
      if (prow[j] != 0.0) {
        prow[j] /= piv;
        nz_.push_back(j);
      }
    }
    prow[q] = 1.0;
    auto eliminate = [&](double *row) {
      const double f = row[q];
      if (f == 0.0)
        return;
      for (std::size_t j : nz_) {
        double v = row[j] - f * prow[j];
        row[j] = std::abs(v) < 1e-14 ? 0.0 : v;
      }
      row[q] = 0.0;
    };
    for (std::size_t i = 0; i < m_; ++i)
      if (i != p)
        eliminate(&t_[i * w_]);
    eliminate(obj_.data());
    basis_[p] = q;
    ++iterations_;
  }

  LpStatus iterate(std::size_t max_iter) {
    std::size_t degenerate_run = 0;
    bool bland = false;
    while (true) {
      if (iterations_ >= max_iter)
        return LpStatus::IterationLimit;
      std::size_t q = choose_entering(bland);
      if (q == npos)
        return LpStatus::Optimal;
      double theta = 0.0;
      std::size_t p = choose_leaving(q, bland, theta);
      if (p == npos)
        return LpStatus::Unbounded;
      pivot(p, q);
      if (theta <= 1e-12) {
        if (++degenerate_run > 60)
          bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  const LpSolverConfig &cfg_;
  std::size_t m_ = 0, n_ = 0, cols_ = 0, w_ = 0, art_begin_ = 0;
  std::vector<double> t_, obj_, cost_, flip_, b_std_;
  std::vector<std::size_t> basis_, slack_of_, art_of_, nz_;
  std::vector<std::vector<std::pair<std::size_t, double>>> std_cols_;
  std::size_t iterations_ = 0;
};

} // namespace

std::size_t LpProblem::add_col(double c, double ub) {
  cost.push_back(c);
  upper.push_back(ub);
  return cost.size() - 1;
}

std::size_t LpProblem::add_row(RowSense sense, double b) {
  senses.push_back(sense);
  rhs.push_back(b);
  return rhs.size() - 1;
}

void LpProblem::add_entry(std::size_t row, std::size_t col, double value) {
  entries.push_back({row, col, value});
}

const char *to_string(LpStatus status) {
  switch (status) {
  case LpStatus::Optimal:
    return "optimal";
  case LpStatus::Infeasible:
    return "infeasible";
  case LpStatus::Unbounded:
    return "unbounded";
  case LpStatus::ToleranceFailure:
    return "tolerance-failure";
  case LpStatus::IterationLimit:
    return "iteration-limit";
  }
  return "unknown";
}

double primal_residual(const LpProblem &problem, const std::vector<double> &x) {
  std::vector<double> act(problem.num_rows(), 0.0);
  for (const Triplet &t : problem.entries)
    act[t.row] += t.value * x[t.col];
  double worst = 0.0;
  for (std::size_t i = 0; i < problem.num_rows(); ++i) {
    double b = problem.rhs[i];
    double v = 0.0;
    switch (problem.senses[i]) {
    case RowSense::LessEqual:
      v = b == kInf ? 0.0 : act[i] - b;
      break;
    case RowSense::GreaterEqual:
      v = b == -kInf ? 0.0 : b - act[i];
      break;
    case RowSense::Equal:
      v = std::abs(act[i] - b);
      break;
    }
    worst = std::max(worst, v);
  }
  for (std::size_t j = 0; j < problem.num_cols(); ++j) {
    worst = std::max(worst, -x[j]);
    if (std::isfinite(problem.upper[j]))
      worst = std::max(worst, x[j] - problem.upper[j]);
  }
  return worst;
}

LpResult DenseSimplexSolver::solve(const LpProblem &problem,
                                   const LpSolverConfig &config) const {
  if (problem.upper.size() != problem.cost.size() ||
      problem.senses.size() != problem.rhs.size())
    throw std::invalid_argument("inconsistent LP dimensions");
  for (double c : problem.cost)
    if (!std::isfinite(c))
      throw std::invalid_argument("LP objective has a non-finite coefficient");
  for (const Triplet &t : problem.entries)
    if (!std::isfinite(t.value))
      throw std::invalid_argument("LP matrix has a non-finite coefficient");

  LpResult res;
  res.x.assign(problem.num_cols(), 0.0);
  res.duals.assign(problem.num_rows(), 0.0);

  Reduced red;
  std::string why;
  if (!presolve(problem, config, red, why)) {
    res.status = LpStatus::Infeasible;
    res.message = why;
    return res;
  }

  Tableau tab(red, config);
  const std::size_t max_iter =
      config.max_iterations ? config.max_iterations
                            : 50 * (red.rows.size() + red.n) + 10000;

  double infeas = 0.0;
  LpStatus st = tab.phase_one(infeas, max_iter);
  if (st == LpStatus::IterationLimit) {
    res.status = st;
    res.iterations = tab.iterations();
    res.message = "iteration limit in phase one";
    return res;
  }
  double bnorm = 1.0;
  for (double b : red.b)
    bnorm = std::max(bnorm, std::abs(b));
  if (infeas > 1e-7 * bnorm) {
    res.status = LpStatus::Infeasible;
    res.iterations = tab.iterations();
    res.message = "phase one ended with infeasibility " + std::to_string(infeas);
    return res;
  }
  tab.drive_out_artificials();
  st = tab.phase_two(max_iter);
  res.iterations = tab.iterations();
  if (st == LpStatus::Unbounded || st == LpStatus::IterationLimit) {
    res.status = st;
    res.message = st == LpStatus::Unbounded ? "objective unbounded below"
                                            : "iteration limit in phase two";
    return res;
  }

  std::vector<double> x_std, y_std;
  double dual_inf = 0.0;
  tab.extract(x_std, y_std, dual_inf);

  for (std::size_t j = 0; j < red.n; ++j)
    res.x[red.col_orig[j]] = x_std[j] * red.col_scale[j];

  // Duals of the original rows: undo flips and row scaling.
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    double u = y_std[i] * tab.flip(i) * red.row_scale[i];
    if (red.row_orig[i] != npos) {
      res.duals[red.row_orig[i]] = u;
      dual_obj += u * problem.rhs[red.row_orig[i]];
    } else {
      dual_obj += u * problem.upper[red.col_orig[red.row_bound_col[i]]];
    }
  }

  double primal_obj = 0.0;
  for (std::size_t j = 0; j < problem.num_cols(); ++j)
    primal_obj += problem.cost[j] * res.x[j];

  res.objective = primal_obj;
  res.dual_objective = dual_obj;
  res.max_primal_residual = primal_residual(problem, res.x);
  res.max_dual_infeasibility = dual_inf;
  res.relative_gap =
      std::abs(primal_obj - dual_obj) / std::max(1.0, std::abs(primal_obj));

  double rhs_norm = 1.0;
  for (std::size_t i = 0; i < problem.num_rows(); ++i)
    if (std::isfinite(problem.rhs[i]))
      rhs_norm = std::max(rhs_norm, std::abs(problem.rhs[i]));
  const bool primal_ok = res.max_primal_residual <= 1e-7 * rhs_norm;
  const bool dual_ok = dual_inf <= 1e-7;
  const bool gap_ok = res.relative_gap <= config.rel_tol;
  if (primal_ok && dual_ok && gap_ok) {
    res.status = LpStatus::Optimal;
  } else {
    res.status = LpStatus::ToleranceFailure;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "primal residual %.3g, dual infeasibility %.3g, gap %.3g",
                  res.max_primal_residual, dual_inf, res.relative_gap);
    res.message = buf;
  }
  return res;
}

namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

void write_free_mps(std::ostream &os, const LpProblem &problem,
                    const std::vector<std::string> &row_names,
                    const std::vector<std::string> &col_names,
                    const std::string &model_name) {
  auto rname = [&](std::size_t i) {
    return row_names.empty() ? "R" + std::to_string(i) : row_names[i];
  };
  auto cname = [&](std::size_t j) {
    return col_names.empty() ? "C" + std::to_string(j) : col_names[j];
  };
  os << "NAME " << model_name << "\nROWS\n N COST\n";
  for (std::size_t i = 0; i < problem.num_rows(); ++i) {
    char s = problem.senses[i] == RowSense::LessEqual      ? 'L'
             : problem.senses[i] == RowSense::GreaterEqual ? 'G'
                                                           : 'E';
    if (!std::isfinite(problem.rhs[i]))
      s = 'N'; // never binding
    os << ' ' << s << ' ' << rname(i) << '\n';
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> cols(
      problem.num_cols());
  for (const Triplet &t : problem.entries)
    cols[t.col].emplace_back(t.row, t.value);
  os << "COLUMNS\n";
  for (std::size_t j = 0; j < problem.num_cols(); ++j) {
    if (problem.cost[j] != 0.0 || cols[j].empty())
      os << ' ' << cname(j) << " COST " << fmt_num(problem.cost[j]) << '\n';
    for (auto [i, v] : cols[j])
      os << ' ' << cname(j) << ' ' << rname(i) << ' ' << fmt_num(v) << '\n';
  }
  os << "RHS\n";
  for (std::size_t i = 0; i < problem.num_rows(); ++i) {
    double b = problem.rhs[i];
    if (b != 0.0 && std::isfinite(b))
      os << " RHS " << rname(i) << ' ' << fmt_num(b) << '\n';
  }
  os << "BOUNDS\n";
  for (std::size_t j = 0; j < problem.num_cols(); ++j) {
    double ub = problem.upper[j];
    if (ub == 0.0)
      os << " FX BND " << cname(j) << " 0\n";
    else if (std::isfinite(ub))
      os << " UP BND " << cname(j) << ' ' << fmt_num(ub) << '\n';
  }
  os << "ENDATA\n";
}

} // namespace mrsched
