#include "mrsched/cp_fixed_order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "mrsched/list_dispatch.hpp"

namespace mrsched {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

} // namespace

std::vector<std::size_t> JobOrder::ranks(const Instance &inst) const {
  if (ids.size() != inst.jobs.size())
    throw ParameterError("job order must list every job exactly once");
  std::map<int, std::size_t> pos;
  for (std::size_t k = 0; k < ids.size(); ++k)
    if (!pos.emplace(ids[k], k).second)
      throw ParameterError("job order repeats job " + std::to_string(ids[k]));
  std::vector<std::size_t> rank(inst.jobs.size());
  for (std::size_t j = 0; j < inst.jobs.size(); ++j) {
    auto it = pos.find(inst.jobs[j].id);
    if (it == pos.end())
      throw ParameterError("job order misses job " +
                           std::to_string(inst.jobs[j].id));
    rank[j] = it->second;
  }
  return rank;
}

bool JobOrder::precedes(int a, int b) const {
  auto ia = std::find(ids.begin(), ids.end(), a);
  auto ib = std::find(ids.begin(), ids.end(), b);
  if (ia == ids.end() || ib == ids.end())
    throw ParameterError("job not in order");
  return ia < ib;
}

namespace {

// Completion recursion with the bookkeeping needed to recover, for every job,
// the affine piece r + sum p that attains C_j.
class Evaluator {
public:
  Evaluator(const Instance &inst, const JobOrder &order)
      : inst_(inst), table_(inst) {
    std::vector<std::size_t> rank = order.ranks(inst);
    std::vector<std::size_t> jobs(inst.jobs.size());
    std::iota(jobs.begin(), jobs.end(), 0);
    std::sort(jobs.begin(), jobs.end(),
              [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
    const std::size_t n = table_.size();
    prev_.assign(n, npos);
    maps_.resize(inst.jobs.size());
    std::vector<std::size_t> last(static_cast<std::size_t>(inst.num_processors) + 1,
                                  npos);
    for (std::size_t j : jobs) {
      for (TaskKind kind : {TaskKind::Map, TaskKind::Reduce}) {
        for (std::size_t f : table_.tasks_of_job(j)) {
          const Task &t = table_.task(f);
          if (t.kind != kind)
            continue;
          seq_.push_back(f);
          if (!(t.volume > 0.0))
            continue;
          if (kind == TaskKind::Map)
            maps_[j].push_back(f);
          std::size_t proc = static_cast<std::size_t>(t.processor);
          prev_[f] = last.at(proc);
          last[proc] = f;
        }
      }
    }
    prefix_.assign(n, 0.0);
    comp_.assign(n, 0.0);
    uses_prev_.assign(n, false);
    via_.assign(n, npos);
    job_arg_.assign(inst.jobs.size(), npos);
  }

  const TaskTable &table() const { return table_; }

  Completions run(const std::vector<double> &p) {
    Completions out;
    out.task.assign(table_.size(), 0.0);
    out.job.assign(inst_.jobs.size(), 0.0);
    for (std::size_t f : seq_) {
      const Task &t = table_.task(f);
      const double r = table_.job_of(f).release;
      const std::size_t j = table_.ref(f).job;
      via_[f] = npos;
      if (t.volume > 0.0) {
        double base = r;
        uses_prev_[f] = prev_[f] != npos && prefix_[prev_[f]] > r;
        if (uses_prev_[f])
          base = prefix_[prev_[f]];
        prefix_[f] = base + p[f];
        comp_[f] = prefix_[f];
      } else {
        comp_[f] = r;
      }
      if (t.kind == TaskKind::Reduce) {
        const double own = t.volume > 0.0 ? p[f] : 0.0;
        for (std::size_t m : maps_[j]) {
          if (comp_[m] + own > comp_[f]) {
            comp_[f] = comp_[m] + own;
            via_[f] = m;
          }
        }
      }
      out.task[f] = comp_[f];
    }
    for (std::size_t j = 0; j < inst_.jobs.size(); ++j) {
      std::size_t arg = npos;
      for (std::size_t f : table_.tasks_of_job(j))
        if (arg == npos || comp_[f] > comp_[arg])
          arg = f;
      job_arg_[j] = arg;
      out.job[j] = arg == npos ? inst_.jobs[j].release : comp_[arg];
    }
    return out;
  }

  // The piece r + sum_{k in tasks} p_k attaining C_j at the last evaluated
  // point; tasks are flat indices of positive-volume tasks.
  void job_path(std::size_t j, double &constant,
                std::vector<std::size_t> &tasks) const {
    tasks.clear();
    std::size_t f = job_arg_[j];
    if (f == npos) {
      constant = inst_.jobs[j].release;
      return;
    }
    if (via_[f] != npos) {
      if (table_.task(f).volume > 0.0)
        tasks.push_back(f);
      f = via_[f];
    } else if (!(table_.task(f).volume > 0.0)) {
      constant = table_.job_of(f).release;
      return;
    }
    while (true) {
      tasks.push_back(f);
      if (!uses_prev_[f]) {
        constant = table_.job_of(f).release;
        break;
      }
      f = prev_[f];
    }
    std::sort(tasks.begin(), tasks.end());
  }

private:
  const Instance &inst_;
  TaskTable table_;
  std::vector<std::size_t> seq_;
  std::vector<std::size_t> prev_;
  std::vector<std::vector<std::size_t>> maps_;
  std::vector<double> prefix_, comp_;
  std::vector<bool> uses_prev_;
  std::vector<std::size_t> via_;
  std::vector<std::size_t> job_arg_;
};

double weighted_sum(const Instance &inst, const Completions &c) {
  double s = 0.0;
  for (std::size_t j = 0; j < inst.jobs.size(); ++j)
    s += inst.jobs[j].weight * c.job[j];
  return s;
}

double energy_of(const Instance &inst, const TaskTable &table,
                 const std::vector<double> &p) {
  double e = 0.0;
  for (std::size_t f = 0; f < table.size(); ++f)
    if (table.task(f).volume > 0.0)
      e += task_energy(table.task(f).volume, p[f], inst.beta);
  return e;
}

} // namespace

Completions evaluate_completions(const Instance &inst, const JobOrder &order,
                                 const std::vector<double> &p) {
  Evaluator ev(inst, order);
  if (p.size() != ev.table().size())
    throw ParameterError("one processing time per task expected");
  return ev.run(p);
}

std::vector<double> equal_energy_split(const Instance &inst) {
  TaskTable table(inst);
  std::size_t active = 0;
  for (std::size_t f = 0; f < table.size(); ++f)
    active += table.task(f).volume > 0.0;
  std::vector<double> p(table.size(), 0.0);
  if (active == 0)
    return p;
  const double share = inst.energy_budget / static_cast<double>(active);
  for (std::size_t f = 0; f < table.size(); ++f) {
    double v = table.task(f).volume;
    if (v > 0.0)
      p[f] = std::pow(std::pow(v, inst.beta) / share, 1.0 / (inst.beta - 1.0));
  }
  return p;
}

namespace {

// One affine lower bound z_job >= constant + sum of p over `vars` (indices
// into the positive-volume task list).
struct Cut {
  std::size_t job = 0; // index into the z variables
  double constant = 0.0;
  std::vector<std::size_t> vars;
};

// min sum w z  s.t. the cuts and sum v^b p^(1-b) <= E, over x = (p, z).
struct Restricted {
  std::vector<double> vol;
  std::vector<double> w;
  double beta = 2.0, E = 1.0;
  std::vector<Cut> cuts;

  std::size_t K() const { return vol.size(); }
  std::size_t dim() const { return vol.size() + w.size(); }

  double energy(const Eigen::VectorXd &x) const {
    double g = 0.0;
    for (std::size_t k = 0; k < K(); ++k)
      g += std::pow(vol[k], beta) * std::pow(x[k], 1.0 - beta);
    return g;
  }
  double slack(const Cut &c, const Eigen::VectorXd &x) const {
    double s = x[K() + c.job] - c.constant;
    for (std::size_t k : c.vars)
      s -= x[k];
    return s;
  }
  double objective(const Eigen::VectorXd &x) const {
    double f = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j)
      f += w[j] * x[K() + j];
    return f;
  }
  // barrier function t f - sum log(slacks); +inf outside the domain
  double phi(const Eigen::VectorXd &x, double t) const {
    for (std::size_t k = 0; k < K(); ++k)
      if (!(x[k] > 0.0))
        return std::numeric_limits<double>::infinity();
    const double G = E - energy(x);
    if (!(G > 0.0))
      return std::numeric_limits<double>::infinity();
    double v = t * objective(x) - std::log(G);
    for (const Cut &c : cuts) {
      const double sl = slack(c, x);
      if (!(sl > 0.0))
        return std::numeric_limits<double>::infinity();
      v -= std::log(sl);
    }
    return v;
  }
};

// Barrier method from a strictly feasible x. Returns the duality-gap bound
// m/t of the final center; `steps` counts Newton steps.
double barrier_solve(const Restricted &R, Eigen::VectorXd &x, double eps,
                     std::size_t max_steps, std::size_t &steps) {
  const std::size_t D = R.dim(), K = R.K();
  const double m = static_cast<double>(R.cuts.size() + 1);
  const double b = R.beta;
  double t = m / std::max(1e-12, std::abs(R.objective(x)));
  Eigen::VectorXd grad(D), dx(D), trial(D);
  Eigen::MatrixXd H(D, D);
  while (true) {
    for (int newton = 0; newton < 200 && steps < max_steps; ++newton, ++steps) {
      grad.setZero();
      H.setZero();
      for (std::size_t j = 0; j < R.w.size(); ++j)
        grad[K + j] = t * R.w[j];
      const double G = R.E - R.energy(x);
      // -log(E - g(p)): gradient g'/G, Hessian g''/G + g' g'^T / G^2
      Eigen::VectorXd gp = Eigen::VectorXd::Zero(D);
      for (std::size_t k = 0; k < K; ++k) {
        const double vb = std::pow(R.vol[k], b);
        gp[k] = (1.0 - b) * vb * std::pow(x[k], -b);
        H(k, k) += b * (b - 1.0) * vb * std::pow(x[k], -b - 1.0) / G;
      }
      grad += gp / G;
      H.topLeftCorner(K, K) += gp.head(K) * gp.head(K).transpose() / (G * G);
      for (const Cut &c : R.cuts) {
        const double sl = R.slack(c, x);
        const double inv = 1.0 / sl, inv2 = inv * inv;
        const std::size_t zj = K + c.job;
        grad[zj] -= inv;
        H(zj, zj) += inv2;
        for (std::size_t k : c.vars) {
          grad[k] += inv;
          H(k, zj) -= inv2;
          H(zj, k) -= inv2;
          for (std::size_t l : c.vars)
            H(k, l) += inv2;
        }
      }
      Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
      dx = ldlt.solve(-grad);
      const double dec = -grad.dot(dx);
      if (!std::isfinite(dec) || dec / 2.0 <= 1e-12)
        break;
      const double base = R.phi(x, t);
      double step = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 80; ++ls, step *= 0.5) {
        trial = x + step * dx;
        const double val = R.phi(trial, t);
        if (val <= base - 0.25 * step * dec) {
          x = trial;
          moved = true;
          break;
        }
      }
      if (!moved)
        break;
    }
    if (m / t <= eps || steps >= max_steps)
      return m / t;
    t *= 20.0;
  }
}

} // namespace

// Cutting planes over completion-time pieces. Each C_j(p) is the maximum of
// affine pieces r + sum of p along a chain of tasks. The restricted program
// keeps a subset of pieces, so its optimum bounds the true optimum from
// below; the piece attaining C_j at the restricted solution is added until
// the true objective at the (rescaled) solution meets that bound.
CpSolution solve_cp(const Instance &inst, const JobOrder &order,
                    const CpConfig &cfg) {
  if (!(inst.energy_budget > 0.0) || !(inst.beta > 1.0))
    throw ParameterError("solve_cp needs E > 0 and beta > 1");
  Evaluator ev(inst, order);
  const TaskTable &table = ev.table();
  const std::size_t n = table.size();
  const double b = inst.beta, E = inst.energy_budget;

  CpSolution sol;
  sol.p.assign(n, 0.0);

  Restricted R;
  R.beta = b;
  R.E = E;
  std::vector<std::size_t> active, var_of(n, npos);
  for (std::size_t f = 0; f < n; ++f)
    if (table.task(f).volume > 0.0) {
      var_of[f] = active.size();
      active.push_back(f);
      R.vol.push_back(table.task(f).volume);
    }
  // z variables exist for jobs owning positive-volume tasks
  std::vector<std::size_t> z_of(inst.jobs.size(), npos);
  for (std::size_t j = 0; j < inst.jobs.size(); ++j)
    for (std::size_t f : table.tasks_of_job(j))
      if (table.task(f).volume > 0.0 && z_of[j] == npos) {
        z_of[j] = R.w.size();
        R.w.push_back(inst.jobs[j].weight);
      }

  if (active.empty()) {
    sol.completions = ev.run(sol.p);
    sol.objective = sol.lower_bound = weighted_sum(inst, sol.completions);
    sol.converged = true;
    sol.message = "no positive-volume task";
    return sol;
  }

  const std::size_t K = active.size();
  auto add_cut = [&](std::size_t j, double constant,
                     const std::vector<std::size_t> &tasks) {
    Cut c;
    c.job = z_of[j];
    c.constant = constant;
    for (std::size_t f : tasks)
      c.vars.push_back(var_of[f]);
    for (const Cut &o : R.cuts)
      if (o.job == c.job && o.vars == c.vars && o.constant >= c.constant)
        return false;
    R.cuts.push_back(std::move(c));
    return true;
  };
  // a job's completion is at least its release plus any one of its tasks
  for (std::size_t j = 0; j < inst.jobs.size(); ++j)
    for (std::size_t f : table.tasks_of_job(j))
      if (table.task(f).volume > 0.0)
        add_cut(j, inst.jobs[j].release, {f});

  std::vector<double> p = equal_energy_split(inst);
  Eigen::VectorXd x(R.dim());
  // strictly inside the energy constraint: half the budget
  const double inflate = std::pow(2.0, 1.0 / (b - 1.0));
  for (std::size_t k = 0; k < K; ++k)
    x[k] = p[active[k]] * inflate;

  auto add_active_pieces = [&](const Eigen::VectorXd &at) {
    for (std::size_t k = 0; k < K; ++k)
      p[active[k]] = at[k];
    ev.run(p);
    bool added = false;
    double constant;
    std::vector<std::size_t> tasks;
    for (std::size_t j = 0; j < inst.jobs.size(); ++j) {
      if (z_of[j] == npos)
        continue;
      ev.job_path(j, constant, tasks);
      if (!tasks.empty())
        added = add_cut(j, constant, tasks) || added;
    }
    return added;
  };
  add_active_pieces(x);

  double best_primal = std::numeric_limits<double>::infinity();
  double best_lb = -std::numeric_limits<double>::infinity();
  double fixed_part = 0.0; // jobs without positive-volume tasks
  for (std::size_t j = 0; j < inst.jobs.size(); ++j)
    if (z_of[j] == npos)
      fixed_part += inst.jobs[j].weight * inst.jobs[j].release;

  std::size_t steps = 0, rounds = 0;
  for (; rounds < cfg.max_rounds && steps < cfg.max_iterations; ++rounds) {
    // interior start: z above every cut
    for (std::size_t j = 0; j < R.w.size(); ++j)
      x[K + j] = -std::numeric_limits<double>::infinity();
    for (const Cut &c : R.cuts) {
      double val = c.constant;
      for (std::size_t k : c.vars)
        val += x[k];
      x[K + c.job] = std::max(x[K + c.job], val);
    }
    for (std::size_t j = 0; j < R.w.size(); ++j)
      x[K + j] += 1e-2 * std::max(1.0, std::abs(x[K + j]));

    const double scale = std::max(1.0, R.objective(x));
    const double bound =
        barrier_solve(R, x, 1e-2 * cfg.tol * scale, cfg.max_iterations, steps);
    best_lb = std::max(best_lb, fixed_part + R.objective(x) - bound);

    // rescale p to spend exactly E; completions only shrink
    std::vector<double> q(n, 0.0);
    Eigen::VectorXd px = x.head(K);
    const double shrink = std::pow(R.energy(x) / E, 1.0 / (b - 1.0));
    for (std::size_t k = 0; k < K; ++k)
      q[active[k]] = px[k] * shrink;
    Completions comp = ev.run(q);
    const double primal = weighted_sum(inst, comp);
    if (primal < best_primal) {
      best_primal = primal;
      sol.p = q;
      sol.completions = comp;
    }
    const double gap = (best_primal - best_lb) / std::max(1.0, std::abs(best_primal));
    if (gap <= cfg.tol) {
      sol.converged = true;
      sol.message = "gap below tolerance";
      ++rounds;
      break;
    }
    if (!add_active_pieces(x)) {
      sol.message = "no new piece; gap stays above tolerance";
      ++rounds;
      break;
    }
    // back away from the energy boundary for the next interior start
    for (std::size_t k = 0; k < K; ++k)
      x[k] *= 1.1;
  }
  if (!sol.converged && sol.message.empty())
    sol.message = "iteration limit reached; returning best iterate";
  sol.iterations = steps;
  sol.rounds = rounds;
  sol.objective = best_primal;
  sol.lower_bound = std::min(best_lb, best_primal);
  sol.gap = (best_primal - sol.lower_bound) / std::max(1.0, std::abs(best_primal));
  sol.energy = energy_of(inst, table, sol.p);
  return sol;
}

ChainSolution closed_form_chain(int n, double energy_budget, double beta) {
  if (beta != 2.0)
    throw ParameterError("the closed form holds for beta = 2 only");
  if (n < 1 || !(energy_budget > 0.0))
    throw ParameterError("need n >= 1 and E > 0");
  double total = 0.0;
  for (int i = 1; i <= n; ++i)
    total += std::sqrt(static_cast<double>(i));
  ChainSolution out;
  for (int j = 1; j <= n; ++j)
    out.speeds.push_back(energy_budget * std::sqrt(static_cast<double>(n - j + 1)) /
                         total);
  out.objective = total * total / energy_budget;
  return out;
}

Schedule schedule_from_order(const Instance &inst, const JobOrder &order,
                             const std::vector<double> &p, Dispatch rule) {
  TaskTable table(inst);
  if (p.size() != table.size())
    throw ParameterError("one processing time per task expected");
  std::vector<std::size_t> rank = order.ranks(inst);
  std::vector<std::size_t> jobs(inst.jobs.size());
  std::iota(jobs.begin(), jobs.end(), 0);
  std::sort(jobs.begin(), jobs.end(),
            [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });

  if (rule == Dispatch::List) {
    std::vector<std::vector<std::size_t>> priority(
        static_cast<std::size_t>(inst.num_processors));
    std::vector<double> avail(table.size(), 0.0);
    for (std::size_t j : jobs)
      for (TaskKind kind : {TaskKind::Map, TaskKind::Reduce})
        for (std::size_t f : table.tasks_of_job(j)) {
          const Task &t = table.task(f);
          if (t.kind != kind || !(t.volume > 0.0))
            continue;
          if (!(p[f] > 0.0))
            throw ParameterError("positive-volume task needs a positive time");
          priority[static_cast<std::size_t>(t.processor - 1)].push_back(f);
          avail[f] = inst.jobs[j].release;
        }
    return list_dispatch(inst, priority, avail, p);
  }

  std::vector<double> free_at(static_cast<std::size_t>(inst.num_processors) + 1,
                              0.0);
  std::vector<double> finish(table.size(), 0.0);
  Schedule sched;
  for (std::size_t j : jobs) {
    const double r = inst.jobs[j].release;
    double maps_done = r;
    for (TaskKind kind : {TaskKind::Map, TaskKind::Reduce}) {
      for (std::size_t f : table.tasks_of_job(j)) {
        const Task &t = table.task(f);
        if (t.kind != kind)
          continue;
        double ready = kind == TaskKind::Map ? r : maps_done;
        if (t.volume > 0.0) {
          if (!(p[f] > 0.0))
            throw ParameterError("positive-volume task needs a positive time");
          std::size_t proc = static_cast<std::size_t>(t.processor);
          double start = std::max(ready, free_at.at(proc));
          finish[f] = start + p[f];
          free_at[proc] = finish[f];
          sched.entries.push_back(make_entry(inst, table.ref(f), start, p[f]));
        } else {
          finish[f] = ready;
          sched.entries.push_back(make_entry(inst, table.ref(f), ready, 0.0));
        }
        if (kind == TaskKind::Map)
          maps_done = std::max(maps_done, finish[f]);
      }
    }
  }
  return sched;
}

} // namespace mrsched
