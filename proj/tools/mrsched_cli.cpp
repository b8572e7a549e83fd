// mrsched: command-line front end. Every subcommand writes CSV (or JSON for
// instances). Exit codes: 0 ok, 1 validation failure, 2 certification
// failure, 3 CP not converged, 4 bad parameters, 5 other errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrsched/alpha_scheduler.hpp"
#include "mrsched/cp_fixed_order.hpp"
#include "mrsched/experiment.hpp"
#include "mrsched/generator.hpp"
#include "mrsched/io.hpp"
#include "mrsched/lp_relaxation.hpp"
#include "mrsched/oracle.hpp"
#include "mrsched/order_policies.hpp"
#include "mrsched/ratio_analysis.hpp"

using namespace mrsched;

namespace {

enum Exit { Ok = 0, Invalid = 1, Uncertified = 2, NotConverged = 3, BadInput = 4, Failure = 5 };

// Writes to the file when a path is given, otherwise to stdout.
class Output {
public:
  explicit Output(const std::string &path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_)
        throw ParameterError("cannot write '" + path + "'");
    }
  }
  std::ostream &os() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

nlohmann::json read_json(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParameterError("cannot read '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw ParameterError(path + ": " + e.what());
  }
}

JobOrder load_order(const Instance &inst, const std::string &kind,
                    const std::string &file) {
  if (kind == "fcfs")
    return fcfs_order(inst);
  if (kind == "sr")
    return smith_order(inst);
  if (kind != "file")
    throw ParameterError("order must be fcfs, sr or file");
  if (file.empty())
    throw ParameterError("--order file needs --order-file");
  std::ifstream in(file);
  if (!in)
    throw ParameterError("cannot read '" + file + "'");
  JobOrder order;
  int id;
  while (in >> id)
    order.ids.push_back(id);
  if (!in.eof())
    throw ParameterError(file + ": expected whitespace separated job ids");
  order.ranks(inst); // validates
  return order;
}

Dispatch dispatch_from_string(const std::string &s) {
  if (s == "fixed-order")
    return Dispatch::FixedOrder;
  if (s == "list")
    return Dispatch::List;
  throw ParameterError("dispatch must be fixed-order or list");
}

void print_violations(std::ostream &os, const std::vector<Violation> &v) {
  os << "rule,detail\n";
  for (const Violation &x : v)
    os << x.rule << ",\"" << x.detail << "\"\n";
}

void print_certificate(std::ostream &os, const Certificate &c) {
  os << "check,lhs,rhs,ok\n";
  for (const BoundCheck &b : c.checks)
    os << b.name << ',' << format_double(b.lhs) << ',' << format_double(b.rhs)
       << ',' << (b.ok ? 1 : 0) << '\n';
}

struct GridFlags {
  double epsilon = 0.5;
  double delta = 0.5;
  std::optional<double> lambda;
  std::optional<double> t_max;
  std::optional<double> alpha;

  void add(CLI::App *cmd) {
    cmd->add_option("--epsilon", epsilon, "speed grid ratio - 1")->capture_default_str();
    cmd->add_option("--delta", delta, "time grid ratio - 1")->capture_default_str();
    cmd->add_option("--lambda", lambda, "first time grid point");
    cmd->add_option("--t-max", t_max, "horizon override");
    cmd->add_option("--alpha", alpha, "alpha (default: optimizer of the general ratio)");
  }
  double alpha_for(double beta) const {
    return alpha ? *alpha : optimal_ratio(beta, RatioVariant::General).alpha;
  }
  GridOptions options(double beta) const {
    GridOptions g;
    g.epsilon = epsilon;
    g.delta = delta;
    g.lambda = lambda;
    g.t_max = t_max;
    g.alpha = alpha_for(beta);
    return g;
  }
};

std::vector<double> parse_list(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(std::stod(item));
  return out;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Energy-budgeted MapReduce scheduling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // generate
  auto *gen = app.add_subcommand("generate", "random instance as JSON");
  std::string gen_config, gen_out, gen_releases;
  GenConfig gc;
  std::uint64_t gen_index = 0;
  gen->add_option("--config", gen_config, "JSON generator config (flags override)");
  gen->add_option("--m", gc.m, "processors");
  gen->add_option("--n", gc.n, "jobs");
  gen->add_option("--maps", gc.maps_per_job, "Map tasks per job");
  gen->add_option("--reduces", gc.reduces_per_job, "Reduce tasks per job");
  gen->add_option("--energy", gc.energy_budget, "energy budget E");
  gen->add_option("--beta", gc.beta);
  gen->add_option("--seed", gc.seed);
  gen->add_option("--releases", gen_releases, "intervals or zero");
  gen->add_option("--index", gen_index, "instance index added to the seed");
  gen->add_option("-o,--out", gen_out, "output file (default stdout)");

  // validate
  auto *val = app.add_subcommand("validate", "check an instance and optionally a schedule");
  std::string val_inst, val_sched;
  std::optional<double> val_budget;
  val->add_option("--instance", val_inst)->required();
  val->add_option("--schedule", val_sched, "schedule CSV");
  val->add_option("--budget", val_budget, "energy budget (default: the instance's)");

  // solve-lp
  auto *lp = app.add_subcommand("solve-lp", "interval-indexed LP relaxation");
  std::string lp_inst, lp_mps;
  GridFlags lp_grid;
  lp->add_option("--instance", lp_inst)->required();
  lp->add_option("--mps", lp_mps, "also write the model in free MPS");
  lp_grid.add(lp);

  // schedule-alpha
  auto *sa = app.add_subcommand("schedule-alpha", "alpha-point schedule with certificate");
  std::string sa_inst, sa_out, sa_cert;
  std::optional<double> sa_gamma;
  GridFlags sa_grid;
  sa->add_option("--instance", sa_inst)->required();
  sa->add_option("--gamma", sa_gamma, "stretch (default: keeps the energy budget)");
  sa->add_option("-o,--out", sa_out, "schedule CSV (default stdout)");
  sa->add_option("--certificate", sa_cert, "certificate CSV (default stderr)");
  sa_grid.add(sa);

  // solve-cp
  auto *cp = app.add_subcommand("solve-cp", "processing times for a fixed job order");
  std::string cp_inst, cp_order = "fcfs", cp_order_file, cp_out;
  CpConfig cp_cfg;
  cp->add_option("--instance", cp_inst)->required();
  cp->add_option("--order", cp_order, "fcfs, sr or file")->capture_default_str();
  cp->add_option("--order-file", cp_order_file, "job ids in order");
  cp->add_option("--tol", cp_cfg.tol, "relative gap")->capture_default_str();
  cp->add_option("-o,--out", cp_out, "per-task CSV");

  // schedule-order
  auto *so = app.add_subcommand("schedule-order", "schedule from a job order");
  std::string so_inst, so_order = "fcfs", so_order_file, so_out, so_times = "cp",
                       so_dispatch = "fixed-order";
  so->add_option("--instance", so_inst)->required();
  so->add_option("--order", so_order, "fcfs, sr or file")->capture_default_str();
  so->add_option("--order-file", so_order_file, "job ids in order");
  so->add_option("--times", so_times, "cp or split (equal energy)")->capture_default_str();
  so->add_option("--dispatch", so_dispatch, "fixed-order or list")->capture_default_str();
  so->add_option("-o,--out", so_out, "schedule CSV (default stdout)");

  // ratios
  auto *ra = app.add_subcommand("ratios", "optimal approximation ratios per beta");
  std::vector<double> ra_beta{2.0, 2.2, 2.4, 2.6, 2.8, 3.0};
  ra->add_option("--beta", ra_beta, "one or more beta values")->delimiter(',');

  // tradeoff
  auto *tr = app.add_subcommand("tradeoff", "ratio against energy augmentation");
  std::vector<double> tr_beta{2.0, 2.5, 3.0};
  std::string tr_levels = "0,10,20,30,40,50,60,70,80,90,100";
  tr->add_option("--beta", tr_beta, "one or more beta values")->delimiter(',');
  tr->add_option("--levels", tr_levels, "augmentation percentages, comma separated")
      ->capture_default_str();

  // experiment
  auto *ex = app.add_subcommand("experiment", "FCFS vs SR comparison");
  std::string ex_config, ex_out;
  ex->add_option("--config", ex_config, "JSON experiment config");
  ex->add_option("-o,--out", ex_out, "per-run CSV (summary goes to stdout)");

  // oracle
  auto *orc = app.add_subcommand("oracle", "exhaustive optimum for tiny instances");
  std::string or_inst, or_out, or_speeds;
  std::vector<std::size_t> or_limits{3, 6, 4};
  double or_epsilon = 0.5;
  orc->add_option("--instance", or_inst)->required();
  orc->add_option("--limits", or_limits, "max jobs, tasks, speeds")->expected(3);
  orc->add_option("--speeds", or_speeds, "comma separated speeds (default: grid window)");
  orc->add_option("--epsilon", or_epsilon, "speed grid for the default window")
      ->capture_default_str();
  orc->add_option("-o,--out", or_out, "schedule CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      GenConfig c = gen_config.empty() ? GenConfig{} : gen_config_from_json(read_json(gen_config));
      for (auto [name, dst, src] : {std::tuple{"--m", &c.m, &gc.m}, {"--n", &c.n, &gc.n},
                                    {"--maps", &c.maps_per_job, &gc.maps_per_job},
                                    {"--reduces", &c.reduces_per_job, &gc.reduces_per_job}})
        if (gen->count(name))
          *dst = *src;
      if (gen->count("--energy"))
        c.energy_budget = gc.energy_budget;
      if (gen->count("--beta"))
        c.beta = gc.beta;
      if (gen->count("--seed"))
        c.seed = gc.seed;
      if (!gen_releases.empty())
        c = gen_config_from_json({{"releases", gen_releases}}, c);
      check_config(c);
      const Instance inst = generate_instance(c, gen_index);
      Output out(gen_out);
      out.os() << instance_to_json(inst).dump(2) << '\n';
      return Ok;
    }

    if (*val) {
      const Instance inst = read_instance(val_inst);
      std::vector<Violation> v = validate_instance(inst);
      if (v.empty() && !val_sched.empty()) {
        std::ifstream in(val_sched);
        if (!in)
          throw ParameterError("cannot read '" + val_sched + "'");
        const Schedule s = read_schedule_csv(in, inst);
        v = validate_schedule(inst, s, val_budget ? *val_budget : inst.energy_budget);
        if (v.empty())
          std::cout << "objective,energy,makespan\n"
                    << format_double(objective(inst, s)) << ','
                    << format_double(energy(inst, s)) << ','
                    << format_double(makespan(s)) << '\n';
      }
      if (!v.empty()) {
        print_violations(std::cout, v);
        return Invalid;
      }
      if (val_sched.empty())
        std::cout << "instance ok\n";
      return Ok;
    }

    if (*lp) {
      const Instance inst = read_instance(lp_inst);
      const Grids g = build_grids(inst, lp_grid.options(inst.beta));
      const LpModel model = build_lp(inst, g.speeds, g.times);
      if (!lp_mps.empty()) {
        Output mps(lp_mps);
        write_free_mps(mps.os(), model.problem, model.row_names, model.col_names);
      }
      const FractionalLpSolution sol = solve_lp(model);
      std::cout << "status,objective,rows,cols,speeds,intervals,t_max,iterations,relative_gap\n"
                << to_string(sol.status) << ',' << format_double(sol.objective) << ','
                << model.problem.num_rows() << ',' << model.problem.num_cols() << ','
                << g.speeds.size() << ',' << g.times.num_intervals() << ','
                << format_double(g.t_max) << ',' << sol.iterations << ','
                << format_double(sol.relative_gap) << '\n';
      return sol.status == LpSolveStatus::Optimal ? Ok : Failure;
    }

    if (*sa) {
      const Instance inst = read_instance(sa_inst);
      AlgoMrOptions opts;
      opts.alpha = sa_grid.alpha_for(inst.beta);
      opts.gamma = sa_gamma;
      opts.grids = sa_grid.options(inst.beta);
      const AlgoMrRun run = run_algo_mr(inst, opts);
      {
        Output out(sa_out);
        write_schedule_csv(out.os(), inst, run.schedule);
      }
      if (sa_cert.empty()) {
        print_certificate(std::cerr, run.certificate);
      } else {
        Output cert(sa_cert);
        print_certificate(cert.os(), run.certificate);
      }
      if (!run.certificate.ok()) {
        std::cerr << "certification failed: " << run.certificate.failures() << '\n';
        return Uncertified;
      }
      return Ok;
    }

    if (*cp) {
      const Instance inst = read_instance(cp_inst);
      const JobOrder order = load_order(inst, cp_order, cp_order_file);
      const CpSolution sol = solve_cp(inst, order, cp_cfg);
      std::cout << "objective,lower_bound,gap,energy,rounds,newton_steps,converged\n"
                << format_double(sol.objective) << ',' << format_double(sol.lower_bound)
                << ',' << format_double(sol.gap) << ',' << format_double(sol.energy) << ','
                << sol.rounds << ',' << sol.iterations << ',' << (sol.converged ? 1 : 0)
                << '\n';
      if (!cp_out.empty()) {
        Output out(cp_out);
        const TaskTable table(inst);
        out.os() << "job_id,kind,processor,volume,processing_time,speed,completion\n";
        for (std::size_t f = 0; f < table.size(); ++f) {
          const Task &t = table.task(f);
          const double p = sol.p[f];
          out.os() << table.job_of(f).id << ',' << to_string(t.kind) << ','
                   << t.processor << ',' << format_double(t.volume) << ','
                   << format_double(p) << ','
                   << format_double(p > 0.0 ? t.volume / p : 0.0) << ','
                   << format_double(sol.completions.task[f]) << '\n';
        }
      }
      if (!sol.converged) {
        std::cerr << "solve-cp: " << sol.message << '\n';
        return NotConverged;
      }
      return Ok;
    }

    if (*so) {
      const Instance inst = read_instance(so_inst);
      const JobOrder order = load_order(inst, so_order, so_order_file);
      std::vector<double> p;
      if (so_times == "cp")
        p = solve_cp(inst, order).p;
      else if (so_times == "split")
        p = equal_energy_split(inst);
      else
        throw ParameterError("times must be cp or split");
      const Schedule s = schedule_from_order(inst, order, p, dispatch_from_string(so_dispatch));
      {
        Output out(so_out);
        write_schedule_csv(out.os(), inst, s);
      }
      const std::vector<Violation> v = validate_schedule(inst, s, inst.energy_budget);
      if (!v.empty()) {
        print_violations(std::cerr, v);
        return Invalid;
      }
      return Ok;
    }

    if (*ra) {
      std::cout << "beta,variant,alpha_star,gamma,ratio\n";
      for (double b : ra_beta)
        for (RatioVariant v : {RatioVariant::General, RatioVariant::NoPrecedence,
                               RatioVariant::NoPrecedenceNoRelease}) {
          const RatioOptimum o = optimal_ratio(b, v);
          std::cout << format_double(b) << ',' << to_string(v) << ','
                    << format_double(o.alpha) << ',' << format_double(o.gamma) << ','
                    << format_double(o.ratio) << '\n';
          if (o.suspicious)
            std::cerr << "warning: beta " << b << ' ' << to_string(v)
                      << ": refined minimum above the best probe\n";
        }
      return Ok;
    }

    if (*tr) {
      std::vector<double> levels = parse_list(tr_levels);
      for (double &l : levels)
        l /= 100.0;
      std::cout << "beta,augmentation_pct,alpha_star,gamma,ratio\n";
      for (double b : tr_beta)
        for (const TradeoffPoint &pt : tradeoff_curve(b, levels))
          std::cout << format_double(b) << ',' << format_double(pt.augmentation * 100.0)
                    << ',' << format_double(pt.optimum.alpha) << ','
                    << format_double(pt.optimum.gamma) << ','
                    << format_double(pt.optimum.ratio) << '\n';
      return Ok;
    }

    if (*ex) {
      const ExperimentConfig cfg = ex_config.empty()
                                       ? ExperimentConfig{}
                                       : experiment_config_from_json(read_json(ex_config));
      const ExperimentResult res = run_experiment(cfg);
      if (!ex_out.empty()) {
        Output out(ex_out);
        write_results_csv(out.os(), cfg, res);
      }
      write_summary_csv(std::cout, res);
      for (const SummaryRow &s : res.summary)
        if (s.infeasible > 0)
          return Invalid;
      return Ok;
    }

    if (*orc) {
      const Instance inst = read_instance(or_inst);
      OracleLimits lim{or_limits[0], or_limits[1], or_limits[2]};
      std::vector<double> speeds;
      if (!or_speeds.empty()) {
        speeds = parse_list(or_speeds);
      } else {
        GridOptions go;
        go.epsilon = or_epsilon;
        speeds = oracle_speed_window(inst, build_grids(inst, go).speeds, lim.max_speeds);
      }
      const OracleResult r = brute_force_oracle(inst, speeds, lim);
      std::cout << "feasible,objective,speed_vectors,timings\n"
                << (r.feasible ? 1 : 0) << ','
                << (r.feasible ? format_double(r.objective) : std::string("inf")) << ','
                << r.speed_vectors << ',' << r.timings << '\n';
      if (r.feasible && !or_out.empty()) {
        Output out(or_out);
        write_schedule_csv(out.os(), inst, r.schedule);
      }
      return r.feasible ? Ok : Invalid;
    }
  } catch (const ParameterError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return BadInput;
  } catch (const CertificationError &e) {
    std::cerr << "certification error: " << e.what() << '\n';
    return Uncertified;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return Failure;
  }
  return Ok;
}
