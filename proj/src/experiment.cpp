#include "mrsched/experiment.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "mrsched/io.hpp"
#include "mrsched/order_policies.hpp"

namespace mrsched {

using nlohmann::json;

const char *to_string(Policy p) {
  switch (p) {
  case Policy::Fcfs:
    return "FCFS";
  case Policy::Sr:
    return "SR";
  case Policy::CpFcfs:
    return "CP(FCFS)";
  case Policy::CpSr:
    return "CP(SR)";
  }
  return "?";
}

Policy policy_from_string(const std::string &text) {
  for (Policy p : {Policy::Fcfs, Policy::Sr, Policy::CpFcfs, Policy::CpSr})
    if (text == to_string(p))
      return p;
  if (text == "fcfs")
    return Policy::Fcfs;
  if (text == "sr")
    return Policy::Sr;
  if (text == "cp-fcfs")
    return Policy::CpFcfs;
  if (text == "cp-sr")
    return Policy::CpSr;
  throw ParameterError("unknown policy '" + text + "'");
}

GenConfig gen_config_from_json(const json &doc, GenConfig c) {
  try {
    c.m = doc.value("m", c.m);
    c.n = doc.value("n", c.n);
    c.maps_per_job = doc.value("maps_per_job", c.maps_per_job);
    c.reduces_per_job = doc.value("reduces_per_job", c.reduces_per_job);
    c.map_work_lo = doc.value("map_work_lo", c.map_work_lo);
    c.map_work_hi = doc.value("map_work_hi", c.map_work_hi);
    c.reduce_work_lo = doc.value("reduce_work_lo", c.reduce_work_lo);
    c.reduce_work_hi = doc.value("reduce_work_hi", c.reduce_work_hi);
    c.reduce_inflation = doc.value("reduce_inflation", c.reduce_inflation);
    c.weight_lo = doc.value("weight_lo", c.weight_lo);
    c.weight_hi = doc.value("weight_hi", c.weight_hi);
    c.energy_budget = doc.value("energy_budget", c.energy_budget);
    c.beta = doc.value("beta", c.beta);
    c.seed = doc.value("seed", c.seed);
    if (doc.contains("releases")) {
      std::string r = doc.at("releases").get<std::string>();
      if (r == "intervals")
        c.releases = ReleaseProtocol::Intervals;
      else if (r == "zero")
        c.releases = ReleaseProtocol::Zero;
      else
        throw ParameterError("releases must be 'intervals' or 'zero'");
    }
  } catch (const json::exception &e) {
    throw ParameterError(std::string("bad generator config: ") + e.what());
  }
  check_config(c);
  return c;
}

ExperimentConfig experiment_config_from_json(const json &doc) {
  ExperimentConfig cfg;
  cfg.gen = gen_config_from_json(doc);
  try {
    if (doc.contains("ns"))
      cfg.ns = doc.at("ns").get<std::vector<int>>();
    cfg.repetitions = doc.value("repetitions", cfg.repetitions);
    cfg.cp.tol = doc.value("cp_tol", cfg.cp.tol);
    cfg.cp.max_iterations = doc.value("cp_max_iterations", cfg.cp.max_iterations);
    if (doc.contains("dispatch")) {
      std::string d = doc.at("dispatch").get<std::string>();
      if (d == "fixed-order")
        cfg.dispatch = Dispatch::FixedOrder;
      else if (d == "list")
        cfg.dispatch = Dispatch::List;
      else
        throw ParameterError("dispatch must be 'fixed-order' or 'list'");
    }
    if (doc.contains("policies")) {
      cfg.policies.clear();
      for (const json &p : doc.at("policies"))
        cfg.policies.push_back(policy_from_string(p.get<std::string>()));
    }
  } catch (const json::exception &e) {
    throw ParameterError(std::string("bad experiment config: ") + e.what());
  }
  if (cfg.repetitions < 1 || cfg.ns.empty())
    throw ParameterError("experiment needs repetitions >= 1 and some n");
  return cfg;
}

json to_json(const ExperimentConfig &cfg) {
  const GenConfig &g = cfg.gen;
  json doc = {{"m", g.m},
              {"maps_per_job", g.maps_per_job},
              {"reduces_per_job", g.reduces_per_job},
              {"map_work_lo", g.map_work_lo},
              {"map_work_hi", g.map_work_hi},
              {"reduce_work_lo", g.reduce_work_lo},
              {"reduce_work_hi", g.reduce_work_hi},
              {"reduce_inflation", g.reduce_inflation},
              {"weight_lo", g.weight_lo},
              {"weight_hi", g.weight_hi},
              {"releases", g.releases == ReleaseProtocol::Zero ? "zero" : "intervals"},
              {"energy_budget", g.energy_budget},
              {"beta", g.beta},
              {"seed", g.seed},
              {"ns", cfg.ns},
              {"repetitions", cfg.repetitions},
              {"cp_tol", cfg.cp.tol},
              {"cp_max_iterations", cfg.cp.max_iterations},
              {"dispatch", cfg.dispatch == Dispatch::List ? "list" : "fixed-order"}};
  json pol = json::array();
  for (Policy p : cfg.policies)
    pol.push_back(to_string(p));
  doc["policies"] = pol;
  return doc;
}

ExperimentResult run_experiment(const ExperimentConfig &cfg) {
  ExperimentResult res;
  for (int n : cfg.ns) {
    GenConfig gen = cfg.gen;
    gen.n = n;
    check_config(gen);
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
      const Instance inst = generate_instance(gen, static_cast<std::uint64_t>(rep));
      const JobOrder orders[2] = {fcfs_order(inst), smith_order(inst)};
      CpSolution cp[2];
      for (int k = 0; k < 2; ++k)
        cp[k] = solve_cp(inst, orders[k], cfg.cp);
      const std::vector<double> split = equal_energy_split(inst);

      for (Policy pol : cfg.policies) {
        const int k = pol == Policy::Fcfs || pol == Policy::CpFcfs ? 0 : 1;
        const bool uses_cp = pol == Policy::CpFcfs || pol == Policy::CpSr;
        Schedule s = schedule_from_order(inst, orders[k], uses_cp ? cp[k].p : split,
                                         cfg.dispatch);
        ResultRow row;
        row.n = n;
        row.seed = gen.seed + static_cast<std::uint64_t>(rep);
        row.policy = pol;
        row.objective = objective(inst, s);
        row.energy = energy(inst, s);
        row.lb = cp[k].objective;
        row.ratio = row.objective / row.lb;
        row.cp_converged = cp[k].converged;
        row.feasible = validate_schedule(inst, s, inst.energy_budget).empty();
        row.lb_holds = row.lb <= row.objective * (1.0 + 1e-9);
        res.rows.push_back(row);
      }
    }
  }
  std::sort(res.rows.begin(), res.rows.end(), [](const ResultRow &a, const ResultRow &b) {
    if (a.n != b.n)
      return a.n < b.n;
    if (a.seed != b.seed)
      return a.seed < b.seed;
    return static_cast<int>(a.policy) < static_cast<int>(b.policy);
  });

  std::map<std::pair<int, int>, SummaryRow> acc;
  for (const ResultRow &r : res.rows) {
    SummaryRow &s = acc[{r.n, static_cast<int>(r.policy)}];
    s.n = r.n;
    s.policy = r.policy;
    ++s.count;
    s.mean_objective += r.objective;
    s.mean_lb += r.lb;
    s.mean_ratio += r.ratio;
    s.infeasible += !r.feasible;
    s.lb_violations += !r.lb_holds;
  }
  for (auto &[key, s] : acc) {
    const double c = static_cast<double>(s.count);
    s.mean_objective /= c;
    s.mean_lb /= c;
    s.mean_ratio /= c;
    res.summary.push_back(s);
  }
  return res;
}

void write_results_csv(std::ostream &os, const ExperimentConfig &cfg,
                       const ExperimentResult &res) {
  os << "# config: " << to_json(cfg).dump() << '\n';
  os << "# version: " << kVersion << '\n';
  os << "# generator: " << kGeneratorName << '\n';
  os << "# every repetition resamples volumes, processors, weights and releases\n";
  os << "n,seed,policy,objective,energy,lb,ratio,feasible,lb_holds,cp_converged\n";
  for (const ResultRow &r : res.rows)
    os << r.n << ',' << r.seed << ',' << to_string(r.policy) << ','
       << format_double(r.objective) << ',' << format_double(r.energy) << ','
       << format_double(r.lb) << ',' << format_double(r.ratio) << ','
       << (r.feasible ? 1 : 0) << ',' << (r.lb_holds ? 1 : 0) << ','
       << (r.cp_converged ? 1 : 0) << '\n';
}

void write_summary_csv(std::ostream &os, const ExperimentResult &res) {
  os << "n,policy,count,mean_objective,mean_lb,mean_ratio,infeasible,lb_violations\n";
  for (const SummaryRow &s : res.summary)
    os << s.n << ',' << to_string(s.policy) << ',' << s.count << ','
       << format_double(s.mean_objective) << ',' << format_double(s.mean_lb) << ','
       << format_double(s.mean_ratio) << ',' << s.infeasible << ','
       << s.lb_violations << '\n';
}

} // namespace mrsched
