#include "mrsched/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace mrsched {

using nlohmann::json;

std::string format_double(double x) {
  char buf[32];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x)
      break;
  }
  return buf;
}

json instance_to_json(const Instance &inst) {
  json doc;
  doc["beta"] = inst.beta;
  doc["energy_budget"] = inst.energy_budget;
  doc["num_processors"] = inst.num_processors;
  doc["jobs"] = json::array();
  for (const Job &job : inst.jobs) {
    json j;
    j["id"] = job.id;
    j["weight"] = job.weight;
    j["release"] = job.release;
    j["tasks"] = json::array();
    for (const Task &t : job.tasks)
      j["tasks"].push_back(
          {{"processor", t.processor}, {"kind", to_string(t.kind)}, {"volume", t.volume}});
    doc["jobs"].push_back(std::move(j));
  }
  return doc;
}

Instance instance_from_json(const json &doc) {
  try {
    Instance inst;
    inst.beta = doc.at("beta").get<double>();
    inst.energy_budget = doc.at("energy_budget").get<double>();
    inst.num_processors = doc.at("num_processors").get<int>();
    for (const json &j : doc.at("jobs")) {
      Job job;
      job.id = j.at("id").get<int>();
      job.weight = j.value("weight", 1.0);
      job.release = j.value("release", 0.0);
      for (const json &t : j.at("tasks")) {
        Task task;
        task.processor = t.at("processor").get<int>();
        task.kind = task_kind_from_string(t.at("kind").get<std::string>());
        task.volume = t.at("volume").get<double>();
        job.tasks.push_back(task);
      }
      inst.jobs.push_back(std::move(job));
    }
    return inst;
  } catch (const json::exception &e) {
    throw ParameterError(std::string("malformed instance document: ") + e.what());
  }
}

Instance read_instance(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParameterError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception &e) {
    throw ParameterError(path + ": " + e.what());
  }
  return instance_from_json(doc);
}

void write_instance(const std::string &path, const Instance &inst) {
  std::ofstream out(path);
  if (!out)
    throw ParameterError("cannot write " + path);
  out << instance_to_json(inst).dump(2) << '\n';
}

void write_schedule_csv(std::ostream &os, const Instance &inst,
                        const Schedule &sched) {
  std::vector<std::size_t> idx(sched.entries.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const ScheduleEntry &ea = sched.entries[a], &eb = sched.entries[b];
    if (ea.start != eb.start)
      return ea.start < eb.start;
    return ea.processor < eb.processor;
  });
  os << "job_id,kind,processor,start,duration,speed,energy,completion\n";
  for (std::size_t k : idx) {
    const ScheduleEntry &e = sched.entries[k];
    const Job &job = inst.jobs.at(e.task.job);
    const Task &t = job.tasks.at(e.task.task);
    double en = t.volume > 0.0 && e.duration > 0.0
                    ? task_energy(t.volume, e.duration, inst.beta)
                    : 0.0;
    os << job.id << ',' << to_string(t.kind) << ',' << e.processor << ','
       << format_double(e.start) << ',' << format_double(e.duration) << ','
       << format_double(e.speed) << ',' << format_double(en) << ','
       << format_double(e.completion()) << '\n';
  }
}

Schedule read_schedule_csv(std::istream &is, const Instance &inst) {
  std::map<std::pair<int, int>, TaskRef> lookup;
  for (std::size_t j = 0; j < inst.jobs.size(); ++j)
    for (std::size_t k = 0; k < inst.jobs[j].tasks.size(); ++k)
      lookup[{inst.jobs[j].id, inst.jobs[j].tasks[k].processor}] = {j, k};

  Schedule sched;
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty())
      continue;
    if (header) {
      header = false;
      if (line.rfind("job_id", 0) == 0)
        continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      cells.push_back(cell);
    if (cells.size() < 6)
      throw StructuralError("schedule line " + std::to_string(lineno) +
                            ": expected at least 6 fields");
    int job_id = std::stoi(cells[0]);
    TaskKind kind = task_kind_from_string(cells[1]);
    int proc = std::stoi(cells[2]);
    auto it = lookup.find({job_id, proc});
    if (it == lookup.end())
      throw StructuralError("schedule line " + std::to_string(lineno) +
                            ": no task of job " + cells[0] + " on processor " +
                            cells[2]);
    const Task &t = inst.jobs[it->second.job].tasks[it->second.task];
    if (t.kind != kind)
      throw StructuralError("schedule line " + std::to_string(lineno) +
                            ": kind does not match the instance");
    ScheduleEntry e;
    e.task = it->second;
    e.processor = proc;
    e.start = std::stod(cells[3]);
    e.duration = std::stod(cells[4]);
    e.speed = std::stod(cells[5]);
    sched.entries.push_back(e);
  }
  return sched;
}

void write_grid_csv(std::ostream &os, const std::vector<double> &values) {
  os << "index,value\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    os << i << ',' << format_double(values[i]) << '\n';
}

} // namespace mrsched
