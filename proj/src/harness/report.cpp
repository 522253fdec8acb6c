#include <fstream>

#include "rings/harness.hpp"
#include "rings/kernels.hpp"

namespace rings::harness {

void Report::add(std::string name, bool pass, nlohmann::ordered_json detail) {
  checks.push_back({std::move(name), pass, std::move(detail)});
}

bool Report::pass() const {
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const Check* Report::find(const std::string& name) const {
  for (const Check& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["code_version"] = kCodeVersion;
  j["experiment"] = experiment;
  j["config"] = config;
  j["results"] = results;
  nlohmann::ordered_json cs = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["detail"] = c.detail;
    cs.push_back(std::move(e));
  }
  j["checks"] = std::move(cs);
  j["pass"] = pass();
  return j;
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / "report.json").string());
    out << report.to_json().dump(2) << '\n';
  }
  for (const auto& [name, body] : report.csv) {
    std::ofstream out(dir / name, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << body;
  }
}

Report run(const ExperimentConfig& c) {
  c.validate();
  if (c.kind == "validate") return run_validate(c);
  if (c.kind == "fick") return run_fick(c);
  if (c.kind == "relax") return run_relax(c);
  if (c.kind == "couple") return run_couple(c);
  if (c.kind == "walk") return run_walk(c);
  if (c.kind == "orbits") return run_orbits(c);
  throw ConfigError("unknown experiment kind '" + c.kind + "'");
}

}  // namespace rings::harness
