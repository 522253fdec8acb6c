#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rings/lattice.hpp"
#include "rings/orbit.hpp"
#include "rings/scatter.hpp"
#include "rings/transport.hpp"

namespace rings::harness {

inline constexpr const char* kCodeVersion = "0.1.0";

/// Bad configuration or command line; maps to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Experiment exceeds the memory budget or index width.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FieldKind { random, empty, full };

struct Tolerances {
  double sigma = 3.0;               // confidence radius multiplier
  double fick_relative = 0.20;      // finite-size allowance on kappa
  double chi_alpha = 0.01;          // family-wise chi-square significance
  double relax_rate_fraction = 0.5; // fitted decay rate vs kappa
  double tail_rate = 0.25;          // relative error of the exit-tail slope
  double mgf_abs = 1e-8;            // analytic vs solved MGF
  double exact_abs = 1e-12;         // exact identities evaluated in floating point
};

struct ExperimentConfig {
  std::string kind = "validate";
  int d = 2;
  int n = 4;
  double mu = 0.2;
  std::optional<double> nu;  // walk rate; kappa(mu, d) when absent
  ReservoirParams reservoir{0.8, 0.2, 0.5};
  std::uint64_t replicas = 100;
  std::uint64_t seed = 1;
  std::string out;
  unsigned threads = 0;  // 0 = hardware concurrency
  FieldKind field = FieldKind::random;
  std::vector<int> sizes;
  std::vector<double> times{0.5, 1.0, 2.0, 4.0};
  std::optional<double> epsilon;
  int interface = -1;  // -1 = every interface
  std::optional<std::uint64_t> horizon;
  std::uint64_t starts = 100000;
  std::uint64_t walks = 100000;
  std::uint64_t histories = 0;
  Tolerances tol;

  Dims dims() const { return Dims(d, n); }
  /// Throws ConfigError on any invariant violation.
  void validate() const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Config as embedded in reports (everything that affects results).
nlohmann::ordered_json config_json(const ExperimentConfig& c);

/// One pass/fail line of a report.
struct Check {
  std::string name;
  bool pass = false;
  nlohmann::ordered_json detail;
};

struct Report {
  std::string experiment;
  nlohmann::ordered_json config;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<Check> checks;
  /// Extra CSV outputs by file name (series.csv, census.csv, ...).
  std::map<std::string, std::string> csv;

  void add(std::string name, bool pass, nlohmann::ordered_json detail = nlohmann::ordered_json::object());
  bool pass() const;
  const Check* find(const std::string& name) const;
  nlohmann::ordered_json to_json() const;
};

/// Writes report.json plus every CSV into `dir` (created if needed).
void write_report(const Report& report, const std::filesystem::path& dir);

/// Field of replica r: seed_r = derive_seed(master, r).
ScattererField replica_field(const ExperimentConfig& c, const Dims& dims, std::uint64_t seed,
                             Storage storage = Storage::dense);

/// Outcome of the exact structural checks on one field.
struct FieldValidation {
  std::map<std::string, bool> pass;
  std::map<std::string, std::string> witness;  // first violation per check
  std::vector<std::string> series;             // CSV rows t,l,J,replica,seed
  void fail(const std::string& check, const std::string& what);
};

/// Bijectivity and cycle checks on an explicit forward table.
FieldValidation validate_dynamics(const Dynamics& dyn);
/// All structural checks on one field, including sampled occupation
/// histories for the current formulas.
FieldValidation validate_field(const ScattererField& field, const ReservoirParams& params, std::uint64_t seed,
                               std::uint64_t replica);

/// Monte Carlo mean of J(l, t) over independent histories of one field.
struct CurrentEstimate {
  std::vector<double> mean;       // per interface
  std::vector<double> range;      // per interface: (#Delta != 0 sites) / N^d
  std::vector<double> exact;      // per interface: exact expected current
};
CurrentEstimate mc_current(const ScattererField& field, const ReservoirParams& params, std::uint64_t t,
                           std::uint64_t histories, std::uint64_t seed, unsigned threads);

Report run_validate(const ExperimentConfig& c);
Report run_fick(const ExperimentConfig& c);
Report run_relax(const ExperimentConfig& c);
Report run_couple(const ExperimentConfig& c);
Report run_walk(const ExperimentConfig& c);
Report run_orbits(const ExperimentConfig& c);

/// Dispatches on c.kind.
Report run(const ExperimentConfig& c);

/// Throws Infeasible when N^(d+1) sites cannot be handled.
void check_feasible(const Dims& dims);

unsigned resolve_threads(unsigned requested);

}  // namespace rings::harness
