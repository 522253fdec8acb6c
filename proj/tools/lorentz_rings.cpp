#include <cstdio>
#include <iostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "rings/harness.hpp"

namespace {

std::pair<int, int> parse_dims(const std::string& s) {
  int d = 0, n = 0;
  char comma = 0;
  std::istringstream in(s);
  if (!(in >> d >> comma >> n) || comma != ',' || !in.eof()) {
    throw rings::harness::ConfigError("--dims expects d,N; got '" + s + "'");
  }
  return {d, n};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rings::harness;
  CLI::App app{"Boundary-driven random lattice Lorentz gas: simulator and verification harness"};
  app.require_subcommand(1, 1);
  std::string config_path, dims, out;
  std::optional<double> mu, rho_minus, rho_plus, rho_init;
  std::optional<std::uint64_t> replicas, seed;
  std::optional<unsigned> threads;
  const std::pair<const char*, const char*> kinds[] = {
      {"validate", "structural invariants of F, orbits and currents"},
      {"fick", "crossing statistic and stationary current against kappa"},
      {"relax", "exact remainder L(l, t) and its decay"},
      {"walk", "lazy-walk exit times, MGF and loop trends"},
      {"couple", "orbit steps against the lazy-walk kernel"},
      {"orbits", "period histogram and excursion census"},
  };
  for (const auto& [kind, help] : kinds) {
    CLI::App* sub = app.add_subcommand(kind, help);
    sub->add_option("--config", config_path, "JSON experiment config");
    sub->add_option("--dims", dims, "d,N");
    sub->add_option("--mu", mu, "scatterer density");
    sub->add_option("--rho-minus", rho_minus, "left reservoir density");
    sub->add_option("--rho-plus", rho_plus, "right reservoir density");
    sub->add_option("--rho-init", rho_init, "initial bulk density");
    sub->add_option("--replicas", replicas, "number of disorder replicas");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--threads", threads, "worker threads (0 = all cores)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    c.kind = app.get_subcommands().front()->get_name();
    if (!dims.empty()) std::tie(c.d, c.n) = parse_dims(dims);
    if (mu) c.mu = *mu;
    if (rho_minus) c.reservoir.rho_minus = *rho_minus;
    if (rho_plus) c.reservoir.rho_plus = *rho_plus;
    if (rho_init) c.reservoir.rho_init = *rho_init;
    if (replicas) c.replicas = *replicas;
    if (seed) c.seed = *seed;
    if (threads) c.threads = *threads;
    if (!out.empty()) c.out = out;
    const Report report = run(c);
    write_report(report, c.out.empty() ? std::filesystem::path("out") / c.kind : std::filesystem::path(c.out));
    for (const Check& check : report.checks) {
      std::cout << (check.pass ? "PASS " : "FAIL ") << check.name << '\n';
    }
    return report.pass() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Infeasible& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
