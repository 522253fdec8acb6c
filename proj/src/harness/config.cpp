#include <fstream>
#include <set>

#include "rings/harness.hpp"

namespace rings::harness {

namespace {

const std::set<std::string> kKinds{"validate", "fick", "relax", "walk", "couple", "orbits"};

const std::set<std::string> kKeys{"kind",     "d",       "N",         "mu",      "nu",       "rho_minus",
                                  "rho_plus", "rho_init", "replicas", "seed",    "out",      "threads",
                                  "field",    "sizes",   "times",     "epsilon", "interface", "horizon",
                                  "starts",   "walks",   "histories", "tolerances"};

const std::set<std::string> kToleranceKeys{"sigma",     "fick_relative", "chi_alpha", "relax_rate_fraction",
                                           "tail_rate", "mgf_abs",       "exact_abs"};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

FieldKind parse_field(const std::string& s) {
  if (s == "random") return FieldKind::random;
  if (s == "empty") return FieldKind::empty;
  if (s == "full") return FieldKind::full;
  throw ConfigError("field must be one of random, empty, full; got '" + s + "'");
}

const char* field_name(FieldKind f) {
  switch (f) {
    case FieldKind::random: return "random";
    case FieldKind::empty: return "empty";
    case FieldKind::full: return "full";
  }
  return "random";
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

}  // namespace

void ExperimentConfig::validate() const {
  require(kKinds.count(kind) == 1, "unknown experiment kind '" + kind + "'");
  require(d >= 1 && d <= kMaxDim, "d must lie in [1, " + std::to_string(kMaxDim) + "]");
  require(n >= 2, "N must be at least 2");
  try {
    (void)dims();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  require(mu > 0.0 && mu < 1.0, "mu must lie in (0, 1)");
  try {
    reservoir.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  require(replicas >= 1, "replicas must be at least 1");
  const double rate = nu.value_or(kappa(mu, d));
  require(rate > 0.0 && 2.0 * d * rate <= 1.0, "walk rate nu must satisfy 0 < 2 d nu <= 1");
  if (kind == "validate") require(d <= 3 && n <= 6, "validate runs exhaustively and needs d <= 3, N <= 6");
  for (int s : sizes) require(s >= 2, "every entry of sizes must be at least 2");
  for (double t : times) require(t > 0.0, "every entry of times must be positive");
  if (epsilon) require(*epsilon > 0.0, "epsilon must be positive");
  require(interface == -1 || (interface >= 0 && interface <= n - 2), "interface must be -1 or lie in [0, N-2]");
  if (horizon) require(*horizon >= 1, "horizon must be positive");
  require(starts >= 1 && walks >= 1, "starts and walks must be positive");
  require(tol.sigma > 0 && tol.fick_relative >= 0 && tol.chi_alpha > 0 && tol.chi_alpha < 1 &&
              tol.relax_rate_fraction >= 0 && tol.tail_rate > 0 && tol.mgf_abs > 0 && tol.exact_abs > 0,
          "tolerances out of range");
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  require(j.is_object(), "config must be a JSON object");
  for (const auto& [key, _] : j.items()) require(kKeys.count(key) == 1, "unknown config key '" + key + "'");
  ExperimentConfig c;
  try {
    read(j, "kind", c.kind);
    read(j, "d", c.d);
    read(j, "N", c.n);
    read(j, "mu", c.mu);
    if (j.contains("nu")) c.nu = j.at("nu").get<double>();
    read(j, "rho_minus", c.reservoir.rho_minus);
    read(j, "rho_plus", c.reservoir.rho_plus);
    read(j, "rho_init", c.reservoir.rho_init);
    read(j, "replicas", c.replicas);
    read(j, "seed", c.seed);
    read(j, "out", c.out);
    read(j, "threads", c.threads);
    if (j.contains("field")) c.field = parse_field(j.at("field").get<std::string>());
    read(j, "sizes", c.sizes);
    read(j, "times", c.times);
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    read(j, "interface", c.interface);
    if (j.contains("horizon")) c.horizon = j.at("horizon").get<std::uint64_t>();
    read(j, "starts", c.starts);
    read(j, "walks", c.walks);
    read(j, "histories", c.histories);
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      require(t.is_object(), "tolerances must be an object");
      for (const auto& [key, _] : t.items()) {
        require(kToleranceKeys.count(key) == 1, "unknown tolerance key '" + key + "'");
      }
      read(t, "sigma", c.tol.sigma);
      read(t, "fick_relative", c.tol.fick_relative);
      read(t, "chi_alpha", c.tol.chi_alpha);
      read(t, "relax_rate_fraction", c.tol.relax_rate_fraction);
      read(t, "tail_rate", c.tol.tail_rate);
      read(t, "mgf_abs", c.tol.mgf_abs);
      read(t, "exact_abs", c.tol.exact_abs);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["kind"] = c.kind;
  j["d"] = c.d;
  j["N"] = c.n;
  j["mu"] = c.mu;
  if (c.nu) j["nu"] = *c.nu;
  j["rho_minus"] = c.reservoir.rho_minus;
  j["rho_plus"] = c.reservoir.rho_plus;
  j["rho_init"] = c.reservoir.rho_init;
  j["replicas"] = c.replicas;
  j["seed"] = c.seed;
  j["field"] = field_name(c.field);
  j["sizes"] = c.sizes;
  j["times"] = c.times;
  if (c.epsilon) j["epsilon"] = *c.epsilon;
  j["interface"] = c.interface;
  if (c.horizon) j["horizon"] = *c.horizon;
  j["starts"] = c.starts;
  j["walks"] = c.walks;
  j["histories"] = c.histories;
  j["tolerances"] = {{"sigma", c.tol.sigma},
                     {"fick_relative", c.tol.fick_relative},
                     {"chi_alpha", c.tol.chi_alpha},
                     {"relax_rate_fraction", c.tol.relax_rate_fraction},
                     {"tail_rate", c.tol.tail_rate},
                     {"mgf_abs", c.tol.mgf_abs},
                     {"exact_abs", c.tol.exact_abs}};
  return j;
}

}  // namespace rings::harness
