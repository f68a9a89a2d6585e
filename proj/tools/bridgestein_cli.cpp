// Experiment runner: reproducible simulations, couplings, empirical
// Wasserstein estimates and bound calculators over file-based inputs and
// outputs. Every run is fully determined by (resolved config, seed); each
// output starts with a machine-readable provenance header carrying the
// resolved configuration. Exit codes: 0 success, 2 configuration error,
// 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bridgestein/bounds.hpp"
#include "bridgestein/chains.hpp"
#include "bridgestein/coupling.hpp"
#include "bridgestein/filtering.hpp"
#include "bridgestein/oracles.hpp"
#include "bridgestein/parallel.hpp"
#include "bridgestein/samplers.hpp"
#include "bridgestein/stats.hpp"
#include "bridgestein/version.hpp"
#include "bridgestein/wasserstein.hpp"

namespace {

using nlohmann::json;
using namespace bridgestein;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

json provenance(const std::string& command, const json& resolved,
                std::uint64_t seed) {
  return json{{"tool", "bridgestein"},
              {"version", kVersion},
              {"command", command},
              {"seed", seed},
              {"config", resolved}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << text;
}

std::string csv_provenance_header(const std::string& command,
                                  const json& resolved, std::uint64_t seed) {
  std::ostringstream out;
  out << "# tool=bridgestein version=" << kVersion << "\n";
  out << "# command=" << command << " seed=" << seed << "\n";
  for (const auto& [key, value] : resolved.items())
    out << "# " << key << "=" << value.dump() << "\n";
  return out.str();
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  std::stringstream stream(spec);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    grid.push_back(std::stod(item));
  }
  if (grid.empty()) throw ConfigError("empty time grid");
  return grid;
}

ObservationPath read_observation_csv(const std::string& path, double horizon) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open observation file: " + path);
  ObservationPath obs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double t, z;
    if (!(fields >> t >> z)) continue;  // skips a header line
    obs.t.push_back(t);
    obs.z.push_back(z);
  }
  obs.validate(horizon);
  return obs;
}

// ---------------------------------------------------------------------------

struct CommonOptions {
  std::uint64_t seed = 1;
  std::string out = "-";
};

struct RateFamilyOptions {
  std::string family = "constant-speed";
  double mu = 2.0;
  double nu = 1.0;
  double kappa = 0.5;

  LevelRates rates() const {
    if (family == "constant-speed")
      return alternating_constant_speed_rates(mu, nu);
    if (family == "reversible") return alternating_reversible_rates(kappa);
    throw ConfigError("unknown rate family: " + family);
  }

  NonhomogeneousParams chain_params() const {
    NonhomogeneousParams params;
    params.rates = rates();
    if (family == "constant-speed") {
      params.rate_sup = std::sqrt(mu) + std::sqrt(nu);
      const double mu_c = mu, nu_c = nu;
      params.birth_majorant = [mu_c, nu_c](const LatticeConfig& state) {
        return mu_c * std::pow(mu_c / nu_c,
                               static_cast<double>(state.pair_count()));
      };
    } else {
      params.rate_sup = std::exp(std::asinh(kappa / 4.0));
      const double kappa_c = kappa;
      params.birth_majorant = [kappa_c](const LatticeConfig&) {
        return std::exp(kappa_c);
      };
    }
    return params;
  }

  json to_json() const {
    json j{{"family", family}};
    if (family == "constant-speed") {
      j["mu"] = mu;
      j["nu"] = nu;
    } else {
      j["kappa"] = kappa;
    }
    return j;
  }
};

// --------------------------------------------------------------------------
// sample: dump exact or chain-sampled configurations as JSON lines

int run_sample(const std::string& model, double alpha, double j_plus,
               double j_minus, int n_blocks, const RateFamilyOptions& family,
               std::size_t count, const CommonOptions& common) {
  std::ostringstream out;
  json resolved{{"model", model}, {"count", count}};
  std::vector<json> lines;
  lines.reserve(count);
  if (model == "hypercube") {
    resolved["alpha"] = alpha;
    Rng rng(common.seed);
    for (std::size_t k = 0; k < count; ++k)
      lines.push_back(to_json(sample_hypercube_bridge(alpha, rng)));
  } else if (model == "lattice") {
    resolved["j_plus"] = j_plus;
    resolved["j_minus"] = j_minus;
    Rng rng(common.seed);
    for (std::size_t k = 0; k < count; ++k)
      lines.push_back(to_json(sample_lattice_bridge(j_plus, j_minus, rng)));
  } else if (model == "scheme") {
    resolved["n"] = n_blocks;
    Rng rng(common.seed);
    for (std::size_t k = 0; k < count; ++k)
      lines.push_back(to_json(sample_scheme_bridge(n_blocks, rng).config));
  } else if (model == "nonhomogeneous") {
    resolved["rates"] = family.to_json();
    NonhomogeneousBridgeMh sampler(family.rates(), common.seed);
    for (std::size_t k = 0; k < count; ++k)
      lines.push_back(to_json(sampler.next()));
  } else {
    throw ConfigError("unknown model: " + model);
  }
  out << json{{"provenance", provenance("sample", resolved, common.seed)}}
      << "\n";
  for (const auto& line : lines) out << line << "\n";
  write_text(common.out, out.str());
  return 0;
}

// --------------------------------------------------------------------------
// trajectory: run one chain and dump its events as JSON lines; with several
// replicas, emit the ensemble summary CSV instead

struct ReplicaSummary {
  std::size_t state_size = 0;  // stored jump times at t_end
  std::size_t n_events = 0;
};

int run_trajectory(const std::string& model, double alpha, double j_plus,
                   double j_minus, int n_blocks,
                   const RateFamilyOptions& family, double t_end,
                   std::size_t replicas, const CommonOptions& common) {
  json resolved{{"model", model}, {"t_end", t_end}, {"replicas", replicas}};
  if (model == "hypercube") resolved["alpha"] = alpha;
  if (model == "lattice") {
    resolved["j_plus"] = j_plus;
    resolved["j_minus"] = j_minus;
  }
  if (model == "scheme") resolved["n"] = n_blocks;
  if (model == "nonhomogeneous") resolved["rates"] = family.to_json();

  auto run_one = [&](std::uint64_t stream, ReplicaSummary& summary)
      -> std::vector<MoveEvent> {
    std::vector<MoveEvent> events;
    Rng rng(common.seed, stream);
    auto collect = [&](const MoveEvent& e, const auto&) {
      events.push_back(e);
    };
    if (model == "hypercube") {
      summary.state_size =
          simulate_hypercube_core(HypercubeConfig{}, alpha, t_end, rng,
                                  collect)
              .size();
    } else if (model == "lattice") {
      const auto final_state = simulate_lattice_core(
          LatticeConfig{}, j_plus, j_minus, t_end, rng, collect);
      summary.state_size = final_state.up.size() + final_state.down.size();
    } else if (model == "scheme") {
      const auto final_state =
          simulate_scheme_core(LatticeConfig{}, n_blocks, t_end, rng, collect);
      summary.state_size = final_state.up.size() + final_state.down.size();
    } else if (model == "nonhomogeneous") {
      const auto final_state = simulate_nonhomogeneous_core(
          LatticeConfig{}, family.chain_params(), t_end, rng, collect);
      summary.state_size = final_state.up.size() + final_state.down.size();
    } else {
      throw ConfigError("unknown model: " + model);
    }
    summary.n_events = events.size();
    return events;
  };

  std::ostringstream out;
  if (replicas <= 1) {
    ReplicaSummary summary;
    const auto events = run_one(0, summary);
    out << json{{"provenance",
                 provenance("trajectory", resolved, common.seed)}}
        << "\n";
    for (const auto& e : events)
      out << json{{"t", e.time},
                  {"op", e.add ? "add" : "remove"},
                  {"r", e.r},
                  {"s", e.s}}
          << "\n";
  } else {
    std::vector<ReplicaSummary> summaries(replicas);
    parallel_replicas(replicas, [&](std::size_t rep) {
      run_one(rep, summaries[rep]);
    });
    out << csv_provenance_header("trajectory", resolved, common.seed);
    out << "replica,t_end_state_size,n_events\n";
    for (std::size_t rep = 0; rep < replicas; ++rep)
      out << rep << "," << summaries[rep].state_size << ","
          << summaries[rep].n_events << "\n";
  }
  write_text(common.out, out.str());
  return 0;
}

// --------------------------------------------------------------------------
// couple: contraction curve as CSV

int run_couple(const std::string& model, double alpha, double j_plus,
               double j_minus, const std::string& grid_spec,
               std::size_t replicas, const CommonOptions& common) {
  ContractionParams params;
  json resolved{{"model", model},
                {"replicas", replicas},
                {"t_grid", grid_spec}};
  if (model == "hypercube") {
    params.hypercube = true;
    params.alpha = alpha;
    resolved["alpha"] = alpha;
  } else if (model == "lattice") {
    params.hypercube = false;
    params.j_plus = j_plus;
    params.j_minus = j_minus;
    resolved["j_plus"] = j_plus;
    resolved["j_minus"] = j_minus;
  } else {
    throw ConfigError("couple supports the hypercube and lattice models");
  }
  const auto curve = estimate_contraction(params, parse_grid(grid_spec),
                                          replicas, common.seed);
  std::ostringstream out;
  out << csv_provenance_header("couple", resolved, common.seed);
  out << "t,mean_d,se,bound_4exp_half_plus_exp\n";
  for (std::size_t k = 0; k < curve.t.size(); ++k)
    out << format_double(curve.t[k]) << ","
        << format_double(curve.mean_distance[k]) << ","
        << format_double(curve.standard_error[k]) << ","
        << format_double(curve.envelope[k]) << "\n";
  write_text(common.out, out.str());
  return 0;
}

// --------------------------------------------------------------------------
// wasserstein: empirical W1 between two sampled bridge laws

int run_wasserstein(const std::string& model, double alpha, double beta,
                    double j_plus, double j_minus, double h_plus,
                    double h_minus, int n_blocks, std::size_t n_samples,
                    std::size_t repetitions, const CommonOptions& common) {
  json resolved{{"model", model},
                {"n", n_samples},
                {"repetitions", repetitions}};
  RunningStat estimates;
  std::vector<double> per_rep;
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    double estimate = 0.0;
    if (model == "hypercube") {
      resolved["alpha"] = alpha;
      resolved["beta"] = beta;
      Rng rng(common.seed, rep);
      std::vector<HypercubeConfig> a, b;
      for (std::size_t k = 0; k < n_samples; ++k)
        a.push_back(sample_hypercube_bridge(alpha, rng));
      for (std::size_t k = 0; k < n_samples; ++k)
        b.push_back(sample_hypercube_bridge(beta, rng));
      estimate = empirical_w1(a, b, common.seed + 1000 + rep).estimate;
    } else if (model == "lattice") {
      resolved["j_plus"] = j_plus;
      resolved["j_minus"] = j_minus;
      resolved["h_plus"] = h_plus;
      resolved["h_minus"] = h_minus;
      Rng rng(common.seed, rep);
      std::vector<LatticeConfig> a, b;
      for (std::size_t k = 0; k < n_samples; ++k)
        a.push_back(sample_lattice_bridge(j_plus, j_minus, rng));
      for (std::size_t k = 0; k < n_samples; ++k)
        b.push_back(sample_lattice_bridge(h_plus, h_minus, rng));
      estimate = empirical_w1(a, b, common.seed + 1000 + rep).estimate;
    } else if (model == "scheme") {
      resolved["n_blocks"] = n_blocks;
      Rng rng(common.seed, rep);
      std::vector<LatticeConfig> a, b;
      for (std::size_t k = 0; k < n_samples; ++k)
        a.push_back(sample_scheme_bridge(n_blocks, rng).config);
      for (std::size_t k = 0; k < n_samples; ++k)
        b.push_back(sample_lattice_bridge(1.0, 1.0, rng));
      estimate = empirical_w1(a, b, common.seed + 1000 + rep).estimate;
    } else {
      throw ConfigError("unknown model: " + model);
    }
    estimates.add(estimate);
    per_rep.push_back(estimate);
  }
  json result{{"provenance", provenance("wasserstein", resolved, common.seed)},
              {"w1", estimates.mean},
              {"se", estimates.standard_error()},
              {"n", n_samples},
              {"repetitions", repetitions},
              {"per_repetition", per_rep}};
  write_text(common.out, result.dump(2) + "\n");
  return 0;
}

// --------------------------------------------------------------------------
// bound: closed forms and the Monte Carlo estimator

int run_bound(const std::string& variant, double alpha, double beta,
              double j_plus, double j_minus, double h_plus, double h_minus,
              const RateFamilyOptions& family, int n_blocks,
              std::size_t samples, const CommonOptions& common) {
  BoundReport report;
  if (variant == "hypercube") {
    report = bound_hypercube(alpha, beta);
  } else if (variant == "lattice") {
    report = bound_lattice(j_plus, j_minus, h_plus, h_minus);
  } else if (variant == "reversible") {
    report = bound_reversible(family.kappa);
  } else if (variant == "constant-speed") {
    report = bound_constant_speed(family.mu, family.nu);
  } else if (variant == "scheme") {
    report = bound_scheme(n_blocks);
  } else if (variant == "nonhomogeneous") {
    report =
        estimate_bound_nonhomogeneous(family.rates(), samples, common.seed);
    report.inputs["rates"] = family.to_json();
  } else {
    throw ConfigError("unknown bound variant: " + variant);
  }
  json result = report.to_json();
  result["provenance"] = provenance("bound", report.inputs, common.seed);
  write_text(common.out, result.dump(2) + "\n");
  return 0;
}

// --------------------------------------------------------------------------
// scheme-check: stationary pair-count bound and W1-vs-bound comparison

int run_scheme_check(int n_blocks, std::size_t replicas, double t_end,
                     std::size_t n_samples, std::size_t repetitions,
                     const CommonOptions& common) {
  json resolved{{"n", n_blocks},
                {"replicas", replicas},
                {"t_end", t_end},
                {"n_samples", n_samples},
                {"repetitions", repetitions}};
  std::vector<double> counts(replicas);
  parallel_replicas(replicas, [&](std::size_t rep) {
    Rng rng(common.seed, rep);
    counts[rep] = static_cast<double>(
        simulate_scheme_core(LatticeConfig{}, n_blocks, t_end, rng,
                             [](const MoveEvent&, const LatticeConfig&) {})
            .pair_count());
  });
  RunningStat stationary;
  for (double c : counts) stationary.add(c);

  RunningStat w1_reps;
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    Rng rng(common.seed + 77, rep);
    std::vector<LatticeConfig> a, b;
    for (std::size_t k = 0; k < n_samples; ++k)
      a.push_back(sample_scheme_bridge(n_blocks, rng).config);
    for (std::size_t k = 0; k < n_samples; ++k)
      b.push_back(sample_lattice_bridge(1.0, 1.0, rng));
    w1_reps.add(empirical_w1(a, b, common.seed + 7000 + rep).estimate);
  }
  const double jump_bound = 1.0 / (1.0 - 2.0 / n_blocks);
  const double distance_bound = bound_scheme(n_blocks).value;
  json result{
      {"provenance", provenance("scheme-check", resolved, common.seed)},
      {"stationary_mean_pairs", stationary.mean},
      {"stationary_se", stationary.standard_error()},
      {"jump_bound", jump_bound},
      {"jump_bound_satisfied",
       stationary.mean <= jump_bound + 3.0 * stationary.standard_error()},
      {"w1", w1_reps.mean},
      {"w1_se", w1_reps.standard_error()},
      {"distance_bound", distance_bound},
      {"distance_bound_satisfied",
       w1_reps.mean - 2.0 * w1_reps.standard_error() <= distance_bound}};
  write_text(common.out, result.dump(2) + "\n");
  return 0;
}

// --------------------------------------------------------------------------
// filtering: route by the decay exponent, report all intermediates

int run_filtering(double alpha, double horizon, double gamma, double k_const,
                  double m_const, double b0, const std::string& obs_path,
                  std::size_t grid_size, std::size_t replicas,
                  const CommonOptions& common) {
  const LinearModel model{alpha, horizon};
  const DriftSpec drift{b0, k_const, gamma, m_const};
  const ObservationPath obs = obs_path.empty()
                                  ? ObservationPath::zero(horizon)
                                  : read_observation_csv(obs_path, horizon);
  const FilteringMcParams mc{grid_size, replicas, common.seed};
  json resolved{{"alpha", alpha},   {"T", horizon},
                {"gamma", gamma},   {"K", k_const},
                {"M", m_const},     {"b0", b0},
                {"obs", obs_path},  {"grid_size", grid_size},
                {"replicas", replicas}};
  const FilteringBound bound =
      gamma >= 0.5 ? drift_bound_large_gamma(model, obs, drift, mc)
                   : drift_bound_small_gamma(model, obs, drift, mc);
  json result{{"provenance", provenance("filtering", resolved, common.seed)},
              {"regime", gamma >= 0.5 ? "large-gamma" : "small-gamma"},
              {"value", bound.value},
              {"se", bound.se},
              {"details", bound.details}};
  write_text(common.out, result.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bridge dynamics, couplings and Wasserstein bound toolkit"};
  app.set_config("--config", "", "INI configuration file (flags win)");
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--seed", common.seed, "base RNG seed")
      ->capture_default_str();
  app.add_option("--out,-o", common.out, "output path ('-' for stdout)")
      ->capture_default_str();

  std::string model = "lattice";
  double alpha = 1.0, beta = 1.0;
  double j_plus = 1.0, j_minus = 1.0, h_plus = 1.0, h_minus = 1.0;
  int n_blocks = 10;
  double t_end = 50.0;
  std::size_t count = 100, replicas = 10000, samples = 1000;
  std::size_t n_samples = 256, repetitions = 20;
  std::string grid_spec = "0.5,1,2,4";
  RateFamilyOptions family;

  auto add_model_flags = [&](CLI::App* cmd, bool with_second_law) {
    cmd->add_option("--model", model,
                    "hypercube|lattice|scheme|nonhomogeneous")
        ->capture_default_str();
    cmd->add_option("--alpha,--hypercube-rate", alpha, "hypercube jump rate")
        ->capture_default_str();
    cmd->add_option("--jplus,--up-rate", j_plus, "lattice up rate")
        ->capture_default_str();
    cmd->add_option("--jminus,--down-rate", j_minus, "lattice down rate")
        ->capture_default_str();
    cmd->add_option("--n,--scheme-resolution", n_blocks, "scheme block count")
        ->capture_default_str();
    cmd->add_option("--family,--rate-family", family.family,
                    "constant-speed|reversible")
        ->capture_default_str();
    cmd->add_option("--mu,--characteristic-upper", family.mu,
                    "upper reciprocal characteristic")
        ->capture_default_str();
    cmd->add_option("--nu,--characteristic-lower", family.nu,
                    "lower reciprocal characteristic")
        ->capture_default_str();
    cmd->add_option("--kappa,--rate-increment-bound", family.kappa,
                    "total-rate increment bound")
        ->capture_default_str();
    if (with_second_law) {
      cmd->add_option("--beta,--hypercube-rate-b", beta,
                      "second hypercube jump rate")
          ->capture_default_str();
      cmd->add_option("--hplus,--up-rate-b", h_plus, "second up rate")
          ->capture_default_str();
      cmd->add_option("--hminus,--down-rate-b", h_minus, "second down rate")
          ->capture_default_str();
    }
  };

  auto* sample_cmd =
      app.add_subcommand("sample", "draw configurations from a bridge law");
  add_model_flags(sample_cmd, false);
  sample_cmd->add_option("--count", count, "number of draws")
      ->capture_default_str();

  std::size_t trajectory_replicas = 1;
  auto* trajectory_cmd =
      app.add_subcommand("trajectory", "simulate one chain, dump its events");
  add_model_flags(trajectory_cmd, false);
  trajectory_cmd->add_option("--t-end", t_end, "simulation horizon")
      ->capture_default_str();
  trajectory_cmd
      ->add_option("--replicas", trajectory_replicas,
                   "replica count; above 1 emits the ensemble summary CSV")
      ->capture_default_str();

  auto* couple_cmd = app.add_subcommand(
      "couple", "coupled chains from neighbors: contraction curve");
  add_model_flags(couple_cmd, false);
  couple_cmd->add_option("--t-grid", grid_spec, "comma-separated times")
      ->capture_default_str();
  couple_cmd->add_option("--replicas", replicas, "coupled replicas")
      ->capture_default_str();

  auto* w1_cmd = app.add_subcommand(
      "wasserstein", "empirical W1 between two sampled bridge laws");
  add_model_flags(w1_cmd, true);
  w1_cmd->add_option("--n-samples", n_samples, "sample size per side")
      ->capture_default_str();
  w1_cmd->add_option("--repetitions", repetitions, "independent repetitions")
      ->capture_default_str();

  std::string variant = "lattice";
  auto* bound_cmd =
      app.add_subcommand("bound", "closed-form and Monte Carlo bounds");
  bound_cmd
      ->add_option("--variant", variant,
                   "hypercube|lattice|reversible|constant-speed|scheme|"
                   "nonhomogeneous")
      ->capture_default_str();
  add_model_flags(bound_cmd, true);
  bound_cmd->add_option("--samples", samples, "Monte Carlo sample count")
      ->capture_default_str();

  auto* scheme_cmd = app.add_subcommand(
      "scheme-check", "scheme chain stationary bound and W1 comparison");
  scheme_cmd->add_option("--n,--scheme-resolution", n_blocks, "block count")
      ->capture_default_str();
  scheme_cmd->add_option("--replicas", replicas, "chain replicas")
      ->capture_default_str();
  scheme_cmd->add_option("--t-end", t_end, "chain horizon")
      ->capture_default_str();
  scheme_cmd->add_option("--n-samples", n_samples, "sample size per side")
      ->capture_default_str();
  scheme_cmd->add_option("--repetitions", repetitions, "W1 repetitions")
      ->capture_default_str();

  double gamma = 0.5, k_const = 1.0, m_const = 1.0, b0 = 0.0;
  double horizon = 1.0;
  std::string obs_path;
  std::size_t grid_size = 256;
  auto* filter_cmd = app.add_subcommand(
      "filtering", "drift-perturbation bound with all intermediates");
  filter_cmd->add_option("--alpha,--coupling", alpha, "observation coupling")
      ->capture_default_str();
  filter_cmd->add_option("--t-horizon", horizon, "time horizon T")
      ->capture_default_str();
  filter_cmd
      ->add_option("--gamma,--drift-decay", gamma, "derivative decay exponent")
      ->capture_default_str();
  filter_cmd
      ->add_option("--K,--drift-scale", k_const, "derivative scale constant")
      ->capture_default_str();
  filter_cmd
      ->add_option("--M,--second-derivative-bound", m_const,
                   "second derivative bound")
      ->capture_default_str();
  filter_cmd->add_option("--b0,--drift-at-zero", b0, "drift at the origin")
      ->capture_default_str();
  filter_cmd
      ->add_option("--obs,--observation", obs_path,
                   "observation CSV (t,z); absent means z = 0")
      ->capture_default_str();
  filter_cmd->add_option("--grid-size", grid_size, "sup-moment grid")
      ->capture_default_str();
  filter_cmd->add_option("--replicas", replicas, "sup-moment replicas")
      ->capture_default_str();

  // parent-level flags (--seed, --out, --config) may follow the subcommand
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (sample_cmd->parsed())
      return run_sample(model, alpha, j_plus, j_minus, n_blocks, family,
                        count, common);
    if (trajectory_cmd->parsed())
      return run_trajectory(model, alpha, j_plus, j_minus, n_blocks, family,
                            t_end, trajectory_replicas, common);
    if (couple_cmd->parsed())
      return run_couple(model, alpha, j_plus, j_minus, grid_spec, replicas,
                        common);
    if (w1_cmd->parsed())
      return run_wasserstein(model, alpha, beta, j_plus, j_minus, h_plus,
                             h_minus, n_blocks, n_samples, repetitions,
                             common);
    if (bound_cmd->parsed())
      return run_bound(variant, alpha, beta, j_plus, j_minus, h_plus, h_minus,
                       family, n_blocks, samples, common);
    if (scheme_cmd->parsed())
      return run_scheme_check(n_blocks, replicas, t_end, n_samples,
                              repetitions, common);
    if (filter_cmd->parsed())
      return run_filtering(alpha, horizon, gamma, k_const, m_const, b0,
                           obs_path, grid_size, replicas, common);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const ThinningMajorantError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
