// spinent: thermal entanglement witnesses for alternating spin-1/2 chains.

#include "spinent/dimer.hpp"
#include "spinent/pairent.hpp"
#include "spinent/scattering.hpp"
#include "spinent/workbench.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace spinent;
using namespace spinent::workbench;
namespace fs = std::filesystem;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// Settings shared by every subcommand, kept as text and funnelled through
// apply_setting so flags and config files take the same path.
struct CommonFlags {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> values;
  std::map<std::string, std::string> raw;

  void add(CLI::App& app) {
    app.add_option("--config", config_path, "key = value configuration file (flags override it)");
    for (const char* key : {"model", "sites", "j1", "j2", "boundary", "g", "tmin", "tmax", "steps", "seed", "out"}) {
      const std::string help = std::string("override '") + key + "'";
      app.add_option(std::string("--") + key, raw[key], help);
    }
  }

  RunConfig resolve(const CLI::App& app) const {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config_file(config_path);
    // model first so an explicit --sites wins over "exact-N"
    for (const char* key : {"model", "sites", "j1", "j2", "boundary", "g", "tmin", "tmax", "steps", "seed", "out"})
      if (app.count(std::string("--") + key) > 0) apply_setting(config, key, raw.at(key));
    config.validate();
    return config;
  }
};

std::ofstream open_output(const RunConfig& config, const std::string& name, std::string& path) {
  std::error_code ec;
  fs::create_directories(config.out, ec);
  path = (fs::path(config.out) / name).string();
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  return out;
}

void run_sweep(const RunConfig& config) {
  for (const auto& p : export_curves(config)) std::cout << "wrote " << p << "\n";
}

void run_witness(const RunConfig& config) {
  const WitnessSweep sweep = witness_report(config);
  std::string path;
  std::ofstream csv = open_output(config, "witness_vs_T.csv", path);
  write_witness_csv(csv, sweep);
  write_witness_summary(std::cout, config, sweep);
  std::cout << "wrote " << path << "\n";
}

struct ScatterFlags {
  std::string data;
  double corr = 0.0;
  double temperature = 0.31;
  double noise = 0.01;
  int n_q = 50;
  int n_omega = 100;
  std::vector<double> q_from{0.2, 0.0, 0.3};
  std::vector<double> q_to{2.2, 0.5, 1.8};
  double omega_min = 0.30;
  double omega_max = 0.60;
  double gamma0 = 0.02;
  double gamma1 = 0.0;
  double renormalization = 1.0;
  bool no_mirror = false;
  std::vector<std::string> free{"corr"};
  int max_iterations = 200;
};

scattering::SmaParams sma_params(const RunConfig& config, const ScatterFlags& f) {
  scattering::SmaParams p;
  p.j1 = config.chain.j1;
  p.j_u = {config.chain.j2};
  p.gamma0 = f.gamma0;
  p.gamma1 = f.gamma1;
  p.renormalization = f.renormalization;
  return p;
}

scattering::LatticeGeometry geometry(const RunConfig& config, const ScatterFlags& f) {
  auto g = scattering::LatticeGeometry::copper_nitrate(config.chain.j1);
  g.average_mirror = !f.no_mirror;
  return g;
}

void run_scatter_gen(const RunConfig& config, const ScatterFlags& f, bool corr_given) {
  double corr = f.corr;
  if (!corr_given) corr = ChainModel(config).evaluate(f.temperature).corr;
  const ClampedCorrelation clamped = clamp_physical_correlation(corr);
  if (clamped.clamped) std::cerr << clamped.warning << "\n";
  auto grid = scattering::line_grid({f.q_from[0], f.q_from[1], f.q_from[2]}, {f.q_to[0], f.q_to[1], f.q_to[2]},
                                    f.n_q, f.omega_min, f.omega_max, f.n_omega);
  grid.temperature = f.temperature;
  grid.noise = f.noise;
  const std::vector<double> correlators{clamped.value};
  const auto data =
      scattering::generate_synthetic_dataset(sma_params(config, f), correlators, geometry(config, f), grid, config.seed);
  std::string path;
  std::ofstream out = open_output(config, "scattering.csv", path);
  scattering::write_dataset_csv(out, data);
  std::cout << "intradimer correlation " << fmt("%.6f", clamped.value) << " at " << fmt("%.4g", f.temperature)
            << " K, " << data.records.size() << " points, seed " << config.seed << "\n";
  std::cout << "wrote " << path << "\n";
}

void run_fit(const RunConfig& config, const ScatterFlags& f) {
  std::ifstream in(f.data);
  if (!in) throw std::invalid_argument("cannot open " + f.data);
  const auto data = scattering::read_dataset_csv(in);
  scattering::FitSelection sel;
  sel.corr = false;
  for (const auto& name : f.free) {
    if (name == "corr") sel.corr = true;
    else if (name == "j_u" || name == "j2") sel.j_u = {0};
    else if (name == "gamma0") sel.gamma0 = true;
    else if (name == "gamma1") sel.gamma1 = true;
    else if (name == "n") sel.renormalization = true;
    else throw std::invalid_argument("unknown free parameter '" + name + "'");
  }
  const std::vector<double> start{f.corr};
  scattering::FitOptions options;
  options.max_iterations = f.max_iterations;
  const auto fit =
      scattering::fit_intradimer_correlation(data, sma_params(config, f), start, geometry(config, f), sel, options);

  std::ostringstream report;
  report << "points: " << data.records.size() << ", temperature " << fmt("%.6g", data.temperature) << " K\n";
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    report << fit.names[i] << " = " << fmt("%.8g", fit.values[k]) << " +- " << fmt("%.3g", fit.errors[k]) << "\n";
  }
  report << "chi2 = " << fmt("%.6g", fit.chi2) << ", reduced chi2 = " << fmt("%.6g", fit.reduced_chi2)
         << ", iterations = " << fit.iterations << "\n";
  if (fit.degenerate) report << "warning: degenerate covariance, some parameters are not determined by the data\n";
  const ClampedCorrelation clamped = clamp_physical_correlation(fit.corr);
  if (clamped.clamped) report << clamped.warning << "\n";
  const WitnessReport w = correlation_witness(clamped.value, data.temperature);
  report << "correlation witness: |corr| - 1/4 = " << fmt("%.6g", w.margin) << " -> "
         << (w.entangled ? "entangled" : "not certified") << "\n";

  std::string path;
  std::ofstream out = open_output(config, "fit_result.txt", path);
  out << report.str();
  std::cout << report.str() << "wrote " << path << "\n";
}

void run_ingest(const RunConfig& config, const std::string& data_path) {
  const SusceptibilityCurve experiment = ingest_susceptibility(data_path);
  const ChainModel model(config);
  const SusceptibilityCurve theory = theory_curve(model, config.temperatures(), experiment.units, config.g);
  const RescaleResult r = rescale_theory(theory, experiment, config.g);

  std::string path;
  std::ofstream out = open_output(config, "rescaled_vs_T.csv", path);
  write_rescaled_csv(out, experiment, r);
  write_rescale_summary(std::cout, config, experiment, r);
  std::cout << "wrote " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal entanglement witnesses for alternating spin-1/2 chains"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonFlags common;
  common.add(app);

  ScatterFlags sf;
  std::string ingest_path;

  auto* sweep = app.add_subcommand("sweep", "write correlation_vs_T.csv and susceptibility_vs_T.csv");
  auto* witness = app.add_subcommand("witness", "witness crossings and per-temperature margins");
  auto* fit = app.add_subcommand("fit", "fit the intradimer correlation to a scattering CSV");
  auto* gen = app.add_subcommand("scatter-gen", "synthetic single-mode scattering dataset");
  auto* ingest = app.add_subcommand("ingest", "rescale the model to a measured susceptibility curve");

  fit->add_option("--data", sf.data, "scattering CSV (h,k,l,omega_mev,s_value,sigma)")->required();
  fit->add_option("--free", sf.free, "free parameters: corr j_u gamma0 gamma1 n")->delimiter(',');
  fit->add_option("--start", sf.corr, "initial intradimer correlation")->default_val(-0.5);
  fit->add_option("--max-iterations", sf.max_iterations, "Gauss-Newton iteration limit")->default_val(200);
  auto* corr_opt = gen->add_option("--corr", sf.corr, "intradimer correlation (default: model value at --temperature)");
  gen->add_option("--temperature", sf.temperature, "sample temperature in K")->default_val(0.31);
  gen->add_option("--noise", sf.noise, "relative Gaussian noise")->default_val(0.01);
  gen->add_option("--nq", sf.n_q, "wave vectors on the path")->default_val(50);
  gen->add_option("--nomega", sf.n_omega, "energies per wave vector")->default_val(100);
  gen->add_option("--q-from", sf.q_from, "path start h k l")->expected(3);
  gen->add_option("--q-to", sf.q_to, "path end h k l")->expected(3);
  gen->add_option("--omega-min", sf.omega_min, "lowest energy transfer, meV");
  gen->add_option("--omega-max", sf.omega_max, "highest energy transfer, meV");
  for (auto* sub : {fit, gen}) {
    sub->add_option("--gamma0", sf.gamma0, "linewidth offset, meV");
    sub->add_option("--gamma1", sf.gamma1, "linewidth modulation, meV");
    sub->add_option("--renormalization", sf.renormalization, "band renormalization n(T)");
    sub->add_flag("--no-mirror", sf.no_mirror, "use d1 as given instead of averaging over its k mirror");
  }
  ingest->add_option("--data", ingest_path, "CSV with t_kelvin,chi and a '# units=' comment")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    const RunConfig config = common.resolve(app);
    if (*sweep) run_sweep(config);
    else if (*witness) run_witness(config);
    else if (*fit) run_fit(config, sf);
    else if (*gen) run_scatter_gen(config, sf, corr_opt->count() > 0);
    else if (*ingest) run_ingest(config, ingest_path);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
