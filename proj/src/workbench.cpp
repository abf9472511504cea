#include "spinent/workbench.hpp"

#include "spinent/dimer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace spinent::workbench {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": '" + text + "' is not a number");
  }
  if (trim(text.substr(used)).size() != 0)
    throw std::invalid_argument(what + ": '" + text + "' is not a number");
  return v;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string num17(double v) { return fmt("%.17g", v); }

const double kChshCorrelation = 3.0 / (4.0 * std::sqrt(2.0));

}  // namespace

Model parse_model(const std::string& name) {
  if (name == "dimer") return Model::dimer;
  if (name == "exact" || name.rfind("exact-", 0) == 0) return Model::exact;
  throw std::invalid_argument("unknown model '" + name + "' (expected dimer or exact)");
}

std::string to_string(Model m) { return m == Model::dimer ? "dimer" : "exact"; }

std::string to_string(ChiUnits u) { return u == ChiUnits::reduced ? "reduced" : "emu_per_mol"; }

void RunConfig::validate() const {
  if (model == Model::exact) chain.validate();
  else if (!(chain.j1 > 0.0)) throw std::invalid_argument("j1 must be positive");
  if (!(g > 0.0)) throw std::invalid_argument("g must be positive");
  if (!(t_min > 0.0)) throw std::invalid_argument("tmin must be positive");
  if (!(t_max > t_min)) throw std::invalid_argument("tmax must exceed tmin");
  if (steps < 2) throw std::invalid_argument("steps must be >= 2");
}

std::vector<double> RunConfig::temperatures() const {
  std::vector<double> t(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) t[static_cast<std::size_t>(i)] = t_min + (t_max - t_min) * i / (steps - 1);
  return t;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  const std::string k = trim(key);
  const std::string v = trim(value);
  if (k == "j1") config.chain.j1 = parse_double(v, k);
  else if (k == "j2") config.chain.j2 = parse_double(v, k);
  else if (k == "sites") {
    const double n = parse_double(v, k);
    if (n != std::floor(n)) throw std::invalid_argument("sites must be an integer");
    config.chain.n_sites = static_cast<int>(n);
  } else if (k == "boundary") config.chain.boundary = parse_boundary(v);
  else if (k == "model") {
    config.model = parse_model(v);
    if (v.rfind("exact-", 0) == 0) config.chain.n_sites = static_cast<int>(parse_double(v.substr(6), "model"));
  } else if (k == "g") config.g = parse_double(v, k);
  else if (k == "tmin") config.t_min = parse_double(v, k);
  else if (k == "tmax") config.t_max = parse_double(v, k);
  else if (k == "steps") config.steps = static_cast<int>(parse_double(v, k));
  else if (k == "seed") config.seed = static_cast<std::uint64_t>(parse_double(v, k));
  else if (k == "out") config.out = v;
  else throw std::invalid_argument("unknown configuration key '" + k + "'");
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected key = value");
    try {
      apply_setting(base, t.substr(0, eq), t.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

void SusceptibilityCurve::validate() const {
  if (t.empty()) throw std::invalid_argument("susceptibility curve is empty");
  if (t.size() != chi.size()) throw std::invalid_argument("susceptibility curve size mismatch");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0 && !(t[i] > t[i - 1]))
      throw std::invalid_argument("susceptibility temperatures must increase strictly");
    if (!(chi[i] >= 0.0)) throw std::invalid_argument("susceptibility values must be >= 0");
  }
}

double molar_to_reduced(double chi_molar, double temperature, double g) {
  return chi_molar * temperature / (cgs::kMolarCurieUnit * g * g);
}

double reduced_to_molar(double chi_reduced, double temperature, double g) {
  return chi_reduced * cgs::kMolarCurieUnit * g * g / temperature;
}

SusceptibilityCurve ingest_susceptibility(std::istream& in) {
  std::optional<ChiUnits> declared;
  std::optional<ChiUnits> from_column;
  int t_col = -1;
  int chi_col = -1;
  bool header_seen = false;
  std::vector<std::pair<double, double>> rows;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text[0] == '#') {
      const auto pos = text.find("units=");
      if (pos != std::string::npos) {
        const std::string u = trim(text.substr(pos + 6));
        if (u == "reduced") declared = ChiUnits::reduced;
        else if (u == "emu_per_mol") declared = ChiUnits::emu_per_mol;
        else throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown units '" + u + "'");
      }
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));

    if (!header_seen) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "t_kelvin") t_col = static_cast<int>(i);
        else if (cells[i] == "chi") chi_col = static_cast<int>(i);
        else if (cells[i] == "chi_reduced") {
          chi_col = static_cast<int>(i);
          from_column = ChiUnits::reduced;
        }
      }
      if (t_col < 0 || chi_col < 0)
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": header must name t_kelvin and chi (or chi_reduced) columns");
      header_seen = true;
      continue;
    }
    const std::string where = "line " + std::to_string(line_no);
    const auto need = static_cast<std::size_t>(std::max(t_col, chi_col));
    if (cells.size() <= need) throw std::invalid_argument(where + ": too few columns");
    const double t = parse_double(cells[static_cast<std::size_t>(t_col)], where);
    const double chi = parse_double(cells[static_cast<std::size_t>(chi_col)], where);
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument(where + ": temperature must be positive");
    if (!(chi >= 0.0) || !std::isfinite(chi)) throw std::invalid_argument(where + ": negative or non-finite susceptibility");
    rows.emplace_back(t, chi);
  }
  if (!header_seen) throw std::invalid_argument("susceptibility file is empty");
  if (rows.empty()) throw std::invalid_argument("susceptibility file has no data rows");
  if (from_column && declared && *declared != *from_column)
    throw std::invalid_argument("chi_reduced column conflicts with declared units");
  if (!from_column && !declared)
    throw std::invalid_argument("units not declared; add '# units=emu_per_mol' or '# units=reduced'");

  std::map<double, std::pair<double, int>> merged;
  for (const auto& [t, chi] : rows) {
    auto& acc = merged[t];
    acc.first += chi;
    acc.second += 1;
  }
  SusceptibilityCurve curve;
  curve.units = from_column ? *from_column : *declared;
  for (const auto& [t, acc] : merged) {
    curve.t.push_back(t);
    curve.chi.push_back(acc.second == 1 ? acc.first : acc.first / acc.second);
  }
  return curve;
}

SusceptibilityCurve ingest_susceptibility(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return ingest_susceptibility(in);
}

void write_susceptibility_curve(std::ostream& out, const SusceptibilityCurve& curve) {
  out << "# units=" << to_string(curve.units) << "\n";
  out << "t_kelvin,chi\n";
  for (std::size_t i = 0; i < curve.size(); ++i) out << num17(curve.t[i]) << ',' << num17(curve.chi[i]) << '\n';
}

RescaleResult rescale_theory(const SusceptibilityCurve& theory,
                             const SusceptibilityCurve& experiment, double g) {
  theory.validate();
  experiment.validate();
  if (theory.units != experiment.units)
    throw std::invalid_argument("theory and experiment must use the same susceptibility units");
  if (!(g > 0.0)) throw std::invalid_argument("g must be positive");

  const auto tmax_it = std::max_element(theory.chi.begin(), theory.chi.end());
  const double theory_max = *tmax_it;
  if (!(theory_max > 0.0)) throw std::invalid_argument("theoretical maximum is zero");
  const auto peak = static_cast<std::size_t>(tmax_it - theory.chi.begin());
  if (peak == 0 || peak + 1 == theory.size())
    throw std::invalid_argument("theory curve does not contain its maximum inside the range");
  const double exp_max = *std::max_element(experiment.chi.begin(), experiment.chi.end());

  RescaleResult r;
  r.scale = exp_max / theory_max;
  r.theory = theory;
  for (double& c : r.theory.chi) c *= r.scale;

  const ChiUnits units = experiment.units;
  auto bound = [units, g](double t) {
    return units == ChiUnits::reduced ? kSusceptibilityBound : reduced_to_molar(kSusceptibilityBound, t, g);
  };
  auto experiment_at = [&experiment](double t) {
    const auto& ts = experiment.t;
    if (t <= ts.front()) return experiment.chi.front();
    if (t >= ts.back()) return experiment.chi.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
    const std::size_t lo = hi - 1;
    const double f = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return experiment.chi[lo] + f * (experiment.chi[hi] - experiment.chi[lo]);
  };

  r.witness.units = units;
  r.witness.t = experiment.t;
  std::vector<double> unscaled;
  std::vector<double> diff;
  for (double t : experiment.t) {
    unscaled.push_back(bound(t));
    r.witness.chi.push_back(r.scale * bound(t));
  }
  for (std::size_t i = 0; i < experiment.size(); ++i) diff.push_back(experiment.chi[i] - r.witness.chi[i]);
  r.crossings_unscaled = count_crossings(experiment.chi, unscaled);
  r.crossings_rescaled = count_crossings(experiment.chi, r.witness.chi);

  const double s = r.scale;
  auto gap = [&](double t) { return experiment_at(t) - s * bound(t); };
  if (experiment.size() >= 2) r.crossing = crossing_temperature(experiment.t, diff, 0.0, gap);

  if (r.crossing) {
    const double lo_t = experiment.t.front();
    const double hi_t = experiment.t.back();
    constexpr int kSamples = 4001;
    auto within = [&](double t) { return std::abs(gap(t)) < 0.02 * s * bound(t); };
    double lo = *r.crossing;
    double hi = *r.crossing;
    const double step = (hi_t - lo_t) / (kSamples - 1);
    for (double t = *r.crossing; t >= lo_t && within(t); t -= step) lo = t;
    for (double t = *r.crossing; t <= hi_t && within(t); t += step) hi = t;
    r.crossing_band = std::make_pair(lo, hi);
  }
  return r;
}

void write_rescaled_csv(std::ostream& out, const SusceptibilityCurve& experiment,
                        const RescaleResult& result) {
  out << "# units=" << to_string(experiment.units) << "\n";
  out << "t_kelvin,chi_experiment,witness_rescaled\n";
  for (std::size_t i = 0; i < experiment.size(); ++i)
    out << num17(experiment.t[i]) << ',' << num17(experiment.chi[i]) << ',' << num17(result.witness.chi[i]) << '\n';
}

void write_rescale_summary(std::ostream& out, const RunConfig& config,
                           const SusceptibilityCurve& experiment, const RescaleResult& result) {
  out << "experimental curve: " << experiment.size() << " points, units " << to_string(experiment.units) << "\n";
  if (experiment.units == ChiUnits::emu_per_mol)
    out << "note: emu/mol is read per mole of spin-1/2 sites; data normalised per formula unit "
           "or per dimer must be converted first\n";
  out << "model: " << to_string(config.model);
  if (config.model == Model::exact) out << " (N = " << config.chain.n_sites << ")";
  out << ", g = " << fmt("%.6g", config.g) << "\n";
  out << "scale factor max(experiment)/max(theory) = " << fmt("%.6f", result.scale) << "\n";
  out << "witness crossings: " << result.crossings_unscaled << " unscaled, " << result.crossings_rescaled
      << " rescaled\n";
  if (result.crossing) {
    out << "crossing temperature: " << fmt("%.4f K", *result.crossing);
    if (result.crossing_band)
      out << " (2% band " << fmt("%.4f", result.crossing_band->first) << " - "
          << fmt("%.4f K", result.crossing_band->second) << ")";
    out << "\n";
  } else {
    out << "crossing temperature: none in the experimental range\n";
  }
}

ChainModel::ChainModel(const RunConfig& config) : kind_(config.model), j1_(config.chain.j1) {
  if (kind_ == Model::exact)
    decomposition_ = std::make_shared<const SpectralDecomposition>(config.chain);
  else if (!(j1_ > 0.0))
    throw std::invalid_argument("j1 must be positive");
}

ModelSample ChainModel::evaluate(double temperature) const {
  ModelSample s;
  if (kind_ == Model::dimer) {
    const dimer::DimerParams p{j1_, temperature};
    s.corr = dimer::dimer_correlation(p);
    s.concurrence = dimer::dimer_concurrence(p);
    s.chi_reduced = dimer::dimer_susceptibility_reduced(p);
    return s;
  }
  const ThermalEnsemble ens(*decomposition_, temperature);
  s.corr = pair_correlators(ens, 0, 1).sum();
  s.concurrence = wootters_concurrence(reduced_pair_state(ens, 0, 1));
  s.chi_reduced = exact_susceptibility_reduced(ens);
  return s;
}

SusceptibilityCurve theory_curve(const ChainModel& model, const std::vector<double>& temperatures,
                                 ChiUnits units, double g) {
  SusceptibilityCurve c;
  c.units = units;
  for (double t : temperatures) {
    const double red = model.evaluate(t).chi_reduced;
    c.t.push_back(t);
    c.chi.push_back(units == ChiUnits::reduced ? red : reduced_to_molar(red, t, g));
  }
  return c;
}

WitnessSweep witness_report(const RunConfig& config) {
  config.validate();
  const ChainModel model(config);
  WitnessSweep w;
  w.temperatures = config.temperatures();
  std::vector<double> abs_corr;
  std::vector<double> chi;
  for (double t : w.temperatures) {
    const ModelSample s = model.evaluate(t);
    w.samples.push_back(s);
    w.correlation.push_back(correlation_witness(s.corr, t));
    w.susceptibility.push_back(susceptibility_witness(s.chi_reduced, t));
    abs_corr.push_back(std::abs(s.corr));
    chi.push_back(s.chi_reduced);
  }
  auto corr_model = [&model](double t) { return std::abs(model.evaluate(t).corr); };
  auto chi_model = [&model](double t) { return model.evaluate(t).chi_reduced; };
  w.correlation_crossing = crossing_temperature(w.temperatures, abs_corr, kCorrelationBound, corr_model);
  w.susceptibility_crossing = crossing_temperature(w.temperatures, chi, kSusceptibilityBound, chi_model);
  w.chsh_crossing = crossing_temperature(w.temperatures, abs_corr, kChshCorrelation, corr_model);

  const std::string range = "[" + fmt("%.4g", config.t_min) + ", " + fmt("%.4g", config.t_max) + "] K";
  if (!w.correlation_crossing)
    w.notes.push_back("no correlation-witness crossing in " + range);
  if (!w.susceptibility_crossing)
    w.notes.push_back("no susceptibility-witness crossing in " + range);
  if (w.chsh_crossing && w.correlation_crossing) {
    w.notes.push_back("Bell parameter (8 sqrt2/3)|corr| exceeds 2 only below " +
                      fmt("%.4f", *w.chsh_crossing) +
                      " K, while the correlation witness certifies entanglement up to " +
                      fmt("%.4f", *w.correlation_crossing) +
                      " K: CHSH violation does not extend to the entanglement threshold");
  } else if (!w.chsh_crossing) {
    const bool above = !abs_corr.empty() && abs_corr.front() > kChshCorrelation;
    w.notes.push_back(above ? "Bell parameter exceeds 2 over the whole grid"
                            : "Bell parameter does not exceed 2 anywhere on the grid");
  }
  return w;
}

void write_witness_csv(std::ostream& out, const WitnessSweep& sweep) {
  out << "t_kelvin,kind,value,bound,margin,entangled\n";
  auto row = [&out](const WitnessReport& r) {
    out << num17(r.temperature) << ',' << to_string(r.kind) << ',' << num17(r.value) << ','
        << num17(r.separable_bound) << ',' << num17(r.margin) << ',' << (r.entangled ? 1 : 0) << '\n';
  };
  for (std::size_t i = 0; i < sweep.temperatures.size(); ++i) {
    row(sweep.correlation[i]);
    row(sweep.susceptibility[i]);
  }
}

void write_witness_summary(std::ostream& out, const RunConfig& config, const WitnessSweep& sweep) {
  out << "model: " << to_string(config.model);
  if (config.model == Model::exact)
    out << " (N = " << config.chain.n_sites << ", " << to_string(config.chain.boundary) << ")";
  out << "\n";
  out << "j1 = " << fmt("%.6g", config.chain.j1) << " meV, j2 = "
      << fmt("%.6g", config.model == Model::exact ? config.chain.j2 : 0.0) << " meV, g = "
      << fmt("%.6g", config.g) << "\n";
  out << "grid: " << config.steps << " temperatures in [" << fmt("%.6g", config.t_min) << ", "
      << fmt("%.6g", config.t_max) << "] K\n";
  auto line = [&out](const char* label, const std::optional<double>& t) {
    out << label << (t ? fmt("%.6f K", *t) : std::string("none")) << "\n";
  };
  line("correlation witness crossing (|corr| = 1/4): ", sweep.correlation_crossing);
  line("susceptibility witness crossing (chi_red = 1/6): ", sweep.susceptibility_crossing);
  line("CHSH crossing (Bell parameter = 2): ", sweep.chsh_crossing);
  if (config.model == Model::dimer)
    out << "dimer closed form j1/(k_B ln 3): " << fmt("%.6f K", dimer::critical_temperature_theory(config.chain.j1)) << "\n";
  for (const auto& n : sweep.notes) out << "note: " << n << "\n";
}

void write_correlation_csv(std::ostream& out, const WitnessSweep& sweep) {
  out << "t_kelvin,corr,concurrence,chsh,witness_margin\n";
  for (std::size_t i = 0; i < sweep.temperatures.size(); ++i) {
    const auto& s = sweep.samples[i];
    out << num17(sweep.temperatures[i]) << ',' << num17(s.corr) << ',' << num17(s.concurrence) << ','
        << num17(chsh_parameter(s.corr)) << ',' << num17(sweep.correlation[i].margin) << '\n';
  }
}

void write_susceptibility_csv(std::ostream& out, const WitnessSweep& sweep) {
  out << "# units=reduced\n";
  out << "t_kelvin,chi_reduced,witness_bound_reduced,entangled\n";
  for (std::size_t i = 0; i < sweep.temperatures.size(); ++i) {
    const auto& r = sweep.susceptibility[i];
    out << num17(sweep.temperatures[i]) << ',' << num17(r.value) << ',' << num17(r.separable_bound)
        << ',' << (r.entangled ? 1 : 0) << '\n';
  }
}

std::vector<std::string> export_curves(const RunConfig& config) {
  const WitnessSweep sweep = witness_report(config);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.out, ec);
  const std::string corr_path = (fs::path(config.out) / "correlation_vs_T.csv").string();
  const std::string chi_path = (fs::path(config.out) / "susceptibility_vs_T.csv").string();
  std::ofstream corr_out(corr_path);
  std::ofstream chi_out(chi_path);
  if (!corr_out || !chi_out) throw std::runtime_error("cannot write curves to " + config.out);
  write_correlation_csv(corr_out, sweep);
  write_susceptibility_csv(chi_out, sweep);
  if (!corr_out || !chi_out) throw std::runtime_error("write failed in " + config.out);
  return {corr_path, chi_path};
}

}  // namespace spinent::workbench
