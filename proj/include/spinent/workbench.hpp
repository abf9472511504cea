#pragma once

#include "spinent/pairent.hpp"
#include "spinent/spinchain.hpp"
#include "spinent/thermal.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spinent::workbench {

enum class Model { dimer, exact };
Model parse_model(const std::string& name);
std::string to_string(Model m);

/// Run settings shared by all CLI subcommands.
struct RunConfig {
  ChainSpec chain;
  double g = 2.22;
  double t_min = 0.5;
  double t_max = 10.0;
  int steps = 40;
  Model model = Model::dimer;
  std::uint64_t seed = 1;
  std::string out = ".";

  void validate() const;
  /// Linear grid of `steps` temperatures from t_min to t_max.
  std::vector<double> temperatures() const;
};

/// Applies one `key = value` setting. Keys match the CLI flag names
/// (j1, j2, sites, boundary, model, g, tmin, tmax, steps, seed, out).
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Reads `key = value` lines ('#' comments allowed) on top of `base`.
RunConfig load_config_file(const std::string& path, RunConfig base = {});

enum class ChiUnits { reduced, emu_per_mol };
std::string to_string(ChiUnits u);

struct SusceptibilityCurve {
  std::vector<double> t;    // K, strictly increasing
  std::vector<double> chi;  // >= 0
  ChiUnits units = ChiUnits::reduced;

  void validate() const;
  std::size_t size() const { return t.size(); }
};

/// emu/mol (per mole of spins) <-> k T chi / (g^2 mu_B^2 N).
double molar_to_reduced(double chi_molar, double temperature, double g);
double reduced_to_molar(double chi_reduced, double temperature, double g);

/// CSV with a header naming a `t_kelvin` column and a `chi` column (units
/// declared by a "# units=emu_per_mol" or "# units=reduced" comment) or a
/// `chi_reduced` column. Rows are sorted by temperature and duplicate
/// temperatures averaged. Errors carry the offending line number.
SusceptibilityCurve ingest_susceptibility(std::istream& in);
SusceptibilityCurve ingest_susceptibility(const std::string& path);

void write_susceptibility_curve(std::ostream& out, const SusceptibilityCurve& curve);

struct RescaleResult {
  double scale = 1.0;
  SusceptibilityCurve theory;   // rescaled
  SusceptibilityCurve witness;  // rescaled separable bound on the experimental grid
  std::optional<double> crossing;
  /// Temperatures around the crossing where |experiment - witness| < 2% of the witness.
  std::optional<std::pair<double, double>> crossing_band;
  int crossings_unscaled = 0;
  int crossings_rescaled = 0;
};

/// Scales theory and witness by max(experiment) / max(theory) and intersects
/// the rescaled witness with the (linearly interpolated) experimental curve.
RescaleResult rescale_theory(const SusceptibilityCurve& theory,
                             const SusceptibilityCurve& experiment, double g);

/// Rows t_kelvin,chi_experiment,witness_rescaled on the experimental grid.
void write_rescaled_csv(std::ostream& out, const SusceptibilityCurve& experiment,
                        const RescaleResult& result);
void write_rescale_summary(std::ostream& out, const RunConfig& config,
                           const SusceptibilityCurve& experiment, const RescaleResult& result);

/// Thermal observables of the configured model at one temperature.
struct ModelSample {
  double corr = 0.0;         // intradimer <S_0 . S_1>
  double concurrence = 0.0;
  double chi_reduced = 0.0;
};

class ChainModel {
 public:
  explicit ChainModel(const RunConfig& config);
  ModelSample evaluate(double temperature) const;
  Model kind() const { return kind_; }

 private:
  Model kind_;
  double j1_;
  std::shared_ptr<const SpectralDecomposition> decomposition_;
};

/// Susceptibility of the model on the given grid in the requested units.
SusceptibilityCurve theory_curve(const ChainModel& model, const std::vector<double>& temperatures,
                                 ChiUnits units, double g);

struct WitnessSweep {
  std::vector<double> temperatures;
  std::vector<ModelSample> samples;
  std::vector<WitnessReport> correlation;
  std::vector<WitnessReport> susceptibility;
  std::optional<double> correlation_crossing;
  std::optional<double> susceptibility_crossing;
  std::optional<double> chsh_crossing;
  std::vector<std::string> notes;
};

WitnessSweep witness_report(const RunConfig& config);

/// Rows t_kelvin,kind,value,bound,margin,entangled for both witnesses.
void write_witness_csv(std::ostream& out, const WitnessSweep& sweep);

/// Human-readable summary (deterministic).
void write_witness_summary(std::ostream& out, const RunConfig& config, const WitnessSweep& sweep);

/// Writes correlation_vs_T.csv and susceptibility_vs_T.csv into config.out and
/// returns the two paths.
std::vector<std::string> export_curves(const RunConfig& config);
void write_correlation_csv(std::ostream& out, const WitnessSweep& sweep);
void write_susceptibility_csv(std::ostream& out, const WitnessSweep& sweep);

}  // namespace spinent::workbench
