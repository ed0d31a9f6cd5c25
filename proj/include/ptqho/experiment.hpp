#ifndef PTQHO_EXPERIMENT_HPP
#define PTQHO_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "ptqho/cavity.hpp"
#include "ptqho/diagnostics.hpp"

namespace ptqho {

enum class Scenario { fig2, hermitian_control, matched_waist, modes, canonical, sweep };

const char* scenario_name(Scenario s);
Scenario parse_scenario(const std::string& name);

struct RunSettings {
    long round_trips = 60;
    std::vector<long> snapshots;
    double power_floor_rel = 1e-12;   // q(n) undefined below this fraction of peak power
};

struct SweepSettings {
    std::string parameter = "s";      // s | g_p | w_e
    double from = 0.0;
    double to = 483.0;
    int count = 11;
};

struct CanonicalSettings {
    double dt = 0.0;                  // 0 resolves to 1e-3 / Omega
};

struct ExperimentSpec {
    Scenario scenario = Scenario::fig2;
    CavityConfig cavity;
    RunSettings run;
    SweepSettings sweep;
    CanonicalSettings canonical;
    bool waist_matched = false;       // excitation waist tied to the TEM00 waist
};

/// Parse and validate a JSON config (strict: unknown keys are errors),
/// apply scenario defaults, resolve derived defaults (pump offset w_p/2,
/// matched waist).  Throws ConfigError with the offending key path.
ExperimentSpec load_config(const std::string& path);
ExperimentSpec parse_config(const std::string& json_text);

/// Serialize the fully resolved spec (echoed into the output directory).
std::string resolved_config_json(const ExperimentSpec& spec);

/// Run the scenario and write resolved_config.json, observables.csv,
/// derived_params.json and any scenario-specific files into out_dir.
/// Returns 0, or 4 when `check` is set and the scenario's pass condition
/// fails.  Numerical failures surface as exceptions.
int run_experiment(const ExperimentSpec& spec, const std::string& out_dir, bool check = false);

/// Map run driving the cavity for `round_trips` trips from an empty field,
/// recording one observable sample per trip (sample 0 is the empty cavity).
ObservableSeries run_cavity_series(const ExperimentSpec& spec,
                                   std::vector<TransverseField>* snapshots_out = nullptr);

/// Post-excitation analysis window [lo, hi] used for fits and checks:
/// lo = ceil(t_p + 3 tau_p), hi = min(run length, lo + ceil(3 periods)).
struct AnalysisWindow {
    long lo;
    long hi;
};
AnalysisWindow analysis_window(const ExperimentSpec& spec);

/// Write the observable series with the closed-form overlay columns
/// ("n,P,q,p_defined,q_theory_H,q_theory_NH", 17 significant digits).
/// Theory columns are nan before theory_start or when cal is null.
void emit_plot_data(const ObservableSeries& series, const OverlayCalibration* cal,
                    const OscillatorParams& params, long theory_start,
                    const std::string& path);

} // namespace ptqho

#endif
