#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "ptqho/errors.hpp"
#include "ptqho/experiment.hpp"

// exit codes: 0 ok, 2 config error, 3 numerical failure, 4 --check failed

int main(int argc, char** argv) {
    CLI::App app{"transverse-mode resonator simulator for displaced-oscillator dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    bool check = false;
    std::vector<long> snapshots;

    auto* sim = app.add_subcommand("simulate", "run a configured scenario and write outputs");
    sim->add_option("--config", config_path, "JSON config file")->required();
    sim->add_option("--out", out_dir, "output directory");
    sim->add_flag("--check", check, "verify the scenario's pass condition (exit 4 on failure)");
    sim->add_option("--snapshots", snapshots,
                    "round trips at which to dump the transverse field")
        ->delimiter(',');

    auto* par = app.add_subcommand("params", "print derived oscillator parameters");
    par->add_option("--config", config_path, "JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        ptqho::ExperimentSpec spec = ptqho::load_config(config_path);
        if (!snapshots.empty()) spec.run.snapshots = snapshots;

        if (app.got_subcommand(par)) {
            const auto m = spec.cavity.round_trip_matrix();
            const auto lin = ptqho::linearize(spec.cavity.gain);
            const auto p = ptqho::derive_oscillator_params(m, lin.alpha);
            const double w0 = ptqho::mode_waist(m);
            std::printf("Omega      %.12g\n", p.frequency);
            std::printf("m          %.12g\n", p.mass);
            std::printf("delta      %.12g\n", p.displacement);
            std::printf("hbar       %.12g\n", p.hbar);
            std::printf("g0         %.12g\n", lin.g0);
            std::printf("alpha      %.12g\n", lin.alpha);
            std::printf("w0         %.12g\n", w0);
            std::printf("tilt_ratio %.12g\n", ptqho::tilt_ratio(p.displacement, w0));
            std::printf("K          %.12g\n", ptqho::petermann(p.displacement, w0));
            std::printf("period     %.12g\n", ptqho::units::two_pi / p.frequency);
            return 0;
        }

        const int rc = ptqho::run_experiment(spec, out_dir, check);
        if (rc == 4) std::cerr << "check failed for scenario\n";
        return rc;
    } catch (const ptqho::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ptqho::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
