// cli.hpp — subcommand dispatch for the qsync command-line tool

#pragma once

#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qsync/config.hpp"
#include "qsync/dynamics.hpp"
#include "qsync/experiments.hpp"
#include "qsync/husimi.hpp"
#include "qsync/io.hpp"

namespace qsync::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kSolverError = 2 };

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"qfunc",     "steady", "evolve",       "arnold",
                                                "breakdown", "nogo",   "compare-spins"};
    return names;
}

namespace detail {

inline std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.output) / name).string();
}

inline nlohmann::json sidecar(const std::string& command, const RunConfig& cfg) {
    return {{"version", kVersion},
            {"command", command},
            {"params", io::params_to_json(cfg.resolved_params())},
            {"config", config_to_json(cfg)}};
}

inline std::string point_label(const SweepRow& row) {
    std::ostringstream os;
    os << "solver failed at (delta=" << row.delta << ", epsilon=" << row.epsilon << "): " << row.error;
    return os.str();
}

inline void run_qfunc(const RunConfig& cfg) {
    const SystemParams p = cfg.resolved_params();
    const DensityMatrix rho = steady_state(p, cfg.backend);
    const QField q = husimi_q(rho, build_spin_algebra(p.spin), make_grid(cfg.n_theta, cfg.n_phi));
    std::ostringstream csv;
    io::write_qfield_csv(csv, q);
    io::write_file(out_path(cfg, "qfunc.csv"), csv.str());
}

inline void run_steady(const RunConfig& cfg) {
    const SystemParams p = cfg.resolved_params();
    const DensityMatrix rho = steady_state(p, cfg.backend);
    const QField q = husimi_q(rho, build_spin_algebra(p.spin), make_grid(cfg.n_theta, cfg.n_phi));
    std::ostringstream csv;
    io::write_phase_csv(csv, sync_measure(q));
    io::write_file(out_path(cfg, "steady_state.json"), io::dump(io::density_to_json(rho.matrix())));
    io::write_file(out_path(cfg, "phase.csv"), csv.str());
}

inline void run_evolve(const RunConfig& cfg) {
    const SystemParams p = cfg.resolved_params();
    const SpinAlgebra alg = build_spin_algebra(p.spin);
    const double t_final = cfg.t_final / cfg.gamma_d;
    const std::size_t n_steps = default_steps(p, t_final, cfg.dt_factor);
    const Trajectory traj =
        evolve(p, DensityMatrix::pure(alg.dicke(cfg.initial_m)), t_final, n_steps,
               static_cast<std::size_t>(cfg.stride));
    const PhaseKernel kernel(alg, make_grid(cfg.n_theta, cfg.n_phi));
    std::ostringstream csv;
    csv << "t,phi,s\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const PhaseDistribution d = kernel.evaluate(traj.states[k].matrix());
        for (std::size_t j = 0; j < d.values.size(); ++j) {
            csv << io::fmt17(traj.times[k]) << ',' << io::fmt17(d.phi[j]) << ','
                << io::fmt17(d.values[j]) << '\n';
        }
    }
    io::write_file(out_path(cfg, "trajectory.csv"), csv.str());
}

/// Returns the first failing row's message, or an empty string.
inline std::string write_sweep(const RunConfig& cfg, const std::string& stem, const SweepResult& result,
                               nlohmann::json side) {
    if (const SweepRow* bad = result.first_failure()) return point_label(*bad);
    std::ostringstream csv;
    io::write_sweep_csv(csv, result);
    io::write_file(out_path(cfg, stem + ".csv"), csv.str());
    io::write_file(out_path(cfg, stem + ".json"), io::dump(side));
    return {};
}

}  // namespace detail

/// Runs one subcommand, writing its artifacts under cfg.output. Errors are reported
/// on `err`; the return value is the process exit status.
inline int run(const std::string& command, const RunConfig& cfg, unsigned threads, std::ostream& err) {
    try {
        cfg.validate();
        std::filesystem::create_directories(cfg.output);
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        if (command == "qfunc") {
            detail::run_qfunc(cfg);
        } else if (command == "steady") {
            detail::run_steady(cfg);
        } else if (command == "evolve") {
            detail::run_evolve(cfg);
        } else if (command == "arnold") {
            SweepSpec spec{cfg.sweep_deltas, cfg.sweep_epsilons, cfg.resolved_params(), cfg.n_theta,
                           cfg.n_phi};
            const SweepResult r = arnold_sweep(spec, threads, cfg.backend);
            auto side = detail::sidecar(command, cfg);
            side["units"] = "delta and epsilon columns are absolute rates; gamma_d = " +
                            io::fmt17(cfg.gamma_d);
            const std::string failure = detail::write_sweep(cfg, "arnold", r, side);
            if (!failure.empty()) {
                err << failure << '\n';
                return kSolverError;
            }
        } else if (command == "breakdown") {
            SystemParams p = cfg.resolved_params();
            p.delta = 0.0;
            const SweepResult r = breakdown_scan(p, cfg.breakdown_epsilons,
                                                 make_grid(cfg.n_theta, cfg.n_phi), threads);
            auto side = detail::sidecar(command, cfg);
            nlohmann::json band = nlohmann::json::array();
            for (const auto& row : r.rows) band.push_back(row.equator_weight);
            side["equator_half_width"] = kEquatorBandHalfWidth;
            side["equator_weight"] = band;
            const std::string failure = detail::write_sweep(cfg, "breakdown", r, side);
            if (!failure.empty()) {
                err << failure << '\n';
                return kSolverError;
            }
        } else if (command == "nogo") {
            const NogoReport r = qubit_nogo_report(
                SphereDirection::make(cfg.nogo_theta, cfg.nogo_phi), cfg.nogo_lambdas);
            io::write_file(detail::out_path(cfg, "nogo.json"), io::dump(io::nogo_to_json(r)));
        } else if (command == "compare-spins") {
            const auto rows = spin_comparison(cfg.compare_spins, cfg.resolved_params(),
                                              make_grid(cfg.n_theta, cfg.n_phi));
            std::ostringstream csv;
            io::write_spin_comparison_csv(csv, rows);
            io::write_file(detail::out_path(cfg, "compare_spins.csv"), csv.str());
        } else {
            err << "unknown command '" << command << "'\n";
            return kConfigError;
        }
    } catch (const InvalidStateError& e) {
        const SystemParams p = cfg.resolved_params();
        err << "solver error at (delta=" << p.delta << ", epsilon=" << p.epsilon << "): " << e.what()
            << '\n';
        return kSolverError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        const SystemParams p = cfg.resolved_params();
        err << "solver error at (delta=" << p.delta << ", epsilon=" << p.epsilon << "): " << e.what()
            << '\n';
        return kSolverError;
    }
    return kSuccess;
}

}  // namespace qsync::cli
