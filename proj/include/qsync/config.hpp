// config.hpp — JSON run configuration for the command-line front end

#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsync/dynamics.hpp"
#include "qsync/sphere_grid.hpp"

namespace qsync {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters of one CLI run. delta, epsilon and gamma_g are given in units of
/// gamma_d (which defaults to 1); resolved_params() turns them into absolute rates.
struct RunConfig {
    double spin{1.0};
    double delta{0.0};
    double epsilon{0.01};
    double gamma_g{0.1};
    double gamma_d{1.0};

    int n_theta{kDefaultThetaNodes};
    int n_phi{kDefaultPhiNodes};

    SteadyStateBackend backend{SteadyStateBackend::eigen};
    double dt_factor{0.01};

    std::string output{"."};

    // evolve: t_final in units of 1/gamma_d; initial state |S, initial_m>.
    double t_final{50.0};
    double initial_m{0.0};
    int stride{10};

    // arnold: detunings and strengths in units of gamma_min.
    std::vector<double> sweep_deltas;
    std::vector<double> sweep_epsilons;

    // breakdown: strengths in units of gamma_min.
    std::vector<double> breakdown_epsilons{0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};

    std::vector<double> compare_spins{1.0, 2.0};

    double nogo_theta{0.0};
    double nogo_phi{0.0};
    int nogo_lambdas{21};

    RunConfig() {
        for (int k = -10; k <= 10; ++k) sweep_deltas.push_back(0.2 * k);
        for (int k = 1; k <= 10; ++k) sweep_epsilons.push_back(0.01 * k);
    }

    SystemParams resolved_params() const {
        SystemParams p;
        p.spin = Spin::from_value(spin);
        p.delta = delta * gamma_d;
        p.epsilon = epsilon * gamma_d;
        p.gamma_g = gamma_g * gamma_d;
        p.gamma_d = gamma_d;
        return p;
    }

    /// Throws ConfigError on any invariant violation.
    void validate() const {
        try {
            resolved_params().validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (!(gamma_d > 0.0)) throw ConfigError("gamma_d must be positive (it sets the rate unit)");
        if (n_theta < 2 || n_phi < 2) throw ConfigError("grid counts must be >= 2");
        if (!(dt_factor > 0.0)) throw ConfigError("solver.dt_factor must be positive");
        if (!(t_final > 0.0)) throw ConfigError("evolve.t_final must be positive");
        if (stride < 1) throw ConfigError("evolve.stride must be >= 1");
        if (sweep_deltas.empty() || sweep_epsilons.empty()) {
            throw ConfigError("sweep.deltas and sweep.epsilons must be non-empty");
        }
        for (double e : sweep_epsilons) {
            if (!(e >= 0.0)) throw ConfigError("sweep.epsilons must be >= 0");
        }
        for (double e : breakdown_epsilons) {
            if (!(e >= 0.0)) throw ConfigError("breakdown.epsilons must be >= 0");
        }
        if (breakdown_epsilons.empty()) throw ConfigError("breakdown.epsilons must be non-empty");
        if (compare_spins.empty()) throw ConfigError("compare.spins must be non-empty");
        if (nogo_lambdas < 2) throw ConfigError("nogo.n_lambda must be >= 2");
    }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
void read(const nlohmann::json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
    }
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
    using detail::read;
    RunConfig c;
    detail::reject_unknown(j,
                           {"spin", "delta", "epsilon", "gamma_g", "gamma_d", "grid", "solver",
                            "output", "evolve", "sweep", "breakdown", "compare", "nogo"},
                           "config");
    read(j, "spin", c.spin, "config");
    read(j, "delta", c.delta, "config");
    read(j, "epsilon", c.epsilon, "config");
    read(j, "gamma_g", c.gamma_g, "config");
    read(j, "gamma_d", c.gamma_d, "config");
    read(j, "output", c.output, "config");
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        detail::reject_unknown(g, {"n_theta", "n_phi"}, "grid");
        read(g, "n_theta", c.n_theta, "grid");
        read(g, "n_phi", c.n_phi, "grid");
    }
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        detail::reject_unknown(s, {"backend", "dt_factor"}, "solver");
        std::string backend = "eigen";
        read(s, "backend", backend, "solver");
        if (backend == "eigen") {
            c.backend = SteadyStateBackend::eigen;
        } else if (backend == "linear") {
            c.backend = SteadyStateBackend::linear;
        } else {
            throw ConfigError("solver.backend must be 'eigen' or 'linear', got '" + backend + "'");
        }
        read(s, "dt_factor", c.dt_factor, "solver");
    }
    if (j.contains("evolve")) {
        const auto& e = j["evolve"];
        detail::reject_unknown(e, {"t_final", "initial_m", "stride"}, "evolve");
        read(e, "t_final", c.t_final, "evolve");
        read(e, "initial_m", c.initial_m, "evolve");
        read(e, "stride", c.stride, "evolve");
    }
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        detail::reject_unknown(s, {"deltas", "epsilons"}, "sweep");
        read(s, "deltas", c.sweep_deltas, "sweep");
        read(s, "epsilons", c.sweep_epsilons, "sweep");
    }
    if (j.contains("breakdown")) {
        const auto& b = j["breakdown"];
        detail::reject_unknown(b, {"epsilons"}, "breakdown");
        read(b, "epsilons", c.breakdown_epsilons, "breakdown");
    }
    if (j.contains("compare")) {
        const auto& b = j["compare"];
        detail::reject_unknown(b, {"spins"}, "compare");
        read(b, "spins", c.compare_spins, "compare");
    }
    if (j.contains("nogo")) {
        const auto& n = j["nogo"];
        detail::reject_unknown(n, {"theta", "phi", "n_lambda"}, "nogo");
        read(n, "theta", c.nogo_theta, "nogo");
        read(n, "phi", c.nogo_phi, "nogo");
        read(n, "n_lambda", c.nogo_lambdas, "nogo");
    }
    c.validate();
    return c;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
    return {{"spin", c.spin},
            {"delta", c.delta},
            {"epsilon", c.epsilon},
            {"gamma_g", c.gamma_g},
            {"gamma_d", c.gamma_d},
            {"grid", {{"n_theta", c.n_theta}, {"n_phi", c.n_phi}}},
            {"solver",
             {{"backend", c.backend == SteadyStateBackend::eigen ? "eigen" : "linear"},
              {"dt_factor", c.dt_factor}}},
            {"output", c.output},
            {"evolve", {{"t_final", c.t_final}, {"initial_m", c.initial_m}, {"stride", c.stride}}},
            {"sweep", {{"deltas", c.sweep_deltas}, {"epsilons", c.sweep_epsilons}}},
            {"breakdown", {{"epsilons", c.breakdown_epsilons}}},
            {"compare", {{"spins", c.compare_spins}}},
            {"nogo", {{"theta", c.nogo_theta}, {"phi", c.nogo_phi}, {"n_lambda", c.nogo_lambdas}}}};
}

}  // namespace qsync
