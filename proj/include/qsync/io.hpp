// io.hpp — CSV and JSON serialization of fields, distributions, states and sweeps

#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsync/density_matrix.hpp"
#include "qsync/dynamics.hpp"
#include "qsync/experiments.hpp"
#include "qsync/husimi.hpp"

namespace qsync::io {

using nlohmann::json;

/// Shortest round-trip-safe decimal with 17 significant digits.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_qfield_csv(std::ostream& os, const QField& q) {
    os << "theta,phi,q\n";
    for (int i = 0; i < q.grid.n_theta(); ++i) {
        for (int j = 0; j < q.grid.n_phi(); ++j) {
            os << fmt17(q.grid.theta[i]) << ',' << fmt17(q.grid.phi[j]) << ','
               << fmt17(q.values(i, j)) << '\n';
        }
    }
}

inline void write_phase_csv(std::ostream& os, const PhaseDistribution& d) {
    os << "phi,s\n";
    for (std::size_t j = 0; j < d.values.size(); ++j) {
        os << fmt17(d.phi[j]) << ',' << fmt17(d.values[j]) << '\n';
    }
}

inline constexpr const char* kSweepHeader = "delta,epsilon,s_max,phi_star,mean_sz";

inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
    os << kSweepHeader << '\n';
    for (const auto& row : r.rows) {
        os << fmt17(row.delta) << ',' << fmt17(row.epsilon) << ',' << fmt17(row.s_max) << ','
           << fmt17(row.phi_star) << ',' << fmt17(row.mean_sz) << '\n';
    }
}

inline void write_spin_comparison_csv(std::ostream& os, const std::vector<SpinComparisonRow>& rows) {
    os << "spin,s_max,phi_star\n";
    for (const auto& r : rows) {
        os << fmt17(r.spin) << ',' << fmt17(r.s_max) << ',' << fmt17(r.phi_star) << '\n';
    }
}

/// {"dim": d, "re": [[...]], "im": [[...]]}, rows outermost.
inline json density_to_json(const CMatrix& rho) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        json rr = json::array();
        json ri = json::array();
        for (Eigen::Index j = 0; j < rho.cols(); ++j) {
            rr.push_back(rho(i, j).real());
            ri.push_back(rho(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return json{{"dim", rho.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline CMatrix density_from_json(const json& j) {
    const int d = j.at("dim").get<int>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (d <= 0 || re.size() != static_cast<std::size_t>(d) || im.size() != static_cast<std::size_t>(d)) {
        throw std::invalid_argument("density JSON: row count does not match dim");
    }
    CMatrix rho(d, d);
    for (int i = 0; i < d; ++i) {
        if (re[i].size() != static_cast<std::size_t>(d) || im[i].size() != static_cast<std::size_t>(d)) {
            throw std::invalid_argument("density JSON: column count does not match dim");
        }
        for (int k = 0; k < d; ++k) rho(i, k) = cplx(re[i][k].get<double>(), im[i][k].get<double>());
    }
    return rho;
}

inline json params_to_json(const SystemParams& p) {
    return json{{"spin", p.spin.value()}, {"delta", p.delta},       {"epsilon", p.epsilon},
                {"gamma_g", p.gamma_g},   {"gamma_d", p.gamma_d}, {"gamma_min", p.gamma_min()}};
}

inline json nogo_to_json(const NogoReport& r) {
    json samples = json::array();
    for (const auto& s : r.samples) {
        samples.push_back({{"lambda", s.lambda},
                           {"bloch", {s.bloch.x(), s.bloch.y(), s.bloch.z()}},
                           {"colinearity_error", s.colinearity_error},
                           {"ring_spread", s.ring_spread},
                           {"q_min", s.q_min},
                           {"q_max", s.q_max},
                           {"q_argmax", {{"theta", s.q_argmax.theta}, {"phi", s.q_argmax.phi}}}});
    }
    return json{{"axis", {{"theta", r.axis.theta}, {"phi", r.axis.phi}}},
                {"max_colinearity_error", r.max_colinearity_error},
                {"max_ring_spread", r.max_ring_spread},
                {"verdict", to_string(r.verdict)},
                {"samples", std::move(samples)}};
}

/// Serializes json with fixed indentation and a trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << contents;
    if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace qsync::io
