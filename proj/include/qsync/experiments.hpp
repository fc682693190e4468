// experiments.hpp — phase-locking experiments on the driven spin model
//
// Covers the weak-signal analytic rate for spin 1, resonant locking, Arnold-tongue
// and limit-cycle-breakdown sweeps, the spin-size comparison and the qubit no-go check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qsync/density_matrix.hpp"
#include "qsync/dynamics.hpp"
#include "qsync/husimi.hpp"
#include "qsync/sphere_grid.hpp"
#include "qsync/spin_algebra.hpp"

namespace qsync {

/// Contour level used to call phase locking "significant" in tongue plots.
inline constexpr double kSignificantLocking = 0.005;

/// Half-width of the equatorial band used by breakdown_scan.
inline constexpr double kEquatorBandHalfWidth = kPi / 8.0;

namespace detail {

inline void require_spin_one(const SystemParams& p, const char* what) {
    if (p.spin.twice() != 2) {
        throw std::invalid_argument(std::string(what) + " is derived for spin 1 only");
    }
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. fn must not throw.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += threads) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// First-order (in epsilon) rate of change of S(phi) for spin 1 starting from |1,0>:
/// (3 eps/16)(e^{-gamma_g t/2} - e^{-gamma_d t/2}) cos(phi - Delta t).
inline double analytic_sdot(double phi, double t, const SystemParams& p) {
    detail::require_spin_one(p, "analytic_sdot");
    return 3.0 * p.epsilon / 16.0 *
           (std::exp(-0.5 * p.gamma_g * t) - std::exp(-0.5 * p.gamma_d * t)) *
           std::cos(phi - p.delta * t);
}

/// Resonant steady state of the first-order model: (3 eps/8)(1/gamma_g - 1/gamma_d) cos(phi).
inline double analytic_steady_s(double phi, const SystemParams& p) {
    detail::require_spin_one(p, "analytic_steady_s");
    if (p.delta != 0.0) {
        throw std::invalid_argument("analytic_steady_s holds at zero detuning only");
    }
    if (p.gamma_g <= 0.0 || p.gamma_d <= 0.0) {
        throw std::invalid_argument("analytic_steady_s needs positive gain and damping");
    }
    return 3.0 * p.epsilon / 8.0 * (1.0 / p.gamma_g - 1.0 / p.gamma_d) * std::cos(phi);
}

/// sup_t (3 eps/16)|e^{-gamma_g t/2} - e^{-gamma_d t/2}|.
inline double analytic_sdot_peak(const SystemParams& p) {
    const double a = 0.5 * p.gamma_g;
    const double b = 0.5 * p.gamma_d;
    if (p.epsilon == 0.0 || a == b) return 0.0;
    double diff = 0.0;
    if (a == 0.0 || b == 0.0) {
        diff = 1.0;  // limit t -> infinity
    } else {
        const double t_star = std::log(b / a) / (b - a);
        diff = std::abs(std::exp(-a * t_star) - std::exp(-b * t_star));
    }
    return 3.0 * p.epsilon / 16.0 * diff;
}

struct FirstOrderReport {
    double max_abs_deviation{0.0};   // max over (t, phi) of |numeric - analytic|
    double max_numeric_rate{0.0};    // max |dS/dt| from the trajectory
    double analytic_peak{0.0};
    double relative_deviation{0.0};  // max_abs_deviation / analytic_peak
};

inline constexpr double kWeakSignalFraction = 0.1;

/// Compares central differences of S(phi, t) along an exact-model trajectory from |1,0>
/// with analytic_sdot. With balanced rates the analytic peak is zero; relative_deviation
/// is then 0 if the numeric rate vanishes identically and +inf otherwise, and the
/// absolute fields carry the information.
inline FirstOrderReport first_order_consistency(const SystemParams& p, double t_final,
                                                std::size_t n_steps,
                                                const SphereGrid& grid = make_grid(16, 32)) {
    detail::require_spin_one(p, "first_order_consistency");
    p.validate();
    if (p.epsilon > kWeakSignalFraction * p.gamma_min()) {
        throw std::invalid_argument("first_order_consistency requires epsilon <= 0.1 gamma_min");
    }
    const SpinAlgebra alg = build_spin_algebra(p.spin);
    const DensityMatrix rho0 = DensityMatrix::pure(alg.dicke(0.0));
    const Trajectory traj = evolve(p, rho0, t_final, n_steps);
    const PhaseKernel kernel(alg, grid);

    std::vector<PhaseDistribution> s;
    s.reserve(traj.states.size());
    for (const auto& rho : traj.states) s.push_back(kernel.evaluate(rho.matrix()));

    FirstOrderReport r;
    r.analytic_peak = analytic_sdot_peak(p);
    const double dt = t_final / static_cast<double>(n_steps);
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
        const double t = traj.times[k];
        for (int j = 0; j < grid.n_phi(); ++j) {
            const double numeric = (s[k + 1].values[j] - s[k - 1].values[j]) / (2.0 * dt);
            const double analytic = analytic_sdot(grid.phi[j], t, p);
            r.max_abs_deviation = std::max(r.max_abs_deviation, std::abs(numeric - analytic));
            r.max_numeric_rate = std::max(r.max_numeric_rate, std::abs(numeric));
        }
    }
    if (r.analytic_peak > 0.0) {
        r.relative_deviation = r.max_abs_deviation / r.analytic_peak;
    } else {
        r.relative_deviation =
            r.max_abs_deviation == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return r;
}

struct SweepSpec {
    std::vector<double> deltas;    // units of gamma_min
    std::vector<double> epsilons;  // units of gamma_min
    SystemParams base;
    int n_theta{kDefaultThetaNodes};
    int n_phi{kDefaultPhiNodes};

    void validate() const {
        if (deltas.empty() || epsilons.empty()) {
            throw std::invalid_argument("sweep needs at least one detuning and one signal strength");
        }
        for (double e : epsilons) {
            if (!(e >= 0.0)) throw std::invalid_argument("sweep signal strengths must be >= 0");
        }
        base.validate();
    }
};

/// One evaluated point; delta and epsilon are absolute (same units as the template rates).
struct SweepRow {
    double delta{0.0};
    double epsilon{0.0};
    double s_max{std::numeric_limits<double>::quiet_NaN()};
    double phi_star{std::numeric_limits<double>::quiet_NaN()};
    double mean_sz{std::numeric_limits<double>::quiet_NaN()};
    double equator_weight{std::numeric_limits<double>::quiet_NaN()};
    std::string error;  // empty on success

    bool ok() const { return error.empty(); }
};

struct SweepResult {
    std::vector<SweepRow> rows;

    /// First failed row, or nullptr.
    const SweepRow* first_failure() const {
        for (const auto& r : rows) {
            if (!r.ok()) return &r;
        }
        return nullptr;
    }
};

/// Steady state -> Q -> S(phi) -> observables for one parameter point.
inline SweepRow evaluate_point(const SystemParams& p, const SphereGrid& grid,
                               SteadyStateBackend backend = SteadyStateBackend::eigen) {
    SweepRow row;
    row.delta = p.delta;
    row.epsilon = p.epsilon;
    try {
        const SpinAlgebra alg = build_spin_algebra(p.spin);
        const DensityMatrix rho = steady_state(p, backend);
        const QField q = husimi_q(rho, alg, grid);
        const Peak pk = peak(sync_measure(q));
        row.s_max = pk.s_max;
        row.phi_star = pk.phi_star;
        row.mean_sz = rho.expectation(alg.sz).real();
        row.equator_weight = band_weight(q, kEquatorBandHalfWidth);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

/// Evaluates every (delta, epsilon) pair; rows ordered delta-major in spec order.
inline SweepResult arnold_sweep(const SweepSpec& spec, unsigned threads = 1,
                                SteadyStateBackend backend = SteadyStateBackend::eigen) {
    spec.validate();
    const SphereGrid grid = make_grid(spec.n_theta, spec.n_phi);
    const double unit = spec.base.gamma_min();
    const std::size_t n_eps = spec.epsilons.size();
    SweepResult result;
    result.rows.resize(spec.deltas.size() * n_eps);
    detail::parallel_for(result.rows.size(), threads, [&](std::size_t idx) {
        SystemParams p = spec.base;
        p.delta = spec.deltas[idx / n_eps] * unit;
        p.epsilon = spec.epsilons[idx % n_eps] * unit;
        result.rows[idx] = evaluate_point(p, grid, backend);
    });
    return result;
}

/// Resonant scan over signal strengths (units of gamma_min) tracking <S_z> and the
/// equatorial Q weight as the limit cycle deforms.
inline SweepResult breakdown_scan(const SystemParams& p, const std::vector<double>& epsilons,
                                  const SphereGrid& grid = make_grid(), unsigned threads = 1) {
    if (p.delta != 0.0) throw std::invalid_argument("breakdown_scan runs at zero detuning");
    if (epsilons.empty()) throw std::invalid_argument("breakdown_scan needs signal strengths");
    p.validate();
    SweepResult result;
    result.rows.resize(epsilons.size());
    detail::parallel_for(epsilons.size(), threads, [&](std::size_t idx) {
        SystemParams q = p;
        q.epsilon = epsilons[idx] * p.gamma_min();
        result.rows[idx] = evaluate_point(q, grid);
    });
    return result;
}

struct SpinComparisonRow {
    double spin{0.0};
    double s_max{0.0};
    double phi_star{0.0};
};

/// Applies identical rates to each integer spin and reports the resonant peak of S(phi).
inline std::vector<SpinComparisonRow> spin_comparison(const std::vector<double>& spins,
                                                      const SystemParams& tmpl,
                                                      const SphereGrid& grid = make_grid()) {
    std::vector<SpinComparisonRow> out;
    for (double s : spins) {
        const Spin spin = Spin::from_value(s);
        if (!spin.is_integer()) {
            throw std::invalid_argument("spin_comparison supports integer spins only");
        }
        SystemParams p = tmpl;
        p.spin = spin;
        const SpinAlgebra alg = build_spin_algebra(spin);
        const Peak pk = peak(sync_measure(husimi_q(steady_state(p), alg, grid)));
        out.push_back({s, pk.s_max, pk.phi_star});
    }
    return out;
}

struct NogoSample {
    double lambda{0.0};
    Eigen::Vector3d bloch{0.0, 0.0, 0.0};
    double colinearity_error{0.0};  // |m - lambda n|
    double ring_spread{0.0};        // max over rings about n of (max Q - min Q)
    double q_min{0.0};
    double q_max{0.0};
    SphereDirection q_argmax;
};

struct NogoReport {
    SphereDirection axis;
    std::vector<NogoSample> samples;
    double max_colinearity_error{0.0};
    double max_ring_spread{0.0};
    LimitCycleVerdict verdict{LimitCycleVerdict::valid};
};

/// Direction of a unit vector, theta in [0, pi], phi in [0, 2 pi).
inline SphereDirection direction_of(const Eigen::Vector3d& u) {
    const double z = std::clamp(u.z() / u.norm(), -1.0, 1.0);
    return SphereDirection::make(std::acos(z), std::atan2(u.y(), u.x()));
}

/// For a qubit with Hamiltonian along `axis`, enumerates the states commuting with
/// n.sigma, (1 + lambda n.sigma)/2, on a lambda grid in [-1, 1], checks that each is a
/// Bloch vector along n with Q symmetric about n, and classifies the gain/damping map.
inline NogoReport qubit_nogo_report(const SphereDirection& axis, int n_lambda = 21,
                                    int n_rings = 16, int n_ring_points = 32) {
    if (n_lambda < 2) throw std::invalid_argument("need at least two lambda samples");
    const SpinAlgebra alg = build_spin_algebra(0.5);
    const Eigen::Vector3d n = axis.unit_vector();
    const CMatrix sigma_n = 2.0 * (n.x() * alg.sx + n.y() * alg.sy + n.z() * alg.sz);

    // Orthonormal frame (e1, e2, n).
    Eigen::Vector3d helper = std::abs(n.z()) < 0.9 ? Eigen::Vector3d::UnitZ()
                                                   : Eigen::Vector3d::UnitX();
    const Eigen::Vector3d e1 = n.cross(helper).normalized();
    const Eigen::Vector3d e2 = n.cross(e1);

    NogoReport report;
    report.axis = axis;
    for (int l = 0; l < n_lambda; ++l) {
        NogoSample s;
        s.lambda = -1.0 + 2.0 * l / (n_lambda - 1);
        const CMatrix rho = 0.5 * (alg.identity() + s.lambda * sigma_n);
        s.bloch = 2.0 * Eigen::Vector3d((rho * alg.sx).trace().real(), (rho * alg.sy).trace().real(),
                                        (rho * alg.sz).trace().real());
        s.colinearity_error = (s.bloch - s.lambda * n).norm();

        s.q_min = std::numeric_limits<double>::infinity();
        s.q_max = -std::numeric_limits<double>::infinity();
        auto q_at = [&](const Eigen::Vector3d& u) {
            const CVector psi = coherent_state(alg, direction_of(u));
            return 2.0 / (4.0 * kPi) * psi.dot(rho * psi).real();
        };
        // Rings include both poles of the axis.
        for (int r = 0; r <= n_rings; ++r) {
            const double alpha = kPi * r / n_rings;
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (int b = 0; b < n_ring_points; ++b) {
                const double beta = 2.0 * kPi * b / n_ring_points;
                const Eigen::Vector3d u = std::cos(alpha) * n +
                                          std::sin(alpha) * (std::cos(beta) * e1 + std::sin(beta) * e2);
                const double q = q_at(u);
                lo = std::min(lo, q);
                hi = std::max(hi, q);
                if (q > s.q_max) {
                    s.q_max = q;
                    s.q_argmax = direction_of(u);
                }
                s.q_min = std::min(s.q_min, q);
            }
            s.ring_spread = std::max(s.ring_spread, hi - lo);
        }
        report.max_colinearity_error = std::max(report.max_colinearity_error, s.colinearity_error);
        report.max_ring_spread = std::max(report.max_ring_spread, s.ring_spread);
        report.samples.push_back(s);
    }

    SystemParams p;
    p.spin = Spin::from_twice(1);
    p.epsilon = 0.0;
    report.verdict = limit_cycle_validity(p).verdict;
    return report;
}

}  // namespace qsync
