// dynamics.hpp — driven gain/damping master equation for a single spin
//
//   d rho/dt = -i [Delta S_z + epsilon S_y, rho]
//              + (gamma_g/2) D[S+ S_z] rho + (gamma_d/2) D[S- S_z] rho,
//   D[O] rho = O rho O^dagger - {O^dagger O, rho}/2,
//
// written in the frame rotating at the drive frequency. Superoperators act on
// column-stacked density matrices: vec(A X B) = (B^T kron A) vec(X).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qsync/density_matrix.hpp"
#include "qsync/spin_algebra.hpp"

namespace qsync {

struct SystemParams {
    Spin spin = Spin::from_twice(2);
    double delta{0.0};    // omega0 - omega
    double epsilon{0.0};  // signal strength
    double gamma_g{0.1};  // gain
    double gamma_d{1.0};  // damping

    double gamma_min() const { return std::min(gamma_g, gamma_d); }
    double max_rate() const {
        return std::max({gamma_g, gamma_d, epsilon, std::abs(delta)});
    }

    void validate() const {
        auto finite = [](double x) { return std::isfinite(x); };
        if (!finite(delta) || !finite(epsilon) || !finite(gamma_g) || !finite(gamma_d)) {
            throw std::invalid_argument("system parameters must be finite");
        }
        if (gamma_g < 0.0 || gamma_d < 0.0) {
            throw std::invalid_argument("gain and damping rates must be non-negative");
        }
        if (gamma_g == 0.0 && gamma_d == 0.0) {
            throw std::invalid_argument("gain and damping rates cannot both vanish");
        }
        if (epsilon < 0.0) {
            throw std::invalid_argument("signal strength must be non-negative");
        }
    }
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateSteadyStateError : public SolverError {
public:
    DegenerateSteadyStateError(const std::string& what, int null_dim)
        : SolverError(what), null_dimension(null_dim) {}
    int null_dimension;
};

/// Raised when an integrated state leaves the physical set; carries the time.
class PhysicalityError : public SolverError {
public:
    PhysicalityError(const std::string& what, double t) : SolverError(what), time(t) {}
    double time;
};

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline CVector vectorize(const CMatrix& m) {
    return Eigen::Map<const CVector>(m.data(), m.size());
}

inline CMatrix unvectorize(const CVector& v, int dim) {
    return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

/// Superoperator of X -> A X.
inline CMatrix left_superop(const CMatrix& a) {
    return kron(CMatrix::Identity(a.rows(), a.rows()), a);
}

/// Superoperator of X -> X B.
inline CMatrix right_superop(const CMatrix& b) {
    return kron(b.transpose(), CMatrix::Identity(b.rows(), b.rows()));
}

/// Superoperator of D[O].
inline CMatrix lindblad_dissipator(const CMatrix& op) {
    const CMatrix odo = op.adjoint() * op;
    return kron(op.conjugate(), op) - 0.5 * left_superop(odo) - 0.5 * right_superop(odo);
}

struct Liouvillian {
    int dim{0};
    CMatrix matrix;  // dim^2 x dim^2

    CMatrix apply(const CMatrix& rho) const {
        return unvectorize(matrix * vectorize(rho), dim);
    }
};

inline CMatrix drive_hamiltonian(const SpinAlgebra& alg, const SystemParams& p) {
    return p.delta * alg.sz + p.epsilon * alg.sy;
}

inline CMatrix gain_operator(const SpinAlgebra& alg) { return alg.sp * alg.sz; }
inline CMatrix damping_operator(const SpinAlgebra& alg) { return alg.sm * alg.sz; }

inline Liouvillian build_liouvillian(const SystemParams& p) {
    p.validate();
    const SpinAlgebra alg = build_spin_algebra(p.spin);
    const CMatrix h = drive_hamiltonian(alg, p);
    Liouvillian l{alg.dim(), -kI * (left_superop(h) - right_superop(h))};
    if (p.gamma_g > 0.0) l.matrix += 0.5 * p.gamma_g * lindblad_dissipator(gain_operator(alg));
    if (p.gamma_d > 0.0) l.matrix += 0.5 * p.gamma_d * lindblad_dissipator(damping_operator(alg));
    return l;
}

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
};

/// Step count giving dt = dt_factor / max_rate over [0, t_final].
inline std::size_t default_steps(const SystemParams& p, double t_final, double dt_factor = 0.01) {
    const double dt = dt_factor / p.max_rate();
    return static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
}

/// Fixed-step RK4 on vec(rho). Stores rho at every `stride`-th step plus the final one;
/// every stored state is re-checked against the density-matrix invariants.
inline Trajectory evolve(const SystemParams& p, const DensityMatrix& rho0, double t_final,
                         std::size_t n_steps, std::size_t stride = 1) {
    if (!(t_final > 0.0)) throw std::invalid_argument("t_final must be positive");
    if (n_steps == 0) throw std::invalid_argument("n_steps must be positive");
    if (stride == 0) throw std::invalid_argument("stride must be positive");
    const Liouvillian l = build_liouvillian(p);
    if (rho0.dim() != l.dim) {
        throw std::invalid_argument("initial state dimension does not match spin");
    }

    const double dt = t_final / static_cast<double>(n_steps);
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(rho0);

    CVector v = vectorize(rho0.matrix());
    for (std::size_t step = 1; step <= n_steps; ++step) {
        const CVector k1 = l.matrix * v;
        const CVector k2 = l.matrix * (v + 0.5 * dt * k1);
        const CVector k3 = l.matrix * (v + 0.5 * dt * k2);
        const CVector k4 = l.matrix * (v + dt * k3);
        v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (step % stride == 0 || step == n_steps) {
            const double t = dt * static_cast<double>(step);
            const CMatrix rho = unvectorize(v, l.dim);
            const auto report = inspect_state(rho);
            if (!report.ok()) {
                std::ostringstream os;
                os << "state left the physical set at t=" << t << " (" << report.describe()
                   << "); reduce the step size";
                throw PhysicalityError(os.str(), t);
            }
            traj.times.push_back(t);
            traj.states.emplace_back(rho);
        }
    }
    return traj;
}

enum class SteadyStateBackend { eigen, linear };

inline constexpr double kNullEigenvalueTolerance = 1e-10;
inline constexpr double kSteadyResidualTolerance = 1e-10;

namespace detail {

inline DensityMatrix finish_steady_state(const Liouvillian& l, const CVector& null_vector) {
    // Null vectors carry an arbitrary complex scale; fix it with the trace before Hermitizing.
    CMatrix rho = unvectorize(null_vector, l.dim);
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    const double residual = (l.matrix * vectorize(rho)).norm();
    if (residual > kSteadyResidualTolerance) {
        throw SolverError("steady-state residual " + std::to_string(residual) +
                          " exceeds tolerance");
    }
    return DensityMatrix(rho);
}

inline DensityMatrix steady_state_eigen(const Liouvillian& l) {
    Eigen::ComplexEigenSolver<CMatrix> es(l.matrix, true);
    if (es.info() != Eigen::Success) throw SolverError("Liouvillian eigendecomposition failed");
    const auto& evals = es.eigenvalues();
    Eigen::Index best = 0;
    int near_zero = 0;
    for (Eigen::Index k = 0; k < evals.size(); ++k) {
        if (std::abs(evals(k)) < kNullEigenvalueTolerance) ++near_zero;
        if (std::abs(evals(k)) < std::abs(evals(best))) best = k;
    }
    if (near_zero > 1) {
        throw DegenerateSteadyStateError(
            "degenerate steady state: " + std::to_string(near_zero) +
                " Liouvillian eigenvalues within 1e-10 of zero",
            near_zero);
    }
    if (near_zero == 0) {
        throw SolverError("no Liouvillian eigenvalue within 1e-10 of zero (smallest |lambda| = " +
                          std::to_string(std::abs(evals(best))) + ")");
    }
    return finish_steady_state(l, es.eigenvectors().col(best));
}

/// Solves L vec(rho) = 0 with the first row replaced by the trace constraint.
inline DensityMatrix steady_state_linear(const Liouvillian& l) {
    const int n = l.dim * l.dim;
    CMatrix a = l.matrix;
    a.row(0).setZero();
    for (int k = 0; k < l.dim; ++k) a(0, k * l.dim + k) = 1.0;
    CVector rhs = CVector::Zero(n);
    rhs(0) = 1.0;
    Eigen::FullPivLU<CMatrix> lu(a);
    lu.setThreshold(kNullEigenvalueTolerance);
    if (!lu.isInvertible()) {
        const int null_dim = n - static_cast<int>(lu.rank()) + 1;
        throw DegenerateSteadyStateError(
            "degenerate steady state: constrained Liouvillian is singular", null_dim);
    }
    return finish_steady_state(l, lu.solve(rhs));
}

}  // namespace detail

/// Unique fixed point of the Liouvillian. Throws DegenerateSteadyStateError when the
/// null space is not one-dimensional.
inline DensityMatrix steady_state(const SystemParams& p,
                                  SteadyStateBackend backend = SteadyStateBackend::eigen) {
    const Liouvillian l = build_liouvillian(p);
    return backend == SteadyStateBackend::eigen ? detail::steady_state_eigen(l)
                                                : detail::steady_state_linear(l);
}

enum class LimitCycleVerdict { valid, no_free_phase, extremal_only };

inline const char* to_string(LimitCycleVerdict v) {
    switch (v) {
        case LimitCycleVerdict::valid: return "valid";
        case LimitCycleVerdict::no_free_phase: return "no_free_phase";
        case LimitCycleVerdict::extremal_only: return "extremal_only";
    }
    return "unknown";
}

struct LimitCycleReport {
    LimitCycleVerdict verdict{LimitCycleVerdict::valid};
    double commutator_norm{0.0};      // max |[rho_ss, S_z]|
    double interior_population{0.0};  // weight on m != +-S
    CMatrix steady;
};

/// Classifies the undriven steady state: a limit cycle needs a phase-symmetric state
/// that is not just a mixture of the two extremal levels.
inline LimitCycleReport limit_cycle_validity(const SystemParams& p) {
    if (p.epsilon != 0.0) {
        throw std::invalid_argument("limit-cycle check requires epsilon = 0");
    }
    const SpinAlgebra alg = build_spin_algebra(p.spin);
    const DensityMatrix rho = steady_state(p);
    LimitCycleReport r;
    r.steady = rho.matrix();
    const CMatrix comm = rho.matrix() * alg.sz - alg.sz * rho.matrix();
    r.commutator_norm = comm.cwiseAbs().maxCoeff();
    for (int k = 1; k + 1 < alg.dim(); ++k) r.interior_population += rho.matrix()(k, k).real();

    if (r.commutator_norm > 1e-10) {
        r.verdict = LimitCycleVerdict::no_free_phase;
    } else if (r.interior_population < 1e-6) {
        r.verdict = LimitCycleVerdict::extremal_only;
    } else {
        r.verdict = LimitCycleVerdict::valid;
    }
    return r;
}

}  // namespace qsync
