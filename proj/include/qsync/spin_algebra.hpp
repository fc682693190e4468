// spin_algebra.hpp — spin-S operators, Wigner small-d matrices and spin coherent states
//
// All matrices use the Dicke basis |S,m> ordered m = S, S-1, ..., -S, with hbar = 1.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qsync {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Spin quantum number stored as the integer 2S so half-integers are exact.
class Spin {
public:
    /// Accepts 1/2, 1, 3/2, ...; anything else throws std::invalid_argument.
    static Spin from_value(double s) {
        if (!std::isfinite(s) || s <= 0.0) {
            throw std::invalid_argument("spin must be positive, got " + std::to_string(s));
        }
        const double twice = 2.0 * s;
        const double rounded = std::round(twice);
        if (std::abs(twice - rounded) > 1e-12) {
            throw std::invalid_argument("spin must be a half-integer, got " + std::to_string(s));
        }
        return Spin(static_cast<int>(rounded));
    }

    static Spin from_twice(int two_s) {
        if (two_s <= 0) {
            throw std::invalid_argument("2S must be a positive integer");
        }
        return Spin(two_s);
    }

    int twice() const { return two_s_; }
    double value() const { return 0.5 * two_s_; }
    int dim() const { return two_s_ + 1; }
    bool is_integer() const { return two_s_ % 2 == 0; }

    /// Magnetic quantum number of basis index k (k = 0 is m = S).
    double m(int k) const { return value() - k; }

    friend bool operator==(Spin, Spin) = default;

private:
    explicit Spin(int two_s) : two_s_(two_s) {}
    int two_s_;
};

/// Unit direction on the sphere, theta in [0, pi], phi in [0, 2 pi).
struct SphereDirection {
    double theta{0.0};
    double phi{0.0};

    /// Wraps phi into [0, 2 pi); rejects theta outside [0, pi].
    static SphereDirection make(double theta, double phi) {
        if (!(theta >= 0.0 && theta <= kPi)) {
            throw std::invalid_argument("theta must lie in [0, pi]");
        }
        double p = std::fmod(phi, 2.0 * kPi);
        if (p < 0.0) p += 2.0 * kPi;
        if (p >= 2.0 * kPi) p = 0.0;
        return {theta, p};
    }

    Eigen::Vector3d unit_vector() const {
        return {std::cos(phi) * std::sin(theta), std::sin(phi) * std::sin(theta), std::cos(theta)};
    }
};

struct SpinAlgebra {
    Spin spin;
    CMatrix sx, sy, sz, sp, sm;

    int dim() const { return spin.dim(); }
    double s() const { return spin.value(); }
    CMatrix identity() const { return CMatrix::Identity(dim(), dim()); }

    /// Dicke basis vector |S,m>.
    CVector dicke(double m) const {
        const double k = s() - m;
        const double kr = std::round(k);
        if (std::abs(k - kr) > 1e-12 || kr < 0 || kr >= dim()) {
            throw std::invalid_argument("m out of range for spin " + std::to_string(s()));
        }
        CVector v = CVector::Zero(dim());
        v(static_cast<Eigen::Index>(kr)) = 1.0;
        return v;
    }
};

inline SpinAlgebra build_spin_algebra(Spin spin) {
    const int d = spin.dim();
    const double s = spin.value();
    SpinAlgebra alg{spin, CMatrix::Zero(d, d), CMatrix::Zero(d, d), CMatrix::Zero(d, d),
                    CMatrix::Zero(d, d), CMatrix::Zero(d, d)};
    for (int k = 0; k < d; ++k) {
        alg.sz(k, k) = spin.m(k);
    }
    // <m+1| S+ |m> = sqrt(S(S+1) - m(m+1)); row k-1 holds m+1 when column k holds m.
    for (int k = 1; k < d; ++k) {
        const double m = spin.m(k);
        alg.sp(k - 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
    alg.sm = alg.sp.adjoint();
    alg.sx = 0.5 * (alg.sp + alg.sm);
    alg.sy = -0.5 * kI * (alg.sp - alg.sm);
    return alg;
}

inline SpinAlgebra build_spin_algebra(double s) { return build_spin_algebra(Spin::from_value(s)); }

/// d^S_{m',m}(theta) = <S,m'| exp(-i theta S_y) |S,m>.
///
/// Computed from the eigendecomposition of S_y, whose spectrum is the exact set {S, ..., -S}.
/// Using the exact eigenvalues instead of the numerically computed ones keeps the
/// result orthogonal to machine precision for any angle.
inline RMatrix wigner_small_d(const SpinAlgebra& alg, double theta) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(alg.sy);
    const CMatrix& v = es.eigenvectors();
    // Eigenvalues come out ascending: -S, ..., S.
    CVector phases(alg.dim());
    for (int k = 0; k < alg.dim(); ++k) {
        const double lambda = -alg.s() + k;
        phases(k) = std::exp(-kI * theta * lambda);
    }
    const CMatrix d = v * phases.asDiagonal() * v.adjoint();
    return d.real();
}

inline RMatrix wigner_small_d(Spin spin, double theta) {
    return wigner_small_d(build_spin_algebra(spin), theta);
}

/// |theta,phi> = exp(-i phi S_z) exp(-i theta S_y) |S,S>, phases kept as composed.
inline CVector coherent_state(const SpinAlgebra& alg, const SphereDirection& dir) {
    const RMatrix d = wigner_small_d(alg, dir.theta);
    CVector psi(alg.dim());
    for (int k = 0; k < alg.dim(); ++k) {
        psi(k) = std::exp(-kI * alg.spin.m(k) * dir.phi) * d(k, 0);
    }
    return psi;
}

/// <dir2|dir1>.
inline cplx coherent_overlap(const SpinAlgebra& alg, const SphereDirection& dir1,
                             const SphereDirection& dir2) {
    return coherent_state(alg, dir2).dot(coherent_state(alg, dir1));
}

/// Applies exp(-i omega0 t S_z).
inline CVector free_evolve(const SpinAlgebra& alg, const CVector& state, double omega0, double t) {
    if (state.size() != alg.dim()) {
        throw std::invalid_argument("state dimension does not match spin algebra");
    }
    CVector out(state.size());
    for (int k = 0; k < alg.dim(); ++k) {
        out(k) = std::exp(-kI * omega0 * t * alg.spin.m(k)) * state(k);
    }
    return out;
}

/// Expectation value <psi| (S_x, S_y, S_z) |psi>.
inline Eigen::Vector3d spin_expectation(const SpinAlgebra& alg, const CVector& psi) {
    return {psi.dot(alg.sx * psi).real(), psi.dot(alg.sy * psi).real(), psi.dot(alg.sz * psi).real()};
}

}  // namespace qsync
