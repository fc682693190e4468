// husimi.hpp — spin Husimi Q function and the phase synchronization measure S(phi)

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsync/density_matrix.hpp"
#include "qsync/sphere_grid.hpp"
#include "qsync/spin_algebra.hpp"

namespace qsync {

/// Q(theta_i, phi_j) stored as values(i, j); units 1/steradian.
struct QField {
    SphereGrid grid;
    RMatrix values;

    /// Full-sphere quadrature of Q (1 for a normalized state).
    double integral() const {
        double total = 0.0;
        for (int i = 0; i < grid.n_theta(); ++i) {
            total += grid.theta_weights[i] * values.row(i).sum();
        }
        return total * grid.phi_step();
    }
};

/// S(phi_j) on the grid's phi nodes.
struct PhaseDistribution {
    std::vector<double> phi;
    std::vector<double> values;

    /// Trapezoid integral over [0, 2 pi).
    double integral() const {
        double total = 0.0;
        for (double v : values) total += v;
        return total * 2.0 * kPi / static_cast<double>(values.size());
    }
};

struct Peak {
    double phi_star{0.0};
    double s_max{0.0};
};

class NegativeQError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kQClipTolerance = 1e-12;

/// Q(theta, phi) = (2S+1)/(4 pi) <theta,phi| rho |theta,phi>.
///
/// rho must be Hermitian with unit trace. Values in [-1e-12, 0) are clipped to zero;
/// anything more negative means rho is not a state and raises NegativeQError.
inline QField husimi_q(const CMatrix& rho, const SpinAlgebra& alg, const SphereGrid& grid) {
    if (rho.rows() != alg.dim() || rho.cols() != alg.dim()) {
        throw std::invalid_argument("density matrix dimension " + std::to_string(rho.rows()) +
                                    " does not match spin dimension " + std::to_string(alg.dim()));
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("husimi_q: density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - cplx(1.0, 0.0)) > 1e-9) {
        throw std::invalid_argument("husimi_q: density matrix trace differs from 1");
    }

    const int d = alg.dim();
    const double prefactor = d / (4.0 * kPi);
    QField q{grid, RMatrix(grid.n_theta(), grid.n_phi())};

    // e^{-i m phi} for every phi node, shared across theta rows.
    CMatrix phase(d, grid.n_phi());
    for (int j = 0; j < grid.n_phi(); ++j) {
        for (int k = 0; k < d; ++k) {
            phase(k, j) = std::exp(-kI * alg.spin.m(k) * grid.phi[j]);
        }
    }

    for (int i = 0; i < grid.n_theta(); ++i) {
        const RVector column = wigner_small_d(alg, grid.theta[i]).col(0);
        for (int j = 0; j < grid.n_phi(); ++j) {
            const CVector psi = phase.col(j).cwiseProduct(column.cast<cplx>());
            double value = prefactor * psi.dot(rho * psi).real();
            if (value < 0.0) {
                if (value < -kQClipTolerance) {
                    throw NegativeQError("negative Husimi value " + std::to_string(value) +
                                         " at theta=" + std::to_string(grid.theta[i]) +
                                         ", phi=" + std::to_string(grid.phi[j]));
                }
                value = 0.0;
            }
            q.values(i, j) = value;
        }
    }
    return q;
}

inline QField husimi_q(const DensityMatrix& rho, const SpinAlgebra& alg, const SphereGrid& grid) {
    return husimi_q(rho.matrix(), alg, grid);
}

/// S(phi) = int_0^pi sin(theta) Q(theta, phi) dtheta - 1/(2 pi).
inline PhaseDistribution sync_measure(const QField& q) {
    PhaseDistribution dist{q.grid.phi, std::vector<double>(q.grid.n_phi())};
    for (int j = 0; j < q.grid.n_phi(); ++j) {
        double marginal = 0.0;
        for (int i = 0; i < q.grid.n_theta(); ++i) {
            marginal += q.grid.theta_weights[i] * q.values(i, j);
        }
        dist.values[j] = marginal - 1.0 / (2.0 * kPi);
    }
    return dist;
}

/// Argmax of S(phi); ties go to the smallest phi.
inline Peak peak(const PhaseDistribution& dist) {
    if (dist.values.empty()) {
        throw std::invalid_argument("peak of an empty distribution");
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < dist.values.size(); ++j) {
        if (dist.values[j] > dist.values[best]) best = j;
    }
    return {dist.phi[best], dist.values[best]};
}

/// S(phi) as a linear functional of rho: S(phi_j) = tr(rho K_j) - 1/(2 pi), with
/// K_j = (2S+1)/(4 pi) sum_i w_i |theta_i,phi_j><theta_i,phi_j|. Same quadrature as
/// sync_measure(husimi_q(...)), built once for repeated evaluation along trajectories.
class PhaseKernel {
public:
    PhaseKernel(const SpinAlgebra& alg, SphereGrid grid) : grid_(std::move(grid)) {
        const int d = alg.dim();
        const double prefactor = d / (4.0 * kPi);
        kernels_.reserve(grid_.n_phi());
        std::vector<RVector> columns;
        for (int i = 0; i < grid_.n_theta(); ++i) {
            columns.push_back(wigner_small_d(alg, grid_.theta[i]).col(0));
        }
        for (int j = 0; j < grid_.n_phi(); ++j) {
            CMatrix k = CMatrix::Zero(d, d);
            for (int i = 0; i < grid_.n_theta(); ++i) {
                CVector psi(d);
                for (int m = 0; m < d; ++m) {
                    psi(m) = std::exp(-kI * alg.spin.m(m) * grid_.phi[j]) * columns[i](m);
                }
                k += grid_.theta_weights[i] * (psi * psi.adjoint());
            }
            kernels_.push_back(prefactor * k);
        }
    }

    PhaseDistribution evaluate(const CMatrix& rho) const {
        PhaseDistribution dist{grid_.phi, std::vector<double>(grid_.n_phi())};
        for (int j = 0; j < grid_.n_phi(); ++j) {
            // tr(rho K) = sum_ab rho_ab K_ba
            dist.values[j] = (rho.cwiseProduct(kernels_[j].transpose())).sum().real() -
                             1.0 / (2.0 * kPi);
        }
        return dist;
    }

    const SphereGrid& grid() const { return grid_; }

private:
    SphereGrid grid_;
    std::vector<CMatrix> kernels_;
};

/// Quadrature of Q over the band |theta - pi/2| < half_width.
inline double band_weight(const QField& q, double half_width) {
    double total = 0.0;
    for (int i = 0; i < q.grid.n_theta(); ++i) {
        if (std::abs(q.grid.theta[i] - 0.5 * kPi) < half_width) {
            total += q.grid.theta_weights[i] * q.values.row(i).sum();
        }
    }
    return total * q.grid.phi_step();
}

}  // namespace qsync
