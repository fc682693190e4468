// density_matrix.hpp — validated density matrices

#pragma once

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "qsync/spin_algebra.hpp"

namespace qsync {

/// Tolerances for the physical-state checks.
struct PhysicalityTolerance {
    double hermiticity{1e-10};
    double trace{1e-9};
    double min_eigenvalue{-1e-9};
};

struct PhysicalityReport {
    double hermiticity_error{0.0};  // max |rho - rho^dagger|
    double trace_error{0.0};        // |tr rho - 1|
    double min_eigenvalue{0.0};     // of the Hermitian part

    bool ok(const PhysicalityTolerance& tol = {}) const {
        return hermiticity_error <= tol.hermiticity && trace_error <= tol.trace &&
               min_eigenvalue > tol.min_eigenvalue;
    }

    std::string describe() const {
        std::ostringstream os;
        os << "hermiticity error " << hermiticity_error << ", trace error " << trace_error
           << ", min eigenvalue " << min_eigenvalue;
        return os.str();
    }
};

inline PhysicalityReport inspect_state(const CMatrix& rho) {
    PhysicalityReport r;
    r.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    r.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
    const CMatrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    return r;
}

class InvalidStateError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Hermitian, unit-trace, positive semidefinite matrix in the Dicke basis.
class DensityMatrix {
public:
    /// Throws InvalidStateError if any invariant is violated.
    explicit DensityMatrix(CMatrix entries, const PhysicalityTolerance& tol = {})
        : rho_(std::move(entries)) {
        if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
            throw InvalidStateError("density matrix must be square and non-empty");
        }
        const auto report = inspect_state(rho_);
        if (!report.ok(tol)) {
            throw InvalidStateError("not a valid density matrix: " + report.describe());
        }
    }

    static DensityMatrix pure(const CVector& psi) {
        const CVector n = psi / psi.norm();
        return DensityMatrix(n * n.adjoint());
    }

    static DensityMatrix maximally_mixed(int dim) {
        return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
    }

    const CMatrix& matrix() const { return rho_; }
    int dim() const { return static_cast<int>(rho_.rows()); }

    cplx expectation(const CMatrix& op) const { return (rho_ * op).trace(); }

private:
    CMatrix rho_;
};

}  // namespace qsync
