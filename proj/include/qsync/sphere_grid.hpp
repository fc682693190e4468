// sphere_grid.hpp — product quadrature on the unit sphere
//
// theta: Gauss-Legendre on [0, pi] with the sin(theta) Jacobian folded into the weights.
// phi:   uniform nodes 2 pi k / n_phi (trapezoid rule, exact for trigonometric
//        polynomials of degree < n_phi).

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qsync/spin_algebra.hpp"

namespace qsync {

struct GaussLegendre {
    std::vector<double> nodes;    // ascending in [-1, 1]
    std::vector<double> weights;
};

/// Newton iteration on P_n from the Chebyshev-like initial guess.
inline GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
    GaussLegendre gl{std::vector<double>(n), std::vector<double>(n)};
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0;
        double p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (x * p0 - p1) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.nodes[n - 1 - i] = x;
        gl.nodes[i] = -x;
        gl.weights[i] = w;
        gl.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) gl.nodes[n / 2] = 0.0;
    return gl;
}

struct SphereGrid {
    std::vector<double> theta;          // ascending in (0, pi)
    std::vector<double> theta_weights;  // include sin(theta); sum to 2
    std::vector<double> phi;            // 2 pi k / n_phi

    int n_theta() const { return static_cast<int>(theta.size()); }
    int n_phi() const { return static_cast<int>(phi.size()); }
    double phi_step() const { return 2.0 * kPi / n_phi(); }
};

inline constexpr int kDefaultThetaNodes = 64;
inline constexpr int kDefaultPhiNodes = 360;

/// Accuracy needs roughly n_theta >= 2S + 2 and n_phi > 4S + 1; counts below 2 are rejected.
inline SphereGrid make_grid(int n_theta = kDefaultThetaNodes, int n_phi = kDefaultPhiNodes) {
    if (n_theta < 2 || n_phi < 2) {
        throw std::invalid_argument("sphere grid needs at least 2 nodes per axis");
    }
    const auto gl = gauss_legendre(n_theta);
    SphereGrid g;
    g.theta.resize(n_theta);
    g.theta_weights.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        const double th = 0.5 * kPi * (gl.nodes[i] + 1.0);
        g.theta[i] = th;
        g.theta_weights[i] = 0.5 * kPi * gl.weights[i] * std::sin(th);
    }
    g.phi.resize(n_phi);
    for (int j = 0; j < n_phi; ++j) {
        g.phi[j] = 2.0 * kPi * (static_cast<double>(j) / n_phi);
    }
    return g;
}

}  // namespace qsync
