// Resonant phase locking of a driven spin 1: prints S(phi) at a few angles.

#include <cstdio>

#include "qsync/dynamics.hpp"
#include "qsync/husimi.hpp"

int main() {
    qsync::SystemParams p;
    p.spin = qsync::Spin::from_value(1.0);
    p.gamma_d = 1.0;
    p.gamma_g = 0.1;
    p.epsilon = 0.01;

    const auto alg = qsync::build_spin_algebra(p.spin);
    const auto rho = qsync::steady_state(p);
    const auto dist = qsync::sync_measure(qsync::husimi_q(rho, alg, qsync::make_grid(64, 8)));
    for (std::size_t j = 0; j < dist.values.size(); ++j) {
        std::printf("phi = %6.3f   S = % .6f\n", dist.phi[j], dist.values[j]);
    }
    const auto pk = qsync::peak(dist);
    std::printf("peak at phi = %.3f, S = %.6f\n", pk.phi_star, pk.s_max);
}
