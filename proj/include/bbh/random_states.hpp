// Random feasible states for property suites: gamma ~ Exp(1) pointwise,
// alpha = u*sqrt(gamma(1+gamma)) with u uniform in [-1,1], rho0 ~ U[0,2].
// Covers the interior and the pure-state boundary.
#pragma once

#include <cstdint>
#include <random>

#include "bbh/core.hpp"
#include "bbh/torus_grid.hpp"

namespace bbh {

inline BBHState random_feasible_state(const TorusGrid& grid, std::mt19937_64& rng) {
    std::exponential_distribution<double> exp1(1.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> rho0_dist(0.0, 2.0);
    BBHState state{ScalarField(grid), ScalarField(grid), 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double g = exp1(rng);
        state.gamma[i] = g;
        state.alpha[i] = unit(rng) * std::sqrt(g * (1.0 + g));
    }
    state.rho0 = rho0_dist(rng);
    return state;
}

// Strictly interior variant (|u| <= u_cap < 1) for derivative checks.
inline BBHState random_interior_state(const TorusGrid& grid, std::mt19937_64& rng,
                                      double u_cap = 0.9, double gamma_floor = 0.05) {
    std::exponential_distribution<double> exp1(1.0);
    std::uniform_real_distribution<double> unit(-u_cap, u_cap);
    std::uniform_real_distribution<double> rho0_dist(0.0, 2.0);
    BBHState state{ScalarField(grid), ScalarField(grid), 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double g = gamma_floor + exp1(rng);
        state.gamma[i] = g;
        state.alpha[i] = unit(rng) * std::sqrt(g * (1.0 + g));
    }
    state.rho0 = rho0_dist(rng);
    return state;
}

}  // namespace bbh
