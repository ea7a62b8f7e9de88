// BBH state representation, the grand-canonical and canonical free-energy
// functionals, the entropy density, variational derivatives, and projection
// onto the constraint domain gamma >= 0, alpha^2 <= gamma(gamma+1), rho0 >= 0.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "bbh/math_util.hpp"
#include "bbh/torus_grid.hpp"

namespace bbh {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BoundaryDerivative : SolverError {
    using SolverError::SolverError;
};

struct ModelParams {
    double U;
    double mu;
    double T;

    void validate() const {
        if (!(U > 0.0)) throw std::invalid_argument("ModelParams: U must be > 0");
        if (!(T >= 0.0)) throw std::invalid_argument("ModelParams: T must be >= 0");
    }
};

struct CanonicalParams {
    double U;
    double T;
    double rho;

    void validate() const {
        if (!(U > 0.0)) throw std::invalid_argument("CanonicalParams: U must be > 0");
        if (!(T >= 0.0)) throw std::invalid_argument("CanonicalParams: T must be >= 0");
        if (!(rho >= 0.0)) throw std::invalid_argument("CanonicalParams: rho must be >= 0");
    }
};

namespace detail {
// Slack q = gamma(1+gamma) - alpha^2 (>= 0 on the domain) and the derived
// beta = sqrt(q + 1/4). beta - 1/2 = q/(beta + 1/2) avoids cancellation.
struct BetaParts {
    double beta;
    double beta_minus_half;
    double slack;
};

constexpr double kDomainTolerance = 1e-12;

inline BetaParts beta_parts_checked(double gamma, double alpha) {
    if (!(gamma >= 0.0))
        throw std::domain_error("beta_of: gamma must be >= 0, got " + std::to_string(gamma));
    const double bound = gamma * (1.0 + gamma);
    double q = bound - alpha * alpha;
    if (q < -kDomainTolerance * (1.0 + bound))
        throw std::domain_error("beta_of: alpha^2 exceeds gamma(1+gamma) beyond tolerance");
    if (q < 0.0) q = 0.0;
    const double beta = std::sqrt(q + 0.25);
    return {beta, q / (beta + 0.5), q};
}
}  // namespace detail

// beta(gamma, alpha) = sqrt((1/2+gamma)^2 - alpha^2), in [1/2, gamma+1/2].
inline double beta_of(double gamma_value, double alpha_value) {
    return detail::beta_parts_checked(gamma_value, alpha_value).beta;
}

// Per-mode entropy s = (beta+1/2)ln(beta+1/2) - (beta-1/2)ln(beta-1/2),
// extended by 0 on the pure-state boundary beta = 1/2.
inline double entropy_density(double gamma_value, double alpha_value) {
    const auto bp = detail::beta_parts_checked(gamma_value, alpha_value);
    return xlnx(bp.beta + 0.5) - xlnx(bp.beta_minus_half);
}

struct BBHState {
    ScalarField gamma;
    ScalarField alpha;
    double rho0 = 0.0;

    const TorusGrid& grid() const { return gamma.grid(); }

    bool is_feasible(double tolerance = detail::kDomainTolerance) const {
        if (!(rho0 >= 0.0)) return false;
        for (std::size_t i = 0; i < gamma.size(); ++i) {
            const double g = gamma[i];
            const double a = alpha[i];
            if (!std::isfinite(g) || !std::isfinite(a) || g < 0.0) return false;
            const double bound = g * (1.0 + g);
            if (a * a > bound + tolerance * (1.0 + bound)) return false;
        }
        return true;
    }

    void require_feasible() const {
        if (!is_feasible()) throw std::domain_error("BBHState: domain constraints violated");
    }
};

inline BBHState zero_state(const TorusGrid& grid) {
    return {ScalarField(grid), ScalarField(grid), 0.0};
}

// Entropy functional S = integral of s(gamma, alpha).
inline double entropy_total(const ScalarField& gamma, const ScalarField& alpha) {
    const TorusGrid& grid = gamma.grid();
    return grid.integrate_fn(
        [&](std::size_t i) { return entropy_density(gamma[i], alpha[i]); });
}

// Kinetic + entropy block: integral of eps*gamma - T*S. Bounded below by -C_T.
inline double kinetic_plus_entropy(const ScalarField& gamma, const ScalarField& alpha, double T) {
    const TorusGrid& grid = gamma.grid();
    const double kin = grid.integrate_fn(
        [&](std::size_t i) { return grid.dispersion_at(i) * gamma[i]; });
    if (T == 0.0) return kin;
    return kin - T * entropy_total(gamma, alpha);
}

// Grand-canonical functional. The T = 0 case drops the entropy term entirely
// rather than multiplying it by zero.
inline double free_energy_grand(const BBHState& state, const ModelParams& params) {
    params.validate();
    const TorusGrid& grid = state.grid();
    const double i_gamma = integrate(state.gamma);
    const double i_alpha = integrate(state.alpha);
    const double rho0 = state.rho0;
    KahanSum acc;
    acc.add(grid.integrate_fn([&](std::size_t i) {
        return (grid.dispersion_at(i) - params.mu) * state.gamma[i];
    }));
    acc.add(-params.mu * rho0);
    if (params.T > 0.0) acc.add(-params.T * entropy_total(state.gamma, state.alpha));
    acc.add(0.5 * params.U * i_alpha * i_alpha);
    acc.add(params.U * i_gamma * i_gamma);
    acc.add(params.U * rho0 * i_alpha);
    acc.add(2.0 * params.U * rho0 * i_gamma);
    acc.add(0.5 * params.U * rho0 * rho0);
    return acc.value();
}

// Canonical functional in reduced form: rho0 := rho - integral(gamma).
inline double free_energy_canonical(const ScalarField& gamma, const ScalarField& alpha,
                                    const CanonicalParams& params) {
    params.validate();
    const TorusGrid& grid = gamma.grid();
    const double i_gamma = integrate(gamma);
    if (i_gamma > params.rho + 1e-9)
        throw std::domain_error("free_energy_canonical: integral of gamma exceeds rho");
    const double i_alpha = integrate(alpha);
    const double rho0 = params.rho - i_gamma;
    KahanSum acc;
    acc.add(grid.integrate_fn(
        [&](std::size_t i) { return grid.dispersion_at(i) * gamma[i]; }));
    if (params.T > 0.0) acc.add(-params.T * entropy_total(gamma, alpha));
    acc.add(0.5 * params.U * params.rho * params.rho);
    acc.add(0.5 * params.U * (i_alpha * i_alpha + i_gamma * i_gamma));
    acc.add(params.U * rho0 * (i_alpha + i_gamma));
    return acc.value();
}

struct StateSummary {
    double rho_gamma;
    double int_alpha;
    double rho_total;
    double free_energy;
};

inline StateSummary summarize(const BBHState& state, const ModelParams& params) {
    const double rg = integrate(state.gamma);
    return {rg, integrate(state.alpha), rg + state.rho0, free_energy_grand(state, params)};
}

struct DerivativeBundle {
    ScalarField d_gamma;
    ScalarField d_alpha;
    double d_rho0;
    // Points with beta - 1/2 <= boundary_floor (entropy derivative steep).
    std::size_t near_boundary_points;
};

struct DerivativeOptions {
    double boundary_floor = 1e-12;
    // Clip the entropy log at the floor instead of throwing on the exact
    // boundary; used by the descent oracle to step back into the interior.
    bool clip_boundary = false;
};

// Pointwise variational derivatives of the grand functional. At T = 0 the
// entropy terms are omitted. States exactly on the pure boundary make the
// entropy derivative infinite; without clipping that throws.
inline DerivativeBundle variational_derivatives(const BBHState& state, const ModelParams& params,
                                                const DerivativeOptions& opts = {}) {
    params.validate();
    const TorusGrid& grid = state.grid();
    const double i_gamma = integrate(state.gamma);
    const double i_alpha = integrate(state.alpha);
    DerivativeBundle out{ScalarField(grid), ScalarField(grid), 0.0, 0};
    const double U = params.U;
    const double base_g = -params.mu + 2.0 * U * i_gamma + 2.0 * U * state.rho0;
    const double base_a = U * i_alpha + U * state.rho0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double dg = grid.dispersion_at(i) + base_g;
        double da = base_a;
        if (params.T > 0.0) {
            const double g = state.gamma[i];
            const double a = state.alpha[i];
            auto bp = detail::beta_parts_checked(g, a);
            if (bp.beta_minus_half <= opts.boundary_floor) ++out.near_boundary_points;
            if (bp.beta_minus_half <= 0.0) {
                if (!opts.clip_boundary)
                    throw BoundaryDerivative(
                        "variational_derivatives: state on the pure boundary (beta = 1/2)");
                bp.beta_minus_half = opts.boundary_floor;
            }
            const double log_ratio = std::log((bp.beta + 0.5) / bp.beta_minus_half);
            dg -= params.T * ((g + 0.5) / bp.beta) * log_ratio;
            da += params.T * (a / bp.beta) * log_ratio;
        }
        out.d_gamma[i] = dg;
        out.d_alpha[i] = da;
    }
    out.d_rho0 = -params.mu + U * i_alpha + 2.0 * U * i_gamma + U * state.rho0;
    return out;
}

// Pointwise clamp onto the domain: gamma and rho0 floored at 0, alpha clamped
// to +-sqrt(gamma(1+gamma)). Identity on feasible states.
inline BBHState project_to_domain(const ScalarField& raw_gamma, const ScalarField& raw_alpha,
                                  double raw_rho0) {
    const TorusGrid& grid = raw_gamma.grid();
    BBHState out{ScalarField(grid), ScalarField(grid), std::max(raw_rho0, 0.0)};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double g = std::max(raw_gamma[i], 0.0);
        const double cap = std::sqrt(g * (1.0 + g));
        out.gamma[i] = g;
        out.alpha[i] = std::clamp(raw_alpha[i], -cap, cap);
    }
    return out;
}

// C_T = -T * integral ln(1 - e^(-eps/T)) > 0; kinetic + entropy >= -C_T.
inline double entropy_lower_bound_constant(double temperature, const TorusGrid& grid) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("entropy_lower_bound_constant: temperature must be > 0");
    return -temperature * grid.integrate_fn([&](std::size_t i) {
        return log1m_exp_neg(grid.dispersion_at(i) / temperature);
    });
}

}  // namespace bbh
