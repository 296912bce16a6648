#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sirtax/grid.hpp"
#include "sirtax/kinetics.hpp"
#include "sirtax/stencil.hpp"

namespace sirtax {

struct SimState {
    double t = 0.0;
    Field S, I, R;

    bool operator==(const SimState&) const = default;
};

inline SimState make_state(double t, Field S, Field I, Field R) {
    return SimState{t, std::move(S), std::move(I), std::move(R)};
}

struct StepControl {
    double safety = 0.5;
    double dt_max = std::numeric_limits<double>::infinity();
    bool clamping = false;

    bool operator==(const StepControl&) const = default;
};

inline void validate_control(const StepControl& c) {
    if (!(c.safety > 0.0) || c.safety > 1.0)
        throw std::invalid_argument("control: safety must lie in (0,1]");
    if (!(c.dt_max > 0.0))
        throw std::invalid_argument("control: dt_max must be positive");
}

/// Raised when a step produces a non-finite value; carries the node and time.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(double time, std::size_t node, const std::string& what_field)
        : std::runtime_error("non-finite value in field " + what_field + " at node " +
                             std::to_string(node) + ", t=" + std::to_string(time)),
          time(time), node(node) {}

    NumericalFailure(const std::string& message, double time, std::size_t node)
        : std::runtime_error(message), time(time), node(node) {}

    double time;
    std::size_t node;
};

/// Outright explicit-stability limit (no safety factor, no cap): the minimum
/// of the diffusion bound h^2/(2 dim D_eff) with D_eff = max(1, eps + max S),
/// the advection bound h/(dim |v|_max) for the taxis speed, and the reaction
/// bound 1/(lambda_S + lambda_I + mu_S + mu_I).
inline double stability_limit(const SimState& state, const ModelParams& p, const Grid& grid) {
    const double h = grid.min_spacing();
    const double dim = grid.dim();

    const double d_eff = std::max(1.0, p.eps_reg + field_max(state.S));
    const double diffusion = h * h / (2.0 * dim * d_eff);

    const double vmax = max_taxis_speed(state.S, state.I, p.K, p.chi_law);
    const double advection = h / (dim * vmax + std::numeric_limits<double>::min());

    const double l_reac = p.lambda_S + p.lambda_I + p.mu_S + p.mu_I;
    const double reaction = l_reac > 0.0 ? 1.0 / l_reac : std::numeric_limits<double>::infinity();

    return std::min({diffusion, advection, reaction});
}

inline double stable_dt(const SimState& state, const ModelParams& p, const Grid& grid,
                        const StepControl& control) {
    validate_control(control);
    return std::min(control.safety * stability_limit(state, p, grid), control.dt_max);
}

struct StepResult {
    SimState state;
    long clamp_events = 0;
};

/// One forward-Euler step of the coupled system. The I-equation keeps its
/// nondivergence form: the coefficient (eps + S) multiplies the Laplacian
/// stencil nodewise. Clamping, when enabled, counts every clamped node.
inline StepResult step(const SimState& state, const ModelParams& p, const Grid& grid, double dt,
                       const StepControl& control = {}) {
    if (!(dt > 0.0))
        throw std::invalid_argument("step: dt must be positive");
    const double limit = stability_limit(state, p, grid);
    if (dt > limit * (1.0 + 1e-12))
        throw std::invalid_argument("step: dt=" + std::to_string(dt) +
                                    " exceeds the stability limit " + std::to_string(limit));

    const Field lap_S = neumann_laplacian(state.S);
    const Field lap_I = neumann_laplacian(state.I);
    const Field taxis = upwind_taxis_divergence(state.S, state.I, p.K, p.chi_law);

    StepResult out{SimState{state.t + dt, Field(grid), Field(grid), Field(grid)}, 0};
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        const double s = state.S[k], i = state.I[k];
        double s_new = s + dt * (lap_S[k] + taxis[k] + reaction_f(s, i, p));
        double i_new = i + dt * ((p.eps_reg + s) * lap_I[k] + reaction_g(s, i, p));
        if (control.clamping) {
            const double s_cl = std::clamp(s_new, 0.0, 1.0);
            const double i_cl = std::max(i_new, 0.0);
            if (s_cl != s_new) ++out.clamp_events;
            if (i_cl != i_new) ++out.clamp_events;
            s_new = s_cl;
            i_new = i_cl;
        }
        out.state.S[k] = s_new;
        out.state.I[k] = i_new;
        out.state.R[k] = state.R[k] + dt * p.mu_I * i;
    }

    std::size_t bad = 0;
    if (!field_all_finite(out.state.S, &bad)) throw NumericalFailure(out.state.t, bad, "S");
    if (!field_all_finite(out.state.I, &bad)) throw NumericalFailure(out.state.t, bad, "I");
    if (!field_all_finite(out.state.R, &bad)) throw NumericalFailure(out.state.t, bad, "R");
    return out;
}

} // namespace sirtax
