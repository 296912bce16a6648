#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sirtax/grid.hpp"

namespace sirtax {

/// One Gaussian infection seed: amplitude * exp(-|x - center|^2 / (2 sigma)).
/// sigma is the width parameter appearing directly under the exponent.
struct GaussianBump {
    double amplitude = 0.0;
    std::array<double, 2> center = {0.0, 0.0};
    double sigma = 0.25;

    bool operator==(const GaussianBump&) const = default;
};

/// Initial data: I0 is the sum of bumps clamped into [0,1], S0 = 1 - I0.
struct InitialConditionSpec {
    std::vector<GaussianBump> bumps;

    bool operator==(const InitialConditionSpec&) const = default;
};

/// Defaults: three seeds inside [0,10]^2 with amplitudes 0.1/0.2/0.3, sigma 0.25.
inline InitialConditionSpec default_initial_conditions() {
    InitialConditionSpec spec;
    spec.bumps = {
        {0.1, {2.5, 2.5}, 0.25},
        {0.2, {5.0, 7.5}, 0.25},
        {0.3, {7.5, 5.0}, 0.25},
    };
    return spec;
}

inline void validate_initial_spec(const InitialConditionSpec& spec) {
    for (std::size_t b = 0; b < spec.bumps.size(); ++b) {
        if (spec.bumps[b].amplitude < 0.0)
            throw std::invalid_argument("initial conditions: bump " + std::to_string(b) +
                                        " has negative amplitude");
        if (!(spec.bumps[b].sigma > 0.0))
            throw std::invalid_argument("initial conditions: bump " + std::to_string(b) +
                                        " needs sigma > 0");
    }
}

/// Evaluates the bump sum at the grid nodes and clamps it into [0,1].
/// Returns (S0, I0) with S0 = 1 - I0, so both lie in [0,1] pointwise.
inline std::pair<Field, Field> synthesize_initials(const Grid& grid, const InitialConditionSpec& spec) {
    validate_initial_spec(spec);
    Field I0(grid), S0(grid);
    for (std::size_t i = 0; i < I0.size(); ++i) {
        const auto x = grid.node_coords(i);
        double sum = 0.0;
        for (const GaussianBump& b : spec.bumps) {
            double r2 = (x[0] - b.center[0]) * (x[0] - b.center[0]);
            if (grid.dim() == 2) r2 += (x[1] - b.center[1]) * (x[1] - b.center[1]);
            sum += b.amplitude * std::exp(-r2 / (2.0 * b.sigma));
        }
        I0[i] = std::min(1.0, sum);
        S0[i] = 1.0 - I0[i];
    }
    return {std::move(S0), std::move(I0)};
}

} // namespace sirtax
