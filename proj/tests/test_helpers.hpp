#pragma once

#include <cmath>

#include "sirtax/grid.hpp"
#include "sirtax/kinetics.hpp"

namespace sirtax_test {

inline sirtax::ModelParams table_params() {
    sirtax::ModelParams p;
    p.K = 15.0;
    p.lambda_S = 0.5;
    p.lambda_I = 0.5;
    p.mu_S = 0.01;
    p.mu_I = 0.05;
    p.eps_reg = 0.0;
    return p;
}

/// Deterministic smooth field from a fixed cosine series; the seed only picks
/// the coefficients (no RNG anywhere).
inline sirtax::Field cosine_series_field(const sirtax::Grid& g, int seed, double offset = 0.0,
                                         double scale = 1.0) {
    const double pi = 3.14159265358979323846;
    sirtax::Field f(g);
    for (std::size_t n = 0; n < f.size(); ++n) {
        const auto x = g.node_coords(n);
        double acc = 0.0;
        for (int p = 0; p <= 2; ++p)
            for (int q = 0; q <= 2; ++q) {
                const double c = std::sin(0.7 * seed + 1.3 * p + 2.9 * q + 0.5);
                double term = c * std::cos(p * pi * x[0] / g.extent(0));
                if (g.dim() == 2) term *= std::cos(q * pi * x[1] / g.extent(1));
                acc += term;
            }
        f[n] = offset + scale * acc / 9.0;
    }
    return f;
}

} // namespace sirtax_test
