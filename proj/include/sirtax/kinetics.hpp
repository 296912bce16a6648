#pragma once

#include <stdexcept>
#include <string>

#include "sirtax/grid.hpp"

namespace sirtax {

/// How the tactic sensitivity depends on S: crowding gives chi(S) = K(1-S),
/// constant_chi keeps chi = K regardless of S.
enum class ChiLaw { crowding, constant_chi };

struct ModelParams {
    double K = 15.0;        ///< taxis sensitivity coefficient
    double lambda_S = 0.5;  ///< infection pressure on susceptibles
    double lambda_I = 0.5;  ///< infection gain of infected
    double mu_S = 0.01;     ///< logistic growth rate of susceptibles
    double mu_I = 0.05;     ///< removal rate of infected
    double eps_reg = 0.0;   ///< diffusion regularization; 0 keeps the degenerate system
    ChiLaw chi_law = ChiLaw::crowding;

    bool operator==(const ModelParams&) const = default;
};

inline void validate_params(const ModelParams& p) {
    auto check = [](double v, const char* name) {
        if (v < 0.0)
            throw std::invalid_argument(std::string("params: ") + name + " must be nonnegative");
    };
    check(p.K, "K");
    check(p.lambda_S, "lambda_S");
    check(p.lambda_I, "lambda_I");
    check(p.mu_S, "mu_S");
    check(p.mu_I, "mu_I");
    check(p.eps_reg, "eps");
    if (p.eps_reg > 1.0)
        throw std::invalid_argument("params: eps must lie in [0,1]");
}

inline double chi(double s_value, double K, ChiLaw law = ChiLaw::crowding) {
    return law == ChiLaw::crowding ? K * (1.0 - s_value) : K;
}

/// SI/(S+I), extended by zero when either argument vanishes.
inline double contact_ratio(double s, double i) {
    if (s == 0.0 || i == 0.0) return 0.0;
    return s * i / (s + i);
}

inline double reaction_f(double s, double i, const ModelParams& p) {
    return -p.lambda_S * contact_ratio(s, i) + p.mu_S * s * (1.0 - s);
}

inline double reaction_g(double s, double i, const ModelParams& p) {
    return p.lambda_I * contact_ratio(s, i) - p.mu_I * i;
}

/// One forward-Euler step of the decoupled removed population, R + dt*mu_I*I.
inline Field removed_update(const Field& R, const Field& I, double mu_I, double dt) {
    Field out = R;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += dt * mu_I * I[k];
    return out;
}

} // namespace sirtax
