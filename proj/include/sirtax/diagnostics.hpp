#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sirtax/grid.hpp"
#include "sirtax/kinetics.hpp"
#include "sirtax/stencil.hpp"
#include "sirtax/stepper.hpp"

namespace sirtax {

/// One sampled row of the monitored norms and bound checks.
struct DiagnosticsRow {
    double t = 0.0;
    double norm_grad_I = 0.0;        ///< L2 norm of grad I
    double norm_I = 0.0;             ///< L2 norm of I
    double norm_sqrtS_lap_I = 0.0;   ///< L2 norm of sqrt(S) * Lap I
    double norm_sqrt_eps_lap_I = 0.0;///< sqrt(eps) * L2 norm of Lap I
    double norm_dt_I = 0.0;          ///< L2 norm of the backward difference of I
    double norm_grad_S = 0.0;        ///< L2 norm of grad S
    double dual_norm_dt_S = 0.0;     ///< H1-dual proxy of the backward difference of S
    double min_S = 0.0;
    double max_S = 0.0;
    double max_I = 0.0;
    double mass_S = 0.0;
    double mass_I = 0.0;
    double mass_R = 0.0;
    long clamp_events = 0;           ///< cumulative clamp count up to this sample
    double supersolution_slack = 0.0;
};

struct DiagnosticsRecord {
    std::vector<DiagnosticsRow> rows;
};

/// Nonnegative discrete test functions: tensor-product hats on a coarse
/// sublattice plus the constant one.
struct TestFunctionFamily {
    std::vector<Field> members;
};

inline TestFunctionFamily make_hat_family(const Grid& grid, int per_axis = 5) {
    if (per_axis < 0) throw std::invalid_argument("hat family: per_axis must be nonnegative");
    TestFunctionFamily family;

    auto hat_1d = [](double x, double center, double width) {
        return std::max(0.0, 1.0 - std::abs(x - center) / width);
    };

    const double wx = grid.extent(0) / (per_axis + 1);
    if (grid.dim() == 1) {
        for (int j = 0; j < per_axis; ++j) {
            const double cx = wx * (j + 1);
            Field psi(grid);
            for (std::size_t k = 0; k < psi.size(); ++k)
                psi[k] = hat_1d(grid.node_coords(k)[0], cx, wx);
            family.members.push_back(std::move(psi));
        }
    } else {
        const double wy = grid.extent(1) / (per_axis + 1);
        for (int jy = 0; jy < per_axis; ++jy)
            for (int jx = 0; jx < per_axis; ++jx) {
                const double cx = wx * (jx + 1), cy = wy * (jy + 1);
                Field psi(grid);
                for (std::size_t k = 0; k < psi.size(); ++k) {
                    const auto x = grid.node_coords(k);
                    psi[k] = hat_1d(x[0], cx, wx) * hat_1d(x[1], cy, wy);
                }
                family.members.push_back(std::move(psi));
            }
    }
    family.members.push_back(Field(grid, 1.0));
    return family;
}

class DualNormFailure : public std::runtime_error {
public:
    DualNormFailure(int iterations, double residual)
        : std::runtime_error("dual norm solve did not converge in " + std::to_string(iterations) +
                             " iterations, residual " + std::to_string(residual)),
          iterations(iterations), residual(residual) {}

    int iterations;
    double residual;
};

namespace detail {

/// Matvec of the symmetric positive definite form vol .* ((id - Lap_h) w).
inline void helmholtz_apply(const Field& w, Field& out) {
    const Grid& g = w.grid();
    Field lap = neumann_laplacian(w);
    for (std::size_t k = 0; k < w.size(); ++k)
        out[k] = g.volume_weight(k) * (w[k] - lap[k]);
}

} // namespace detail

/// Riesz realization of the H1-dual norm: solves (id - Lap_h) w = r with
/// Neumann boundary handling by conjugate gradients (relative residual 1e-8)
/// and returns the discrete H1 norm of w. Throws DualNormFailure when the
/// iteration cap is reached, reporting the achieved residual.
inline double dual_norm_proxy(const Field& r, int max_iters = 0, double rel_tol = 1e-8) {
    const Grid& g = r.grid();
    const std::size_t n = g.node_count();
    if (!field_all_finite(r))
        throw std::invalid_argument("dual norm: input field has non-finite values");
    if (max_iters <= 0) max_iters = static_cast<int>(10 * n + 100);

    Field b(g);
    for (std::size_t k = 0; k < n; ++k) b[k] = g.volume_weight(k) * r[k];

    double b_norm2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) b_norm2 += b[k] * b[k];
    if (b_norm2 == 0.0) return 0.0;
    const double stop2 = rel_tol * rel_tol * b_norm2;

    Field w(g, 0.0), res = b, p = b, ap(g);
    double rho = b_norm2;
    int it = 0;
    for (; it < max_iters && rho > stop2; ++it) {
        detail::helmholtz_apply(p, ap);
        double p_ap = 0.0;
        for (std::size_t k = 0; k < n; ++k) p_ap += p[k] * ap[k];
        const double alpha = rho / p_ap;
        for (std::size_t k = 0; k < n; ++k) {
            w[k] += alpha * p[k];
            res[k] -= alpha * ap[k];
        }
        double rho_new = 0.0;
        for (std::size_t k = 0; k < n; ++k) rho_new += res[k] * res[k];
        const double beta = rho_new / rho;
        rho = rho_new;
        for (std::size_t k = 0; k < n; ++k) p[k] = res[k] + beta * p[k];
    }
    if (rho > stop2) throw DualNormFailure(it, std::sqrt(rho / b_norm2));

    // |w|_H1^2 = w' (M + A) w = w' b at convergence.
    double h1 = 0.0;
    for (std::size_t k = 0; k < n; ++k) h1 += w[k] * b[k];
    return std::sqrt(std::max(0.0, h1));
}

/// Minimum over the family of the one-sided variational slack
///   int dI/dt psi dx - int (-grad I . grad(psi S) + g(S,I) psi) dx.
/// A solution trajectory keeps this nonnegative up to discretization error.
inline double supersolution_residual(const SimState& prev, const SimState& cur, double dt,
                                     const ModelParams& p, const TestFunctionFamily& family) {
    const Grid& g = cur.S.grid();
    Field dIdt(g);
    if (dt > 0.0)
        for (std::size_t k = 0; k < dIdt.size(); ++k) dIdt[k] = (cur.I[k] - prev.I[k]) / dt;

    const VectorField grad_I = central_gradient(cur.I);
    Field g_field(g);
    for (std::size_t k = 0; k < g_field.size(); ++k)
        g_field[k] = reaction_g(cur.S[k], cur.I[k], p);

    double min_slack = std::numeric_limits<double>::infinity();
    Field psi_S(g);
    for (const Field& psi : family.members) {
        for (std::size_t k = 0; k < psi_S.size(); ++k) psi_S[k] = psi[k] * cur.S[k];
        const VectorField grad_psi_S = central_gradient(psi_S);
        const double slack = field_inner(dIdt, psi) + vector_inner(grad_I, grad_psi_S) -
                             field_inner(g_field, psi);
        min_slack = std::min(min_slack, slack);
    }
    return family.members.empty() ? 0.0 : min_slack;
}

/// All monitored norms for the sample at cur.t; prev is the state one step of
/// size dt earlier (pass dt = 0 with prev = cur for the initial sample).
inline DiagnosticsRow record_sample(const SimState& prev, const SimState& cur, double dt,
                                    const ModelParams& p, const TestFunctionFamily& family,
                                    long clamp_events = 0) {
    const Grid& g = cur.S.grid();
    DiagnosticsRow row;
    row.t = cur.t;

    const Field lap_I = neumann_laplacian(cur.I);
    Field sqrtS_lap_I(g);
    for (std::size_t k = 0; k < lap_I.size(); ++k)
        sqrtS_lap_I[k] = std::sqrt(std::max(0.0, cur.S[k])) * lap_I[k];

    Field dSdt(g), dIdt(g);
    if (dt > 0.0)
        for (std::size_t k = 0; k < dSdt.size(); ++k) {
            dSdt[k] = (cur.S[k] - prev.S[k]) / dt;
            dIdt[k] = (cur.I[k] - prev.I[k]) / dt;
        }

    row.norm_grad_I = vector_l2_norm(central_gradient(cur.I));
    row.norm_I = field_l2_norm(cur.I);
    row.norm_sqrtS_lap_I = field_l2_norm(sqrtS_lap_I);
    row.norm_sqrt_eps_lap_I = std::sqrt(p.eps_reg) * field_l2_norm(lap_I);
    row.norm_dt_I = field_l2_norm(dIdt);
    row.norm_grad_S = vector_l2_norm(central_gradient(cur.S));
    row.dual_norm_dt_S = dual_norm_proxy(dSdt);
    row.min_S = field_min(cur.S);
    row.max_S = field_max(cur.S);
    row.max_I = field_max(cur.I);
    row.mass_S = field_integral(cur.S);
    row.mass_I = field_integral(cur.I);
    row.mass_R = field_integral(cur.R);
    row.clamp_events = clamp_events;
    // the inequality needs a step behind it; the initial sample records zero
    row.supersolution_slack =
        dt > 0.0 ? supersolution_residual(prev, cur, dt, p, family) : 0.0;
    return row;
}

// ---------------------------------------------------------------------------
// Manufactured-solution convergence measurement

enum class MmsOperator { laplacian, gradient, upwind_taxis };

struct MmsRow {
    double h = 0.0;
    double error = 0.0;
    std::optional<double> observed_order; ///< log2(e_coarse / e_fine), empty on the first grid
};

namespace detail {

constexpr double kPi = 3.14159265358979323846;

/// Max-norm error of one operator against its analytic value on one grid.
/// The manufactured fields are cosine products with zero normal derivative
/// on [0, extent] axes; the taxis case uses S in [0.25, 0.75] and K = 1.
inline double mms_error_on_grid(MmsOperator op, const Grid& g) {
    const double kx = kPi / g.extent(0);
    const double ky = g.dim() == 2 ? kPi / g.extent(1) : 0.0;

    auto base = [&](double x, double y) {
        double v = std::cos(kx * x);
        if (g.dim() == 2) v *= std::cos(ky * y);
        return v;
    };

    Field f(g);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const auto x = g.node_coords(k);
        f[k] = base(x[0], x[1]);
    }

    double err = 0.0;
    if (op == MmsOperator::laplacian) {
        const Field lap = neumann_laplacian(f);
        const double factor = -(kx * kx + ky * ky);
        for (std::size_t k = 0; k < f.size(); ++k)
            err = std::max(err, std::abs(lap[k] - factor * f[k]));
    } else if (op == MmsOperator::gradient) {
        const VectorField grad = central_gradient(f);
        for (std::size_t k = 0; k < f.size(); ++k) {
            const auto x = g.node_coords(k);
            const double gx = -kx * std::sin(kx * x[0]) * (g.dim() == 2 ? std::cos(ky * x[1]) : 1.0);
            err = std::max(err, std::abs(grad.component(0, k) - gx));
            if (g.dim() == 2) {
                const double gy = -ky * std::cos(kx * x[0]) * std::sin(ky * x[1]);
                err = std::max(err, std::abs(grad.component(1, k) - gy));
            }
        }
    } else {
        const double K = 1.0;
        Field S(g), I(g);
        for (std::size_t k = 0; k < S.size(); ++k) {
            const auto x = g.node_coords(k);
            S[k] = 0.5 + 0.25 * base(x[0], x[1]);
            I[k] = std::cos(kx * x[0]) + (g.dim() == 2 ? std::cos(ky * x[1]) : 0.0);
        }
        const Field div = upwind_taxis_divergence(S, I, K, ChiLaw::crowding);
        for (std::size_t k = 0; k < S.size(); ++k) {
            const auto x = g.node_coords(k);
            const double sx = std::sin(kx * x[0]), cx = std::cos(kx * x[0]);
            const double sy = g.dim() == 2 ? std::sin(ky * x[1]) : 0.0;
            const double cy = g.dim() == 2 ? std::cos(ky * x[1]) : 1.0;
            const double dSx = -0.25 * kx * sx * cy;
            const double dSy = -0.25 * ky * cx * sy;
            const double dIx = -kx * sx;
            const double dIy = -ky * sy;
            const double lap_I_ref = -kx * kx * cx - (g.dim() == 2 ? ky * ky * cy : 0.0);
            const double s = S[k];
            const double ref = K * ((1.0 - 2.0 * s) * (dSx * dIx + dSy * dIy) +
                                    (1.0 - s) * s * lap_I_ref);
            err = std::max(err, std::abs(div[k] - ref));
        }
    }
    return err;
}

} // namespace detail

/// Evaluates one discrete operator against its analytic value on each grid of
/// a nested refinement sequence (spacing halves between neighbours) and
/// reports the max-norm error plus the pairwise observed order.
inline std::vector<MmsRow> mms_convergence_study(MmsOperator op, const std::vector<Grid>& grids) {
    if (grids.size() < 3)
        throw std::invalid_argument("mms study: need at least 3 nested grids");
    for (std::size_t k = 1; k < grids.size(); ++k) {
        if (grids[k].dim() != grids[0].dim())
            throw std::invalid_argument("mms study: grids must share the dimension");
        for (int d = 0; d < grids[0].dim(); ++d) {
            if (grids[k].extent(d) != grids[0].extent(d))
                throw std::invalid_argument("mms study: grids must share the extents");
            if (grids[k].nodes(d) - 1 != 2 * (grids[k - 1].nodes(d) - 1))
                throw std::invalid_argument("mms study: grid sequence is not nested (spacing must halve)");
        }
    }

    std::vector<MmsRow> rows;
    for (std::size_t k = 0; k < grids.size(); ++k) {
        MmsRow row;
        row.h = grids[k].min_spacing();
        row.error = detail::mms_error_on_grid(op, grids[k]);
        if (k > 0 && row.error > 0.0)
            row.observed_order = std::log2(rows.back().error / row.error);
        rows.push_back(row);
    }
    return rows;
}

} // namespace sirtax
