#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "sirtax/grid.hpp"
#include "sirtax/kinetics.hpp"

namespace sirtax {

/// Per-node vector samples (gradients, fluxes), stored component-major.
class VectorField {
public:
    VectorField() = default;

    explicit VectorField(const Grid& grid)
        : grid_(grid), comp_(grid.node_count() * grid.dim(), 0.0) {}

    const Grid& grid() const { return grid_; }

    double component(int axis, std::size_t node) const {
        return comp_[static_cast<std::size_t>(axis) * grid_.node_count() + node];
    }
    double& component(int axis, std::size_t node) {
        return comp_[static_cast<std::size_t>(axis) * grid_.node_count() + node];
    }

    const std::vector<double>& raw() const { return comp_; }

private:
    Grid grid_;
    std::vector<double> comp_;
};

/// Volume-weighted L2 norm of a vector field.
inline double vector_l2_norm(const VectorField& v) {
    const Grid& g = v.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        double s = 0.0;
        for (int d = 0; d < g.dim(); ++d) s += v.component(d, i) * v.component(d, i);
        acc += g.volume_weight(i) * s;
    }
    return std::sqrt(acc);
}

/// Volume-weighted inner product sum_i w_i a(i).b(i).
inline double vector_inner(const VectorField& a, const VectorField& b) {
    const Grid& g = a.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        double s = 0.0;
        for (int d = 0; d < g.dim(); ++d) s += a.component(d, i) * b.component(d, i);
        acc += g.volume_weight(i) * s;
    }
    return acc;
}

/// Second-order 3-point (1D) / 5-point (2D) Laplacian with mirror ghosts,
/// realizing the zero normal derivative at the boundary nodes.
inline Field neumann_laplacian(const Field& u) {
    const Grid& g = u.grid();
    Field out(g);
    const int nx = g.nx(), ny = g.ny();
    const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
    const double ihy2 = g.dim() == 2 ? 1.0 / (g.spacing(1) * g.spacing(1)) : 0.0;

    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const std::size_t k = g.index(ix, iy);
            const int ixm = ix > 0 ? ix - 1 : 1;
            const int ixp = ix < nx - 1 ? ix + 1 : nx - 2;
            double lap = (u.at(ixm, iy) - 2.0 * u[k] + u.at(ixp, iy)) * ihx2;
            if (g.dim() == 2) {
                const int iym = iy > 0 ? iy - 1 : 1;
                const int iyp = iy < ny - 1 ? iy + 1 : ny - 2;
                lap += (u.at(ix, iym) - 2.0 * u[k] + u.at(ix, iyp)) * ihy2;
            }
            out[k] = lap;
        }
    }
    return out;
}

/// Second-order central gradient; the normal component at boundary nodes is
/// exactly zero (mirror ghosts make the central difference vanish there).
inline VectorField central_gradient(const Field& u) {
    const Grid& g = u.grid();
    VectorField out(g);
    const int nx = g.nx(), ny = g.ny();
    const double i2hx = 1.0 / (2.0 * g.spacing(0));

    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 1; ix < nx - 1; ++ix)
            out.component(0, g.index(ix, iy)) = (u.at(ix + 1, iy) - u.at(ix - 1, iy)) * i2hx;
        out.component(0, g.index(0, iy)) = 0.0;
        out.component(0, g.index(nx - 1, iy)) = 0.0;
    }
    if (g.dim() == 2) {
        const double i2hy = 1.0 / (2.0 * g.spacing(1));
        for (int ix = 0; ix < nx; ++ix) {
            for (int iy = 1; iy < ny - 1; ++iy)
                out.component(1, g.index(ix, iy)) = (u.at(ix, iy + 1) - u.at(ix, iy - 1)) * i2hy;
            out.component(1, g.index(ix, 0)) = 0.0;
            out.component(1, g.index(ix, ny - 1)) = 0.0;
        }
    }
    return out;
}

namespace detail {

/// Flux chi(S)S dI through the face between two adjacent nodes. The face
/// gradient is central; the transported quantity chi(S)S is taken from the
/// upwind side of the advection velocity -chi(S) dI. Ties average both sides.
inline double taxis_face_flux(double sL, double sR, double iL, double iR,
                              double inv_h, double K, ChiLaw law) {
    const double dI = (iR - iL) * inv_h;
    const double chiL = chi(sL, K, law);
    const double chiR = chi(sR, K, law);
    const double v = -0.5 * (chiL + chiR) * dI;
    double q;
    if (v > 0.0)
        q = chiL * sL;
    else if (v < 0.0)
        q = chiR * sR;
    else
        q = 0.5 * (chiL * sL + chiR * sR);
    return q * dI;
}

} // namespace detail

/// Discrete div(chi(S) S grad I) from face-centered upwind fluxes. Boundary
/// nodes follow the mirror convention (equivalently: zero flux through the
/// domain boundary and half-size boundary cells), which makes the
/// volume-weighted sum of the output telescope to zero.
inline Field upwind_taxis_divergence(const Field& S, const Field& I, double K,
                                     ChiLaw law = ChiLaw::crowding) {
    const Grid& g = S.grid();
    Field out(g);
    const int nx = g.nx(), ny = g.ny();

    {
        const double hx = g.spacing(0), inv_hx = 1.0 / hx;
        std::vector<double> flux(nx - 1);
        for (int iy = 0; iy < ny; ++iy) {
            for (int ix = 0; ix < nx - 1; ++ix)
                flux[ix] = detail::taxis_face_flux(S.at(ix, iy), S.at(ix + 1, iy),
                                                   I.at(ix, iy), I.at(ix + 1, iy),
                                                   inv_hx, K, law);
            out.at(0, iy) += 2.0 * flux[0] * inv_hx;
            for (int ix = 1; ix < nx - 1; ++ix)
                out.at(ix, iy) += (flux[ix] - flux[ix - 1]) * inv_hx;
            out.at(nx - 1, iy) += -2.0 * flux[nx - 2] * inv_hx;
        }
    }
    if (g.dim() == 2) {
        const double hy = g.spacing(1), inv_hy = 1.0 / hy;
        std::vector<double> flux(ny - 1);
        for (int ix = 0; ix < nx; ++ix) {
            for (int iy = 0; iy < ny - 1; ++iy)
                flux[iy] = detail::taxis_face_flux(S.at(ix, iy), S.at(ix, iy + 1),
                                                   I.at(ix, iy), I.at(ix, iy + 1),
                                                   inv_hy, K, law);
            out.at(ix, 0) += 2.0 * flux[0] * inv_hy;
            for (int iy = 1; iy < ny - 1; ++iy)
                out.at(ix, iy) += (flux[iy] - flux[iy - 1]) * inv_hy;
            out.at(ix, ny - 1) += -2.0 * flux[ny - 2] * inv_hy;
        }
    }
    return out;
}

/// Largest face advection speed |chi(S) dI| over all faces; drives the CFL bound.
inline double max_taxis_speed(const Field& S, const Field& I, double K, ChiLaw law) {
    const Grid& g = S.grid();
    const int nx = g.nx(), ny = g.ny();
    double vmax = 0.0;

    const double inv_hx = 1.0 / g.spacing(0);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx - 1; ++ix) {
            const double dI = (I.at(ix + 1, iy) - I.at(ix, iy)) * inv_hx;
            const double cbar = 0.5 * (chi(S.at(ix, iy), K, law) + chi(S.at(ix + 1, iy), K, law));
            vmax = std::max(vmax, std::abs(cbar * dI));
        }
    if (g.dim() == 2) {
        const double inv_hy = 1.0 / g.spacing(1);
        for (int ix = 0; ix < nx; ++ix)
            for (int iy = 0; iy < ny - 1; ++iy) {
                const double dI = (I.at(ix, iy + 1) - I.at(ix, iy)) * inv_hy;
                const double cbar = 0.5 * (chi(S.at(ix, iy), K, law) + chi(S.at(ix, iy + 1), K, law));
                vmax = std::max(vmax, std::abs(cbar * dI));
            }
    }
    return vmax;
}

} // namespace sirtax
