#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sirtax {

/// Node-centered uniform grid on [0, extent] per axis, 1D or 2D.
/// Nodes sit on the boundary; spacing is extent/(nodes-1).
class Grid {
public:
    Grid() = default;

    Grid(int dim, std::array<double, 2> extent, std::array<int, 2> nodes)
        : dim_(dim), extent_(extent), nodes_(nodes) {
        if (dim_ != 1 && dim_ != 2)
            throw std::invalid_argument("Grid: dim must be 1 or 2, got " + std::to_string(dim_));
        if (dim_ == 1) {
            extent_[1] = 0.0;
            nodes_[1] = 1;
        }
        for (int d = 0; d < dim_; ++d) {
            if (nodes_[d] < 3)
                throw std::invalid_argument("Grid: need at least 3 nodes per axis, got " +
                                            std::to_string(nodes_[d]) + " on axis " + std::to_string(d));
            if (!(extent_[d] > 0.0))
                throw std::invalid_argument("Grid: extent must be positive on axis " + std::to_string(d));
        }
    }

    int dim() const { return dim_; }
    int nx() const { return nodes_[0]; }
    int ny() const { return nodes_[1]; }
    int nodes(int axis) const { return nodes_[axis]; }
    double extent(int axis) const { return extent_[axis]; }
    double spacing(int axis) const { return extent_[axis] / (nodes_[axis] - 1); }
    double min_spacing() const {
        double h = spacing(0);
        if (dim_ == 2) h = std::min(h, spacing(1));
        return h;
    }

    std::size_t node_count() const {
        return static_cast<std::size_t>(nodes_[0]) * static_cast<std::size_t>(nodes_[1]);
    }

    /// Linear index, x fastest.
    std::size_t index(int ix, int iy = 0) const {
        return static_cast<std::size_t>(iy) * nodes_[0] + ix;
    }

    double coord(int axis, int i) const { return spacing(axis) * i; }

    std::array<double, 2> node_coords(std::size_t idx) const {
        const int ix = static_cast<int>(idx % nodes_[0]);
        const int iy = static_cast<int>(idx / nodes_[0]);
        return {coord(0, ix), dim_ == 2 ? coord(1, iy) : 0.0};
    }

    /// Trapezoidal cell volume of a node: h per axis, halved on the boundary.
    /// These weights sum to |Omega| exactly.
    double volume_weight(std::size_t idx) const {
        const int ix = static_cast<int>(idx % nodes_[0]);
        const int iy = static_cast<int>(idx / nodes_[0]);
        double w = axis_weight(0, ix);
        if (dim_ == 2) w *= axis_weight(1, iy);
        return w;
    }

    double domain_measure() const {
        double m = extent_[0];
        if (dim_ == 2) m *= extent_[1];
        return m;
    }

    bool operator==(const Grid&) const = default;

private:
    double axis_weight(int axis, int i) const {
        const double h = spacing(axis);
        return (i == 0 || i == nodes_[axis] - 1) ? 0.5 * h : h;
    }

    int dim_ = 2;
    std::array<double, 2> extent_ = {10.0, 10.0};
    std::array<int, 2> nodes_ = {65, 65};
};

inline Grid build_grid(int dim, std::array<double, 2> extents, std::array<int, 2> nodes_per_axis) {
    return Grid(dim, extents, nodes_per_axis);
}

/// Scalar samples on the nodes of a grid.
class Field {
public:
    Field() = default;

    explicit Field(const Grid& grid, double fill = 0.0)
        : grid_(grid), values_(grid.node_count(), fill) {}

    Field(const Grid& grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.node_count())
            throw std::invalid_argument("Field: value count does not match grid node count");
    }

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    double at(int ix, int iy = 0) const { return values_[grid_.index(ix, iy)]; }
    double& at(int ix, int iy = 0) { return values_[grid_.index(ix, iy)]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool operator==(const Field&) const = default;

private:
    Grid grid_;
    std::vector<double> values_;
};

inline double field_min(const Field& f) {
    double m = f[0];
    for (std::size_t i = 1; i < f.size(); ++i) m = std::min(m, f[i]);
    return m;
}

inline double field_max(const Field& f) {
    double m = f[0];
    for (std::size_t i = 1; i < f.size(); ++i) m = std::max(m, f[i]);
    return m;
}

/// Volume-weighted integral over the domain (trapezoidal quadrature).
inline double field_integral(const Field& f) {
    const Grid& g = f.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += g.volume_weight(i) * f[i];
    return acc;
}

/// Discrete L2(Omega) norm with trapezoidal weights.
inline double field_l2_norm(const Field& f) {
    const Grid& g = f.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += g.volume_weight(i) * f[i] * f[i];
    return std::sqrt(acc);
}

inline double field_inner(const Field& a, const Field& b) {
    const Grid& g = a.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += g.volume_weight(i) * a[i] * b[i];
    return acc;
}

inline bool field_all_finite(const Field& f, std::size_t* bad_node = nullptr) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!std::isfinite(f[i])) {
            if (bad_node) *bad_node = i;
            return false;
        }
    }
    return true;
}

} // namespace sirtax
