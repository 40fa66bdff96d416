#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace fcp {

/// How cell edges are placed along each axis of the unit box.
/// Uniform: evenly spaced. ClusteredCenter: cubic map packing cells near
/// the domain center. ClusteredBoundary: sine map packing cells near the
/// boundaries. Explicit: edges supplied by the caller.
enum class GridKind : std::uint8_t {
    Uniform = 0,
    ClusteredCenter = 1,
    ClusteredBoundary = 2,
    Explicit = 3,
};

/// Structured cell-centered grid on [0,1]^D.
///
/// Immutable after construction; share freely across threads. Each axis k
/// holds N_k + 1 strictly increasing edges with first edge 0 and last
/// edge 1. Quadrature weights are cell volumes (products of per-axis
/// spacings) in row-major order (last axis fastest) and sum to 1.
class Grid {
public:
    /// Build a grid by mapping N_k + 1 uniform parameter values
    /// t in [-1,1] through the geometry's coordinate map.
    static std::shared_ptr<const Grid> make(GridKind kind, std::span<const std::size_t> cells);
    static std::shared_ptr<const Grid> make(GridKind kind, std::initializer_list<std::size_t> cells);

    /// Build from externally supplied edges (kind Explicit). Edges must be
    /// strictly increasing with endpoints exactly 0 and 1.
    static std::shared_ptr<const Grid> from_edges(std::vector<std::vector<double>> edges);

    std::size_t dim() const { return cells_.size(); }
    GridKind kind() const { return kind_; }
    std::size_t cells(std::size_t axis) const { return cells_[axis]; }
    const std::vector<std::size_t>& cell_counts() const { return cells_; }
    std::size_t total_cells() const { return total_cells_; }

    std::span<const double> edges(std::size_t axis) const { return edges_[axis]; }
    std::span<const double> centers(std::size_t axis) const { return centers_[axis]; }

    /// Cell volumes, row-major over cell centers; cached at construction.
    std::span<const double> weights() const { return weights_; }

    /// Coordinates of the cell center for a flat row-major index.
    void center_of(std::size_t flat, std::span<double> out) const;

    bool is_uniform() const { return kind_ == GridKind::Uniform; }

    /// True when the two grids discretize the domain identically
    /// (same dimension, cell counts, and edge coordinates).
    bool same_geometry(const Grid& other) const;

private:
    Grid(GridKind kind, std::vector<std::vector<double>> edges);

    GridKind kind_;
    std::vector<std::size_t> cells_;
    std::vector<std::vector<double>> edges_;
    std::vector<std::vector<double>> centers_;
    std::vector<double> weights_;
    std::size_t total_cells_ = 0;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Real-valued samples at the cell centers of a Grid (the image of the
/// discretization map). Values are row-major and validated finite.
class Field {
public:
    Field(GridPtr grid, std::vector<double> values);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Quadrature-weighted discrete L2 norm: sqrt(sum_j w_j v_j^2).
double weighted_norm(const Field& f);

/// Weighted norm of the difference of two fields on the same grid.
double weighted_distance(const Field& a, const Field& b);

/// Relative weighted L2 error ||pred - truth||_w / ||pred||_w.
/// Throws degenerate_error when the prediction has zero norm.
double relative_weighted_error(const Field& pred, const Field& truth);

/// Plain (unweighted) counterparts, used by the grid-geometry ablation.
double plain_norm(const Field& f);
double plain_distance(const Field& a, const Field& b);
double relative_plain_error(const Field& pred, const Field& truth);

namespace detail {
Field discretize_impl(const GridPtr& grid,
                      const std::function<double(std::span<const double>)>& f);
}

/// Evaluate a scalar function of D coordinates at every cell center.
/// Throws numeric_error naming the offending flat index on a non-finite
/// evaluation.
template <typename F>
Field discretize(const GridPtr& grid, F&& f) {
    if constexpr (std::is_invocable_r_v<double, F, std::span<const double>>) {
        return detail::discretize_impl(grid, std::function<double(std::span<const double>)>(f));
    } else if constexpr (std::is_invocable_r_v<double, F, double>) {
        return detail::discretize_impl(
            grid, [&f](std::span<const double> x) { return f(x[0]); });
    } else {
        static_assert(std::is_invocable_r_v<double, F, double, double>,
                      "discretize expects f(point span), f(x), or f(x, y)");
        return detail::discretize_impl(
            grid, [&f](std::span<const double> x) { return f(x[0], x[1]); });
    }
}

/// Multilinear interpolation from source cell centers onto the target
/// grid's cell centers. Outside the source center hull, values clamp to
/// the nearest cell (constant extrapolation). Exact for affine functions
/// in the interior.
Field resample(const Field& field, const GridPtr& target);

// Small pointwise helpers shared by the ensemble/interval modules.
Field field_add(const Field& a, const Field& b);
Field field_subtract(const Field& a, const Field& b);
Field field_scale(const Field& a, double c);
/// a + c * b
Field field_axpy(const Field& a, double c, const Field& b);

} // namespace fcp
