#include "fcp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fcp/errors.hpp"

namespace fcp {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double map_parameter(GridKind kind, double t) {
    switch (kind) {
    case GridKind::Uniform:
        return 0.5 * (t + 1.0);
    case GridKind::ClusteredCenter:
        return 0.5 * (t * t * t + 1.0);
    case GridKind::ClusteredBoundary:
        return 0.5 * (std::sin(0.5 * kPi * t) + 1.0);
    case GridKind::Explicit:
        break;
    }
    throw std::invalid_argument("map_parameter: Explicit kind has no coordinate map");
}

void validate_axis_edges(const std::vector<double>& e, std::size_t axis) {
    if (e.size() < 2) {
        throw std::invalid_argument("Grid: axis " + std::to_string(axis) +
                                    " needs at least one cell");
    }
    if (e.front() != 0.0 || e.back() != 1.0) {
        throw std::invalid_argument("Grid: axis " + std::to_string(axis) +
                                    " edges must start at 0 and end at 1");
    }
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
        if (!(e[i] < e[i + 1])) {
            throw std::invalid_argument("Grid: axis " + std::to_string(axis) +
                                        " edges are not strictly increasing");
        }
    }
}

} // namespace

Grid::Grid(GridKind kind, std::vector<std::vector<double>> edges)
    : kind_(kind), edges_(std::move(edges)) {
    if (edges_.empty()) throw std::invalid_argument("Grid: dimension must be >= 1");

    cells_.reserve(edges_.size());
    centers_.reserve(edges_.size());
    total_cells_ = 1;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        validate_axis_edges(edges_[k], k);
        const std::size_t n = edges_[k].size() - 1;
        cells_.push_back(n);
        total_cells_ *= n;
        std::vector<double> c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = 0.5 * (edges_[k][i] + edges_[k][i + 1]);
        centers_.push_back(std::move(c));
    }

    weights_.assign(total_cells_, 1.0);
    // Row-major: last axis fastest.
    std::size_t stride = total_cells_;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const std::size_t n = cells_[k];
        stride /= n;
        for (std::size_t flat = 0; flat < total_cells_; ++flat) {
            const std::size_t jk = (flat / stride) % n;
            weights_[flat] *= edges_[k][jk + 1] - edges_[k][jk];
        }
    }
}

std::shared_ptr<const Grid> Grid::make(GridKind kind, std::span<const std::size_t> cells) {
    if (kind == GridKind::Explicit) {
        throw std::invalid_argument("Grid::make: use from_edges for Explicit grids");
    }
    if (cells.empty()) throw std::invalid_argument("Grid::make: dimension must be >= 1");
    std::vector<std::vector<double>> edges;
    edges.reserve(cells.size());
    for (std::size_t n : cells) {
        if (n == 0) throw std::invalid_argument("Grid::make: cell count must be >= 1");
        std::vector<double> e(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n);
            e[i] = map_parameter(kind, t);
        }
        e.front() = 0.0;
        e.back() = 1.0;
        edges.push_back(std::move(e));
    }
    return std::shared_ptr<const Grid>(new Grid(kind, std::move(edges)));
}

std::shared_ptr<const Grid> Grid::make(GridKind kind, std::initializer_list<std::size_t> cells) {
    std::vector<std::size_t> c(cells);
    return make(kind, std::span<const std::size_t>(c));
}

std::shared_ptr<const Grid> Grid::from_edges(std::vector<std::vector<double>> edges) {
    return std::shared_ptr<const Grid>(new Grid(GridKind::Explicit, std::move(edges)));
}

void Grid::center_of(std::size_t flat, std::span<double> out) const {
    std::size_t stride = total_cells_;
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        stride /= cells_[k];
        out[k] = centers_[k][(flat / stride) % cells_[k]];
    }
}

bool Grid::same_geometry(const Grid& other) const {
    if (this == &other) return true;
    if (cells_ != other.cells_) return false;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        if (edges_[k] != other.edges_[k]) return false;
    }
    return true;
}

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("Field: null grid");
    if (values_.size() != grid_->total_cells()) {
        throw std::invalid_argument("Field: expected " + std::to_string(grid_->total_cells()) +
                                    " values, got " + std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw numeric_error("Field: non-finite value at index " + std::to_string(i));
        }
    }
}

namespace {

void require_same_geometry(const Field& a, const Field& b, const char* op) {
    if (!a.grid().same_geometry(b.grid())) {
        throw std::invalid_argument(std::string(op) + ": fields live on different grids");
    }
}

} // namespace

double weighted_norm(const Field& f) {
    const auto w = f.grid().weights();
    const auto v = f.values();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i] * v[i];
    return std::sqrt(s);
}

double weighted_distance(const Field& a, const Field& b) {
    require_same_geometry(a, b, "weighted_distance");
    const auto w = a.grid().weights();
    const auto va = a.values();
    const auto vb = b.values();
    double s = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const double d = va[i] - vb[i];
        s += w[i] * d * d;
    }
    return std::sqrt(s);
}

double relative_weighted_error(const Field& pred, const Field& truth) {
    const double denom = weighted_norm(pred);
    if (denom == 0.0) {
        throw degenerate_error("relative_weighted_error: zero-norm prediction");
    }
    return weighted_distance(pred, truth) / denom;
}

double plain_norm(const Field& f) {
    const auto v = f.values();
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double plain_distance(const Field& a, const Field& b) {
    require_same_geometry(a, b, "plain_distance");
    const auto va = a.values();
    const auto vb = b.values();
    double s = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const double d = va[i] - vb[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double relative_plain_error(const Field& pred, const Field& truth) {
    const double denom = plain_norm(pred);
    if (denom == 0.0) {
        throw degenerate_error("relative_plain_error: zero-norm prediction");
    }
    return plain_distance(pred, truth) / denom;
}

namespace detail {

Field discretize_impl(const GridPtr& grid,
                      const std::function<double(std::span<const double>)>& f) {
    const std::size_t d = grid->total_cells();
    std::vector<double> values(d);
    std::vector<double> x(grid->dim());
    for (std::size_t j = 0; j < d; ++j) {
        grid->center_of(j, x);
        const double v = f(x);
        if (!std::isfinite(v)) {
            throw numeric_error("discretize: non-finite evaluation at cell " + std::to_string(j));
        }
        values[j] = v;
    }
    return Field(grid, std::move(values));
}

} // namespace detail

Field resample(const Field& field, const GridPtr& target) {
    const Grid& src = field.grid();
    if (src.dim() != target->dim()) {
        throw std::invalid_argument("resample: dimension mismatch");
    }
    const std::size_t dim = src.dim();

    // Per axis: bracketing source-center index and interpolation fraction
    // for every target center, with clamped extrapolation at the hull.
    std::vector<std::vector<std::size_t>> lo(dim);
    std::vector<std::vector<double>> frac(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        const auto sc = src.centers(k);
        const auto tc = target->centers(k);
        lo[k].resize(tc.size());
        frac[k].resize(tc.size());
        for (std::size_t i = 0; i < tc.size(); ++i) {
            const double x = tc[i];
            if (x <= sc.front() || sc.size() == 1) {
                lo[k][i] = 0;
                frac[k][i] = 0.0;
            } else if (x >= sc.back()) {
                lo[k][i] = sc.size() - 2;
                frac[k][i] = 1.0;
            } else {
                const auto it = std::upper_bound(sc.begin(), sc.end(), x);
                const std::size_t hi = static_cast<std::size_t>(it - sc.begin());
                lo[k][i] = hi - 1;
                frac[k][i] = (x - sc[hi - 1]) / (sc[hi] - sc[hi - 1]);
            }
        }
    }

    std::vector<std::size_t> src_stride(dim, 1);
    for (std::size_t k = dim; k-- > 1;) {
        src_stride[k - 1] = src_stride[k] * src.cells(k);
    }

    const auto sv = field.values();
    std::vector<double> out(target->total_cells());
    std::vector<std::size_t> tj(dim);
    const std::size_t corners = std::size_t{1} << dim;
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        std::size_t rem = flat;
        for (std::size_t k = dim; k-- > 0;) {
            tj[k] = rem % target->cells(k);
            rem /= target->cells(k);
        }
        double acc = 0.0;
        for (std::size_t c = 0; c < corners; ++c) {
            double wgt = 1.0;
            std::size_t sidx = 0;
            for (std::size_t k = 0; k < dim; ++k) {
                const bool hi = (c >> k) & 1u;
                const double fr = frac[k][tj[k]];
                std::size_t j = lo[k][tj[k]];
                if (hi && src.cells(k) > 1) ++j;
                wgt *= hi ? fr : 1.0 - fr;
                sidx += j * src_stride[k];
            }
            if (wgt != 0.0) acc += wgt * sv[sidx];
        }
        out[flat] = acc;
    }
    return Field(target, std::move(out));
}

Field field_add(const Field& a, const Field& b) { return field_axpy(a, 1.0, b); }

Field field_subtract(const Field& a, const Field& b) { return field_axpy(a, -1.0, b); }

Field field_scale(const Field& a, double c) {
    std::vector<double> v(a.values().begin(), a.values().end());
    for (double& x : v) x *= c;
    return Field(a.grid_ptr(), std::move(v));
}

Field field_axpy(const Field& a, double c, const Field& b) {
    require_same_geometry(a, b, "field arithmetic");
    const auto va = a.values();
    const auto vb = b.values();
    std::vector<double> v(va.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = va[i] + c * vb[i];
    return Field(a.grid_ptr(), std::move(v));
}

} // namespace fcp
