#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "fcp/errors.hpp"
#include "fcp/grid.hpp"
#include "fcp/rng.hpp"

using namespace fcp;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Independent midpoint-sum oracle used to cross-check weighted_norm.
double midpoint_norm_sq_1d(const std::vector<double>& edges,
                           const std::function<double(double)>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double c = 0.5 * (edges[i] + edges[i + 1]);
        s += (edges[i + 1] - edges[i]) * f(c) * f(c);
    }
    return s;
}

} // namespace

TEST_CASE("make_grid geometries match the coordinate maps") {
    SUBCASE("uniform N=2") {
        auto g = Grid::make(GridKind::Uniform, {2});
        const auto e = g->edges(0);
        CHECK(e[0] == 0.0);
        CHECK(e[1] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(e[2] == 1.0);
    }
    SUBCASE("clustered center N=2 has midpoint edge at 0.5") {
        auto g = Grid::make(GridKind::ClusteredCenter, {2});
        CHECK(g->edges(0)[1] == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("clustered boundary N=4 matches the sine map") {
        auto g = Grid::make(GridKind::ClusteredBoundary, {4});
        const auto e = g->edges(0);
        const double lo = 0.5 * (std::sin(-kPi / 4.0) + 1.0);
        CHECK(e[0] == 0.0);
        CHECK(e[1] == doctest::Approx(lo).epsilon(1e-12));
        CHECK(e[2] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(e[3] == doctest::Approx(1.0 - lo).epsilon(1e-12));
        CHECK(e[4] == 1.0);
        CHECK(e[1] == doctest::Approx(0.1464).epsilon(1e-3));
    }
    SUBCASE("zero cell count rejected") {
        std::vector<std::size_t> cells{4, 0};
        CHECK_THROWS_AS(Grid::make(GridKind::Uniform, cells), std::invalid_argument);
    }
    SUBCASE("non-monotone explicit edges rejected") {
        CHECK_THROWS_AS(Grid::from_edges({{0.0, 0.6, 0.5, 1.0}}), std::invalid_argument);
        CHECK_THROWS_AS(Grid::from_edges({{0.1, 0.5, 1.0}}), std::invalid_argument);
    }
}

TEST_CASE("quadrature weights are cell volumes summing to one") {
    SUBCASE("uniform 1D N=4") {
        auto g = Grid::make(GridKind::Uniform, {4});
        for (double w : g->weights()) CHECK(w == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("uniform 2x2") {
        auto g = Grid::make(GridKind::Uniform, {2, 2});
        REQUIRE(g->total_cells() == 4);
        for (double w : g->weights()) CHECK(w == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("clustered boundary 1D N=4") {
        auto g = Grid::make(GridKind::ClusteredBoundary, {4});
        const auto w = g->weights();
        CHECK(w[0] == doctest::Approx(0.1464).epsilon(2e-3));
        CHECK(w[1] == doctest::Approx(0.3536).epsilon(2e-3));
        CHECK(w[2] == doctest::Approx(0.3536).epsilon(2e-3));
        CHECK(w[3] == doctest::Approx(0.1464).epsilon(2e-3));
    }
    SUBCASE("weight partition holds for every geometry and count") {
        for (auto kind : {GridKind::Uniform, GridKind::ClusteredCenter,
                          GridKind::ClusteredBoundary}) {
            for (std::size_t n : {1u, 2u, 3u, 7u, 16u, 33u, 128u}) {
                auto g1 = Grid::make(kind, {n});
                const auto w1 = g1->weights();
                const double s1 = std::accumulate(w1.begin(), w1.end(), 0.0);
                CHECK(std::abs(s1 - 1.0) < 1e-12);

                auto g2 = Grid::make(kind, {n, (n % 5) + 1});
                const auto w2 = g2->weights();
                const double s2 = std::accumulate(w2.begin(), w2.end(), 0.0);
                CHECK(std::abs(s2 - 1.0) < 1e-12);
            }
        }
    }
}

TEST_CASE("weighted_norm") {
    SUBCASE("constant one has norm one on any geometry") {
        for (auto kind : {GridKind::Uniform, GridKind::ClusteredCenter,
                          GridKind::ClusteredBoundary}) {
            auto g = Grid::make(kind, {9, 5});
            auto f = discretize(g, [](double, double) { return 1.0; });
            CHECK(weighted_norm(f) == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    SUBCASE("hand midpoint sum at N=4") {
        auto g = Grid::make(GridKind::Uniform, {4});
        auto f = discretize(g, [](double x) { return x; });
        // 0.25 * (0.015625 + 0.140625 + 0.390625 + 0.765625)
        CHECK(weighted_norm(f) * weighted_norm(f) == doctest::Approx(0.328125).epsilon(1e-15));
    }
    SUBCASE("zero field") {
        auto g = Grid::make(GridKind::Uniform, {8});
        Field z(g, std::vector<double>(8, 0.0));
        CHECK(weighted_norm(z) == 0.0);
    }
    SUBCASE("agrees with an independent midpoint oracle on clustered edges") {
        auto g = Grid::make(GridKind::ClusteredCenter, {17});
        auto fn = [](double x) { return std::cos(3.0 * x) + 0.5 * x; };
        auto f = discretize(g, fn);
        std::vector<double> edges(g->edges(0).begin(), g->edges(0).end());
        CHECK(weighted_norm(f) * weighted_norm(f) ==
              doctest::Approx(midpoint_norm_sq_1d(edges, fn)).epsilon(1e-14));
    }
}

TEST_CASE("riemann convergence of the weighted norm") {
    SUBCASE("exact midpoint deviation for the linear ramp") {
        // Integrating x^2 by the midpoint rule under-shoots 1/3 by exactly
        // h^2/12; at N=4 that is 1/192, matching the hand sum 0.328125.
        for (std::size_t n : {4u, 8u, 16u, 32u, 64u}) {
            auto g = Grid::make(GridKind::Uniform, {n});
            auto f = discretize(g, [](double x) { return x; });
            const double dev = 1.0 / 3.0 - weighted_norm(f) * weighted_norm(f);
            const double h = 1.0 / static_cast<double>(n);
            CHECK(std::abs(dev - h * h / 12.0) < 1e-12);
        }
    }
    SUBCASE("order >= 1.9 for sin(2 pi x) on all geometries") {
        // On the uniform grid the midpoint rule is exact for this
        // integrand (periodic trig below Nyquist), so errors sit at
        // rounding level; that counts as converged.
        for (auto kind : {GridKind::Uniform, GridKind::ClusteredCenter,
                          GridKind::ClusteredBoundary}) {
            std::vector<double> log_n, log_err;
            bool at_rounding_floor = true;
            for (std::size_t n : {8u, 16u, 32u, 64u, 128u}) {
                auto g = Grid::make(kind, {n});
                auto f = discretize(g, [](double x) { return std::sin(2.0 * kPi * x); });
                const double err = std::abs(weighted_norm(f) * weighted_norm(f) - 0.5);
                if (err > 1e-14) at_rounding_floor = false;
                log_n.push_back(std::log(static_cast<double>(n)));
                log_err.push_back(std::log(std::max(err, 1e-300)));
            }
            if (at_rounding_floor) continue;
            // least-squares slope of log err vs log n
            double mx = 0, my = 0;
            for (std::size_t i = 0; i < log_n.size(); ++i) {
                mx += log_n[i];
                my += log_err[i];
            }
            mx /= static_cast<double>(log_n.size());
            my /= static_cast<double>(log_n.size());
            double num = 0, den = 0;
            for (std::size_t i = 0; i < log_n.size(); ++i) {
                num += (log_n[i] - mx) * (log_err[i] - my);
                den += (log_n[i] - mx) * (log_n[i] - mx);
            }
            CHECK(-num / den >= 1.9);
        }
    }
}

TEST_CASE("relative_weighted_error") {
    auto g = Grid::make(GridKind::ClusteredBoundary, {12});
    CounterRng rng(7);
    std::vector<double> tv(12), pv(12);
    for (std::size_t i = 0; i < 12; ++i) {
        tv[i] = rng.next_gaussian() + 2.0;
        pv[i] = tv[i] + 0.1 * rng.next_gaussian();
    }
    Field truth(g, tv), pred(g, pv);

    SUBCASE("perfect prediction scores zero") {
        CHECK(relative_weighted_error(truth, truth) == 0.0);
    }
    SUBCASE("pred = 2 truth scores one half") {
        CHECK(relative_weighted_error(field_scale(truth, 2.0), truth) ==
              doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("scale invariance") {
        const double base = relative_weighted_error(pred, truth);
        for (double c : {3.0, -0.5, 1e6, 1e-6}) {
            const double scaled =
                relative_weighted_error(field_scale(pred, c), field_scale(truth, c));
            CHECK(std::abs(scaled - base) < 1e-12);
        }
    }
    SUBCASE("uniform grid equals the unweighted relative error") {
        auto ug = Grid::make(GridKind::Uniform, {4, 3});
        CounterRng r2(9);
        std::vector<double> a(12), b(12);
        for (std::size_t i = 0; i < 12; ++i) {
            a[i] = r2.next_gaussian();
            b[i] = a[i] + 0.2 * r2.next_gaussian();
        }
        Field fa(ug, a), fb(ug, b);
        CHECK(std::abs(relative_weighted_error(fa, fb) - relative_plain_error(fa, fb)) < 1e-12);
    }
    SUBCASE("zero-norm prediction raises the degenerate error") {
        Field z(g, std::vector<double>(12, 0.0));
        CHECK_THROWS_AS(relative_weighted_error(z, truth), degenerate_error);
    }
}

TEST_CASE("discretize") {
    SUBCASE("constant stays constant") {
        auto g = Grid::make(GridKind::ClusteredCenter, {5, 4});
        auto f = discretize(g, [](double, double) { return 1.0; });
        for (double v : f.values()) CHECK(v == 1.0);
    }
    SUBCASE("ramp at uniform N=4 lands on the cell centers") {
        auto g = Grid::make(GridKind::Uniform, {4});
        auto f = discretize(g, [](double x) { return x; });
        const std::vector<double> expect{0.125, 0.375, 0.625, 0.875};
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(f[i] == doctest::Approx(expect[i]).epsilon(1e-15));
        }
    }
    SUBCASE("2D product function, row-major layout") {
        auto g = Grid::make(GridKind::Uniform, {2, 2});
        auto f = discretize(g, [](double x, double y) { return x * y; });
        const std::vector<double> expect{0.0625, 0.1875, 0.1875, 0.5625};
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(f[i] == doctest::Approx(expect[i]).epsilon(1e-15));
        }
    }
    SUBCASE("non-finite evaluation is reported with its index") {
        auto g = Grid::make(GridKind::Uniform, {4});
        CHECK_THROWS_AS(discretize(g, [](double x) { return 1.0 / (x - 0.375); }),
                        numeric_error);
    }
}

TEST_CASE("resample") {
    SUBCASE("identity on a matching grid") {
        auto g = Grid::make(GridKind::ClusteredBoundary, {9});
        auto f = discretize(g, [](double x) { return std::sin(5.0 * x); });
        auto r = resample(f, g);
        for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(r[i] - f[i]) < 1e-12);
    }
    SUBCASE("affine exactness in the interior, 1D") {
        auto src = Grid::make(GridKind::Uniform, {4});
        auto dst = Grid::make(GridKind::Uniform, {2});
        auto f = discretize(src, [](double x) { return x; });
        auto r = resample(f, dst);
        CHECK(std::abs(r[0] - 0.25) < 1e-12);
        CHECK(std::abs(r[1] - 0.75) < 1e-12);
    }
    SUBCASE("constant resamples to the same constant across geometries") {
        auto src = Grid::make(GridKind::ClusteredCenter, {7, 5});
        auto dst = Grid::make(GridKind::ClusteredBoundary, {11, 3});
        Field f(src, std::vector<double>(35, 4.25));
        auto r = resample(f, dst);
        for (double v : r.values()) CHECK(v == doctest::Approx(4.25).epsilon(1e-14));
    }
    SUBCASE("affine exactness in the 2D interior") {
        auto src = Grid::make(GridKind::Uniform, {16, 16});
        auto dst = Grid::make(GridKind::Uniform, {8, 8});
        auto f = discretize(src, [](double x, double y) { return 2.0 * x - 3.0 * y + 1.0; });
        auto r = resample(f, dst);
        auto expect = discretize(dst, [](double x, double y) { return 2.0 * x - 3.0 * y + 1.0; });
        for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(r[i] - expect[i]) < 1e-12);
    }
    SUBCASE("clamped extrapolation outside the source hull") {
        auto src = Grid::make(GridKind::Uniform, {2});  // centers 0.25, 0.75
        auto dst = Grid::make(GridKind::Uniform, {8});  // first center 0.0625
        auto f = discretize(src, [](double x) { return x; });
        auto r = resample(f, dst);
        CHECK(r[0] == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(r[7] == doctest::Approx(0.75).epsilon(1e-14));
    }
    SUBCASE("dimension mismatch rejected") {
        auto src = Grid::make(GridKind::Uniform, {4});
        auto dst = Grid::make(GridKind::Uniform, {4, 4});
        auto f = discretize(src, [](double x) { return x; });
        CHECK_THROWS_AS(resample(f, dst), std::invalid_argument);
    }
}

TEST_CASE("field validation") {
    auto g = Grid::make(GridKind::Uniform, {3});
    CHECK_THROWS_AS(Field(g, std::vector<double>{1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(Field(g, std::vector<double>{1.0, std::nan(""), 0.0}), numeric_error);
}
