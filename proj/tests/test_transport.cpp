#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "fcp/errors.hpp"
#include "fcp/grid.hpp"
#include "fcp/rng.hpp"
#include "fcp/transport.hpp"

using namespace fcp;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Closed-form OLS oracle on (x, y) pairs.
void ols_oracle(const std::vector<double>& x, const std::vector<double>& y, double& slope,
                double& intercept) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    intercept = (sy - slope * sx) / n;
}

} // namespace

TEST_CASE("fit_log_linear") {
    SUBCASE("exact recovery on noise-free exponential data") {
        std::vector<TauAtResolution> pts;
        for (int r : {16, 24, 32, 48, 64}) {
            pts.push_back({r, std::exp(0.002 * r - 3.0)});
        }
        auto fit = fit_log_linear(pts);
        CHECK(std::abs(fit.slope - 0.002) < 1e-10);
        CHECK(std::abs(fit.intercept + 3.0) < 1e-10);
        CHECK(fit.residual_rms < 1e-12);
    }
    SUBCASE("two points interpolate exactly") {
        std::vector<TauAtResolution> pts{{10, 0.05}, {20, 0.08}};
        auto fit = fit_log_linear(pts);
        CHECK(fit.residual_rms < 1e-14);
        CHECK(extrapolate_tau(fit, 10).tau == doctest::Approx(0.05).epsilon(1e-12));
        CHECK(extrapolate_tau(fit, 20).tau == doctest::Approx(0.08).epsilon(1e-12));
    }
    SUBCASE("noisy data matches the closed-form OLS oracle") {
        CounterRng rng(15);
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<TauAtResolution> pts;
            std::vector<double> xs, ys;
            for (int i = 0; i < 10; ++i) {
                const int r = 16 + 8 * i;
                const double log_tau = 0.004 * r - 2.5 + 0.01 * rng.next_gaussian();
                pts.push_back({r, std::exp(log_tau)});
                xs.push_back(r);
                ys.push_back(log_tau);
            }
            double slope = 0, intercept = 0;
            ols_oracle(xs, ys, slope, intercept);
            auto fit = fit_log_linear(pts);
            CHECK(std::abs(fit.slope - slope) < 1e-10);
            CHECK(std::abs(fit.intercept - intercept) < 1e-9);
            // slope within 3 sigma of the truth (sigma = 0.01 on log tau)
            double sxx = 0, mx = 0;
            for (double x : xs) mx += x;
            mx /= xs.size();
            for (double x : xs) sxx += (x - mx) * (x - mx);
            CHECK(std::abs(fit.slope - 0.004) < 3.0 * 0.01 / std::sqrt(sxx));
        }
    }
    SUBCASE("perturbing the fit never reduces the residual") {
        CounterRng rng(29);
        std::vector<TauAtResolution> pts;
        for (int i = 0; i < 8; ++i) {
            pts.push_back({12 + 6 * i, std::exp(-2.0 + 0.01 * (12 + 6 * i) +
                                                0.05 * rng.next_gaussian())});
        }
        auto fit = fit_log_linear(pts);
        const auto rss = [&](double s, double b) {
            double acc = 0.0;
            for (const auto& p : pts) {
                const double r = std::log(p.tau) - (s * p.resolution + b);
                acc += r * r;
            }
            return acc;
        };
        const double base = rss(fit.slope, fit.intercept);
        for (double ds : {-1e-3, 1e-3}) {
            for (double db : {-1e-3, 0.0, 1e-3}) {
                CHECK(rss(fit.slope + ds, fit.intercept + db) >= base);
            }
            CHECK(rss(fit.slope, fit.intercept + ds) >= base);
        }
    }
    SUBCASE("invalid input") {
        std::vector<TauAtResolution> one{{10, 0.1}};
        CHECK_THROWS_AS(fit_log_linear(one), std::invalid_argument);
        std::vector<TauAtResolution> neg{{10, 0.1}, {20, -0.1}};
        CHECK_THROWS_AS(fit_log_linear(neg), std::invalid_argument);
        std::vector<TauAtResolution> same{{10, 0.1}, {10, 0.2}};
        CHECK_THROWS_AS(fit_log_linear(same), numeric_error);
    }
}

TEST_CASE("extrapolate_tau") {
    std::vector<TauAtResolution> pts;
    for (int r : {16, 32, 48}) pts.push_back({r, std::exp(0.01 * r - 4.0)});
    auto fit = fit_log_linear(pts);

    SUBCASE("within-range evaluation reproduces exact data without the flag") {
        auto at32 = extrapolate_tau(fit, 32);
        CHECK(at32.tau == doctest::Approx(std::exp(0.01 * 32 - 4.0)).epsilon(1e-12));
        CHECK_FALSE(at32.beyond_fit_range);
        auto at48 = extrapolate_tau(fit, 48);
        CHECK(at48.tau == doctest::Approx(std::exp(0.01 * 48 - 4.0)).epsilon(1e-12));
        CHECK_FALSE(at48.beyond_fit_range);
    }
    SUBCASE("beyond the fit range sets the flag") {
        CHECK(extrapolate_tau(fit, 96).beyond_fit_range);
    }
    SUBCASE("zero slope gives a constant tau") {
        std::vector<TauAtResolution> flat{{16, 0.07}, {32, 0.07}, {64, 0.07}};
        auto f = fit_log_linear(flat);
        CHECK(std::abs(f.slope) < 1e-14);
        CHECK(extrapolate_tau(f, 1000).tau == doctest::Approx(0.07).epsilon(1e-10));
    }
}

TEST_CASE("resolution_sweep") {
    // identical datasets labeled with two resolutions give identical taus
    SUBCASE("identical data, identical tau") {
        auto g = Grid::make(GridKind::Uniform, {16});
        CounterRng rng(3);
        CalibrationSet a, b;
        a.resolution = 16;
        b.resolution = 32;
        for (int i = 0; i < 20; ++i) {
            std::vector<double> v(16);
            for (double& x : v) x = 1.0 + rng.next_gaussian();
            Field truth(g, v);
            a.inputs.push_back(truth);
            a.truths.push_back(field_scale(truth, 1.0 / (1.0 + 0.05 * (i % 5))));
            b.inputs.push_back(truth);
            b.truths.push_back(a.truths.back());
        }
        std::vector<CalibrationSet> sets{a, b};
        auto predictor = [](const Field& input, const GridPtr& target) {
            return resample(input, target);
        };
        auto taus = resolution_sweep(predictor, sets, 0.1);
        REQUIRE(taus.size() == 2);
        CHECK(taus[0].tau == taus[1].tau);
    }
    SUBCASE("band-limited data keeps tau flat across resolutions") {
        // predictor reproduces truth exactly at any resolution, plus a
        // fixed relative offset, so tau is resolution independent
        std::vector<CalibrationSet> sets;
        for (int r : {16, 32, 64}) {
            CalibrationSet s;
            s.resolution = r;
            auto g = Grid::make(GridKind::Uniform, {static_cast<std::size_t>(r)});
            CounterRng rng(7);
            for (int i = 0; i < 15; ++i) {
                const double a1 = rng.next_gaussian();
                const double b1 = rng.next_gaussian();
                auto f = discretize(g, [&](double x) {
                    return 2.0 + a1 * std::cos(kTwoPi * x) + b1 * std::sin(kTwoPi * x);
                });
                s.inputs.push_back(f);
                s.truths.push_back(field_scale(f, 1.0 - 0.01 * (1 + i % 7)));
            }
            sets.push_back(std::move(s));
        }
        auto predictor = [](const Field& input, const GridPtr& target) {
            return resample(input, target);
        };
        auto taus = resolution_sweep(predictor, sets, 0.2);
        // same trig data and same relative offsets at every resolution:
        // discrete norms match the continuum ones closely
        for (std::size_t i = 1; i < taus.size(); ++i) {
            CHECK(std::abs(taus[i].tau - taus[0].tau) < 1e-3);
        }
    }
    SUBCASE("needs at least two resolutions") {
        std::vector<CalibrationSet> sets(1);
        auto predictor = [](const Field& input, const GridPtr&) { return input; };
        CHECK_THROWS_AS(resolution_sweep(predictor, sets, 0.1), std::invalid_argument);
    }
}

TEST_CASE("decompose_radius") {
    SUBCASE("representable reference has near-zero discretization error") {
        auto fine = Grid::make(GridKind::Uniform, {256});
        auto coarse = Grid::make(GridKind::Uniform, {64});
        // constants survive restriction + clamped lifting exactly
        auto ref = discretize(fine, [](double) { return 2.5; });
        auto d = decompose_radius(0.2, ref, coarse, 100);
        CHECK(d.eps_disc < 1e-12);
        CHECK(d.eps_cal == doctest::Approx(0.1).epsilon(1e-15));
        CHECK(d.eps_misspec == doctest::Approx(0.2 - d.eps_disc - 0.1).epsilon(1e-12));
    }
    SUBCASE("n_cal=100 gives eps_cal 0.1") {
        auto fine = Grid::make(GridKind::Uniform, {64});
        auto coarse = Grid::make(GridKind::Uniform, {16});
        auto ref = discretize(fine, [](double x) { return std::sin(kTwoPi * x); });
        CHECK(decompose_radius(0.5, ref, coarse, 100).eps_cal ==
              doctest::Approx(0.1).epsilon(1e-15));
    }
    SUBCASE("sine interpolation error matches an independent quadrature oracle") {
        auto fine = Grid::make(GridKind::Uniform, {256});
        auto coarse = Grid::make(GridKind::Uniform, {8});
        auto ref = discretize(fine, [](double x) { return std::sin(kTwoPi * x); });
        auto d = decompose_radius(0.5, ref, coarse, 100);

        // Oracle: dense quadrature of (sin - clamped piecewise-linear
        // interpolant of the coarse center samples)^2, normalized by the
        // L2 norm of sin.
        const auto cc = coarse->centers(0);
        std::vector<double> cv(cc.size());
        for (std::size_t i = 0; i < cc.size(); ++i) cv[i] = std::sin(kTwoPi * cc[i]);
        const auto interp = [&](double x) {
            if (x <= cc.front()) return cv.front();
            if (x >= cc.back()) return cv.back();
            std::size_t i = 0;
            while (cc[i + 1] < x) ++i;
            const double t = (x - cc[i]) / (cc[i + 1] - cc[i]);
            return (1.0 - t) * cv[i] + t * cv[i + 1];
        };
        const int nq = 200000;
        double num = 0.0, den = 0.0;
        for (int i = 0; i < nq; ++i) {
            const double x = (i + 0.5) / nq;
            const double e = std::sin(kTwoPi * x) - interp(x);
            num += e * e / nq;
            den += std::sin(kTwoPi * x) * std::sin(kTwoPi * x) / nq;
        }
        const double oracle = std::sqrt(num / den);
        CHECK(std::abs(d.eps_disc - oracle) / oracle < 0.05);
    }
    SUBCASE("negative misspecification is reported raw") {
        auto fine = Grid::make(GridKind::Uniform, {64});
        auto coarse = Grid::make(GridKind::Uniform, {16});
        auto ref = discretize(fine, [](double x) { return 1.0 + x; });
        auto d = decompose_radius(0.01, ref, coarse, 100);
        CHECK(d.eps_misspec < 0.0);
    }
    SUBCASE("reference coarser than the grid is rejected") {
        auto fine = Grid::make(GridKind::Uniform, {16});
        auto coarse = Grid::make(GridKind::Uniform, {32});
        auto ref = discretize(fine, [](double x) { return x; });
        CHECK_THROWS_AS(decompose_radius(0.1, ref, coarse, 100), std::invalid_argument);
    }
}
