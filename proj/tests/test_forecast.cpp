#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "fcp/errors.hpp"
#include "fcp/forecast.hpp"
#include "fcp/grid.hpp"
#include "fcp/rng.hpp"

using namespace fcp;

namespace {

Field random_field(const GridPtr& g, std::uint64_t seed, double offset = 1.0) {
    CounterRng rng(seed);
    std::vector<double> v(g->total_cells());
    for (double& x : v) x = offset + rng.next_gaussian();
    return Field(g, std::move(v));
}

} // namespace

TEST_CASE("ensemble_mean") {
    auto g = Grid::make(GridKind::Uniform, {2, 2});
    SUBCASE("identical members") {
        auto m = random_field(g, 1);
        std::vector<Field> members{m, m};
        auto mean = ensemble_mean(members);
        for (std::size_t i = 0; i < m.size(); ++i) CHECK(mean[i] == m[i]);
    }
    SUBCASE("opposite members cancel") {
        auto a = random_field(g, 2);
        std::vector<Field> members{a, field_scale(a, -1.0)};
        auto mean = ensemble_mean(members);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(mean[i]) < 1e-14);
    }
    SUBCASE("hand average of three members on four points") {
        Field a(g, {1.0, 2.0, 3.0, 4.0});
        Field b(g, {2.0, 0.0, -1.0, 4.0});
        Field c(g, {0.0, 1.0, 1.0, 1.0});
        std::vector<Field> members{a, b, c};
        auto mean = ensemble_mean(members);
        CHECK(mean[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(mean[1] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(mean[2] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(mean[3] == doctest::Approx(3.0).epsilon(1e-15));
    }
}

TEST_CASE("step_diagnostics") {
    auto g = Grid::make(GridKind::Uniform, {3, 3});

    SUBCASE("perfect ensemble") {
        auto truth = random_field(g, 3);
        std::vector<Field> members{truth, truth, truth};
        auto d = step_diagnostics(members, truth, 0.1, 1);
        // the mean of n identical members can differ from them by 1 ulp
        CHECK(d.mean_distance < 1e-15);
        CHECK(d.spread < 1e-15);
        CHECK(d.ces < 1e-15);
        CHECK(d.ia == 1.0);
        CHECK(d.crps == 0.0);
        CHECK(d.within_tau);
    }
    SUBCASE("identical members off the truth: spread zero, table-caption threshold") {
        auto truth = random_field(g, 4);
        auto shifted = field_scale(truth, 1.0 - 0.02); // relative distance 0.02... wrt member
        std::vector<Field> members{shifted, shifted};
        auto d = step_diagnostics(members, truth, 0.023, 1);
        CHECK(d.spread == 0.0);
        CHECK(d.ces == d.mean_distance);
        CHECK(d.ia == 1.0);
        CHECK(d.within_tau); // mean distance ~0.0204 <= 0.023
        CHECK(d.mean_distance == doctest::Approx(0.02 / 0.98).epsilon(1e-12));
    }
    SUBCASE("hand CRPS for a two-member point ensemble") {
        auto g1 = Grid::make(GridKind::Uniform, {1});
        Field truth(g1, {1.0});
        std::vector<Field> members{Field(g1, {0.0}), Field(g1, {2.0})};
        auto d = step_diagnostics(members, truth, 10.0, 1);
        CHECK(d.crps == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("ces additivity holds exactly") {
        std::vector<Field> members;
        for (std::uint64_t s = 0; s < 7; ++s) members.push_back(random_field(g, 50 + s));
        auto truth = random_field(g, 99);
        auto d = step_diagnostics(members, truth, 0.5, 2);
        CHECK(d.ces == d.mean_distance + d.spread);
    }
    SUBCASE("ia boundary cases") {
        std::vector<Field> members;
        for (std::uint64_t s = 0; s < 5; ++s) members.push_back(random_field(g, 70 + s));
        auto truth = random_field(g, 98);
        auto dinf =
            step_diagnostics(members, truth, std::numeric_limits<double>::infinity(), 1);
        CHECK(dinf.ia == 1.0);
        auto dzero = step_diagnostics(members, truth, 0.0, 1);
        CHECK(dzero.ia == 0.0); // no member equals the mean of a nondegenerate ensemble
    }
    SUBCASE("scale relation: relative metrics invariant, crps scales") {
        std::vector<Field> members;
        for (std::uint64_t s = 0; s < 4; ++s) members.push_back(random_field(g, 80 + s));
        auto truth = random_field(g, 97);
        auto d1 = step_diagnostics(members, truth, 0.3, 1);
        std::vector<Field> scaled;
        for (const auto& m : members) scaled.push_back(field_scale(m, 3.0));
        auto d2 = step_diagnostics(scaled, field_scale(truth, 3.0), 0.3, 1);
        CHECK(d2.mean_distance == doctest::Approx(d1.mean_distance).epsilon(1e-12));
        CHECK(d2.spread == doctest::Approx(d1.spread).epsilon(1e-12));
        CHECK(d2.ces == doctest::Approx(d1.ces).epsilon(1e-12));
        CHECK(d2.ia == d1.ia);
        CHECK(d2.crps == doctest::Approx(3.0 * d1.crps).epsilon(1e-12));
    }
    SUBCASE("crps is permutation invariant and nonnegative") {
        std::vector<Field> members;
        for (std::uint64_t s = 0; s < 5; ++s) members.push_back(random_field(g, 90 + s));
        auto truth = random_field(g, 96);
        auto d1 = step_diagnostics(members, truth, 0.3, 1);
        std::rotate(members.begin(), members.begin() + 2, members.end());
        auto d2 = step_diagnostics(members, truth, 0.3, 1);
        CHECK(d1.crps == doctest::Approx(d2.crps).epsilon(1e-13));
        CHECK(d1.crps >= 0.0);
    }
}

TEST_CASE("rollout_diagnostics") {
    auto g = Grid::make(GridKind::Uniform, {4, 4});

    SUBCASE("perfect deterministic stepper stays within tau with full agreement") {
        auto state = random_field(g, 5);
        std::vector<Field> truth(8, state);
        std::vector<Field> members(6, state);
        auto advance = [](const Field& s, std::size_t, int) { return s; };
        auto out = rollout_diagnostics(members, advance, 8, 0.01, truth);
        CHECK(out.first_violation == -1);
        for (const auto& d : out.steps) {
            CHECK(d.within_tau);
            CHECK(d.ia == 1.0);
            CHECK(d.spread < 1e-15);
        }
    }
    SUBCASE("deterministic drift crosses tau at the predicted step") {
        // every member gains a fixed increment delta per step; truth stays
        auto base = random_field(g, 6, 2.0);
        const int steps = 10;
        std::vector<Field> truth(steps, base);
        auto unit = discretize(g, [](double, double) { return 1.0; });
        const double delta = 0.011;
        auto advance = [&](const Field& s, std::size_t, int) {
            return field_axpy(s, delta, unit);
        };
        std::vector<Field> members(4, base);
        const double tau = 0.05;
        auto out = rollout_diagnostics(members, advance, steps, tau, truth);

        // brute-force the first violating step from the same construction
        int expected = -1;
        for (int t = 1; t <= steps; ++t) {
            auto drifted = field_axpy(base, delta * t, unit);
            const double dist = weighted_distance(drifted, base) / weighted_norm(drifted);
            if (dist > tau) {
                expected = t;
                break;
            }
        }
        CHECK(out.first_violation == expected);
        // mean distance grows monotonically
        for (std::size_t i = 1; i < out.steps.size(); ++i) {
            CHECK(out.steps[i].mean_distance > out.steps[i - 1].mean_distance);
        }
    }
    SUBCASE("stepper failures are tagged with the step index") {
        auto state = random_field(g, 7);
        std::vector<Field> truth(3, state);
        std::vector<Field> members(2, state);
        auto advance = [](const Field& s, std::size_t, int step) {
            if (step == 2) throw std::runtime_error("boom");
            return s;
        };
        CHECK_THROWS_WITH_AS(rollout_diagnostics(members, advance, 3, 1.0, truth),
                             doctest::Contains("step 2"), numeric_error);
    }
    SUBCASE("truth trajectory shorter than the horizon is rejected") {
        auto state = random_field(g, 8);
        std::vector<Field> truth(2, state);
        std::vector<Field> members(2, state);
        auto advance = [](const Field& s, std::size_t, int) { return s; };
        CHECK_THROWS_AS(rollout_diagnostics(members, advance, 3, 1.0, truth),
                        std::invalid_argument);
    }
}
