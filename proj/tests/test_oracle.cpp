#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "raindrop/oracle.hpp"

namespace {

using namespace raindrop;

TEST(GridSearch, SincOptimumIsOnTheGrid)
{
    const auto spec = lookup("sinc2d");
    const auto best = grid_search(spec.objective, spec.default_domain, GridSpec{201});
    EXPECT_EQ(best.point, (Point{0.0, 0.0}));
    EXPECT_EQ(best.value, -2.0);
}

TEST(GridSearch, SphereCoarseGrid)
{
    const auto best = grid_search(lookup("sphere", 3).objective, BoxDomain::cube(3, -1, 1), GridSpec{3});
    EXPECT_EQ(best.point, (Point{0.0, 0.0, 0.0}));
    EXPECT_EQ(best.value, 0.0);
}

TEST(GridSearch, ConstantTieGoesToLexicographicallySmallest)
{
    const Objective flat("flat", 2, [](std::span<const double>) { return 4.0; });
    const auto box = BoxDomain({-1, 2}, {1, 3});
    for (unsigned threads : {1u, 3u}) {
        const auto best = grid_search(flat, box, GridSpec{11}, threads);
        EXPECT_EQ(best.point, (Point{-1.0, 2.0}));
    }
}

TEST(GridSearch, TieBetweenTwoInteriorPoints)
{
    // Minima at x = -0.5 and x = +0.5; both on a resolution-5 grid of [-1, 1].
    const Objective wells("wells", 1, [](std::span<const double> x) { return std::abs(std::abs(x[0]) - 0.5); });
    for (unsigned threads : {1u, 2u, 5u}) {
        const auto best = grid_search(wells, BoxDomain::cube(1, -1, 1), GridSpec{5}, threads);
        EXPECT_EQ(best.point, (Point{-0.5}));
    }
}

TEST(GridSearch, BudgetCheckedBeforeEvaluating)
{
    std::atomic<int> calls = 0;
    const Objective counted("counted", 3, [&](std::span<const double>) {
        ++calls;
        return 0.0;
    });
    GridSpec grid{101, 1000};
    EXPECT_THROW(grid_search(counted, BoxDomain::cube(3, 0, 1), grid), BudgetExceeded);
    EXPECT_EQ(calls.load(), 0);
    try {
        grid_search(counted, BoxDomain::cube(3, 0, 1), grid);
    } catch (const BudgetExceeded& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("1030301"), std::string::npos) << msg;
        EXPECT_NE(msg.find("1000"), std::string::npos) << msg;
    }
    EXPECT_THROW(grid_search(counted, BoxDomain::cube(3, 0, 1), GridSpec{1}), std::invalid_argument);
}

TEST(GridSearch, GridEndpointsAreExact)
{
    const auto box = BoxDomain({-32.768}, {32.768});
    const GridSpec grid{201};
    EXPECT_EQ(grid_coordinate(box, grid, 0, 0), -32.768);
    EXPECT_EQ(grid_coordinate(box, grid, 0, 100), 0.0);
    EXPECT_EQ(grid_coordinate(box, grid, 0, 200), 32.768);
    EXPECT_EQ(grid_point(BoxDomain::cube(2, 0, 4), GridSpec{5}, 7), (Point{1.0, 2.0}));
}

TEST(GridSearch, RefinementNeverWorsens)
{
    for (const char* name : {"sinc2d", "rastrigin", "ackley", "sphere"}) {
        const auto spec = lookup(name, 2);
        for (std::size_t r : {4u, 7u, 10u, 26u}) {
            const auto coarse = grid_search(spec.objective, spec.default_domain, GridSpec{r});
            const auto fine = grid_search(spec.objective, spec.default_domain, GridSpec{2 * r - 1});
            EXPECT_LE(fine.value, coarse.value) << name << " r=" << r;
        }
    }
}

TEST(GridSearch, SuiteKnownOptimaWithinSlack)
{
    for (const auto& name : available_objectives()) {
        const auto spec = lookup(name, 2);
        if (!spec.known_optimum)
            continue;
        const auto best = grid_search(spec.objective, spec.default_domain, GridSpec{201}, 2);
        EXPECT_LE(std::abs(best.value - spec.known_optimum->value), 1e-2) << name;
    }
}

TEST(BasinMeasure, UnimodalCoversTheBox)
{
    const auto spec = lookup("sphere", 2);
    ObjectiveSpec small = spec;
    small.default_domain = BoxDomain::cube(2, -1, 1);
    const auto v = basin_measure_estimate(small, RunConfig{1, 0.5, 1e-3, 10000, 0}, GridSpec{21}, 0.1);
    EXPECT_EQ(v.ratio, 1.0);
    EXPECT_EQ(v.s_measure, 4.0);
    EXPECT_EQ(v.t_measure, 4.0);
}

TEST(BasinMeasure, UnreachableTargetGivesZero)
{
    // Every descent of x^2 on [-1, 1] ends near 0, so nothing comes within 0.1 of x = 1.
    ObjectiveSpec spec{Objective("parabola", 1, [](std::span<const double> x) { return x[0] * x[0]; }),
                       BoxDomain::cube(1, -1, 1), KnownOptimum{{1.0}, 1.0}};
    const auto v = basin_measure_estimate(spec, RunConfig{1, 0.5, 1e-3, 10000, 0}, GridSpec{51}, 0.1);
    EXPECT_EQ(v.ratio, 0.0);
    EXPECT_EQ(v.t_measure, 0.0);
}

// First positive extremum of sinc, root of tan(t) = t.
constexpr double kSincRidge = 4.493409457909064;

TEST(BasinMeasure, SincSmallSpeedMatchesRidgeSquare)
{
    // With short steps a drop cannot cross the ridge at |t| = 4.4934, so the
    // starts that reach the origin are the grid points strictly inside it.
    const auto spec = lookup("sinc2d");
    const GridSpec grid{101};
    std::size_t inside = 0;
    for (std::size_t i = 0; i < grid.resolution; ++i)
        inside += std::abs(-5.0 + 10.0 * static_cast<double>(i) / 100.0) < kSincRidge;
    const double expected = static_cast<double>(inside * inside) / (101.0 * 101.0);

    const RunConfig config{1, 0.25, 1e-3, 10000, 0};
    const auto serial = basin_measure_estimate(spec, config, grid, 0.1, 1);
    const auto parallel = basin_measure_estimate(spec, config, grid, 0.1, 4);
    EXPECT_EQ(serial.ratio, parallel.ratio);
    EXPECT_EQ(serial.ratio, expected);
    EXPECT_EQ(serial.s_measure, 100.0);
    EXPECT_NEAR(serial.t_measure, 100.0 * expected, 1e-12);
}

TEST(BasinMeasure, SincLargeSpeedHopsTheRidges)
{
    // A first step of 2.5 from anywhere outside the ridge lands inside it with
    // a lower value, so every start reaches the origin.
    const auto spec = lookup("sinc2d");
    const auto v = basin_measure_estimate(spec, RunConfig{1, 2.5, 1e-3, 10000, 0}, GridSpec{101}, 0.1, 2);
    EXPECT_EQ(v.ratio, 1.0);
}

TEST(BasinMeasure, Errors)
{
    EXPECT_THROW(basin_measure_estimate(lookup("constant"), RunConfig{}, GridSpec{11}, 0.1), std::invalid_argument);
    EXPECT_THROW(basin_measure_estimate(lookup("sphere", 3), RunConfig{1, 1, 1e-3, 100, 0}, GridSpec{300, 1000}, 0.1),
                 BudgetExceeded);
}

} // namespace
