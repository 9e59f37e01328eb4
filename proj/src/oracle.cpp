#include "raindrop/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace raindrop {

namespace {

void check_budget(const GridSpec& grid, std::size_t dimension)
{
    grid.validate();
    const std::size_t count = grid.point_count(dimension);
    if (count > grid.max_evaluations) {
        const std::string requested = count == std::numeric_limits<std::size_t>::max()
                                          ? std::string("overflow")
                                          : std::to_string(count);
        throw BudgetExceeded("grid of " + std::to_string(grid.resolution) + "^" + std::to_string(dimension)
                             + " = " + requested + " points exceeds the evaluation budget of "
                             + std::to_string(grid.max_evaluations));
    }
}

} // namespace

void GridSpec::validate() const
{
    if (resolution < 2)
        throw std::invalid_argument("grid resolution must be >= 2 points per axis");
}

std::size_t GridSpec::point_count(std::size_t dimension) const noexcept
{
    std::size_t count = 1;
    for (std::size_t k = 0; k < dimension; ++k) {
        if (count > std::numeric_limits<std::size_t>::max() / resolution)
            return std::numeric_limits<std::size_t>::max();
        count *= resolution;
    }
    return count;
}

double grid_coordinate(const BoxDomain& domain, const GridSpec& grid, std::size_t axis, std::size_t i)
{
    if (i + 1 == grid.resolution)
        return domain.upper()[axis];
    const double side = domain.upper()[axis] - domain.lower()[axis];
    return domain.lower()[axis]
           + side * static_cast<double>(i) / static_cast<double>(grid.resolution - 1);
}

Point grid_point(const BoxDomain& domain, const GridSpec& grid, std::size_t flat)
{
    const std::size_t n = domain.dimension();
    Point x(n);
    for (std::size_t k = n; k-- > 0;) {
        x[k] = grid_coordinate(domain, grid, k, flat % grid.resolution);
        flat /= grid.resolution;
    }
    return x;
}

GridMinimum grid_search(const Objective& f, const BoxDomain& domain, const GridSpec& grid, unsigned threads)
{
    if (f.arity() != domain.dimension())
        throw std::invalid_argument("grid_search: objective arity does not match the domain");
    check_budget(grid, domain.dimension());

    const std::size_t total = grid.point_count(domain.dimension());
    const std::size_t chunks = std::clamp<std::size_t>(threads, 1, total);
    std::vector<GridMinimum> partial(chunks);
    detail::parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t begin = total * c / chunks;
        const std::size_t end = total * (c + 1) / chunks;
        GridMinimum best{grid_point(domain, grid, begin), 0.0};
        best.value = f(best.point);
        for (std::size_t flat = begin + 1; flat < end; ++flat) {
            Point x = grid_point(domain, grid, flat);
            const double value = f(x);
            if (value < best.value)
                best = {std::move(x), value};
        }
        partial[c] = std::move(best);
    });

    // Chunks are in lexicographic order, so a strict comparison keeps the first minimizer.
    GridMinimum best = std::move(partial.front());
    for (std::size_t c = 1; c < chunks; ++c) {
        if (partial[c].value < best.value)
            best = std::move(partial[c]);
    }
    return best;
}

VicinityMeasure basin_measure_estimate(const ObjectiveSpec& spec, const RunConfig& config, const GridSpec& grid,
                                       double success_radius, unsigned threads)
{
    if (!spec.known_optimum)
        throw std::invalid_argument("objective '" + spec.name() + "' has no known optimum");
    if (!(success_radius > 0.0))
        throw std::invalid_argument("success radius must be positive");
    const BoxDomain& domain = spec.default_domain;
    check_budget(grid, domain.dimension());

    RunConfig single = config;
    single.n_raindrops = 1;
    single.validate();

    const std::size_t total = grid.point_count(domain.dimension());
    std::vector<char> reached(total, 0);
    detail::parallel_for(total, threads, [&](std::size_t flat) {
        const Point start = grid_point(domain, grid, flat);
        const RunResult result = run_from(single, spec.objective, domain, std::span<const Point>(&start, 1));
        reached[flat] = euclidean_distance(result.global_best_x, spec.known_optimum->point) <= success_radius;
    });

    const auto hits = static_cast<double>(std::count(reached.begin(), reached.end(), 1));
    const double s_measure = domain.measure();
    // Compute the ratio from counts directly so it is exact up to one rounding.
    VicinityMeasure vicinity = VicinityMeasure::from_measures(hits / static_cast<double>(total) * s_measure,
                                                              s_measure);
    vicinity.ratio = hits / static_cast<double>(total);
    return vicinity;
}

} // namespace raindrop
