#pragma once

#include <cstddef>

#include "raindrop/analysis.hpp"
#include "raindrop/domain.hpp"
#include "raindrop/engine.hpp"
#include "raindrop/objectives.hpp"

namespace raindrop {

// Brute-force references used to check the optimizer and the success model.

/// Regular grid including both endpoints of every axis.
struct GridSpec {
    std::size_t resolution = 201;
    std::size_t max_evaluations = 10'000'000;

    void validate() const;
    /// resolution^n, or SIZE_MAX on overflow.
    std::size_t point_count(std::size_t dimension) const noexcept;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridMinimum {
    Point point;
    double value = 0.0;
};

/// Coordinate i along `axis`, computed as lower + side * i / (r - 1) so the
/// endpoints and the midpoint of a symmetric box are hit exactly.
double grid_coordinate(const BoxDomain& domain, const GridSpec& grid, std::size_t axis, std::size_t i);

/// Grid point with flat index `flat` in lexicographic order (axis 0 most
/// significant).
Point grid_point(const BoxDomain& domain, const GridSpec& grid, std::size_t flat);

/// Exhaustive minimum over the grid; ties go to the lexicographically
/// smallest point. Throws BudgetExceeded before evaluating anything if the
/// grid is larger than grid.max_evaluations.
GridMinimum grid_search(const Objective& f, const BoxDomain& domain, const GridSpec& grid,
                        unsigned threads = 1);

/// Runs one raindrop from every grid point of the spec's default domain
/// (speed config.v0, tolerance config.epsilon) and counts the starts whose
/// resting position lies within success_radius of the known optimum.
VicinityMeasure basin_measure_estimate(const ObjectiveSpec& spec, const RunConfig& config,
                                       const GridSpec& grid, double success_radius,
                                       unsigned threads = 1);

} // namespace raindrop
