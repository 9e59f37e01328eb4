#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "raindrop/domain.hpp"
#include "raindrop/engine.hpp"
#include "raindrop/objectives.hpp"

namespace raindrop {

/// Measure of the region T of starts that reach the global optimum, relative
/// to the measure of the feasible box S.
struct VicinityMeasure {
    double t_measure = 0.0;
    double s_measure = 1.0;
    double ratio = 0.0;

    /// Validates 0 <= t <= s, s > 0 and fills in the ratio.
    static VicinityMeasure from_measures(double t_measure, double s_measure);
};

struct SuccessEstimate {
    std::size_t trials = 0;
    std::size_t successes = 0;
    double rate = 0.0;
    double tolerance = 0.0;

    /// Binomial standard error sqrt(rate (1 - rate) / trials).
    double standard_error() const noexcept;
};

struct LocalOptimum {
    Point point;
    double value = 0.0;
    std::size_t multiplicity = 0;
};

/// 1 - (1 - ratio)^N, evaluated as -expm1(N log1p(-ratio)).
double theoretical_success_probability(double ratio, std::size_t n_raindrops);
double theoretical_success_probability(const VicinityMeasure& vicinity, std::size_t n_raindrops);

/// Runs `trials` independent optimizations, trial t seeded with
/// derive_seed(master_seed, t), on the spec's default domain. A trial
/// succeeds when the global best lies within success_radius of the known
/// optimum.
SuccessEstimate empirical_success_probability(const RunConfig& config, const ObjectiveSpec& spec,
                                              std::size_t trials, double success_radius,
                                              std::uint64_t master_seed, unsigned threads = 1);

/// Sweeps needed to bring sqrt(N) * v0 / 2^k to <= epsilon when every sweep
/// halves every speed: ceil(log2(v0 sqrt(N) / epsilon)).
std::size_t expected_halvings(double v0, double epsilon, std::size_t n_raindrops);

/// 2 * epsilon * sqrt(n).
double default_cluster_radius(double epsilon, std::size_t dimension);

/// Greedy clustering of resting positions in ascending objective order. A
/// position joins the first cluster whose representative is within `radius`,
/// otherwise it founds a new one. Sorted by value; front() is the global best.
std::vector<LocalOptimum> cluster_local_optima(std::span<const Raindrop> drops, const Objective& f,
                                               double radius);

} // namespace raindrop
