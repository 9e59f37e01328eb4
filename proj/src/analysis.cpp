#include "raindrop/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "parallel.hpp"
#include "raindrop/random.hpp"

namespace raindrop {

VicinityMeasure VicinityMeasure::from_measures(double t_measure, double s_measure)
{
    if (!std::isfinite(s_measure) || !(s_measure > 0.0))
        throw std::invalid_argument("vicinity: |S| must be positive and finite");
    if (!(t_measure >= 0.0) || t_measure > s_measure)
        throw std::invalid_argument("vicinity: |T| must lie in [0, |S|]");
    return {t_measure, s_measure, t_measure / s_measure};
}

double SuccessEstimate::standard_error() const noexcept
{
    if (trials == 0)
        return 0.0;
    return std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));
}

double theoretical_success_probability(double ratio, std::size_t n_raindrops)
{
    if (!(ratio >= 0.0 && ratio <= 1.0))
        throw std::invalid_argument("vicinity ratio must lie in [0, 1]");
    if (n_raindrops < 1)
        throw std::invalid_argument("success probability needs at least one raindrop");
    return -std::expm1(static_cast<double>(n_raindrops) * std::log1p(-ratio));
}

double theoretical_success_probability(const VicinityMeasure& vicinity, std::size_t n_raindrops)
{
    return theoretical_success_probability(vicinity.ratio, n_raindrops);
}

SuccessEstimate empirical_success_probability(const RunConfig& config, const ObjectiveSpec& spec,
                                              std::size_t trials, double success_radius,
                                              std::uint64_t master_seed, unsigned threads)
{
    if (!spec.known_optimum)
        throw std::invalid_argument("objective '" + spec.name() + "' has no known optimum to score against");
    if (trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    if (!(success_radius > 0.0))
        throw std::invalid_argument("success radius must be positive");
    config.validate();

    std::vector<char> hit(trials, 0);
    detail::parallel_for(trials, threads, [&](std::size_t t) {
        RunConfig trial = config;
        trial.seed = derive_seed(master_seed, t);
        const RunResult result = run(trial, spec.objective, spec.default_domain);
        hit[t] = euclidean_distance(result.global_best_x, spec.known_optimum->point) <= success_radius;
    });

    SuccessEstimate estimate;
    estimate.trials = trials;
    estimate.successes = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
    estimate.rate = static_cast<double>(estimate.successes) / static_cast<double>(trials);
    estimate.tolerance = success_radius;
    return estimate;
}

std::size_t expected_halvings(double v0, double epsilon, std::size_t n_raindrops)
{
    if (n_raindrops < 1 || !(v0 > 0.0) || !(epsilon > 0.0) || !std::isfinite(v0))
        throw std::invalid_argument("expected_halvings needs v0 > 0, epsilon > 0, N >= 1");
    const double initial = v0 * std::sqrt(static_cast<double>(n_raindrops));
    if (!(epsilon < initial))
        throw std::invalid_argument("expected_halvings needs epsilon < v0 * sqrt(N)");

    auto k = static_cast<long>(std::ceil(std::log2(initial / epsilon)));
    // log2 of a ratio can land one off at exact powers of two.
    while (std::ldexp(initial, static_cast<int>(-k)) > epsilon)
        ++k;
    while (k > 1 && std::ldexp(initial, static_cast<int>(-(k - 1))) <= epsilon)
        --k;
    return static_cast<std::size_t>(k);
}

double default_cluster_radius(double epsilon, std::size_t dimension)
{
    return 2.0 * epsilon * std::sqrt(static_cast<double>(dimension));
}

std::vector<LocalOptimum> cluster_local_optima(std::span<const Raindrop> drops, const Objective& f,
                                               double radius)
{
    if (drops.empty())
        throw std::invalid_argument("cannot cluster an empty set of raindrops");
    if (!(radius > 0.0))
        throw std::invalid_argument("cluster radius must be positive");

    std::vector<double> values(drops.size());
    for (std::size_t i = 0; i < drops.size(); ++i)
        values[i] = f(drops[i].position);

    std::vector<std::size_t> order(drops.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    // Representatives are visited in ascending value, so clusters come out sorted.
    std::vector<LocalOptimum> clusters;
    for (std::size_t i : order) {
        auto home = std::find_if(clusters.begin(), clusters.end(), [&](const LocalOptimum& c) {
            return euclidean_distance(c.point, drops[i].position) <= radius;
        });
        if (home != clusters.end())
            ++home->multiplicity;
        else
            clusters.push_back({drops[i].position, values[i], 1});
    }
    return clusters;
}

} // namespace raindrop
