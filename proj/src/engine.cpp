#include "raindrop/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "parallel.hpp"
#include "raindrop/random.hpp"

namespace raindrop {

namespace {

double displaced(std::span<const double> x, const Direction& d, double speed)
{
    return x[d.axis] + (d.sign > 0 ? speed : -speed);
}

// Move-or-halve with the current objective value cached by the caller.
bool advance(Raindrop& drop, double& value, const Objective& f, const BoxDomain& domain)
{
    const auto best = select_direction(f, domain, drop.position, drop.speed);
    if (best && best->value < value) {
        drop.position[best->direction.axis] = displaced(drop.position, best->direction, drop.speed);
        value = best->value;
        return true;
    }
    drop.speed *= 0.5;
    ++drop.halvings;
    return false;
}

std::size_t argmin(std::span<const double> values)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < values[best])
            best = i;
    }
    return best;
}

void validate_run_inputs(const RunConfig& config, const Objective& f, const BoxDomain& domain)
{
    config.validate();
    if (f.arity() != domain.dimension())
        throw std::invalid_argument("objective '" + f.name() + "' has arity " + std::to_string(f.arity())
                                    + " but the domain has dimension "
                                    + std::to_string(domain.dimension()));
}

RunResult run_swarm(const RunConfig& config, const Objective& f, const BoxDomain& domain,
                    std::vector<Raindrop> drops, const RunOptions& options)
{
    std::vector<double> values(drops.size());
    detail::parallel_for(drops.size(), options.threads,
                         [&](std::size_t i) { values[i] = f(drops[i].position); });
    if (options.observer)
        options.observer(0, drops);

    RunResult result;
    double norm = velocity_norm(drops);
    std::size_t iteration = 0;
    while (norm > config.epsilon && iteration < config.max_iterations) {
        ++iteration;
        detail::parallel_for(drops.size(), options.threads,
                             [&](std::size_t i) { advance(drops[i], values[i], f, domain); });
        norm = velocity_norm(drops);
        const std::size_t best = argmin(values);
        result.trace.push_back({iteration, norm, values[best], drops[best].position});
        if (options.observer)
            options.observer(iteration, drops);
    }

    const std::size_t best = argmin(values);
    result.global_best_x = drops[best].position;
    result.global_best_f = values[best];
    result.iterations_used = iteration;
    result.converged = norm <= config.epsilon;
    result.final_raindrops = std::move(drops);
    return result;
}

} // namespace

RunConfig RunConfig::for_domain(const BoxDomain& domain)
{
    RunConfig config;
    config.v0 = default_initial_speed(domain);
    return config;
}

void RunConfig::validate() const
{
    if (n_raindrops < 1)
        throw std::invalid_argument("n_raindrops must be >= 1");
    if (!std::isfinite(v0) || !(v0 > 0.0))
        throw std::invalid_argument("v0 must be positive and finite");
    if (!std::isfinite(epsilon) || !(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be positive and finite");
    if (!(epsilon < v0 * std::sqrt(static_cast<double>(n_raindrops))))
        throw std::invalid_argument("epsilon must be below v0 * sqrt(n_raindrops), otherwise no sweep runs");
    if (max_iterations < 1)
        throw std::invalid_argument("max_iterations must be >= 1");
}

double default_initial_speed(const BoxDomain& domain)
{
    return domain.max_side() / 4.0;
}

std::vector<Direction> candidate_directions(std::size_t n)
{
    if (n == 0)
        throw std::domain_error("candidate directions need dimension >= 1");
    std::vector<Direction> dirs;
    dirs.reserve(2 * n);
    for (std::size_t k = 0; k < n; ++k)
        dirs.push_back({k, +1});
    for (std::size_t k = 0; k < n; ++k)
        dirs.push_back({k, -1});
    return dirs;
}

std::optional<Candidate> select_direction(const Objective& f, const BoxDomain& domain,
                                          std::span<const double> x, double speed)
{
    if (!(speed > 0.0))
        throw std::invalid_argument("speed must be positive");
    if (!domain.contains(x))
        throw std::invalid_argument("select_direction called at infeasible point " + format_point(x));

    std::optional<Candidate> best;
    Point trial(x.begin(), x.end());
    for (const Direction& d : candidate_directions(x.size())) {
        const double coordinate = displaced(x, d, speed);
        if (!domain.contains(d.axis, coordinate))
            continue;
        trial[d.axis] = coordinate;
        const double value = f(trial);
        trial[d.axis] = x[d.axis];
        if (!best || value < best->value)
            best = Candidate{d, value};
    }
    return best;
}

Raindrop step_raindrop(Raindrop drop, const Objective& f, const BoxDomain& domain)
{
    double value = f(drop.position);
    advance(drop, value, f, domain);
    return drop;
}

std::vector<Raindrop> initialize_swarm(const RunConfig& config, const BoxDomain& domain)
{
    config.validate();
    std::vector<Raindrop> drops(config.n_raindrops);
    for (std::size_t i = 0; i < drops.size(); ++i) {
        SplitMix64 rng(derive_seed(config.seed, i));
        Point position(domain.dimension());
        for (std::size_t k = 0; k < position.size(); ++k) {
            const double lo = domain.lower()[k];
            const double hi = domain.upper()[k];
            // lo + u * (hi - lo) can round one ulp past hi.
            position[k] = std::min(hi, lo + rng.uniform01() * (hi - lo));
        }
        drops[i] = Raindrop{std::move(position), config.v0, 0};
    }
    return drops;
}

double velocity_norm(std::span<const Raindrop> drops)
{
    if (drops.empty())
        throw std::domain_error("velocity norm of an empty swarm");
    double sum = 0.0;
    for (const Raindrop& d : drops)
        sum += d.speed * d.speed;
    return std::sqrt(sum);
}

RunResult run(const RunConfig& config, const Objective& f, const BoxDomain& domain,
              const RunOptions& options)
{
    validate_run_inputs(config, f, domain);
    return run_swarm(config, f, domain, initialize_swarm(config, domain), options);
}

RunResult run_from(const RunConfig& config, const Objective& f, const BoxDomain& domain,
                   std::span<const Point> starts, const RunOptions& options)
{
    RunConfig effective = config;
    effective.n_raindrops = starts.size();
    validate_run_inputs(effective, f, domain);

    std::vector<Raindrop> drops;
    drops.reserve(starts.size());
    for (const Point& start : starts) {
        if (!domain.contains(start))
            throw std::invalid_argument("start point " + format_point(start) + " lies outside the domain");
        drops.push_back(Raindrop{start, config.v0, 0});
    }
    return run_swarm(effective, f, domain, std::move(drops), options);
}

} // namespace raindrop
