#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "raindrop/domain.hpp"

namespace raindrop {

/// One search agent. Invariant: speed == v0 / 2^halvings exactly.
struct Raindrop {
    Point position;
    double speed = 0.0;
    std::uint32_t halvings = 0;

    bool operator==(const Raindrop&) const = default;
};

/// Signed standard basis vector sign * e_axis.
struct Direction {
    std::size_t axis = 0;
    int sign = +1;

    bool operator==(const Direction&) const = default;
};

struct Candidate {
    Direction direction;
    double value = 0.0;
};

struct RunConfig {
    std::size_t n_raindrops = 30;
    double v0 = 1.0;
    double epsilon = 1e-3;
    std::size_t max_iterations = 10000;
    std::uint64_t seed = 0;

    /// Defaults with v0 set to a quarter of the longest side of `domain`.
    static RunConfig for_domain(const BoxDomain& domain);

    /// Throws std::invalid_argument unless the stopping loop would execute at
    /// least once: n >= 1, v0 > 0, 0 < epsilon < v0 * sqrt(n), cap >= 1.
    void validate() const;
};

double default_initial_speed(const BoxDomain& domain);

struct IterationTrace {
    std::size_t iteration = 0;
    double velocity_l2 = 0.0;
    double best_f = 0.0;
    Point best_x;
};

struct RunResult {
    std::vector<Raindrop> final_raindrops;
    std::vector<IterationTrace> trace;
    Point global_best_x;
    double global_best_f = 0.0;
    std::size_t iterations_used = 0;
    bool converged = false;
};

/// Called with iteration 0 for the initial swarm and then after every sweep.
using SweepObserver = std::function<void(std::size_t iteration, std::span<const Raindrop> drops)>;

struct RunOptions {
    /// Worker threads per sweep. Results do not depend on this value.
    unsigned threads = 1;
    SweepObserver observer;
};

/// The 2n signed unit directions in canonical order: +e_0..+e_{n-1} then
/// -e_0..-e_{n-1}. The order is the argmin tie-break.
std::vector<Direction> candidate_directions(std::size_t n);

/// Best feasible stencil point x + v * d. Infeasible candidates are skipped;
/// ties go to the lowest canonical index. Empty when no candidate is feasible.
std::optional<Candidate> select_direction(const Objective& f, const BoxDomain& domain,
                                          std::span<const double> x, double speed);

/// One move-or-halve update. The drop moves only on strict improvement;
/// otherwise its speed halves.
Raindrop step_raindrop(Raindrop drop, const Objective& f, const BoxDomain& domain);

/// Positions uniform over the box from per-raindrop substreams of config.seed.
std::vector<Raindrop> initialize_swarm(const RunConfig& config, const BoxDomain& domain);

double velocity_norm(std::span<const Raindrop> drops);

RunResult run(const RunConfig& config, const Objective& f, const BoxDomain& domain,
              const RunOptions& options = {});

/// Same loop as run() but from explicit starting positions. The population
/// size is starts.size(); config.n_raindrops and config.seed are not used.
RunResult run_from(const RunConfig& config, const Objective& f, const BoxDomain& domain,
                   std::span<const Point> starts, const RunOptions& options = {});

} // namespace raindrop
