#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "raindrop/domain.hpp"

namespace raindrop {

struct KnownOptimum {
    Point point;
    double value = 0.0;
};

struct ObjectiveSpec {
    Objective objective;
    BoxDomain default_domain;
    std::optional<KnownOptimum> known_optimum;

    const std::string& name() const noexcept { return objective.name(); }
    std::size_t dimension() const noexcept { return objective.arity(); }
};

/// sin(t)/t, with the second-order Taylor branch 1 - t^2/6 for |t| <= 1e-8.
double sinc(double t) noexcept;

/// -sinc(x) - sinc(y). Global minimum -2 at the origin.
double sinc2d(std::span<const double> p);

double sphere(std::span<const double> x);
double rastrigin(std::span<const double> x);
double ackley(std::span<const double> x);

/// Names accepted by lookup(), sorted.
std::vector<std::string> available_objectives();

/// Registered objective by name. "sinc2d" is two-dimensional only; the
/// others take `dimension`. Unknown names throw std::invalid_argument
/// listing the valid ones.
ObjectiveSpec lookup(const std::string& name, std::size_t dimension = 2);

} // namespace raindrop
