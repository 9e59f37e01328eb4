#include "raindrop/objectives.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace raindrop {

namespace {

constexpr double kSincTaylorThreshold = 1e-8;

std::string joined_names()
{
    std::string out;
    for (const auto& name : available_objectives()) {
        if (!out.empty())
            out += ", ";
        out += name;
    }
    return out;
}

} // namespace

double sinc(double t) noexcept
{
    if (std::abs(t) <= kSincTaylorThreshold)
        return 1.0 - t * t / 6.0;
    return std::sin(t) / t;
}

double sinc2d(std::span<const double> p)
{
    if (p.size() != 2)
        throw std::invalid_argument("sinc2d takes exactly 2 coordinates");
    return -sinc(p[0]) - sinc(p[1]);
}

double sphere(std::span<const double> x)
{
    double sum = 0.0;
    for (double xi : x)
        sum += xi * xi;
    return sum;
}

double rastrigin(std::span<const double> x)
{
    double sum = 10.0 * static_cast<double>(x.size());
    for (double xi : x)
        sum += xi * xi - 10.0 * std::cos(2.0 * std::numbers::pi * xi);
    return sum;
}

double ackley(std::span<const double> x)
{
    const double n = static_cast<double>(x.size());
    double squares = 0.0;
    double cosines = 0.0;
    for (double xi : x) {
        squares += xi * xi;
        cosines += std::cos(2.0 * std::numbers::pi * xi);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(squares / n)) - std::exp(cosines / n) + 20.0
           + std::numbers::e;
}

std::vector<std::string> available_objectives()
{
    return {"ackley", "constant", "rastrigin", "sinc2d", "sphere"};
}

ObjectiveSpec lookup(const std::string& name, std::size_t dimension)
{
    if (dimension == 0)
        throw std::domain_error("objective dimension must be >= 1");
    const Point origin(dimension, 0.0);

    if (name == "sinc2d") {
        if (dimension != 2)
            throw std::invalid_argument("sinc2d is two-dimensional, requested dimension "
                                        + std::to_string(dimension));
        return {Objective("sinc2d", 2, sinc2d), BoxDomain::cube(2, -5.0, 5.0), KnownOptimum{origin, -2.0}};
    }
    if (name == "sphere")
        return {Objective("sphere", dimension, sphere), BoxDomain::cube(dimension, -5.0, 5.0),
                KnownOptimum{origin, 0.0}};
    if (name == "rastrigin")
        return {Objective("rastrigin", dimension, rastrigin), BoxDomain::cube(dimension, -5.12, 5.12),
                KnownOptimum{origin, 0.0}};
    if (name == "ackley")
        return {Objective("ackley", dimension, ackley), BoxDomain::cube(dimension, -32.768, 32.768),
                KnownOptimum{origin, 0.0}};
    if (name == "constant")
        return {Objective("constant", dimension, [](std::span<const double>) { return 1.0; }),
                BoxDomain::cube(dimension, -1.0, 1.0), std::nullopt};

    throw std::invalid_argument("unknown objective '" + name + "'; available: " + joined_names());
}

} // namespace raindrop
