#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace raindrop {

using Point = std::vector<double>;

/// Raised when an objective returns a non-finite value at a feasible point.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Axis-aligned box [lower, upper] in n dimensions. Every side has strictly
/// positive finite length, so the box has positive finite measure.
class BoxDomain {
public:
    BoxDomain(Point lower, Point upper);

    /// The cube [lower, upper]^n.
    static BoxDomain cube(std::size_t n, double lower, double upper);

    std::size_t dimension() const noexcept { return lower_.size(); }
    const Point& lower() const noexcept { return lower_; }
    const Point& upper() const noexcept { return upper_; }

    double measure() const noexcept;
    double max_side() const noexcept;

    bool contains(std::span<const double> x) const noexcept;
    bool contains(std::size_t axis, double coordinate) const noexcept
    {
        return lower_[axis] <= coordinate && coordinate <= upper_[axis];
    }

    bool operator==(const BoxDomain&) const = default;

private:
    Point lower_;
    Point upper_;
};

/// A named deterministic scalar function of an n-vector.
class Objective {
public:
    using Function = std::function<double(std::span<const double>)>;

    Objective(std::string name, std::size_t arity, Function fn);

    const std::string& name() const noexcept { return name_; }
    std::size_t arity() const noexcept { return arity_; }

    /// Evaluates f(x). Throws std::invalid_argument on an arity mismatch and
    /// EvaluationError when the result is NaN or infinite.
    double operator()(std::span<const double> x) const;

private:
    std::string name_;
    std::size_t arity_;
    Function fn_;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

std::string format_point(std::span<const double> x);

} // namespace raindrop
