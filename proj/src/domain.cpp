#include "raindrop/domain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace raindrop {

BoxDomain::BoxDomain(Point lower, Point upper) : lower_(std::move(lower)), upper_(std::move(upper))
{
    if (lower_.empty())
        throw std::domain_error("box domain must have dimension >= 1");
    if (lower_.size() != upper_.size())
        throw std::invalid_argument("box domain bounds have different lengths ("
                                    + std::to_string(lower_.size()) + " vs "
                                    + std::to_string(upper_.size()) + ")");
    for (std::size_t k = 0; k < lower_.size(); ++k) {
        if (!std::isfinite(lower_[k]) || !std::isfinite(upper_[k]) || !(lower_[k] < upper_[k]))
            throw std::invalid_argument("box domain axis " + std::to_string(k)
                                        + " needs finite lower < upper");
    }
    if (!std::isfinite(measure()))
        throw std::invalid_argument("box domain measure overflows");
}

BoxDomain BoxDomain::cube(std::size_t n, double lower, double upper)
{
    return BoxDomain(Point(n, lower), Point(n, upper));
}

double BoxDomain::measure() const noexcept
{
    double m = 1.0;
    for (std::size_t k = 0; k < lower_.size(); ++k)
        m *= upper_[k] - lower_[k];
    return m;
}

double BoxDomain::max_side() const noexcept
{
    double side = 0.0;
    for (std::size_t k = 0; k < lower_.size(); ++k)
        side = std::max(side, upper_[k] - lower_[k]);
    return side;
}

bool BoxDomain::contains(std::span<const double> x) const noexcept
{
    if (x.size() != lower_.size())
        return false;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!contains(k, x[k]))
            return false;
    }
    return true;
}

Objective::Objective(std::string name, std::size_t arity, Function fn)
    : name_(std::move(name)), arity_(arity), fn_(std::move(fn))
{
    if (arity_ == 0)
        throw std::domain_error("objective '" + name_ + "' must have arity >= 1");
    if (!fn_)
        throw std::invalid_argument("objective '" + name_ + "' has no function");
}

double Objective::operator()(std::span<const double> x) const
{
    if (x.size() != arity_)
        throw std::invalid_argument("objective '" + name_ + "' expects " + std::to_string(arity_)
                                    + " coordinates, got " + std::to_string(x.size()));
    const double value = fn_(x);
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "objective '" << name_ << "' returned " << value << " at " << format_point(x);
        throw EvaluationError(msg.str());
    }
    return value;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("distance between points of different dimension");
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        sum += d * d;
    }
    return std::sqrt(sum);
}

std::string format_point(std::span<const double> x)
{
    std::string out = "(";
    char buf[32];
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (k > 0)
            out += ", ";
        auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x[k]);
        out.append(buf, end);
    }
    out += ")";
    return out;
}

} // namespace raindrop
