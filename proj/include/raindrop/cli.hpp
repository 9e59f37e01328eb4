#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "raindrop/domain.hpp"
#include "raindrop/engine.hpp"

namespace raindrop::cli {

enum ExitCode : int {
    kSuccess = 0,
    kError = 1,
    kIterationCap = 2,
};

/// Shortest decimal string that parses back to the same double.
std::string format_number(double value);

/// Parses "lo1,hi1;lo2,hi2;...". Throws std::invalid_argument on malformed input.
BoxDomain parse_bounds(const std::string& text);

/// Header `iteration,velocity_l2,best_f,best_x_0,...`, one row per sweep.
void write_trace_csv(std::ostream& os, std::span<const IterationTrace> trace, std::size_t dimension);

/// Header `raindrop,x_0,...,x_{n-1},speed`, one row per raindrop.
void write_positions_csv(std::ostream& os, std::span<const Raindrop> drops);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace raindrop::cli
