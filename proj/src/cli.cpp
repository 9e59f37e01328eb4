#include "raindrop/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "raindrop/analysis.hpp"
#include "raindrop/objectives.hpp"
#include "raindrop/oracle.hpp"

namespace raindrop::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct Settings {
    std::string objective = "sinc2d";
    std::optional<std::size_t> dimension;
    std::size_t n_raindrops = 30;
    std::optional<double> v0;
    double epsilon = 1e-3;
    std::uint64_t seed = 0;
    std::size_t max_iterations = 10000;
    std::optional<std::string> bounds;
    std::optional<Point> lower;
    std::optional<Point> upper;
    std::string out = ".";
    std::size_t snapshot_every = 0;
    unsigned threads = 1;
    std::size_t trials = 500;
    double radius = 0.1;
    std::optional<double> theoretical_ratio;
    std::optional<std::size_t> resolution;
    std::size_t budget = GridSpec{}.max_evaluations;
    std::string mode = "grid";
    std::string config_path;
};

// Flag name and the JSON key it may also be read from.
struct Binding {
    const char* flag;
    const char* key;
};

constexpr Binding kBindings[] = {
    {"--objective", "objective"},   {"--dim", "dimension"},
    {"--n", "n_raindrops"},         {"--v0", "v0"},
    {"--epsilon", "epsilon"},       {"--seed", "seed"},
    {"--max-iters", "max_iterations"}, {"--bounds", "bounds"},
    {"--out", "out"},               {"--snapshot-every", "snapshot_every"},
    {"--threads", "threads"},       {"--trials", "trials"},
    {"--radius", "success_radius"}, {"--theoretical-ratio", "theoretical_ratio"},
    {"--resolution", "resolution"}, {"--budget", "max_evaluations"},
    {"--mode", "mode"},
};

bool flag_given(const CLI::App& app, const char* flag)
{
    try {
        return app.count(flag) > 0;
    } catch (const CLI::OptionNotFound&) {
        return false;
    }
}

template <typename T>
void assign(T& target, const json& value)
{
    target = value.get<T>();
}

template <typename T>
void assign(std::optional<T>& target, const json& value)
{
    if (!value.is_null())
        target = value.get<T>();
}

// Values from the config file fill every setting that was not given on the
// command line.
void apply_config_file(Settings& s, const CLI::App& app)
{
    std::ifstream in(s.config_path);
    if (!in)
        throw std::invalid_argument("cannot open config file '" + s.config_path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config file '" + s.config_path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object())
        throw std::invalid_argument("config file '" + s.config_path + "' must hold a JSON object");

    for (const Binding& b : kBindings) {
        if (flag_given(app, b.flag) || !doc.contains(b.key))
            continue;
        const json& v = doc.at(b.key);
        try {
            const std::string key = b.key;
            if (key == "objective") assign(s.objective, v);
            else if (key == "dimension") assign(s.dimension, v);
            else if (key == "n_raindrops") assign(s.n_raindrops, v);
            else if (key == "v0") assign(s.v0, v);
            else if (key == "epsilon") assign(s.epsilon, v);
            else if (key == "seed") assign(s.seed, v);
            else if (key == "max_iterations") assign(s.max_iterations, v);
            else if (key == "bounds") assign(s.bounds, v);
            else if (key == "out") assign(s.out, v);
            else if (key == "snapshot_every") assign(s.snapshot_every, v);
            else if (key == "threads") assign(s.threads, v);
            else if (key == "trials") assign(s.trials, v);
            else if (key == "success_radius") assign(s.radius, v);
            else if (key == "theoretical_ratio") assign(s.theoretical_ratio, v);
            else if (key == "resolution") assign(s.resolution, v);
            else if (key == "max_evaluations") assign(s.budget, v);
            else if (key == "mode") assign(s.mode, v);
        } catch (const json::exception& e) {
            throw std::invalid_argument(std::string("config key '") + b.key + "': " + e.what());
        }
    }
    // Reports echo the box as arrays; accept them when no bounds string is set.
    if (!flag_given(app, "--bounds") && !s.bounds && doc.contains("lower") && doc.contains("upper")) {
        s.lower = doc.at("lower").get<Point>();
        s.upper = doc.at("upper").get<Point>();
    }
}

void add_common_options(CLI::App& sub, Settings& s)
{
    sub.add_option("--config", s.config_path, "JSON file with defaults; flags override it");
    sub.add_option("--objective", s.objective, "objective name");
    sub.add_option("--dim", s.dimension, "dimension for objectives that take one (default 2)");
    sub.add_option("--bounds", s.bounds, "box as \"lo1,hi1;lo2,hi2;...\"");
    sub.add_option("--out", s.out, "output directory");
    sub.add_option("--threads", s.threads, "worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
}

void add_run_options(CLI::App& sub, Settings& s)
{
    sub.add_option("--n", s.n_raindrops, "number of raindrops")->check(CLI::PositiveNumber);
    sub.add_option("--v0", s.v0, "initial speed (default: longest box side / 4)")->check(CLI::PositiveNumber);
    sub.add_option("--epsilon", s.epsilon, "stop once the l2 norm of all speeds is <= epsilon")
        ->check(CLI::PositiveNumber);
    sub.add_option("--seed", s.seed, "random seed");
    sub.add_option("--max-iters", s.max_iterations, "iteration cap")->check(CLI::PositiveNumber);
}

struct Problem {
    ObjectiveSpec spec;
    RunConfig config;
};

Problem resolve_problem(const Settings& s)
{
    std::optional<BoxDomain> box;
    if (s.bounds)
        box = parse_bounds(*s.bounds);
    else if (s.lower && s.upper)
        box = BoxDomain(*s.lower, *s.upper);

    std::size_t dimension = s.dimension.value_or(box ? box->dimension() : 2);
    ObjectiveSpec spec = lookup(s.objective, dimension);
    if (box) {
        if (box->dimension() != spec.dimension())
            throw std::invalid_argument("bounds have dimension " + std::to_string(box->dimension())
                                        + " but objective '" + spec.name() + "' has dimension "
                                        + std::to_string(spec.dimension()));
        spec.default_domain = *box;
    }

    RunConfig config;
    config.n_raindrops = s.n_raindrops;
    config.v0 = s.v0.value_or(default_initial_speed(spec.default_domain));
    config.epsilon = s.epsilon;
    config.seed = s.seed;
    config.max_iterations = s.max_iterations;
    config.validate();
    return {std::move(spec), config};
}

void require_known_optimum(const ObjectiveSpec& spec)
{
    if (!spec.known_optimum)
        throw std::invalid_argument("objective '" + spec.name() + "' has no known optimum");
    if (!spec.default_domain.contains(spec.known_optimum->point))
        throw std::invalid_argument("the known optimum of '" + spec.name() + "' lies outside the bounds");
}

json config_echo(const Problem& p)
{
    json j;
    j["objective"] = p.spec.name();
    j["dimension"] = p.spec.dimension();
    j["lower"] = p.spec.default_domain.lower();
    j["upper"] = p.spec.default_domain.upper();
    j["n_raindrops"] = p.config.n_raindrops;
    j["v0"] = p.config.v0;
    j["epsilon"] = p.config.epsilon;
    j["max_iterations"] = p.config.max_iterations;
    j["seed"] = p.config.seed;
    return j;
}

void write_json(const fs::path& path, const json& j)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    return os;
}

std::string fixed(double value, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

int cmd_run(const Settings& s, std::ostream& out)
{
    const Problem p = resolve_problem(s);
    const fs::path dir(s.out);
    fs::create_directories(dir);

    RunOptions options;
    options.threads = s.threads;
    if (s.snapshot_every > 0) {
        options.observer = [&](std::size_t iteration, std::span<const Raindrop> drops) {
            if (iteration % s.snapshot_every != 0)
                return;
            auto os = open_output(dir / ("positions_" + std::to_string(iteration) + ".csv"));
            write_positions_csv(os, drops);
        };
    }

    const RunResult result = run(p.config, p.spec.objective, p.spec.default_domain, options);
    {
        auto os = open_output(dir / "trace.csv");
        write_trace_csv(os, result.trace, p.spec.dimension());
    }

    const double cluster_radius = default_cluster_radius(p.config.epsilon, p.spec.dimension());
    json clusters = json::array();
    for (const LocalOptimum& c : cluster_local_optima(result.final_raindrops, p.spec.objective, cluster_radius))
        clusters.push_back({{"point", c.point}, {"value", c.value}, {"multiplicity", c.multiplicity}});

    json report = config_echo(p);
    report["snapshot_every"] = s.snapshot_every;
    report["global_best_x"] = result.global_best_x;
    report["global_best_f"] = result.global_best_f;
    report["iterations_used"] = result.iterations_used;
    report["converged"] = result.converged;
    report["cluster_radius"] = cluster_radius;
    report["clusters"] = std::move(clusters);
    report["trace_path"] = "trace.csv";
    write_json(dir / "report.json", report);

    out << "global_best_x " << format_point(result.global_best_x) << '\n'
        << "global_best_f " << format_number(result.global_best_f) << '\n'
        << "iterations " << result.iterations_used << '\n'
        << "converged " << (result.converged ? "true" : "false") << '\n';
    return result.converged ? kSuccess : kIterationCap;
}

int cmd_success_prob(const Settings& s, std::ostream& out)
{
    const Problem p = resolve_problem(s);
    require_known_optimum(p.spec);
    const fs::path dir(s.out);
    fs::create_directories(dir);

    const SuccessEstimate estimate
        = empirical_success_probability(p.config, p.spec, s.trials, s.radius, p.config.seed, s.threads);

    json report = config_echo(p);
    double ratio = 0.0;
    if (s.theoretical_ratio) {
        ratio = *s.theoretical_ratio;
        report["ratio_source"] = "supplied";
    } else {
        GridSpec grid;
        grid.resolution = s.resolution.value_or(101);
        grid.max_evaluations = s.budget;
        ratio = basin_measure_estimate(p.spec, p.config, grid, s.radius, s.threads).ratio;
        report["ratio_source"] = "oracle";
        report["resolution"] = grid.resolution;
    }
    const double predicted = theoretical_success_probability(ratio, p.config.n_raindrops);

    json curve = json::array();
    for (std::size_t n = 1; n <= p.config.n_raindrops; ++n)
        curve.push_back(theoretical_success_probability(ratio, n));

    report["trials"] = estimate.trials;
    report["successes"] = estimate.successes;
    report["rate"] = estimate.rate;
    report["standard_error"] = estimate.standard_error();
    report["success_radius"] = estimate.tolerance;
    report["ratio"] = ratio;
    report["theoretical_success_probability"] = predicted;
    report["absolute_gap"] = std::abs(estimate.rate - predicted);
    report["theoretical_curve"] = std::move(curve);
    write_json(dir / "success.json", report);

    out << "rate " << format_number(estimate.rate) << " (" << estimate.successes << "/" << estimate.trials
        << ")\n"
        << "ratio " << fixed(ratio, 4) << '\n'
        << "theoretical_success_probability " << fixed(predicted, 5) << '\n'
        << "absolute_gap " << fixed(std::abs(estimate.rate - predicted), 5) << '\n';
    if (s.theoretical_ratio) {
        for (std::size_t n = 1; n <= p.config.n_raindrops; ++n)
            out << "curve " << n << ' ' << fixed(theoretical_success_probability(ratio, n), 5) << '\n';
    }
    return kSuccess;
}

int cmd_oracle(const Settings& s, std::ostream& out)
{
    const Problem p = resolve_problem(s);
    const fs::path dir(s.out);
    fs::create_directories(dir);

    GridSpec grid;
    grid.resolution = s.resolution.value_or(201);
    grid.max_evaluations = s.budget;

    json report;
    report["objective"] = p.spec.name();
    report["dimension"] = p.spec.dimension();
    report["lower"] = p.spec.default_domain.lower();
    report["upper"] = p.spec.default_domain.upper();
    report["mode"] = s.mode;
    report["resolution"] = grid.resolution;

    if (s.mode == "grid") {
        const GridMinimum best = grid_search(p.spec.objective, p.spec.default_domain, grid, s.threads);
        report["point"] = best.point;
        report["value"] = best.value;
        out << "argmin " << format_point(best.point) << '\n' << "value " << format_number(best.value) << '\n';
    } else if (s.mode == "basin") {
        require_known_optimum(p.spec);
        const VicinityMeasure v = basin_measure_estimate(p.spec, p.config, grid, s.radius, s.threads);
        report["v0"] = p.config.v0;
        report["epsilon"] = p.config.epsilon;
        report["max_iterations"] = p.config.max_iterations;
        report["success_radius"] = s.radius;
        report["t_measure"] = v.t_measure;
        report["s_measure"] = v.s_measure;
        report["ratio"] = v.ratio;
        out << "ratio " << fixed(v.ratio, 4) << '\n';
    } else {
        throw std::invalid_argument("--mode must be 'grid' or 'basin', got '" + s.mode + "'");
    }
    write_json(dir / "oracle.json", report);
    return kSuccess;
}

} // namespace

std::string format_number(double value)
{
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, end);
}

BoxDomain parse_bounds(const std::string& text)
{
    Point lower;
    Point upper;
    std::istringstream pairs(text);
    std::string pair;
    auto parse = [&](const std::string& token) {
        double v = 0.0;
        const char* first = token.data();
        const char* last = token.data() + token.size();
        while (first < last && *first == ' ')
            ++first;
        while (last > first && last[-1] == ' ')
            --last;
        if (first < last && *first == '+')
            ++first;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || first == last)
            throw std::invalid_argument("malformed bound '" + token + "' in \"" + text + "\"");
        return v;
    };
    while (std::getline(pairs, pair, ';')) {
        const auto comma = pair.find(',');
        if (comma == std::string::npos || pair.find(',', comma + 1) != std::string::npos)
            throw std::invalid_argument("bounds entry '" + pair + "' must be 'lo,hi'");
        lower.push_back(parse(pair.substr(0, comma)));
        upper.push_back(parse(pair.substr(comma + 1)));
    }
    if (lower.empty())
        throw std::invalid_argument("bounds \"" + text + "\" name no axes");
    if (text.back() == ';')
        throw std::invalid_argument("bounds \"" + text + "\" end with an empty axis");
    return BoxDomain(std::move(lower), std::move(upper));
}

void write_trace_csv(std::ostream& os, std::span<const IterationTrace> trace, std::size_t dimension)
{
    os << "iteration,velocity_l2,best_f";
    for (std::size_t k = 0; k < dimension; ++k)
        os << ",best_x_" << k;
    os << '\n';
    for (const IterationTrace& row : trace) {
        os << row.iteration << ',' << format_number(row.velocity_l2) << ',' << format_number(row.best_f);
        for (double x : row.best_x)
            os << ',' << format_number(x);
        os << '\n';
    }
}

void write_positions_csv(std::ostream& os, std::span<const Raindrop> drops)
{
    const std::size_t dimension = drops.empty() ? 0 : drops.front().position.size();
    os << "raindrop";
    for (std::size_t k = 0; k < dimension; ++k)
        os << ",x_" << k;
    os << ",speed\n";
    for (std::size_t i = 0; i < drops.size(); ++i) {
        os << i;
        for (double x : drops[i].position)
            os << ',' << format_number(x);
        os << ',' << format_number(drops[i].speed) << '\n';
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Settings s;
    CLI::App app("Raindrop global optimizer", "raindrop");
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "optimize one objective and write trace.csv and report.json");
    add_common_options(*run_cmd, s);
    add_run_options(*run_cmd, s);
    run_cmd->add_option("--snapshot-every", s.snapshot_every, "write positions_<j>.csv every k sweeps (0 = off)");

    auto* success_cmd = app.add_subcommand("success-prob", "estimate the success probability and compare it "
                                                           "with 1 - (1 - p)^N");
    add_common_options(*success_cmd, s);
    add_run_options(*success_cmd, s);
    success_cmd->add_option("--trials", s.trials, "independent runs")->check(CLI::PositiveNumber);
    success_cmd->add_option("--radius", s.radius, "success radius around the known optimum")
        ->check(CLI::PositiveNumber);
    success_cmd->add_option("--theoretical-ratio", s.theoretical_ratio, "use this |T|/|S| instead of the oracle")
        ->check(CLI::Range(0.0, 1.0));
    success_cmd->add_option("--resolution", s.resolution, "oracle grid points per axis (default 101)");
    success_cmd->add_option("--budget", s.budget, "oracle evaluation budget");

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force grid minimum or basin measure");
    add_common_options(*oracle_cmd, s);
    add_run_options(*oracle_cmd, s);
    oracle_cmd->add_option("--mode", s.mode, "grid or basin")->check(CLI::IsMember({"grid", "basin"}));
    oracle_cmd->add_option("--resolution", s.resolution, "grid points per axis (default 201)");
    oracle_cmd->add_option("--radius", s.radius, "success radius for basin mode")->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--budget", s.budget, "evaluation budget");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e, out, err);
        err << "raindrop: " << e.what() << '\n';
        return kError;
    }

    try {
        CLI::App* chosen = app.get_subcommands().front();
        if (!s.config_path.empty())
            apply_config_file(s, *chosen);
        if (chosen == run_cmd)
            return cmd_run(s, out);
        if (chosen == success_cmd)
            return cmd_success_prob(s, out);
        return cmd_oracle(s, out);
    } catch (const std::exception& e) {
        err << "raindrop: " << e.what() << '\n';
        return kError;
    }
}

} // namespace raindrop::cli
