#ifndef SWAPSTEER_CONFIG_HPP
#define SWAPSTEER_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "swapsteer/scenario.hpp"

namespace swapsteer {

inline constexpr const char* kVersion = "0.1.0";

enum class StrategyKind { ideal, isotropic, product, custom };
enum class OutputFormat { human, machine };
enum class Command { witness, selftest, certify, lhs_bound, sweep, attack_demo };

std::string to_string(StrategyKind k);
std::string to_string(OutputFormat f);
std::string to_string(Command c);
Command parse_command(const std::string& name);

/// Flat key=value scenario configuration. Whitespace-separated tokens,
/// '#' starts a comment; unknown keys are rejected with a line diagnostic.
struct ScenarioConfig {
    StrategyKind strategy = StrategyKind::ideal;
    double v = 1.0;
    std::string custom_path;
    std::uint64_t seed = 0;

    double tol_premise = 1e-7;
    double tol_consistency = 1e-8;

    int restarts = 32;
    int iterations = 40;
    int eve_dim = 16;

    std::vector<double> sweep_grid{0.0, 0.25, 0.5, 0.75, 1.0};

    std::string out_path;
    OutputFormat format = OutputFormat::human;

    bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(const std::string& text);
std::string render_config(const ScenarioConfig& c);

/// Builds the strategy selected by the config; custom strategies are loaded
/// from the explicit matrix-literal file format.
Strategy load_strategy(const ScenarioConfig& c);
Strategy load_custom_strategy(const std::string& path);

}  // namespace swapsteer

#endif
