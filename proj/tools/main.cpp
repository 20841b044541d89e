// swapsteer: simulate the two-source swap-steering scenario, evaluate the
// witness, run the self-testing extraction and certify the randomness of
// the untrusted measurement outcomes.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "swapsteer/report.hpp"

namespace {

int dispatch(const std::string& command_name, const std::string& config_path,
             long long seed, bool seed_set, const std::string& out_path,
             const std::string& format_name) {
    using namespace swapsteer;

    ScenarioConfig config;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file: " + config_path);
        std::ostringstream text;
        text << in.rdbuf();
        config = parse_config(text.str());
    }
    if (seed_set) config.seed = static_cast<std::uint64_t>(seed);
    if (!format_name.empty()) {
        if (format_name == "human") config.format = OutputFormat::human;
        else if (format_name == "machine") config.format = OutputFormat::machine;
        else throw ConfigError("--format: expected human|machine");
    }
    if (!out_path.empty()) config.out_path = out_path;

    const Command command = parse_command(command_name);
    const RunReport report = run(command, config);
    const std::string text = render_report(report, config.format);

    if (config.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(config.out_path, std::ios::binary);
        if (!out) throw ConfigError("cannot open output file: " + config.out_path);
        out << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"swap-steering witness, self-testing and randomness certification"};
    app.require_subcommand(1);

    std::string config_path, out_path, format_name;
    long long seed = 0;
    bool seed_set = false;

    std::vector<CLI::App*> subs;
    for (const char* name :
         {"witness", "selftest", "certify", "lhs-bound", "sweep", "attack-demo"})
        subs.push_back(app.add_subcommand(name));
    for (CLI::App* sub : subs) {
        sub->add_option("--config", config_path, "scenario configuration file");
        sub->add_option("--seed", seed, "override the config seed")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--out", out_path, "write the report to a file");
        sub->add_option("--format", format_name, "human|machine");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return dispatch(app.get_subcommands().front()->get_name(), config_path, seed,
                        seed_set, out_path, format_name);
    } catch (const swapsteer::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const swapsteer::AssumptionError& e) {
        std::cerr << "assumption violation: " << e.what() << "\n";
        return 3;
    } catch (const swapsteer::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
