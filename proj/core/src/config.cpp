#include "swapsteer/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace swapsteer {

std::string to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::ideal: return "ideal";
        case StrategyKind::isotropic: return "isotropic";
        case StrategyKind::product: return "product";
        case StrategyKind::custom: return "custom";
    }
    return "unknown";
}

std::string to_string(OutputFormat f) {
    return f == OutputFormat::human ? "human" : "machine";
}

std::string to_string(Command c) {
    switch (c) {
        case Command::witness: return "witness";
        case Command::selftest: return "selftest";
        case Command::certify: return "certify";
        case Command::lhs_bound: return "lhs-bound";
        case Command::sweep: return "sweep";
        case Command::attack_demo: return "attack-demo";
    }
    return "unknown";
}

Command parse_command(const std::string& name) {
    if (name == "witness") return Command::witness;
    if (name == "selftest") return Command::selftest;
    if (name == "certify") return Command::certify;
    if (name == "lhs-bound") return Command::lhs_bound;
    if (name == "sweep") return Command::sweep;
    if (name == "attack-demo") return Command::attack_demo;
    throw ConfigError("unknown command: " + name);
}

namespace {

double parse_double_or(const std::string& value, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": field " + key +
                          ": not a number: " + value);
    }
}

long long parse_int_or(const std::string& value, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const long long n = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return n;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": field " + key +
                          ": not an integer: " + value);
    }
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig c;
    std::istringstream lines(text);
    std::string raw;
    int line_no = 0;
    bool grid_set = false;
    while (std::getline(lines, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream tokens(raw);
        std::string token;
        while (tokens >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": expected key=value, got: " + token);
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);

            if (key == "strategy") {
                if (value == "ideal") c.strategy = StrategyKind::ideal;
                else if (value == "isotropic") c.strategy = StrategyKind::isotropic;
                else if (value == "product") c.strategy = StrategyKind::product;
                else if (value == "custom") c.strategy = StrategyKind::custom;
                else
                    throw ConfigError("line " + std::to_string(line_no) +
                                      ": field strategy: unknown value " + value);
            } else if (key == "v") {
                c.v = parse_double_or(value, key, line_no);
                if (!(c.v >= 0.0 && c.v <= 1.0))
                    throw ConfigError("line " + std::to_string(line_no) +
                                      ": field v: must lie in [0,1], got " + value);
            } else if (key == "file") {
                c.custom_path = value;
            } else if (key == "seed") {
                c.seed = static_cast<std::uint64_t>(parse_int_or(value, key, line_no));
            } else if (key == "tol.premise") {
                c.tol_premise = parse_double_or(value, key, line_no);
            } else if (key == "tol.consistency") {
                c.tol_consistency = parse_double_or(value, key, line_no);
            } else if (key == "optimizer.restarts") {
                const long long n = parse_int_or(value, key, line_no);
                if (n < 1)
                    throw ConfigError("line " + std::to_string(line_no) +
                                      ": field optimizer.restarts: must be >= 1");
                c.restarts = static_cast<int>(n);
            } else if (key == "optimizer.iterations") {
                c.iterations = static_cast<int>(parse_int_or(value, key, line_no));
            } else if (key == "optimizer.eve_dim") {
                c.eve_dim = static_cast<int>(parse_int_or(value, key, line_no));
            } else if (key == "sweep.grid") {
                c.sweep_grid.clear();
                grid_set = true;
                std::istringstream items(value);
                std::string item;
                while (std::getline(items, item, ',')) {
                    const double g = parse_double_or(item, key, line_no);
                    if (g < 0.0 || g > 1.0)
                        throw ConfigError("line " + std::to_string(line_no) +
                                          ": field sweep.grid: entries must lie in [0,1]");
                    c.sweep_grid.push_back(g);
                }
            } else if (key == "output.path") {
                c.out_path = value;
            } else if (key == "output.format") {
                if (value == "human") c.format = OutputFormat::human;
                else if (value == "machine") c.format = OutputFormat::machine;
                else
                    throw ConfigError("line " + std::to_string(line_no) +
                                      ": field output.format: expected human|machine");
            } else {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown key: " + key);
            }
        }
    }
    if (grid_set && c.sweep_grid.empty())
        throw ConfigError("sweep.grid: at least one grid point required");
    if (c.strategy == StrategyKind::custom && c.custom_path.empty())
        throw ConfigError("strategy=custom requires file=<path>");
    return c;
}

std::string render_config(const ScenarioConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "strategy=" << to_string(c.strategy) << "\n";
    os << "v=" << c.v << "\n";
    if (!c.custom_path.empty()) os << "file=" << c.custom_path << "\n";
    os << "seed=" << c.seed << "\n";
    os << "tol.premise=" << c.tol_premise << "\n";
    os << "tol.consistency=" << c.tol_consistency << "\n";
    os << "optimizer.restarts=" << c.restarts << "\n";
    os << "optimizer.iterations=" << c.iterations << "\n";
    os << "optimizer.eve_dim=" << c.eve_dim << "\n";
    os << "sweep.grid=";
    for (std::size_t i = 0; i < c.sweep_grid.size(); ++i)
        os << (i ? "," : "") << c.sweep_grid[i];
    os << "\n";
    if (!c.out_path.empty()) os << "output.path=" << c.out_path << "\n";
    os << "output.format=" << to_string(c.format) << "\n";
    return os.str();
}

namespace {

// File format: `matrix <name> <rows> <cols>` headers followed by rows*cols
// whitespace-separated "re,im" entries in row-major order.
std::map<std::string, Matrix> parse_matrix_blocks(std::istream& in, const std::string& path) {
    std::map<std::string, Matrix> blocks;
    std::string token;
    while (in >> token) {
        if (token == "#") {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (token != "matrix")
            throw ConfigError(path + ": expected 'matrix' header, got: " + token);
        std::string name;
        Eigen::Index rows = 0, cols = 0;
        if (!(in >> name >> rows >> cols) || rows <= 0 || cols <= 0)
            throw ConfigError(path + ": malformed matrix header");
        Matrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) {
                std::string entry;
                if (!(in >> entry))
                    throw ConfigError(path + ": matrix " + name + ": missing entries");
                const auto comma = entry.find(',');
                if (comma == std::string::npos)
                    throw ConfigError(path + ": matrix " + name +
                                      ": entries must be re,im pairs, got: " + entry);
                try {
                    m(i, j) = Complex(std::stod(entry.substr(0, comma)),
                                      std::stod(entry.substr(comma + 1)));
                } catch (const std::exception&) {
                    throw ConfigError(path + ": matrix " + name + ": bad entry: " + entry);
                }
            }
        if (!blocks.emplace(name, std::move(m)).second)
            throw ConfigError(path + ": duplicate matrix: " + name);
    }
    return blocks;
}

}  // namespace

Strategy load_custom_strategy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open strategy file: " + path);
    auto blocks = parse_matrix_blocks(in, path);

    auto take = [&](const std::string& name) -> Matrix {
        const auto it = blocks.find(name);
        if (it == blocks.end()) throw ConfigError(path + ": missing matrix: " + name);
        return it->second;
    };
    Strategy s;
    s.source1 = take("source1");
    s.source2 = take("source2");
    if (blocks.count("alice_povm_0")) {
        std::vector<Matrix> els;
        for (int a = 0; a < 4; ++a) els.push_back(take("alice_povm_" + std::to_string(a)));
        s.alice = make_povm(std::move(els));
    } else {
        s.alice = bell_povm();
    }
    if (blocks.count("bob_povm_0")) {
        std::vector<Matrix> els;
        for (int b = 0; b < 4; ++b) els.push_back(take("bob_povm_" + std::to_string(b)));
        s.bob = make_povm(std::move(els));
    } else {
        s.bob = bell_povm();
    }
    validate_strategy(s);
    return s;
}

Strategy load_strategy(const ScenarioConfig& c) {
    switch (c.strategy) {
        case StrategyKind::ideal: return ideal_strategy();
        case StrategyKind::isotropic: return isotropic_strategy(c.v);
        case StrategyKind::product: return product_strategy();
        case StrategyKind::custom: return load_custom_strategy(c.custom_path);
    }
    throw ConfigError("unreachable strategy kind");
}

}  // namespace swapsteer
