#include "swapsteer/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace swapsteer {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

RunReport run(Command command, const ScenarioConfig& config) {
    RunReport report;
    report.command = command;
    report.config = config;

    const auto t0 = Clock::now();
    switch (command) {
        case Command::witness: {
            report.witness = witness_expectation_form(load_strategy(config));
            report.timing["witness"] = seconds_since(t0);
            break;
        }
        case Command::selftest: {
            const Strategy s = load_strategy(config);
            report.witness = witness_expectation_form(s);
            report.timing["witness"] = seconds_since(t0);
            const auto t1 = Clock::now();
            report.extraction = verify_selftest(s, config.tol_premise);
            report.timing["selftest"] = seconds_since(t1);
            break;
        }
        case Command::certify: {
            const Strategy s = load_strategy(config);
            report.witness = witness_expectation_form(s);
            report.timing["witness"] = seconds_since(t0);
            const auto t1 = Clock::now();
            EveConfig ec;
            ec.eve_dim = config.eve_dim;
            ec.restarts = config.restarts;
            ec.iterations = config.iterations;
            ec.consistency_tol = config.tol_consistency;
            ec.premise_tol = config.tol_premise;
            report.certification = certify(s, ec, config.seed);
            report.timing["certify"] = seconds_since(t1);
            break;
        }
        case Command::lhs_bound: {
            LhsConfig lc;
            lc.restarts = config.restarts;
            report.lhs = lhs_bound(lc, config.seed);
            report.timing["lhs-bound"] = seconds_since(t0);
            break;
        }
        case Command::sweep: {
            for (double v : config.sweep_grid)
                report.sweep.emplace_back(v, witness_expectation_form(isotropic_strategy(v)));
            report.timing["sweep"] = seconds_since(t0);
            break;
        }
        case Command::attack_demo: {
            const AttackDemo demo = entangled_source_attack();
            AttackSummary summary;
            summary.table = demo.table;
            summary.guessing = demo.guessing;
            summary.witness = witness_value(demo.table);
            summary.consistent_with_ideal =
                eve_consistency_check(demo.strategy, correlations(ideal_strategy()));
            report.attack = summary;
            report.timing["attack-demo"] = seconds_since(t0);
            break;
        }
    }
    return report;
}

namespace {

using Record = std::map<std::string, std::string>;

void put(Record& r, const std::string& key, double value) { r[key] = format_double(value); }

void add_witness(Record& r, const WitnessResult& w, const std::string& prefix = "") {
    put(r, prefix + "witness.value", w.value);
    for (int k = 0; k < 4; ++k) {
        const auto ks = std::to_string(k);
        put(r, prefix + "witness.term" + ks + ".re", w.term[static_cast<std::size_t>(k)].real());
        put(r, prefix + "witness.term" + ks + ".im", w.term[static_cast<std::size_t>(k)].imag());
        put(r, prefix + "witness.residual" + ks, w.residual[static_cast<std::size_t>(k)]);
    }
}

std::vector<Record> build_records(const RunReport& report) {
    std::vector<Record> records;

    Record head;
    head["command"] = to_string(report.command);
    head["version"] = report.version;
    head["config.strategy"] = to_string(report.config.strategy);
    put(head, "config.v", report.config.v);
    if (!report.config.custom_path.empty()) head["config.file"] = report.config.custom_path;
    head["config.seed"] = std::to_string(report.config.seed);
    put(head, "config.tol.premise", report.config.tol_premise);
    put(head, "config.tol.consistency", report.config.tol_consistency);
    head["config.optimizer.restarts"] = std::to_string(report.config.restarts);
    head["config.optimizer.iterations"] = std::to_string(report.config.iterations);
    head["config.optimizer.eve_dim"] = std::to_string(report.config.eve_dim);
    {
        std::ostringstream grid;
        for (std::size_t i = 0; i < report.config.sweep_grid.size(); ++i)
            grid << (i ? "," : "") << format_double(report.config.sweep_grid[i]);
        head["config.sweep.grid"] = grid.str();
    }
    head["config.output.format"] = to_string(report.config.format);
    records.push_back(std::move(head));

    if (report.witness || report.extraction || report.certification || report.lhs ||
        report.attack) {
        Record body;
        if (report.witness) add_witness(body, *report.witness);
        if (report.extraction) {
            const ExtractionReport& e = *report.extraction;
            body["selftest.projective"] = e.projective.pass ? "true" : "false";
            put(body, "selftest.projectivity_defect", e.projective.defect);
            put(body, "selftest.state_fidelity", e.state_fidelity);
            put(body, "selftest.measurement_defect", e.measurement_defect);
            put(body, "selftest.support_defect", e.support_defect);
            body["selftest.blocks1"] = std::to_string(e.block_counts[0]);
            body["selftest.blocks2"] = std::to_string(e.block_counts[1]);
            body["selftest.junk_dim1"] = std::to_string(e.junk_dims[0]);
            body["selftest.junk_dim2"] = std::to_string(e.junk_dims[1]);
        }
        if (report.certification) {
            const CertificationResult& c = *report.certification;
            body["certify.status"] = to_string(c.status);
            put(body, "certify.guessing_probability", c.guessing);
            put(body, "certify.min_entropy_bits", c.min_entropy_bits);
            put(body, "certify.witness", c.witness);
            for (std::size_t i = 0; i < c.caveats.size(); ++i)
                body["certify.caveat" + std::to_string(i)] = c.caveats[i];
        }
        if (report.lhs) {
            put(body, "lhs.beta", report.lhs->beta);
            body["lhs.argmax"] = report.lhs->argmax;
            body["lhs.trace_length"] = std::to_string(report.lhs->trace.size());
        }
        if (report.attack) {
            const AttackSummary& a = *report.attack;
            put(body, "attack.guessing_probability", a.guessing);
            put(body, "attack.witness", a.witness);
            body["attack.consistent_with_ideal"] = a.consistent_with_ideal ? "true" : "false";
            for (int x = 0; x < 4; ++x)
                for (int y = 0; y < 4; ++y)
                    put(body, "attack.p" + std::to_string(x) + std::to_string(y), a.table.p(x, y));
        }
        records.push_back(std::move(body));
    }

    for (const auto& [v, w] : report.sweep) {
        Record point;
        put(point, "sweep.v", v);
        add_witness(point, w);
        records.push_back(std::move(point));
    }
    return records;
}

std::string render_human(const RunReport& report) {
    const auto records = build_records(report);
    std::ostringstream os;
    std::size_t width = 0;
    for (const Record& r : records)
        for (const auto& [k, v] : r) width = std::max(width, k.size());
    bool first = true;
    for (const Record& r : records) {
        if (!first) os << "\n";
        first = false;
        for (const auto& [key, value] : r) {
            os << key;
            for (std::size_t i = key.size(); i < width; ++i) os << ' ';
            // Re-render numerics at 12 significant digits for the table view.
            char* end = nullptr;
            const double d = std::strtod(value.c_str(), &end);
            if (end && *end == '\0' && !value.empty()) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%#.12g", d);
                os << " = " << buf << "\n";
            } else {
                os << " = " << value << "\n";
            }
        }
    }
    if (!report.timing.empty()) {
        os << "\n";
        for (const auto& [stage, secs] : report.timing) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.3f", secs);
            os << "time." << stage;
            for (std::size_t i = 5 + stage.size(); i < width; ++i) os << ' ';
            os << " = " << buf << " s\n";
        }
    }
    return os.str();
}

std::string render_machine(const RunReport& report) {
    const auto records = build_records(report);
    std::ostringstream os;
    bool first = true;
    for (const Record& r : records) {
        if (!first) os << "\n";
        first = false;
        for (const auto& [key, value] : r) os << key << "=" << value << "\n";
    }
    return os.str();
}

}  // namespace

std::string render_report(const RunReport& report, OutputFormat format) {
    return format == OutputFormat::human ? render_human(report) : render_machine(report);
}

}  // namespace swapsteer
