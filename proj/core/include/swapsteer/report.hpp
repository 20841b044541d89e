#ifndef SWAPSTEER_REPORT_HPP
#define SWAPSTEER_REPORT_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "swapsteer/config.hpp"
#include "swapsteer/randomness.hpp"
#include "swapsteer/selftest.hpp"
#include "swapsteer/witness.hpp"

namespace swapsteer {

struct AttackSummary {
    CorrelationTable table;
    double guessing = 0.0;
    double witness = 0.0;
    bool consistent_with_ideal = false;
};

struct RunReport {
    Command command = Command::witness;
    ScenarioConfig config;
    std::optional<WitnessResult> witness;
    std::optional<ExtractionReport> extraction;
    std::optional<CertificationResult> certification;
    std::optional<LhsBoundEstimate> lhs;
    std::optional<AttackSummary> attack;
    std::vector<std::pair<double, WitnessResult>> sweep;  // (v, result) in grid order
    std::map<std::string, double> timing;                 // seconds per stage
    std::string version = kVersion;
};

/// Executes the pipeline for one command; deterministic given the seed.
RunReport run(Command command, const ScenarioConfig& config);

/// Shortest round-trippable decimal rendering of a double.
std::string format_double(double value);

/// human: aligned table at 12 significant digits (includes timing).
/// machine: line-delimited key=value records, keys sorted within a record,
/// records separated by blank lines; byte-reproducible for a fixed seed.
std::string render_report(const RunReport& report, OutputFormat format);

}  // namespace swapsteer

#endif
